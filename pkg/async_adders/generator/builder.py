from typing import List, Optional, Sequence, Tuple

from async_adders.enums import GateKind
from async_adders.models.netlist import AckPorts, Gate, Netlist, PortGroup

Rails = Tuple[str, str]


def rails_of(group: str) -> Rails:
    """Net names of a dual-rail group: (<group>_1, <group>_0)"""
    return (f"{group}_1", f"{group}_0")


class NetlistBuilder:
    """Accumulates gates and ports; the only mutable stage of a netlist's life.

    Gates get standard-cell style instance names U00000, U00001, ... in
    emission order unless an explicit id is given.
    """

    def __init__(self, name: str):
        self.name = name
        self.inputs: List[PortGroup] = []
        self.outputs: List[PortGroup] = []
        self.acks: Optional[AckPorts] = None
        self.gates: List[Gate] = []
        self._next = 0

    def input_pair(self, group: str, rails: Optional[Rails] = None) -> Rails:
        rail1, rail0 = rails or rails_of(group)
        self.inputs.append(PortGroup(group=group, rail1=rail1, rail0=rail0))
        return (rail1, rail0)

    def output_pair(self, group: str, rails: Optional[Rails] = None) -> Rails:
        rail1, rail0 = rails or rails_of(group)
        self.outputs.append(PortGroup(group=group, rail1=rail1, rail0=rail0))
        return (rail1, rail0)

    def gate(self, kind: GateKind, inputs: Sequence[str], out: str, gate_id: Optional[str] = None) -> str:
        if gate_id is None:
            gate_id = f"U{self._next:05d}"
            self._next += 1
        self.gates.append(Gate(id=gate_id, kind=kind, inputs=list(inputs), out=out))
        return out

    def extend(self, gates: Sequence[Gate]):
        self.gates.extend(gates)

    def build(self) -> Netlist:
        return Netlist(
            name=self.name,
            inputs=list(self.inputs),
            outputs=list(self.outputs),
            acks=self.acks,
            gates=list(self.gates),
        )
