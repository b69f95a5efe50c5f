import json
import logging
from collections import Counter
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from async_adders.enums import GateKind
from async_adders.exceptions import ParseError
from async_adders.utils import FileHandler

# Models for the structural circuit description and its file format


class PortGroup(BaseModel):
    """A dual-rail port: one group name, two nets"""
    model_config = ConfigDict(frozen=True)

    group: str = Field(..., description="Port group name, e.g. 'a3' or 'cout'")
    rail1: str = Field(..., description="Net carrying the true rail")
    rail0: str = Field(..., description="Net carrying the false rail")

    @property
    def nets(self) -> tuple[str, str]:
        return (self.rail1, self.rail0)


class AckPorts(BaseModel):
    """Handshake nets of a stage. A bare completion detector only has ackout."""
    model_config = ConfigDict(frozen=True)

    ackin: Optional[str] = Field(None, description="Enable from the successor (high = ready)")
    ackout: Optional[str] = Field(None, description="Completion signal of this stage")


class Gate(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: str = Field(..., description="Unique instance name")
    kind: GateKind = Field(..., description="Cell type")
    inputs: List[str] = Field(..., alias="in", description="Input nets in pin order")
    out: str = Field(..., description="Output net")

    @field_validator("kind", mode="before")
    @classmethod
    def parse_kind(cls, value):
        if isinstance(value, str):
            return GateKind.parse(value)
        return value


class Netlist(BaseModel):
    """Directed acyclic gate graph with dual-rail port groups"""
    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Design name")
    inputs: List[PortGroup] = Field(default_factory=list, description="Ordered dual-rail inputs")
    outputs: List[PortGroup] = Field(default_factory=list, description="Ordered dual-rail outputs")
    acks: Optional[AckPorts] = Field(None, description="Handshake ports, absent for bare blocks")
    gates: List[Gate] = Field(default_factory=list, description="Gates in emission order")

    @property
    def primary_input_nets(self) -> List[str]:
        nets = [n for p in self.inputs for n in p.nets]
        if self.acks is not None and self.acks.ackin:
            nets.append(self.acks.ackin)
        return nets

    @property
    def primary_output_nets(self) -> List[str]:
        nets = [n for p in self.outputs for n in p.nets]
        if self.acks is not None and self.acks.ackout:
            nets.append(self.acks.ackout)
        return nets

    @property
    def data_output_nets(self) -> List[str]:
        """Nets a forward-latency path may end on"""
        nets = [n for p in self.outputs for n in p.nets]
        if not nets and self.acks is not None and self.acks.ackout:
            nets.append(self.acks.ackout)
        return nets

    @property
    def nets(self) -> List[str]:
        """All nets, primary inputs first, then in gate order"""
        seen = dict.fromkeys(self.primary_input_nets)
        for gate in self.gates:
            for net in gate.inputs:
                seen.setdefault(net)
            seen.setdefault(gate.out)
        for net in self.primary_output_nets:
            seen.setdefault(net)
        return list(seen)

    def gate(self, gate_id: str) -> Gate:
        for gate in self.gates:
            if gate.id == gate_id:
                return gate
        raise KeyError(gate_id)

    def drivers(self) -> Dict[str, List[str]]:
        """net -> list of driver ids; primary inputs appear as 'port:<net>'"""
        drivers: Dict[str, List[str]] = {}
        for net in self.primary_input_nets:
            drivers.setdefault(net, []).append(f"port:{net}")
        for gate in self.gates:
            drivers.setdefault(gate.out, []).append(gate.id)
        return drivers

    def fanout(self) -> Dict[str, List[tuple[str, int]]]:
        """net -> list of (gate id, input pin)"""
        fanout: Dict[str, List[tuple[str, int]]] = {net: [] for net in self.nets}
        for gate in self.gates:
            for pin, net in enumerate(gate.inputs):
                fanout[net].append((gate.id, pin))
        return fanout

    def input_group(self, group: str) -> PortGroup:
        for port in self.inputs:
            if port.group == group:
                return port
        raise KeyError(f"No input group {group} in {self.name}")

    def output_group(self, group: str) -> PortGroup:
        for port in self.outputs:
            if port.group == group:
                return port
        raise KeyError(f"No output group {group} in {self.name}")

    def census(self) -> Counter:
        return Counter(gate.kind for gate in self.gates)

    def to_file_dict(self) -> dict:
        data = {
            "name": self.name,
            "inputs": [p.model_dump() for p in self.inputs],
            "outputs": [p.model_dump() for p in self.outputs],
        }
        if self.acks is not None:
            data["acks"] = self.acks.model_dump(exclude_none=True)
        data["gates"] = [
            {"id": g.id, "kind": g.kind.value, "in": list(g.inputs), "out": g.out}
            for g in self.gates
        ]
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_file_dict(), indent=2)

    @classmethod
    def from_file_dict(cls, data: dict) -> "Netlist":
        try:
            return cls(**data)
        except (ValidationError, TypeError) as e:
            raise ParseError(f"Invalid netlist file: {e}") from e

    @classmethod
    def load(cls, path: str) -> "Netlist":
        logging.info(f"Loading netlist from {path}")
        return cls.from_file_dict(FileHandler().read(path, file_type="json"))

    def dump(self, path: str):
        logging.debug(f"Writing netlist {self.name} to {path}")
        FileHandler().write(path, self.dumps() + "\n")
