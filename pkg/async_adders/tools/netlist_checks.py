import logging
from collections import Counter
from typing import Dict, List

import networkx as nx
from pydantic import BaseModel, Field

from async_adders.enums import GateKind, ViolationKind
from async_adders.models.netlist import Netlist


class Violation(BaseModel):
    kind: ViolationKind
    message: str
    subjects: List[str] = Field(default_factory=list, description="Offending gate ids or nets")


class ValidationReport(BaseModel):
    netlist: str
    violations: List[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]


def gate_graph(netlist: Netlist) -> nx.DiGraph:
    """Gate-level graph: one node per gate, an edge wherever a gate output feeds another gate"""
    graph = nx.DiGraph()
    readers: Dict[str, List[str]] = {}
    for gate in netlist.gates:
        graph.add_node(gate.id, kind=gate.kind, out=gate.out)
        for net in gate.inputs:
            readers.setdefault(net, []).append(gate.id)
    for gate in netlist.gates:
        for reader in readers.get(gate.out, []):
            graph.add_edge(gate.id, reader, net=gate.out)
    return graph


def topological_gates(netlist: Netlist) -> List[str]:
    """Gate ids in a deterministic topological order (ties by id)"""
    return list(nx.lexicographical_topological_sort(gate_graph(netlist)))


def validate(netlist: Netlist) -> ValidationReport:
    """Structural checks; an empty report means the netlist is well formed"""
    report = ValidationReport(netlist=netlist.name)
    add = report.violations.append

    ids = Counter(g.id for g in netlist.gates)
    duplicates = sorted(i for i, n in ids.items() if n > 1)
    if duplicates:
        add(Violation(kind=ViolationKind.DUPLICATE_ID, message="Gate ids are not unique", subjects=duplicates))

    for gate in netlist.gates:
        if len(gate.inputs) != gate.kind.arity:
            add(Violation(
                kind=ViolationKind.ARITY,
                message=f"{gate.id}: {gate.kind.value} takes {gate.kind.arity} inputs, got {len(gate.inputs)}",
                subjects=[gate.id],
            ))

    drivers = netlist.drivers()
    for net, sources in drivers.items():
        if len(sources) > 1:
            add(Violation(
                kind=ViolationKind.MULTIPLE_DRIVERS,
                message=f"Net {net} has {len(sources)} drivers",
                subjects=[net, *sources],
            ))

    fanout = netlist.fanout()
    outputs = set(netlist.primary_output_nets)
    for net, readers in fanout.items():
        if net not in drivers:
            add(Violation(kind=ViolationKind.UNDRIVEN, message=f"Net {net} has no driver", subjects=[net]))
        elif not readers and net not in outputs:
            add(Violation(kind=ViolationKind.DANGLING, message=f"Net {net} drives nothing", subjects=[net]))

    for ports in (netlist.inputs, netlist.outputs):
        groups = Counter(p.group for p in ports)
        for name in sorted(g for g, n in groups.items() if n > 1):
            add(Violation(kind=ViolationKind.PORT, message=f"Port group {name} declared twice", subjects=[name]))
    for port in netlist.inputs + netlist.outputs:
        if port.rail1 == port.rail0:
            add(Violation(
                kind=ViolationKind.PORT,
                message=f"Port group {port.group} uses one net for both rails",
                subjects=[port.group],
            ))

    try:
        cycle = nx.find_cycle(gate_graph(netlist))
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        add(Violation(
            kind=ViolationKind.CYCLE,
            message="Gate graph contains a cycle",
            subjects=[u for u, _ in cycle],
        ))

    if report.violations:
        logging.debug(f"{netlist.name}: {len(report.violations)} structural violations")
    return report


def gate_census(netlist: Netlist) -> Dict[GateKind, int]:
    """Exact count per gate kind, every kind present (zero when unused)"""
    counts = netlist.census()
    return {kind: counts.get(kind, 0) for kind in GateKind}
