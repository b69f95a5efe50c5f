"""Longest-path static timing over the gate DAG."""

import logging
from typing import Dict, List

import networkx as nx
from pydantic import BaseModel, Field

from async_adders.generator.handshake import is_register
from async_adders.models.delays import DelayTable
from async_adders.models.netlist import Netlist
from async_adders.models.timing import LatencyExpr
from async_adders.tools.netlist_checks import gate_graph

UNREACHABLE = float("-inf")


class CriticalPath(BaseModel):
    netlist: str
    value: int = Field(..., description="Worst-case forward latency in time units")
    path: List[str] = Field(default_factory=list, description="Gate ids from input side to output side")
    expr: LatencyExpr = Field(default_factory=LatencyExpr)
    endpoint: str | None = Field(None, description="Net the path ends on")


def critical_path(netlist: Netlist, delays: DelayTable) -> CriticalPath:
    """Worst forward path from a data input through the register (when present) to a data output.

    Paths start at gates reading a primary data input and end at gates
    driving an output rail (ackout for a bare detector). Equal paths are
    broken towards the lexicographically smallest gate-id sequence.
    """
    graph = gate_graph(netlist)
    kind = {g.id: g.kind for g in netlist.gates}
    out = {g.id: g.out for g in netlist.gates}
    data_inputs = {n for p in netlist.inputs for n in p.nets}
    endpoints = set(netlist.data_output_nets)
    starts = sorted(g.id for g in netlist.gates if data_inputs.intersection(g.inputs))

    # tail(g): longest delay from g's inputs to an endpoint, g included
    tail: Dict[str, float] = {}
    for gate_id in reversed(list(nx.topological_sort(graph))):
        rest = 0 if out[gate_id] in endpoints else UNREACHABLE
        for succ in graph.successors(gate_id):
            rest = max(rest, tail[succ])
        tail[gate_id] = delays[kind[gate_id]] + rest if rest != UNREACHABLE else UNREACHABLE

    live = [g for g in starts if tail[g] != UNREACHABLE]
    if not live:
        logging.debug(f"{netlist.name}: no path from a data input to a data output")
        return CriticalPath(netlist=netlist.name, value=0)

    value = max(tail[g] for g in live)
    current = min(g for g in live if tail[g] == value)
    path = [current]
    while True:
        remaining = tail[current] - delays[kind[current]]
        if remaining == 0 and out[current] in endpoints:
            break
        current = min(s for s in graph.successors(current) if tail[s] == remaining)
        path.append(current)

    register = is_register(path[0])
    counted = path[1:] if register else path
    expr = LatencyExpr.of_gates([kind[g] for g in counted], includes_register=register)
    result = CriticalPath(netlist=netlist.name, value=int(value), path=path, expr=expr, endpoint=out[path[-1]])
    logging.debug(f"{netlist.name}: critical path {result.value} = {expr} ending on {result.endpoint}")
    return result
