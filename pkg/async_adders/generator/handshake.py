"""Completion detection and the 4-phase stage wrapper.

A stage is: input register (one C-element per rail, enabled by ackin),
the function block, and a completion detector on the block outputs
driving ackout.
"""

import logging
from typing import List, Sequence

from async_adders.enums import GateKind
from async_adders.exceptions import UsageError
from async_adders.generator.builder import NetlistBuilder, Rails
from async_adders.models.netlist import AckPorts, Netlist

ACKIN = "ackin"
ACKOUT = "ackout"
REGISTER_PREFIX = "reg."
STAGE_INPUT_PREFIX = "in."


def _detector_gates(b: NetlistBuilder, pairs: Sequence[Rails], out: str):
    """One OR2 per pair, then a balanced C2 tree down to `out`"""
    counter = iter(range(2 * len(pairs)))

    def next_id() -> str:
        return f"cd.{next(counter)}"

    if len(pairs) == 1:
        b.gate(GateKind.OR2, pairs[0], out, gate_id=next_id())
        return

    level: List[str] = [
        b.gate(GateKind.OR2, rails, f"cd.valid{i}", gate_id=next_id())
        for i, rails in enumerate(pairs)
    ]
    depth = 0
    while len(level) > 1:
        merged = []
        for i in range(0, len(level) - 1, 2):
            net = out if len(level) == 2 else f"cd.l{depth}.{i // 2}"
            merged.append(b.gate(GateKind.C2, [level[i], level[i + 1]], net, gate_id=next_id()))
        if len(level) % 2:
            merged.append(level[-1])
        level = merged
        depth += 1


def gen_completion_detector(pairs: int) -> Netlist:
    """k OR2s and k - 1 C2s; `done` is 1 iff every pair is valid, 0 iff every pair is spacer"""
    if pairs < 1:
        raise UsageError(f"A completion detector needs at least one rail pair, got {pairs}")
    b = NetlistBuilder(f"detector{pairs}")
    inputs = [b.input_pair(f"p{i}") for i in range(pairs)]
    _detector_gates(b, inputs, "done")
    b.acks = AckPorts(ackout="done")
    return b.build()


def gen_stage(fb: Netlist) -> Netlist:
    """Wrap a function block with an input register and an output completion detector.

    Stage inputs keep the block's group names on nets `in.<rail>`; the
    register C-elements drive the block's original input nets.
    """
    if not fb.inputs or not fb.outputs:
        raise UsageError(f"{fb.name} needs dual-rail input and output ports to be wrapped as a stage")
    if fb.acks is not None:
        raise UsageError(f"{fb.name} already has handshake ports")

    b = NetlistBuilder(f"{fb.name}_stage")
    for port in fb.inputs:
        rails = b.input_pair(port.group, rails=(STAGE_INPUT_PREFIX + port.rail1, STAGE_INPUT_PREFIX + port.rail0))
        for staged, net in zip(rails, port.nets):
            b.gate(GateKind.C2, [staged, ACKIN], net, gate_id=REGISTER_PREFIX + net)
    b.extend(fb.gates)
    for port in fb.outputs:
        b.output_pair(port.group, rails=port.nets)
    _detector_gates(b, [port.nets for port in fb.outputs], ACKOUT)
    b.acks = AckPorts(ackin=ACKIN, ackout=ACKOUT)

    stage = b.build()
    logging.debug(f"Wrapped {fb.name}: {2 * len(fb.inputs)} register C2s, detector over {len(fb.outputs)} pairs")
    return stage


def is_register(gate_id: str) -> bool:
    return gate_id.startswith(REGISTER_PREFIX)
