"""Deterministic event-driven gate simulation.

Transport delay model: every input change of a gate re-evaluates it and,
if the result differs from the last value already scheduled on its output,
schedules that result after the gate delay. Events pop in (time, seq)
order. C-elements hold against the last scheduled output value.
"""

import heapq
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, field_validator

from async_adders.enums import DecodeState, GateKind, Phase
from async_adders.exceptions import SimulationError, UsageError
from async_adders.models.delays import DelayTable
from async_adders.models.netlist import Netlist
from async_adders.tools.codes import decode_levels

MAX_EVENTS = 10**7


def _c_element(v: List[int], held: int) -> int:
    return v[0] if v[0] == v[1] else held


EVALUATORS: Dict[GateKind, Callable[[List[int], int], int]] = {
    GateKind.BUF: lambda v, _: v[0],
    GateKind.AND2: lambda v, _: v[0] & v[1],
    GateKind.AND4: lambda v, _: v[0] & v[1] & v[2] & v[3],
    GateKind.OR2: lambda v, _: v[0] | v[1],
    GateKind.OR3: lambda v, _: v[0] | v[1] | v[2],
    GateKind.OR4: lambda v, _: v[0] | v[1] | v[2] | v[3],
    GateKind.AO21: lambda v, _: (v[0] & v[1]) | v[2],
    GateKind.AO22: lambda v, _: (v[0] & v[1]) | (v[2] & v[3]),
    GateKind.AO222: lambda v, _: (v[0] & v[1]) | (v[2] & v[3]) | (v[4] & v[5]),
    GateKind.C2: _c_element,
}


class Stimulus(BaseModel):
    """One input pair's data for a transaction"""
    group: str = Field(..., description="Input port group")
    value: Optional[int] = Field(None, description="Bit to apply; None leaves the pair at spacer")
    at: int = Field(0, ge=0, description="Set-phase arrival, relative to the transaction start")
    reset_after: int = Field(0, ge=0, description="Spacer arrival, relative to the reset-phase start")

    @field_validator("value")
    @classmethod
    def is_bit(cls, value):
        if value is not None and value not in (0, 1):
            raise ValueError(f"Stimulus value must be 0 or 1, got {value}")
        return value


class TransactionLog(BaseModel):
    """Set and reset phase of one data transaction"""
    start: int = Field(..., description="Transaction start time")
    set_end: int = Field(..., description="Quiescence time of the set phase")
    reset_start: Optional[int] = Field(None, description="Spacer application time, None if no reset was run")
    end: int = Field(..., description="Quiescence time of the whole transaction")
    input_times: Dict[str, int] = Field(default_factory=dict, description="Arrival time per driven input pair")
    output_valid_times: Dict[str, Optional[int]] = Field(default_factory=dict)
    output_spacer_times: Dict[str, Optional[int]] = Field(default_factory=dict)
    outputs: Dict[str, DecodeState] = Field(default_factory=dict, description="Output states at set_end")
    latency: Optional[int] = Field(None, description="First input arrival to last output validity")
    rtz_complete: bool = False
    illegal_seen: bool = False
    illegal_pairs: List[str] = Field(default_factory=list)
    monotonic_violations: List[str] = Field(default_factory=list, description="Nets moving against the phase")
    final_high: List[str] = Field(default_factory=list, description="Nets high at the end, ackin excluded")
    ackout_rise: Optional[int] = None
    ackout_fall: Optional[int] = None
    toggles: int = Field(0, description="Net transitions in this transaction")
    transitions: Dict[str, List[Tuple[int, int]]] = Field(default_factory=dict)

    @property
    def completed(self) -> bool:
        return self.latency is not None and self.rtz_complete


class _Monitor:
    """Per-transaction observers: validity/spacer times, illegal pairs, monotonicity"""

    def __init__(self, sim: "EventSimulator", record: bool):
        self.sim = sim
        self.record = record
        self.phase = Phase.SET
        self.valid_times: Dict[str, Optional[int]] = {g: None for g, _, _ in sim.observed}
        self.spacer_times: Dict[str, Optional[int]] = {g: None for g, _, _ in sim.observed}
        self.illegal: Dict[str, None] = {}
        self.monotonic: Dict[str, None] = {}
        self.toggles = 0
        self.transitions: Dict[str, List[Tuple[int, int]]] = {}
        self.ackout_rise: Optional[int] = None
        self.ackout_fall: Optional[int] = None

    def transition(self, t: int, i: int, level: int):
        sim = self.sim
        self.toggles += 1
        name = sim.names[i]
        if self.record:
            self.transitions.setdefault(name, []).append((t, level))
        rising = self.phase is Phase.SET
        if i != sim.ackin and bool(level) != rising:
            self.monotonic.setdefault(name)
        partner = sim.partner.get(i)
        if level and partner is not None and sim.levels[partner]:
            self.illegal.setdefault(sim.pair_name[i])
        if i == sim.ackout:
            if level and self.ackout_rise is None:
                self.ackout_rise = t
            elif not level and self.ackout_fall is None:
                self.ackout_fall = t
        for k in sim.observers.get(i, ()):
            group, i1, i0 = sim.observed[k]
            state = sim.pair_state(i1, i0)
            if self.phase is Phase.SET and state.is_valid and self.valid_times[group] is None:
                self.valid_times[group] = t
            elif self.phase is Phase.RESET and state is DecodeState.SPACER and self.spacer_times[group] is None:
                self.spacer_times[group] = t


class EventSimulator:
    """Compiled netlist plus simulation state; reusable across transactions"""

    def __init__(self, netlist: Netlist, delays: DelayTable, max_events: int = MAX_EVENTS):
        self.netlist = netlist
        self.delays = delays
        self.max_events = max_events
        self.names = netlist.nets
        index = {name: i for i, name in enumerate(self.names)}
        self.index = index

        self._eval = [EVALUATORS[g.kind] for g in netlist.gates]
        self._ins = [[index[n] for n in g.inputs] for g in netlist.gates]
        self._out = [index[g.out] for g in netlist.gates]
        self._delay = [delays[g.kind] for g in netlist.gates]
        self._fanout: List[List[int]] = [[] for _ in self.names]
        for g, ins in enumerate(self._ins):
            for i in dict.fromkeys(ins):
                self._fanout[i].append(g)

        acks = netlist.acks
        self.ackin = index[acks.ackin] if acks is not None and acks.ackin else None
        self.ackout = index[acks.ackout] if acks is not None and acks.ackout else None

        # port groups and every internal <stem>_1 / <stem>_0 couple are watched for the illegal state
        self.partner: Dict[int, int] = {}
        self.pair_name: Dict[int, str] = {}
        couples = [(p.group, p.rail1, p.rail0) for p in netlist.inputs + netlist.outputs]
        couples += [(name[:-2], name, name[:-2] + "_0") for name in index if name.endswith("_1")]
        for stem, rail1, rail0 in couples:
            i1, i0 = index.get(rail1), index.get(rail0)
            if None not in (i1, i0) and i1 != i0 and i1 not in self.partner and i0 not in self.partner:
                self.partner[i1], self.partner[i0] = i0, i1
                self.pair_name[i1] = self.pair_name[i0] = stem

        # observed outputs: dual-rail groups, or ackout alone for a bare detector
        self.observed: List[Tuple[str, int, Optional[int]]] = [
            (p.group, index[p.rail1], index[p.rail0]) for p in netlist.outputs
        ]
        if not self.observed and self.ackout is not None:
            self.observed.append((acks.ackout, self.ackout, None))
        self.observers: Dict[int, List[int]] = {}
        for k, (_, i1, i0) in enumerate(self.observed):
            for i in (i1, i0):
                if i is not None:
                    self.observers.setdefault(i, []).append(k)

        self.reset()

    def reset(self):
        """All nets 0, C-elements at their initial value, empty queue"""
        self.levels = [0] * len(self.names)
        self._projected = [0] * len(self.names)
        self._queue: List[Tuple[int, int, int, int]] = []
        self._seq = 0
        self.now = 0

    def level(self, net: str) -> int:
        return self.levels[self.index[net]]

    def pair_state(self, i1: int, i0: Optional[int]) -> DecodeState:
        return decode_levels(self.levels[i1], self.levels[i0] if i0 is not None else 0)

    def drive(self, net: str, level: int, at: int):
        """Schedule a primary-input change"""
        if at < self.now:
            raise UsageError(f"Cannot drive {net} at {at}, simulation time is already {self.now}")
        self._drive(self.index[net], level, at)

    def _drive(self, i: int, level: int, at: int):
        if self._projected[i] != level:
            self._projected[i] = level
            heapq.heappush(self._queue, (at, self._seq, i, level))
            self._seq += 1

    def run(self, monitor: _Monitor) -> int:
        """Process events until the queue is empty; returns the event count"""
        queue, levels, projected = self._queue, self.levels, self._projected
        events = 0
        while queue:
            t, _, i, level = heapq.heappop(queue)
            self.now = t
            if levels[i] == level:
                continue
            levels[i] = level
            events += 1
            if events > self.max_events:
                raise SimulationError(
                    f"{self.netlist.name}: more than {self.max_events} events in one phase at t={t}"
                )
            monitor.transition(t, i, level)
            if i == self.ackout and self.ackin is not None:
                # zero-delay environment: ackin is the inverted acknowledge
                self._drive(self.ackin, 1 - level, t)
            for g in self._fanout[i]:
                out = self._out[g]
                new = self._eval[g]([levels[j] for j in self._ins[g]], projected[out])
                if new != projected[out]:
                    projected[out] = new
                    heapq.heappush(queue, (t + self._delay[g], self._seq, out, new))
                    self._seq += 1
        return events

    def _apply(self, stimuli: Sequence[Stimulus], base: int, reset: bool) -> Dict[str, int]:
        times = {}
        for s in stimuli:
            if s.value is None:
                continue
            port = self.netlist.input_group(s.group)
            rail = port.rail1 if s.value else port.rail0
            t = base + (s.reset_after if reset else s.at)
            self.drive(rail, 0 if reset else 1, t)
            times[s.group] = t
        return times

    def transaction(
        self,
        stimuli: Sequence[Stimulus],
        start: Optional[int] = None,
        run_reset: bool = True,
        record: bool = True,
    ) -> TransactionLog:
        """Drive data, settle, then drive spacer and settle again"""
        start = self.now if start is None else start
        known = {p.group for p in self.netlist.inputs}
        unknown = sorted({s.group for s in stimuli} - known)
        if unknown:
            raise UsageError(f"{self.netlist.name} has no input groups {', '.join(unknown)}")

        monitor = _Monitor(self, record)
        if self.ackin is not None and not self._projected[self.ackin]:
            self._drive(self.ackin, 1, start)
        input_times = self._apply(stimuli, start, reset=False)
        self.run(monitor)
        set_end = max(self.now, start)
        outputs = {group: self.pair_state(i1, i0) for group, i1, i0 in self.observed}

        reset_start = None
        if run_reset:
            reset_start = set_end
            monitor.phase = Phase.RESET
            self._apply(stimuli, reset_start, reset=True)
            self.run(monitor)
        end = max(self.now, reset_start if reset_start is not None else set_end)

        latency = None
        valid = monitor.valid_times
        if input_times and valid and all(t is not None for t in valid.values()):
            latency = max(valid.values()) - min(input_times.values())
        final_high = [self.names[i] for i, level in enumerate(self.levels) if level and i != self.ackin]

        log = TransactionLog(
            start=start,
            set_end=set_end,
            reset_start=reset_start,
            end=end,
            input_times=input_times,
            output_valid_times=valid,
            output_spacer_times=monitor.spacer_times,
            outputs=outputs,
            latency=latency,
            rtz_complete=not final_high,
            illegal_seen=bool(monitor.illegal),
            illegal_pairs=list(monitor.illegal),
            monotonic_violations=list(monitor.monotonic),
            final_high=final_high,
            ackout_rise=monitor.ackout_rise,
            ackout_fall=monitor.ackout_fall,
            toggles=monitor.toggles,
            transitions=monitor.transitions,
        )
        logging.debug(
            f"{self.netlist.name}: transaction at {start} latency={latency} "
            f"toggles={monitor.toggles} rtz={log.rtz_complete}"
        )
        return log


StimulusLike = Union[Stimulus, Tuple[str, Optional[int], int]]


def as_stimuli(inputs: Sequence[StimulusLike]) -> List[Stimulus]:
    """Accept Stimulus objects or (group, value, apply_time) tuples"""
    stimuli = []
    for item in inputs:
        if isinstance(item, Stimulus):
            stimuli.append(item)
        else:
            group, value, at = item
            stimuli.append(Stimulus(group=group, value=value, at=at))
    return stimuli


def vector_stimuli(vector: Dict[str, int], at: int = 0) -> List[Stimulus]:
    return [Stimulus(group=group, value=bit, at=at) for group, bit in vector.items()]


def simulate_transaction(
    netlist: Netlist,
    delays: DelayTable,
    inputs: Sequence[StimulusLike],
    run_reset: bool = True,
    record: bool = True,
    max_events: int = MAX_EVENTS,
) -> TransactionLog:
    """One transaction from the all-zero state"""
    sim = EventSimulator(netlist, delays, max_events=max_events)
    return sim.transaction(as_stimuli(inputs), start=0, run_reset=run_reset, record=record)


def check_rtz_complete(log: TransactionLog, netlist: Netlist) -> bool:
    """True iff every net other than the environment-driven ackin ended at 0"""
    ackin = netlist.acks.ackin if netlist.acks is not None else None
    return not [net for net in log.final_high if net != ackin]
