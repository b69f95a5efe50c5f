"""4-phase return-to-zero handshake runs and indication classification."""

import logging
import random
from statistics import mean
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from async_adders.enums import IndicationClass
from async_adders.exceptions import DeadlockError, ParseError, UsageError
from async_adders.generator.adders import operand_bits
from async_adders.models.config import DEFAULT_SEED
from async_adders.models.delays import DelayTable
from async_adders.models.netlist import Netlist
from async_adders.simulator.engine import EventSimulator, Stimulus, TransactionLog, simulate_transaction

Vector = Dict[str, int]


class ProtocolSummary(BaseModel):
    transactions: int = 0
    completed: int = 0
    illegal: int = Field(0, description="Transactions that hit a (1,1) pair")
    rtz_failures: int = 0
    monotonic_failures: int = 0
    deadlocks: int = 0
    toggles: int = Field(0, description="Net transitions over the run, a switching-activity proxy")
    mean_latency: Optional[float] = None
    max_latency: Optional[int] = None
    mean_cycle_time: Optional[float] = Field(None, description="Average transaction duration")

    @property
    def clean(self) -> bool:
        return (
            self.completed == self.transactions
            and not (self.illegal or self.rtz_failures or self.monotonic_failures or self.deadlocks)
        )


class ProtocolRun(BaseModel):
    logs: List[TransactionLog] = Field(default_factory=list)
    summary: ProtocolSummary = Field(default_factory=ProtocolSummary)


def random_vectors(netlist: Netlist, count: int, rng: random.Random) -> List[Vector]:
    groups = [p.group for p in netlist.inputs]
    return [{g: rng.randint(0, 1) for g in groups} for _ in range(count)]


def adder_vectors(width: int, operands: Sequence[Tuple[int, int, int]]) -> List[Vector]:
    return [operand_bits(width, a, b, cin) for a, b, cin in operands]


def parse_vector_text(text: str) -> List[Tuple[int, int, int]]:
    """One transaction per line: hex A, hex B, carry-in bit. '#' starts a comment."""
    operands = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(",", " ").split()
        try:
            a, b, cin = int(fields[0], 16), int(fields[1], 16), int(fields[2])
        except (IndexError, ValueError) as e:
            raise ParseError(f"Vector line {number} is not 'A B CIN': {line!r}") from e
        if len(fields) != 3 or cin not in (0, 1):
            raise ParseError(f"Vector line {number} is not 'A B CIN': {line!r}")
        operands.append((a, b, cin))
    return operands


def _summarize(logs: List[TransactionLog]) -> ProtocolSummary:
    latencies = [log.latency for log in logs if log.latency is not None]
    return ProtocolSummary(
        transactions=len(logs),
        completed=sum(log.completed for log in logs),
        illegal=sum(log.illegal_seen for log in logs),
        rtz_failures=sum(not log.rtz_complete for log in logs),
        monotonic_failures=sum(bool(log.monotonic_violations) for log in logs),
        toggles=sum(log.toggles for log in logs),
        mean_latency=mean(latencies) if latencies else None,
        max_latency=max(latencies) if latencies else None,
        mean_cycle_time=mean(log.end - log.start for log in logs) if logs else None,
    )


def run_protocol(
    stage: Netlist,
    delays: DelayTable,
    vectors: Optional[Sequence[Vector]] = None,
    seed: int = DEFAULT_SEED,
    count: int = 0,
    period: int = 0,
    max_skew: int = 0,
    record: bool = False,
) -> ProtocolRun:
    """Drive each vector through the four phases: data, ackout high, spacer, ackout low.

    With vectors=None, `count` random vectors are drawn from `seed`. Arrival
    skew is drawn from the same generator. Vector k starts no earlier than
    k * period.
    """
    acks = stage.acks
    if acks is None or not acks.ackin or not acks.ackout:
        raise UsageError(f"{stage.name} has no ackin/ackout; wrap it with gen_stage first")

    rng = random.Random(seed)
    if vectors is None:
        vectors = random_vectors(stage, count, rng)

    sim = EventSimulator(stage, delays)
    logs: List[TransactionLog] = []
    for k, vector in enumerate(vectors):
        stimuli = [
            Stimulus(group=g, value=bit, at=rng.randint(0, max_skew) if max_skew else 0)
            for g, bit in vector.items()
        ]
        log = sim.transaction(stimuli, start=max(sim.now, k * period), record=record)
        if log.ackout_rise is None:
            blocking = [g for g, state in log.outputs.items() if not state.is_valid] + [acks.ackout]
            raise DeadlockError(f"Transaction {k}: ackout never rose", blocking=blocking)
        if log.ackout_fall is None:
            raise DeadlockError(f"Transaction {k}: ackout never fell", blocking=log.final_high)
        logs.append(log)

    summary = _summarize(logs)
    logging.info(
        f"{stage.name}: {summary.completed}/{summary.transactions} transactions completed, "
        f"{summary.illegal} illegal, {summary.rtz_failures} RTZ failures"
    )
    return ProtocolRun(logs=logs, summary=summary)


class Witness(BaseModel):
    trial: int
    delayed: str = Field(..., description="Input group held back")
    vector: Vector
    outputs: List[str] = Field(..., description="Output pairs that completed before the delayed input")


class IndicationReport(BaseModel):
    netlist: str
    classification: IndicationClass
    trials: int
    early_set: List[Witness] = Field(default_factory=list)
    early_reset: List[Witness] = Field(default_factory=list)
    all_outputs_early: bool = Field(False, description="Some trial had every output valid before the delayed input")
    note: str = ""


def _trial_vector(netlist: Netlist, trial: int, rng: random.Random) -> Vector:
    groups = [p.group for p in netlist.inputs]
    sweep = trial // len(groups)
    if sweep == 0:
        return {g: 1 for g in groups}
    if sweep == 1:
        return {g: 0 for g in groups}
    return {g: rng.randint(0, 1) for g in groups}


def classify_indication(
    fb: Netlist,
    delays: DelayTable,
    trials: int,
    seed: int = DEFAULT_SEED,
) -> IndicationReport:
    """Hold one input pair back far beyond settling, in both phases, and watch the outputs.

    Trials cycle through the input pairs; the first pass applies all ones,
    the second all zeros, the rest seeded random data. An early-set witness
    is an output pair valid before the held input arrives, an early-reset
    witness an output pair back at spacer before the held spacer.
    """
    if trials < 1:
        raise UsageError("classify_indication needs at least one trial")
    if not fb.inputs:
        raise UsageError(f"{fb.name} has no input groups to delay")

    far = sum(delays[g.kind] for g in fb.gates) + 1
    rng = random.Random(seed)
    report = IndicationReport(netlist=fb.name, classification=IndicationClass.STRONG, trials=trials)
    for trial in range(trials):
        delayed = fb.inputs[trial % len(fb.inputs)].group
        vector = _trial_vector(fb, trial, rng)
        stimuli = [
            Stimulus(group=g, value=bit, at=far if g == delayed else 0, reset_after=far if g == delayed else 0)
            for g, bit in vector.items()
        ]
        log = simulate_transaction(fb, delays, stimuli, record=False)

        set_early = [g for g, t in log.output_valid_times.items() if t is not None and t < far]
        if set_early:
            report.early_set.append(Witness(trial=trial, delayed=delayed, vector=vector, outputs=set_early))
            if len(set_early) == len(log.output_valid_times):
                report.all_outputs_early = True
        held_spacer = log.reset_start + far
        reset_early = [g for g, t in log.output_spacer_times.items() if t is not None and t < held_spacer]
        if reset_early:
            report.early_reset.append(Witness(trial=trial, delayed=delayed, vector=vector, outputs=reset_early))

    if report.early_set and report.early_reset:
        report.classification = IndicationClass.EARLY
    elif report.early_set or report.early_reset:
        report.classification = IndicationClass.WEAK
    report.note = (
        f"{trials} trials over {len(fb.inputs)} input pairs, seed {seed}; "
        f"a strong result is evidence from these trials, not a proof"
    )
    logging.info(
        f"{fb.name}: {report.classification.value} "
        f"({len(report.early_set)} early-set, {len(report.early_reset)} early-reset witnesses)"
    )
    return report
