"""Oracle-based functional verification of generated adders.

Vectors are indexed (a * 2^w + b) * 2 + cin. Shards of indices run in a
process pool, each with its own simulator; results merge by index.
"""

import asyncio
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from async_adders.enums import VerifyMode
from async_adders.exceptions import UsageError
from async_adders.generator.adders import decode_sum, operand_bits
from async_adders.models.config import DEFAULT_COUNT, DEFAULT_SEED
from async_adders.models.delays import DelayTable
from async_adders.models.netlist import Netlist
from async_adders.simulator.engine import EventSimulator, vector_stimuli
from async_adders.verification.oracle import oracle_add

EXHAUSTIVE_MAX_WIDTH = 8
SHARD_SIZE = 4096

Operands = Tuple[int, int, int]


class Counterexample(BaseModel):
    index: int
    a: int
    b: int
    cin: int
    expected: Tuple[int, int] = Field(..., description="(sum, cout) from the oracle")
    got: Optional[Tuple[int, int]] = Field(None, description="Decoded (sum, cout), None if some pair was not valid")
    reasons: List[str] = Field(default_factory=list)


class VerifyReport(BaseModel):
    netlist: str
    width: int
    mode: VerifyMode
    checked: int = 0
    failures: int = 0
    illegal: int = 0
    rtz_failures: int = 0
    first_counterexample: Optional[Counterexample] = None

    @property
    def ok(self) -> bool:
        return self.checked > 0 and self.failures == 0


def vector_index(a: int, b: int, cin: int, width: int) -> int:
    return ((a << width) + b) * 2 + cin


def operands_at(index: int, width: int) -> Operands:
    cin = index & 1
    rest = index >> 1
    return rest >> width, rest & ((1 << width) - 1), cin


def _verify_shard(
    netlist: Netlist, delays: DelayTable, width: int, shard: Sequence[Tuple[int, Operands]]
) -> List[Counterexample]:
    """Failures of one shard; runs inside a worker process"""
    sim = EventSimulator(netlist, delays)
    failures = []
    for index, (a, b, cin) in shard:
        sim.reset()
        log = sim.transaction(vector_stimuli(operand_bits(width, a, b, cin)), start=0, record=False)
        expected = oracle_add(a, b, cin, width)
        got = decode_sum(log.outputs, width)
        reasons = []
        if got != expected:
            reasons.append("wrong sum")
        if log.illegal_seen:
            reasons.append(f"illegal state on {', '.join(log.illegal_pairs)}")
        if not log.rtz_complete:
            reasons.append(f"nets still high after reset: {', '.join(log.final_high[:8])}")
        if log.monotonic_violations:
            reasons.append(f"non-monotonic nets: {', '.join(log.monotonic_violations[:8])}")
        if reasons:
            failures.append(Counterexample(index=index, a=a, b=b, cin=cin, expected=expected, got=got, reasons=reasons))
    return failures


async def _fan_out(netlist, delays, width, shards, workers) -> List[List[Counterexample]]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        tasks = [loop.run_in_executor(pool, _verify_shard, netlist, delays, width, shard) for shard in shards]
        return await asyncio.gather(*tasks)


def _vectors(width: int, mode: VerifyMode, seed: int, count: int) -> List[Tuple[int, Operands]]:
    if mode is VerifyMode.EXHAUSTIVE:
        if width > EXHAUSTIVE_MAX_WIDTH:
            raise UsageError(f"Exhaustive verification is limited to {EXHAUSTIVE_MAX_WIDTH} bits, got {width}")
        return [(i, operands_at(i, width)) for i in range(1 << (2 * width + 1))]
    rng = random.Random(seed)
    limit = 1 << width
    vectors = []
    for _ in range(count):
        a, b, cin = rng.randrange(limit), rng.randrange(limit), rng.randint(0, 1)
        vectors.append((vector_index(a, b, cin, width), (a, b, cin)))
    return vectors


def exhaustive_verify(
    netlist: Netlist,
    width: int,
    mode: VerifyMode = VerifyMode.EXHAUSTIVE,
    seed: int = DEFAULT_SEED,
    count: int = DEFAULT_COUNT,
    delays: Optional[DelayTable] = None,
    workers: Optional[int] = 1,
) -> VerifyReport:
    """Every transaction's decoded outputs against oracle_add, plus RTZ and legality monitors.

    workers=1 runs in-process; None uses one worker per CPU.
    """
    delays = delays or DelayTable.uniform()
    vectors = _vectors(width, mode, seed, count)
    shards = [vectors[i:i + SHARD_SIZE] for i in range(0, len(vectors), SHARD_SIZE)]
    workers = workers or os.cpu_count() or 1
    logging.info(f"Verifying {netlist.name}: {len(vectors)} {mode.value} vectors, {workers} worker(s)")

    if workers == 1 or len(shards) <= 1:
        results = [_verify_shard(netlist, delays, width, shard) for shard in shards]
    else:
        results = asyncio.run(_fan_out(netlist, delays, width, shards, min(workers, len(shards))))

    failures = sorted((c for shard in results for c in shard), key=lambda c: c.index)
    report = VerifyReport(
        netlist=netlist.name,
        width=width,
        mode=mode,
        checked=len(vectors),
        failures=len(failures),
        illegal=sum(any(r.startswith("illegal") for r in c.reasons) for c in failures),
        rtz_failures=sum(any(r.startswith("nets still high") for r in c.reasons) for c in failures),
        first_counterexample=failures[0] if failures else None,
    )
    if failures:
        first = failures[0]
        logging.warning(
            f"{netlist.name}: {len(failures)} of {len(vectors)} vectors failed; first at index {first.index} "
            f"(a={first.a}, b={first.b}, cin={first.cin}): {'; '.join(first.reasons)}"
        )
    return report
