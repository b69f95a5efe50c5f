"""Latency comparison, correlation and hybrid-sweep reports."""

import csv
import io
import logging
from functools import lru_cache
from statistics import correlation
from typing import Dict, List, Optional, Sequence, Tuple

import yaml
from pydantic import BaseModel, Field

from async_adders.enums import GateKind, ReportSource
from async_adders.exceptions import UsageError
from async_adders.generator.adders import gen_hybrid_rca
from async_adders.models.delays import DelayTable
from async_adders.models.timing import LatencyExpr
from async_adders.timing.formulas import (
    BASELINE,
    CONFIGURATIONS,
    LEGENDS,
    PUBLISHED_REDUCTIONS,
    latency_expr_table,
    legend,
)

CSV_COLUMNS = ["legend", "description", "latency", "normalized", "reduction_vs_adder11_percent", "source"]
# published figures are given to one decimal
DISCREPANCY_TOLERANCE = 0.1


class ReportRow(BaseModel):
    legend: str
    description: str
    latency: float
    normalized: float = Field(..., description="Latency over the baseline's latency")
    reduction_vs_adder11_percent: float = Field(..., description="(L - L_baseline) / L in percent")
    source: ReportSource
    area_proxy_gates: Optional[int] = Field(None, description="Gate count of the generated block (proxy, not um^2)")
    area_proxy_pins: Optional[int] = Field(None, description="Input pin count of the generated block (proxy)")


class Discrepancy(BaseModel):
    legend: str
    computed_percent: float
    published_percent: float


class ComparisonReport(BaseModel):
    source: ReportSource
    time_unit: str
    rows: List[ReportRow] = Field(default_factory=list)
    discrepancies: List[Discrepancy] = Field(default_factory=list)

    def row(self, name: str) -> ReportRow:
        for row in self.rows:
            if row.legend == name:
                return row
        raise KeyError(name)


@lru_cache(maxsize=None)
def area_proxy(name: str) -> Optional[Tuple[int, int]]:
    """(gates, input pins) of a legend's generated netlist, None without one"""
    spec = CONFIGURATIONS.get(name)
    if spec is None:
        return None
    netlist = gen_hybrid_rca(spec)
    return len(netlist.gates), sum(len(g.inputs) for g in netlist.gates)


def _latencies(source: ReportSource, delays: DelayTable) -> Dict[str, float]:
    if source is ReportSource.PRACTICAL:
        return {entry.name: entry.practical_ns for entry in LEGENDS}
    table = latency_expr_table()
    return {entry.name: float(table[entry.name].evaluate(delays)) for entry in LEGENDS}


def compare_report(
    delays: Optional[DelayTable] = None,
    source: ReportSource = ReportSource.PRACTICAL,
    legends: Optional[Sequence[str]] = None,
) -> ComparisonReport:
    """Per-legend latency, normalized to the baseline, with the baseline's reduction against each"""
    delays = delays or DelayTable.uniform()
    selected = [legend(name).name for name in legends] if legends else [entry.name for entry in LEGENDS]
    latencies = _latencies(source, delays)
    baseline = latencies[BASELINE]

    report = ComparisonReport(source=source, time_unit="ns" if source is ReportSource.PRACTICAL else delays.time_unit)
    for name in selected:
        latency = latencies[name]
        proxy = area_proxy(name)
        report.rows.append(ReportRow(
            legend=name,
            description=legend(name).description,
            latency=latency,
            normalized=latency / baseline,
            reduction_vs_adder11_percent=100 * (latency - baseline) / latency,
            source=source,
            area_proxy_gates=proxy[0] if proxy else None,
            area_proxy_pins=proxy[1] if proxy else None,
        ))

    if source is ReportSource.PRACTICAL:
        for row in report.rows:
            published = PUBLISHED_REDUCTIONS.get(row.legend)
            if published is None:
                continue
            computed = round(row.reduction_vs_adder11_percent, 1)
            if abs(computed - published) > DISCREPANCY_TOLERANCE:
                logging.warning(
                    f"{row.legend}: measured latencies give a {computed}% reduction, published figure is {published}%"
                )
                report.discrepancies.append(
                    Discrepancy(legend=row.legend, computed_percent=computed, published_percent=published)
                )
    return report


def report_to_csv(report: ComparisonReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow([
            row.legend,
            row.description,
            f"{row.latency:g}",
            f"{row.normalized:.4f}",
            f"{row.reduction_vs_adder11_percent:.1f}",
            row.source.value,
        ])
    return buffer.getvalue()


def report_to_yaml(report: BaseModel) -> str:
    return yaml.safe_dump(report.model_dump(mode="json"), sort_keys=False, allow_unicode=True)


class CorrelationRow(BaseModel):
    legend: str
    theoretical: float
    practical_ns: float
    theoretical_normalized: float
    practical_normalized: float
    theoretical_trend: float = Field(..., description="2-point moving average of the normalized series")
    practical_trend: float


class CorrelationReport(BaseModel):
    time_unit: str
    rows: List[CorrelationRow] = Field(default_factory=list)
    pearson: float = Field(..., description="Correlation of the two normalized series")


def moving_average(values: Sequence[float], window: int = 2) -> List[float]:
    """Trailing average; the first points average what is available"""
    return [
        sum(values[max(0, i - window + 1):i + 1]) / (i + 1 - max(0, i - window + 1))
        for i in range(len(values))
    ]


def correlation_report(delays: Optional[DelayTable] = None) -> CorrelationReport:
    """Formula latencies under `delays` side by side with the measured ones, both normalized"""
    delays = delays or DelayTable.uniform()
    theoretical = _latencies(ReportSource.FORMULA, delays)
    practical = _latencies(ReportSource.PRACTICAL, delays)
    names = [entry.name for entry in LEGENDS]
    t_norm = [theoretical[n] / theoretical[BASELINE] for n in names]
    p_norm = [practical[n] / practical[BASELINE] for n in names]
    t_trend, p_trend = moving_average(t_norm), moving_average(p_norm)

    rows = [
        CorrelationRow(
            legend=n,
            theoretical=theoretical[n],
            practical_ns=practical[n],
            theoretical_normalized=t_norm[i],
            practical_normalized=p_norm[i],
            theoretical_trend=t_trend[i],
            practical_trend=p_trend[i],
        )
        for i, n in enumerate(names)
    ]
    pearson = correlation(t_norm, p_norm)
    logging.info(f"Normalized formula vs measured latency: Pearson r = {pearson:.3f}")
    return CorrelationReport(time_unit=delays.time_unit, rows=rows, pearson=pearson)


class SweepPoint(BaseModel):
    safa: int
    dafa: int
    latency: int
    expr: LatencyExpr


class SweepResult(BaseModel):
    width: int
    points: List[SweepPoint] = Field(default_factory=list)
    argmin: List[int] = Field(default_factory=list, description="Every SAFA count reaching the minimum")


def hybrid_latency_expr(width: int, safa: int) -> LatencyExpr:
    """Closed-form latency of an n-bit hybrid RCA with s SAFAs, register included"""
    dafa = (width - safa) // 2
    if dafa == 0:
        coefficients = {GateKind.AO22: width, GateKind.C2: 1, GateKind.OR2: 1}
    else:
        if safa == 0:
            coefficients = {GateKind.AND4: 1, GateKind.OR4: 1}
        else:
            coefficients = {GateKind.AO22: safa + 1}
        coefficients[GateKind.AO21] = dafa - 1
        coefficients[GateKind.C2] = 1
        coefficients[GateKind.OR3] = 1
    return LatencyExpr(coefficients=coefficients, includes_register=True)


def sweep_hybrid(width: int, delays: DelayTable) -> SweepResult:
    """Latency over every legal SAFA count; ties are all reported, smallest first"""
    if width < 2:
        raise UsageError(f"sweep_hybrid needs a width of at least 2, got {width}")
    result = SweepResult(width=width)
    for safa in range(width % 2, width + 1, 2):
        expr = hybrid_latency_expr(width, safa)
        result.points.append(
            SweepPoint(safa=safa, dafa=(width - safa) // 2, latency=expr.evaluate(delays), expr=expr)
        )
    best = min(p.latency for p in result.points)
    result.argmin = [p.safa for p in result.points if p.latency == best]
    logging.debug(f"Hybrid sweep over {len(result.points)} configurations, minimum {best} at s={result.argmin}")
    return result
