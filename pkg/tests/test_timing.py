import pytest

from async_adders.enums import GateKind, ReportSource
from async_adders.exceptions import ParseError, UsageError
from async_adders.generator.adders import gen_hybrid_rca, gen_safa
from async_adders.generator.handshake import gen_stage, is_register
from async_adders.models.delays import DelayTable
from async_adders.models.timing import LatencyExpr
from async_adders.simulator.protocol import adder_vectors, run_protocol
from async_adders.timing.formulas import BASELINE, CONFIGURATIONS, LEGENDS, latency_expr_table, legend
from async_adders.timing.reports import (
    CSV_COLUMNS,
    compare_report,
    correlation_report,
    hybrid_latency_expr,
    moving_average,
    report_to_csv,
    sweep_hybrid,
)
from async_adders.timing.sta import critical_path
from tests.fixtures.circuits import (  # noqa: F401
    EXAMPLE_DELAYS,
    example_delays,
    skewed_delays,
    unit_delays,
)

UNIT_LATENCIES = {"Adder1": 35, "Adder5": 35, "Adder6": 20, "Adder11": 20, "Adder12": 21}


def test_delay_table_file(example_delays):
    assert example_delays[GateKind.C2] == 2
    assert example_delays[GateKind.BUF] == 0
    assert example_delays.time_unit == "ps"
    assert DelayTable.from_mapping(example_delays.to_mapping()) == example_delays


def test_incomplete_delay_table_is_a_parse_error():
    with pytest.raises(ParseError):
        DelayTable.load("tests/fixtures/delays/incomplete.yml")


def test_delay_table_time_units(example_delays):
    data = example_delays.to_mapping()
    data["time_unit"] = "picoseconds"
    assert DelayTable.from_mapping(data).time_unit == "ps"
    assert DelayTable.uniform(time_unit="Nanosecond").time_unit == "ns"
    data["time_unit"] = "fortnights"
    with pytest.raises(ParseError):
        DelayTable.from_mapping(data)


def test_delay_table_rejects_zero_gate_delay(unit_delays):
    with pytest.raises(ValueError):
        unit_delays.with_overrides(AND2=0)
    assert unit_delays.with_overrides(ce2=3)[GateKind.C2] == 3


def test_latency_expr_text():
    expr = latency_expr_table()["Adder11"]
    assert str(expr) == "REG + OR3 + 14 AO21 + 3 AO22 + C2 + BUF"
    assert str(LatencyExpr()) == "0"


def test_latency_expr_evaluation(unit_delays, example_delays):
    table = latency_expr_table()
    assert len(table) == len(LEGENDS) == 17
    assert table["Adder11"].evaluate(unit_delays) == 20
    assert table["Adder11"].evaluate(example_delays) == 54
    for name, value in UNIT_LATENCIES.items():
        assert table[name].evaluate(unit_delays) == value


@pytest.mark.parametrize("name", sorted(CONFIGURATIONS))
def test_critical_path_matches_formula(name, unit_delays, example_delays, skewed_delays):
    stage = gen_stage(gen_hybrid_rca(CONFIGURATIONS[name]))
    formula = latency_expr_table()[name]
    for delays in (unit_delays, example_delays, skewed_delays):
        result = critical_path(stage, delays)
        assert result.expr.same_gates(formula), f"{name}: {result.expr} != {formula}"
        assert result.value == formula.evaluate(delays)
    assert critical_path(stage, unit_delays).value == UNIT_LATENCIES[name]


def test_critical_path_shape(unit_delays):
    stage = gen_stage(gen_hybrid_rca(CONFIGURATIONS[BASELINE]))
    result = critical_path(stage, unit_delays)
    assert is_register(result.path[0])
    assert result.path[0].startswith("reg.")
    assert result.endpoint in stage.data_output_nets
    assert len(result.path) == 20
    assert result.expr.includes_register


def test_critical_path_is_deterministic(example_delays):
    stage = gen_stage(gen_hybrid_rca(CONFIGURATIONS["Adder12"]))
    assert critical_path(stage, example_delays) == critical_path(stage, example_delays)


def test_bare_block_has_no_register_term(unit_delays):
    result = critical_path(gen_safa(), unit_delays)
    assert result.value == 3
    assert not result.expr.includes_register


def test_sweep_at_unit_delays(unit_delays):
    result = sweep_hybrid(32, unit_delays)
    assert [p.safa for p in result.points] == list(range(0, 33, 2))
    assert result.argmin == [0, 2]
    assert result.points[-1].latency == 35


def test_sweep_with_example_table(example_delays):
    result = sweep_hybrid(32, example_delays)
    latencies = {p.safa: p.latency for p in result.points}
    assert result.argmin == [2]
    assert latencies[2] == 54
    assert latencies[0] == 55
    assert latencies[4] == 55


def test_sweep_odd_width(unit_delays):
    assert [p.safa for p in sweep_hybrid(5, unit_delays).points] == [1, 3, 5]
    with pytest.raises(UsageError):
        sweep_hybrid(1, unit_delays)


def test_hybrid_closed_form_matches_named_formulas():
    table = latency_expr_table()
    assert hybrid_latency_expr(32, 2).same_gates(table["Adder11"])
    assert hybrid_latency_expr(32, 4).same_gates(table["Adder12"])
    assert hybrid_latency_expr(32, 32).same_gates(table["Adder1"])
    assert hybrid_latency_expr(32, 0).same_gates(table["Adder6"])


def test_practical_reductions():
    report = compare_report(source=ReportSource.PRACTICAL)
    reductions = {r.legend: round(r.reduction_vs_adder11_percent, 1) for r in report.rows}
    assert reductions["Adder13"] == 35.3
    assert reductions["Adder14"] == 30.5
    assert reductions["Adder17"] == 13.0
    assert reductions["Adder1"] == 31.0
    assert reductions[BASELINE] == 0.0
    assert report.row("Adder6").normalized == pytest.approx(1.0327, abs=1e-4)
    assert report.time_unit == "ns"


def test_published_discrepancies_are_flagged():
    report = compare_report(source=ReportSource.PRACTICAL)
    flagged = {d.legend: (d.computed_percent, d.published_percent) for d in report.discrepancies}
    assert flagged == {"Adder15": (22.7, 20.2), "Adder16": (15.7, 18.7)}


def test_formula_report(unit_delays):
    report = compare_report(unit_delays, ReportSource.FORMULA)
    assert report.row(BASELINE).latency == 20
    assert report.row(BASELINE).normalized == 1.0
    assert report.discrepancies == []
    assert report.row("Adder11").area_proxy_gates == len(gen_hybrid_rca(CONFIGURATIONS["Adder11"]).gates)
    assert report.row("Adder13").area_proxy_gates is None


def test_report_csv():
    text = report_to_csv(compare_report(source=ReportSource.PRACTICAL, legends=["Adder11", "Adder13"]))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    assert lines[2].startswith("Adder13,")
    assert lines[2].endswith(",3.31,1.5467,35.3,practical")


def test_unknown_legend():
    with pytest.raises(UsageError):
        legend("Adder42")
    assert legend("adder6").name == "Adder6"


def test_moving_average():
    assert moving_average([1.0, 3.0, 5.0]) == [1.0, 2.0, 4.0]


def test_correlation_report(example_delays):
    report = correlation_report(example_delays)
    assert len(report.rows) == 17
    baseline = next(r for r in report.rows if r.legend == BASELINE)
    assert baseline.theoretical_normalized == 1.0 and baseline.practical_normalized == 1.0
    assert -1.0 <= report.pearson <= 1.0


def test_redundant_carry_is_faster(unit_delays, example_delays, skewed_delays):
    redundant = gen_stage(gen_hybrid_rca(CONFIGURATIONS["Adder6"]))
    plain = gen_stage(gen_hybrid_rca(CONFIGURATIONS["Adder5"]))
    for delays in (unit_delays, example_delays, skewed_delays):
        assert delays[GateKind.AO21] < delays[GateKind.C2] + delays[GateKind.OR2]
        assert critical_path(redundant, delays).value < critical_path(plain, delays).value


def test_worst_case_vector_reaches_critical_path(unit_delays):
    stage = gen_stage(gen_hybrid_rca(CONFIGURATIONS[BASELINE]))
    run = run_protocol(stage, unit_delays, vectors=adder_vectors(32, [(0, 2**32 - 1, 1)]))
    assert run.logs[0].latency == critical_path(stage, unit_delays).value == 20
