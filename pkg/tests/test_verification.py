import random

import pytest

from async_adders.enums import VerifyMode
from async_adders.exceptions import UsageError
from async_adders.generator.adders import AdderSpec, gen_dafa, gen_hybrid_rca, gen_safa
from async_adders.timing.formulas import CONFIGURATIONS
from async_adders.verification.equations import (
    DAFA_EQUATIONS,
    SAFA_EQUATIONS,
    EquationSet,
    ProductTerm,
    dsop_check,
    enumeratively_disjoint,
    equation_equivalence,
    monotonic_cover_check,
    parse_products,
    structurally_disjoint,
)
from async_adders.verification.harness import exhaustive_verify, operands_at, vector_index
from async_adders.verification.oracle import oracle_add
from tests.fixtures.circuits import example_delays, rca4, swap_output_rails, unit_delays  # noqa: F401


def test_oracle():
    assert oracle_add(5, 3, 1, 4) == (9, 0)
    assert oracle_add(15, 15, 1, 4) == (15, 1)
    assert oracle_add(2**32 - 1, 1, 0, 32) == (0, 1)
    with pytest.raises(UsageError):
        oracle_add(16, 0, 0, 4)


def test_vector_index_order():
    assert vector_index(0, 0, 0, 4) == 0
    assert vector_index(0, 0, 1, 4) == 1
    assert vector_index(0, 1, 0, 4) == 2
    assert vector_index(1, 0, 0, 4) == 32
    assert operands_at(vector_index(5, 3, 1, 4), 4) == (5, 3, 1)


def test_parse_products_prefers_longest_rail():
    products = parse_products("A11A01B10 + CIN1", ["A1", "A0", "B1", "CIN"])
    assert [p.literals for p in products] == [("A11", "A01", "B10"), ("CIN1",)]


def test_product_with_both_rails_is_rejected():
    with pytest.raises(ValueError):
        parse_products("A1A0", ["A"])


def test_equation_set_checks_declared_variables():
    with pytest.raises(ValueError):
        EquationSet(name="bad", variables=["A"], outputs={"Y1": parse_products("B1", ["B"])})


@pytest.mark.parametrize("eqs", [SAFA_EQUATIONS, DAFA_EQUATIONS], ids=["safa", "dafa"])
def test_embedded_equations_are_dsop(eqs):
    report = dsop_check(eqs)
    assert report.ok and report.structural_ok and report.enumerative_ok
    assert report.offending is None


@pytest.mark.parametrize("eqs", [SAFA_EQUATIONS, DAFA_EQUATIONS], ids=["safa", "dafa"])
def test_embedded_equations_are_monotonic_covers(eqs):
    assert monotonic_cover_check(eqs).ok


def test_overlapping_products_are_reported():
    eqs = EquationSet(
        name="overlap",
        variables=["A", "B"],
        outputs={"Y1": parse_products("A1 + A1B1", ["A", "B"]), "Y0": parse_products("A0", ["A", "B"])},
        pairs=[("Y1", "Y0")],
    )
    report = dsop_check(eqs)
    assert not report.ok
    assert report.offending == ("Y1", "A1", "A1B1")


def test_incomplete_cover_is_reported():
    eqs = EquationSet(
        name="gap",
        variables=["A", "B"],
        outputs={"Y1": parse_products("A1B1", ["A", "B"]), "Y0": parse_products("A0B0", ["A", "B"])},
        pairs=[("Y1", "Y0")],
    )
    report = monotonic_cover_check(eqs)
    assert not report.ok
    assert {tuple(f.assignment.values()) for f in report.failures} == {(0, 1), (1, 0)}
    assert all(f.active == 0 for f in report.failures)


def test_safa_netlist_implements_its_equations(unit_delays, example_delays):
    for delays in (unit_delays, example_delays):
        report = equation_equivalence(gen_safa(), SAFA_EQUATIONS, delays)
        assert report.ok and report.checked == 8


@pytest.mark.parametrize("redundant", [True, False])
def test_dafa_netlist_implements_its_equations(redundant):
    report = equation_equivalence(gen_dafa(redundant), DAFA_EQUATIONS)
    assert report.ok and report.checked == 32


def test_equations_against_wrong_netlist():
    with pytest.raises(UsageError):
        equation_equivalence(gen_safa(), DAFA_EQUATIONS)


def test_exhaustive_safa_and_dafa():
    assert exhaustive_verify(gen_safa(), 1).checked == 8
    for redundant in (True, False):
        report = exhaustive_verify(gen_dafa(redundant), 2)
        assert report.ok and report.checked == 32


@pytest.mark.parametrize("redundant", [True, False])
@pytest.mark.parametrize("safa", [0, 2, 4])
def test_exhaustive_four_bit(safa, redundant, example_delays):
    netlist = gen_hybrid_rca(AdderSpec.for_width(4, safa, redundant))
    report = exhaustive_verify(netlist, 4, delays=example_delays)
    assert report.ok
    assert report.checked == 512
    assert report.illegal == 0 and report.rtz_failures == 0


def test_swapped_sum_rails_fail_at_first_vector(rca4):
    report = exhaustive_verify(swap_output_rails(rca4, "s0"), 4)
    assert not report.ok
    assert report.failures == report.checked
    first = report.first_counterexample
    assert first.index == 0
    assert (first.a, first.b, first.cin) == (0, 0, 0)
    assert first.expected == (0, 0)
    assert first.got == (1, 0)
    assert first.reasons == ["wrong sum"]


def test_exhaustive_width_limit():
    with pytest.raises(UsageError):
        exhaustive_verify(gen_hybrid_rca(AdderSpec.for_width(10, 2)), 10)


def test_random_verification_is_seeded():
    netlist = gen_hybrid_rca(CONFIGURATIONS["Adder11"])
    first = exhaustive_verify(netlist, 32, mode=VerifyMode.RANDOM, count=40, seed=5)
    second = exhaustive_verify(netlist, 32, mode=VerifyMode.RANDOM, count=40, seed=5)
    assert first.ok and first.checked == 40
    assert first == second


def test_parallel_shards_match_in_process():
    faulty = swap_output_rails(gen_hybrid_rca(AdderSpec.for_width(6, 2)), "cout")
    serial = exhaustive_verify(faulty, 6)
    parallel = exhaustive_verify(faulty, 6, workers=2)
    assert serial.checked == 2 ** 13
    assert serial.first_counterexample.index == 0
    assert serial == parallel


@pytest.mark.slow
@pytest.mark.parametrize("redundant", [True, False])
@pytest.mark.parametrize("safa", [0, 2, 4, 8])
def test_exhaustive_eight_bit(safa, redundant):
    netlist = gen_hybrid_rca(AdderSpec.for_width(8, safa, redundant))
    report = exhaustive_verify(netlist, 8, workers=None)
    assert report.ok and report.checked == 2 ** 17


@pytest.mark.slow
@pytest.mark.parametrize("name", ["Adder11", "Adder12", "Adder6", "Adder1"])
def test_random_thirty_two_bit(name, example_delays):
    report = exhaustive_verify(
        gen_hybrid_rca(CONFIGURATIONS[name]), 32, mode=VerifyMode.RANDOM, count=10_000, delays=example_delays,
        workers=None,
    )
    assert report.ok


def random_product(rng, variables):
    chosen = rng.sample(variables, rng.randint(1, len(variables)))
    return ProductTerm(literals=tuple(f"{v}{rng.randint(0, 1)}" for v in chosen))


def test_disjointness_checkers_agree():
    rng = random.Random(2024)
    variables = ["A", "B", "C", "D"]
    disjoint = 0
    for _ in range(1000):
        p, q = random_product(rng, variables), random_product(rng, variables)
        by_rule = structurally_disjoint(p, q)
        assert by_rule == enumeratively_disjoint(p, q, variables)
        disjoint += by_rule
    assert 0 < disjoint < 1000
