"""Dual-rail logic equations of the SAFA and DAFA, and checks over them.

A literal is one rail of one dual-rail variable, written as the variable
name followed by the rail digit: CIN1 is rail 1 of CIN, A10 is rail 0 of
A1. Valid assignments give every variable exactly one high rail.
"""

import itertools
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from async_adders.enums import DecodeState
from async_adders.exceptions import UsageError
from async_adders.models.delays import DelayTable
from async_adders.models.netlist import Netlist
from async_adders.simulator.engine import Stimulus, simulate_transaction

Assignment = Dict[str, int]


def literal_variable(literal: str) -> Tuple[str, int]:
    return literal[:-1], int(literal[-1])


class ProductTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    literals: Tuple[str, ...] = Field(..., description="Rail names, in written order")

    @field_validator("literals")
    @classmethod
    def no_opposite_rails(cls, value):
        rails: Dict[str, int] = {}
        for literal in value:
            if literal[-1] not in "01":
                raise ValueError(f"Literal {literal} does not end in a rail digit")
            variable, rail = literal_variable(literal)
            if rails.setdefault(variable, rail) != rail:
                raise ValueError(f"Product {''.join(value)} uses both rails of {variable}")
        return value

    @property
    def variables(self) -> Dict[str, int]:
        return dict(literal_variable(literal) for literal in self.literals)

    def evaluate(self, assignment: Assignment) -> bool:
        return all(assignment[v] == rail for v, rail in self.variables.items())

    def __str__(self) -> str:
        return "".join(self.literals)


class EquationSet(BaseModel):
    """Named outputs as sums of products over declared dual-rail variables"""
    name: str
    variables: List[str] = Field(..., description="Dual-rail variable names")
    outputs: Dict[str, List[ProductTerm]] = Field(..., description="Output rail -> products")
    pairs: List[Tuple[str, str]] = Field(default_factory=list, description="(rail 1 output, rail 0 output)")
    ports: Dict[str, str] = Field(default_factory=dict, description="Variable -> netlist input group")
    output_ports: Dict[str, Tuple[str, int]] = Field(
        default_factory=dict, description="Output -> (netlist output group, rail)"
    )

    @model_validator(mode="after")
    def literals_declared(self):
        declared = set(self.variables)
        for output, products in self.outputs.items():
            for product in products:
                unknown = set(product.variables) - declared
                if unknown:
                    raise ValueError(f"{output}: product {product} uses undeclared {sorted(unknown)}")
        for rail1, rail0 in self.pairs:
            if rail1 not in self.outputs or rail0 not in self.outputs:
                raise ValueError(f"Pair ({rail1}, {rail0}) names an unknown output")
        return self


def parse_products(expr: str, variables: Sequence[str]) -> List[ProductTerm]:
    """'A0B0CIN1 + A0B1CIN0' -> products, literals matched greedily, longest rail name first"""
    rails = sorted((f"{v}{r}" for v in variables for r in (1, 0)), key=len, reverse=True)
    products = []
    for text in expr.replace(" ", "").split("+"):
        literals, pos = [], 0
        while pos < len(text):
            match = next((r for r in rails if text.startswith(r, pos)), None)
            if match is None:
                raise ValueError(f"Cannot read a literal at '{text[pos:]}' in {text}")
            literals.append(match)
            pos += len(match)
        products.append(ProductTerm(literals=tuple(literals)))
    return products


def _equation_set(name, variables, ports, output_ports, pairs, equations: Dict[str, str]) -> EquationSet:
    return EquationSet(
        name=name,
        variables=variables,
        outputs={out: parse_products(text, variables) for out, text in equations.items()},
        pairs=pairs,
        ports=ports,
        output_ports=output_ports,
    )


SAFA_EQUATIONS = _equation_set(
    "safa",
    ["A", "B", "CIN"],
    {"A": "a0", "B": "b0", "CIN": "cin"},
    {"SUM1": ("s0", 1), "SUM0": ("s0", 0), "COUT1": ("cout", 1), "COUT0": ("cout", 0)},
    [("SUM1", "SUM0"), ("COUT1", "COUT0")],
    {
        "SUM1": "A0B0CIN1 + A0B1CIN0 + A1B0CIN0 + A1B1CIN1",
        "SUM0": "A0B0CIN0 + A0B1CIN1 + A1B0CIN1 + A1B1CIN0",
        "COUT1": "A0B1CIN1 + A1B0CIN1 + A1B1CIN0 + A1B1CIN1",
        "COUT0": "A0B0CIN0 + A0B0CIN1 + A0B1CIN0 + A1B0CIN0",
    },
)

DAFA_EQUATIONS = _equation_set(
    "dafa",
    ["A1", "A0", "B1", "B0", "CIN"],
    {"A1": "a1", "A0": "a0", "B1": "b1", "B0": "b0", "CIN": "cin"},
    {
        "SUM11": ("s1", 1), "SUM10": ("s1", 0),
        "SUM01": ("s0", 1), "SUM00": ("s0", 0),
        "COUT21": ("cout", 1), "COUT20": ("cout", 0),
    },
    [("SUM11", "SUM10"), ("SUM01", "SUM00"), ("COUT21", "COUT20")],
    {
        "SUM11": (
            "A11A01B10B00CIN0 + A10A01B11B00CIN0 + A11A00B10B01CIN0 + A10A00B11B01CIN0"
            " + A11A00B11B01CIN1 + A11A01B11B00CIN1 + A10A00B10B01CIN1 + A10A01B10B00CIN1"
            " + A10A01B10B01 + A11A00B10B00 + A10A00B11B00 + A11A01B11B01"
        ),
        "SUM10": (
            "A11A01B10B00CIN1 + A10A01B11B00CIN1 + A11A00B10B01CIN1 + A10A00B11B01CIN1"
            " + A10A01B10B00CIN0 + A10A00B10B01CIN0 + A11A01B11B00CIN0 + A11A00B11B01CIN0"
            " + A11A00B11B00 + A11A01B10B01 + A10A01B11B01 + A10A00B10B00"
        ),
        "SUM01": "A01B00CIN0 + A00B01CIN0 + A00B00CIN1 + A01B01CIN1",
        "SUM00": "A01B01CIN0 + A01B00CIN1 + A00B01CIN1 + A00B00CIN0",
        "COUT21": (
            "A10A00B11B01CIN1 + A11A00B10B01CIN1 + A10A01B11B00CIN1 + A11A01B10B00CIN1"
            " + A10A01B11B01 + A11A01B10B01 + A11B11"
        ),
        "COUT20": (
            "A11A01B10B00CIN0 + A10A01B11B00CIN0 + A11A00B10B01CIN0 + A10A00B11B01CIN0"
            " + A11A00B10B00 + A10A00B11B00 + A10B10"
        ),
    },
)


def valid_assignments(variables: Sequence[str]) -> Iterator[Assignment]:
    for bits in itertools.product((0, 1), repeat=len(variables)):
        yield dict(zip(variables, bits))


def structurally_disjoint(p: ProductTerm, q: ProductTerm) -> bool:
    """Some variable appears with opposite rails in the two products"""
    qv = q.variables
    return any(v in qv and qv[v] != rail for v, rail in p.variables.items())


def enumeratively_disjoint(p: ProductTerm, q: ProductTerm, variables: Sequence[str]) -> bool:
    """No valid assignment satisfies both products"""
    return not any(p.evaluate(a) and q.evaluate(a) for a in valid_assignments(variables))


class DsopReport(BaseModel):
    equations: str
    ok: bool
    structural_ok: bool
    enumerative_ok: bool
    offending: Optional[Tuple[str, str, str]] = Field(None, description="(output, product, product)")
    checked_pairs: int = 0


def dsop_check(eqs: EquationSet) -> DsopReport:
    """Every two products of one output are mutually exclusive"""
    structural_ok = enumerative_ok = True
    offending = None
    checked = 0
    for output, products in eqs.outputs.items():
        for p, q in itertools.combinations(products, 2):
            checked += 1
            by_rule = structurally_disjoint(p, q)
            by_enumeration = enumeratively_disjoint(p, q, eqs.variables)
            structural_ok &= by_rule
            enumerative_ok &= by_enumeration
            if offending is None and not (by_rule and by_enumeration):
                offending = (output, str(p), str(q))
    report = DsopReport(
        equations=eqs.name,
        ok=structural_ok and enumerative_ok,
        structural_ok=structural_ok,
        enumerative_ok=enumerative_ok,
        offending=offending,
        checked_pairs=checked,
    )
    if not report.ok:
        logging.warning(f"{eqs.name}: {offending[0]} products {offending[1]} and {offending[2]} overlap")
    return report


class CoverFailure(BaseModel):
    pair: Tuple[str, str]
    assignment: Assignment
    active: int = Field(..., description="Products true under the assignment")


class CoverReport(BaseModel):
    equations: str
    ok: bool
    failures: List[CoverFailure] = Field(default_factory=list)


def monotonic_cover_check(eqs: EquationSet) -> CoverReport:
    """Exactly one product of each complementary output pair is true per valid input"""
    failures = []
    for rail1, rail0 in eqs.pairs:
        products = eqs.outputs[rail1] + eqs.outputs[rail0]
        for assignment in valid_assignments(eqs.variables):
            active = sum(p.evaluate(assignment) for p in products)
            if active != 1:
                failures.append(CoverFailure(pair=(rail1, rail0), assignment=assignment, active=active))
    return CoverReport(equations=eqs.name, ok=not failures, failures=failures)


def evaluate_output(eqs: EquationSet, output: str, assignment: Assignment) -> int:
    return int(any(p.evaluate(assignment) for p in eqs.outputs[output]))


class Mismatch(BaseModel):
    assignment: Assignment
    output: str
    expected: int
    got: int


class EquivalenceReport(BaseModel):
    netlist: str
    equations: str
    ok: bool
    checked: int
    mismatches: List[Mismatch] = Field(default_factory=list)


def _rail_level(state: DecodeState, rail: int) -> int:
    if state is DecodeState.ILLEGAL:
        return 1
    return int(state is (DecodeState.VALID_1 if rail else DecodeState.VALID_0))


def equation_equivalence(netlist: Netlist, eqs: EquationSet, delays: Optional[DelayTable] = None) -> EquivalenceReport:
    """Settled netlist outputs against the equations, every valid input"""
    inputs = {p.group for p in netlist.inputs}
    outputs = {p.group for p in netlist.outputs}
    missing = sorted(set(eqs.ports.values()) - inputs) + sorted({g for g, _ in eqs.output_ports.values()} - outputs)
    if missing:
        raise UsageError(f"{netlist.name} lacks ports {', '.join(missing)} used by the {eqs.name} equations")

    delays = delays or DelayTable.uniform()
    report = EquivalenceReport(netlist=netlist.name, equations=eqs.name, ok=True, checked=0)
    for assignment in valid_assignments(eqs.variables):
        stimuli = [Stimulus(group=eqs.ports[v], value=bit) for v, bit in assignment.items()]
        log = simulate_transaction(netlist, delays, stimuli, run_reset=False, record=False)
        report.checked += 1
        for output, (group, rail) in eqs.output_ports.items():
            expected = evaluate_output(eqs, output, assignment)
            got = _rail_level(log.outputs[group], rail)
            if got != expected:
                report.mismatches.append(Mismatch(assignment=assignment, output=output, expected=expected, got=got))
    report.ok = not report.mismatches
    return report
