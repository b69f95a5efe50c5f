"""Early output dual-rail adders: SAFA, DAFA and the hybrid ripple carry adder.

Port naming is shared by every adder built here: operand bits a<i>, b<i>,
carry-in cin, sum bits s<i>, carry-out cout. Inter-cell carries are c<i>.
"""

import logging
import re
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from async_adders.enums import DecodeState, GateKind
from async_adders.exceptions import UsageError
from async_adders.generator.builder import NetlistBuilder, Rails, rails_of
from async_adders.models.netlist import Netlist

# 4-literal products of the dual-bit adder, grouped by the 2-bit sum A + B they detect.
# Literal XYZ reads: operand X, bit Y, rail Z (A10 = rail 0 of augend bit 1).
PROPAGATE = ("A10A00B11B01", "A11A00B10B01", "A10A01B11B00", "A11A01B10B00")  # A+B = 3
ODD_LOW = ("A11A00B11B01", "A11A01B11B00", "A10A00B10B01", "A10A01B10B00")  # A+B in {1, 5}
HIGH_SET = ("A10A01B10B01", "A11A00B10B00", "A10A00B11B00", "A11A01B11B01")  # A+B in {2, 6}
HIGH_CLEAR = ("A11A00B11B00", "A11A01B10B01", "A10A01B11B01", "A10A00B10B00")  # A+B in {0, 4}
GENERATE = ("A10A01B11B01", "A11A01B10B01")  # A+B = 4 through a low-bit carry; A11B11 covers the rest
KILL = ("A11A00B10B00", "A10A00B11B00")  # A+B = 2 with no low-bit carry; A10B10 covers the rest


class AdderSpec(BaseModel):
    """s SAFAs in the low positions, d DAFAs above them, s + 2d = width"""
    width: int = Field(..., ge=1, description="Operand width in bits")
    safa_stages: int = Field(..., ge=0, description="Number of SAFAs (one bit each)")
    dafa_stages: int = Field(..., ge=0, description="Number of DAFAs (two bits each)")
    redundant_carry: bool = Field(True, description="AO21 carry (redundant) or C2 + OR2 carry")

    @model_validator(mode="after")
    def stages_cover_width(self):
        if self.safa_stages + 2 * self.dafa_stages != self.width:
            raise ValueError(
                f"{self.safa_stages} SAFAs + 2 x {self.dafa_stages} DAFAs do not cover {self.width} bits"
            )
        return self

    @classmethod
    def for_width(cls, width: int, safa: int, redundant: bool = True) -> "AdderSpec":
        remaining = width - safa
        if width < 1 or safa < 0 or remaining < 0 or remaining % 2:
            raise UsageError(
                f"Cannot build a {width}-bit adder with {safa} SAFAs: "
                f"the remaining {remaining} bits must be a non-negative even count"
            )
        try:
            return cls(width=width, safa_stages=safa, dafa_stages=remaining // 2, redundant_carry=redundant)
        except ValidationError as e:
            raise UsageError(str(e)) from e

    @property
    def label(self) -> str:
        variant = "r" if self.redundant_carry else "n"
        return f"rca{self.width}_s{self.safa_stages}_{variant}"


def _safa_cell(b: NetlistBuilder, tag: str, a: Rails, bb: Rails, cin: Rails, s: Rails, cout: Rails):
    a1, a0 = a
    b1, b0 = bb
    cin1, cin0 = cin
    cg1 = b.gate(GateKind.AO22, [a1, b1, a0, b0], f"{tag}.cg1")  # A equals B
    cg2 = b.gate(GateKind.AO22, [a1, b0, a0, b1], f"{tag}.cg2")  # A differs from B
    ce1 = b.gate(GateKind.C2, [cg2, cin0], f"{tag}.ce1")
    ce2 = b.gate(GateKind.C2, [cg1, cin1], f"{tag}.ce2")
    ce3 = b.gate(GateKind.C2, [cg2, cin1], f"{tag}.ce3")
    ce4 = b.gate(GateKind.C2, [cg1, cin0], f"{tag}.ce4")
    b.gate(GateKind.OR2, [ce1, ce2], s[0])
    b.gate(GateKind.OR2, [ce3, ce4], s[1])
    b.gate(GateKind.AO22, [a1, b1, cg2, cin1], cout[0])  # CG3
    b.gate(GateKind.AO22, [a0, b0, cg2, cin0], cout[1])  # CG4


def _and_terms(b: NetlistBuilder, tag: str, name: str, products, literal: Dict[str, str]) -> List[str]:
    terms = []
    for i, product in enumerate(products):
        lits = [literal[product[j:j + 3]] for j in range(0, len(product), 3)]
        terms.append(b.gate(GateKind.AND4, lits, f"{tag}.{name}_and{i}"))
    return terms


def _sum_of_products(b: NetlistBuilder, tag: str, name: str, products, literal: Dict[str, str]) -> str:
    terms = _and_terms(b, tag, name, products, literal)
    kind = {2: GateKind.OR2, 3: GateKind.OR3, 4: GateKind.OR4}[len(terms)]
    return b.gate(kind, terms, f"{tag}.{name}")


def _dafa_cell(
    b: NetlistBuilder,
    tag: str,
    a_lo: Rails,
    a_hi: Rails,
    b_lo: Rails,
    b_hi: Rails,
    cin: Rails,
    s_lo: Rails,
    s_hi: Rails,
    cout: Rails,
    redundant: bool,
):
    literal = {
        "A11": a_hi[0], "A10": a_hi[1], "A01": a_lo[0], "A00": a_lo[1],
        "B11": b_hi[0], "B10": b_hi[1], "B01": b_lo[0], "B00": b_lo[1],
    }
    cin1, cin0 = cin

    # shared by both sum rails and both carry rails
    p = _sum_of_products(b, tag, "p", PROPAGATE, literal)
    y = _sum_of_products(b, tag, "y", ODD_LOW, literal)
    pc0 = b.gate(GateKind.C2, [p, cin0], f"{tag}.pc0")
    pc1 = b.gate(GateKind.C2, [p, cin1], f"{tag}.pc1")
    yc1 = b.gate(GateKind.C2, [y, cin1], f"{tag}.yc1")
    yc0 = b.gate(GateKind.C2, [y, cin0], f"{tag}.yc0")
    z1 = _sum_of_products(b, tag, "z1", HIGH_SET, literal)
    z0 = _sum_of_products(b, tag, "z0", HIGH_CLEAR, literal)
    b.gate(GateKind.OR3, [pc0, yc1, z1], s_hi[0])
    b.gate(GateKind.OR3, [pc1, yc0, z0], s_hi[1])

    # low sum bit, same shape as the SAFA sum
    a01, a00 = a_lo
    b01, b00 = b_lo
    diff = b.gate(GateKind.AO22, [a01, b00, a00, b01], f"{tag}.diff")
    same = b.gate(GateKind.AO22, [a01, b01, a00, b00], f"{tag}.same")
    lo1 = b.gate(GateKind.C2, [diff, cin0], f"{tag}.lo1")
    lo2 = b.gate(GateKind.C2, [same, cin1], f"{tag}.lo2")
    lo3 = b.gate(GateKind.C2, [diff, cin1], f"{tag}.lo3")
    lo4 = b.gate(GateKind.C2, [same, cin0], f"{tag}.lo4")
    b.gate(GateKind.OR2, [lo1, lo2], s_lo[0])
    b.gate(GateKind.OR2, [lo3, lo4], s_lo[1])

    g1_terms = _and_terms(b, tag, "g1", GENERATE, literal)
    g1_terms.append(b.gate(GateKind.AND2, [literal["A11"], literal["B11"]], f"{tag}.g1_and2"))
    g1 = b.gate(GateKind.OR3, g1_terms, f"{tag}.g1")
    g0_terms = _and_terms(b, tag, "g0", KILL, literal)
    g0_terms.append(b.gate(GateKind.AND2, [literal["A10"], literal["B10"]], f"{tag}.g0_and2"))
    g0 = b.gate(GateKind.OR3, g0_terms, f"{tag}.g0")

    if redundant:
        b.gate(GateKind.AO21, [p, cin1, g1], cout[0])
        b.gate(GateKind.AO21, [p, cin0, g0], cout[1])
    else:
        b.gate(GateKind.OR2, [pc1, g1], cout[0])
        b.gate(GateKind.OR2, [pc0, g0], cout[1])


def gen_hybrid_rca(spec: AdderSpec, name: Optional[str] = None) -> Netlist:
    """SAFAs at bits 0..s-1, DAFAs above, carry chained from a live dual-rail cin"""
    n = spec.width
    b = NetlistBuilder(name or spec.label)
    a_bits = [b.input_pair(f"a{i}") for i in range(n)]
    b_bits = [b.input_pair(f"b{i}") for i in range(n)]
    carry = b.input_pair("cin")
    s_bits = [b.output_pair(f"s{i}") for i in range(n)]

    bit = 0
    while bit < n:
        use_safa = bit < spec.safa_stages
        step = 1 if use_safa else 2
        last = bit + step >= n
        cout = rails_of("cout") if last else rails_of(f"c{bit + step}")
        tag = f"fa{bit:02d}"
        if use_safa:
            _safa_cell(b, tag, a_bits[bit], b_bits[bit], carry, s_bits[bit], cout)
        else:
            _dafa_cell(
                b, tag,
                a_bits[bit], a_bits[bit + 1], b_bits[bit], b_bits[bit + 1],
                carry, s_bits[bit], s_bits[bit + 1], cout,
                spec.redundant_carry,
            )
        carry = cout
        bit += step

    b.output_pair("cout")
    netlist = b.build()
    logging.debug(
        f"Generated {netlist.name}: {spec.safa_stages} SAFAs, {spec.dafa_stages} DAFAs, {len(netlist.gates)} gates"
    )
    return netlist


def gen_safa() -> Netlist:
    return gen_hybrid_rca(AdderSpec.for_width(1, 1), name="safa")


def gen_dafa(redundant: bool = True) -> Netlist:
    variant = "redundant" if redundant else "nonredundant"
    return gen_hybrid_rca(AdderSpec.for_width(2, 0, redundant), name=f"dafa_{variant}")


_OPERAND = re.compile(r"^a(\d+)$")


def adder_width(netlist: Netlist) -> int:
    """Operand width of a netlist that follows the adder port naming"""
    bits = [int(m.group(1)) for p in netlist.inputs if (m := _OPERAND.match(p.group))]
    if not bits:
        raise UsageError(f"{netlist.name} has no a<i> operand ports")
    return max(bits) + 1


def operand_bits(width: int, a: int, b: int, cin: int) -> Dict[str, int]:
    """Group -> bit assignment for one addition"""
    limit = 1 << width
    if not (0 <= a < limit and 0 <= b < limit) or cin not in (0, 1):
        raise UsageError(f"Operands out of range for {width} bits: a={a}, b={b}, cin={cin}")
    bits = {}
    for i in range(width):
        bits[f"a{i}"] = (a >> i) & 1
        bits[f"b{i}"] = (b >> i) & 1
    bits["cin"] = cin
    return bits


def decode_sum(states: Dict[str, DecodeState], width: int) -> Optional[Tuple[int, int]]:
    """(sum, cout) from decoded output groups, None unless every pair is valid"""
    total = 0
    for i in range(width):
        bit = states[f"s{i}"].bit
        if bit is None:
            return None
        total |= bit << i
    cout = states["cout"].bit
    if cout is None:
        return None
    return total, cout
