"""Reference data for seventeen 32-bit asynchronous adders.

Each legend carries its descriptor, the measured latency from a 32/28nm
standard-cell implementation, and its closed-form latency as a gate-kind
multiset. Every formula adds one buffer and one register (C2) delay.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from async_adders.enums import Encoding, GateKind, IndicationClass
from async_adders.exceptions import UsageError
from async_adders.generator.adders import AdderSpec
from async_adders.models.timing import LatencyExpr

BASELINE = "Adder11"


class AdderLegend(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Adder1 .. Adder17")
    architecture: str = Field(..., description="Adder type")
    encoding: Encoding
    redundant: Optional[bool] = Field(None, description="Redundant carry logic; None when not stated")
    timing_model: IndicationClass
    practical_ns: float = Field(..., description="Measured forward latency in ns")
    composition: Optional[str] = None

    @property
    def description(self) -> str:
        parts = [self.architecture, self.encoding.value]
        if self.redundant is not None:
            parts.append("redundant logic" if self.redundant else "no redundancy")
        if self.composition:
            parts.append(self.composition)
        parts.append("early output" if self.timing_model is IndicationClass.EARLY else "weak-indication")
        return "; ".join(parts)


def _legend(name, architecture, encoding, redundant, timing, ns, composition=None) -> AdderLegend:
    return AdderLegend(
        name=name,
        architecture=architecture,
        encoding=encoding,
        redundant=redundant,
        timing_model=timing,
        practical_ns=ns,
        composition=composition,
    )


HOM, HET = Encoding.HOMOGENEOUS, Encoding.HETEROGENEOUS
EARLY, WEAK = IndicationClass.EARLY, IndicationClass.WEAK

LEGENDS: List[AdderLegend] = [
    _legend("Adder1", "RCA of SAFAs", HOM, True, EARLY, 3.10),
    _legend("Adder2", "RCA", HET, False, WEAK, 7.06),
    _legend("Adder3", "RCA", HOM, False, WEAK, 4.12),
    _legend("Adder4", "RCA", HOM, True, WEAK, 2.84),
    _legend("Adder5", "RCA of DAFAs", HOM, False, EARLY, 4.01),
    _legend("Adder6", "RCA of DAFAs", HOM, True, EARLY, 2.21),
    _legend("Adder7", "RCA", HET, False, WEAK, 4.36),
    _legend("Adder8", "RCA", HET, True, WEAK, 3.03),
    _legend("Adder9", "RCA of DAFAs", HET, False, EARLY, 4.22),
    _legend("Adder10", "RCA of DAFAs", HET, True, EARLY, 2.38),
    _legend("Adder11", "Hybrid RCA", HOM, True, EARLY, 2.14, "15 DAFAs and 2 SAFAs"),
    _legend("Adder12", "Hybrid RCA", HOM, True, EARLY, 2.21, "14 DAFAs and 4 SAFAs"),
    _legend("Adder13", "Section-carry based CLA", HOM, None, WEAK, 3.31),
    _legend("Adder14", "Section-carry based CLA-RCA", HOM, None, WEAK, 3.08),
    _legend("Adder15", "Recursive CLA", HOM, None, EARLY, 2.77),
    _legend("Adder16", "Recursive CLA-RCA", HOM, None, EARLY, 2.54),
    _legend("Adder17", "CSLA, 8-8-8-8 partition", HOM, None, EARLY, 2.46),
]

K = GateKind
_FORMULAS: Dict[str, Dict[GateKind, int]] = {
    "Adder1": {K.AO22: 32, K.C2: 1, K.OR2: 1},
    "Adder2": {K.C2: 32, K.OR2: 33},
    "Adder3": {K.C2: 16, K.AND4: 1, K.OR4: 1, K.OR3: 1, K.OR2: 15},
    "Adder4": {K.C2: 1, K.AND4: 1, K.AND2: 15, K.OR4: 1, K.OR3: 1, K.OR2: 15},
    "Adder5": {K.C2: 16, K.AND4: 1, K.OR4: 1, K.OR3: 1, K.OR2: 15},
    "Adder6": {K.AO21: 15, K.C2: 1, K.AND4: 1, K.OR4: 1, K.OR3: 1},
    "Adder7": {K.C2: 17, K.OR2: 18},
    "Adder8": {K.C2: 2, K.AND2: 15, K.OR2: 18},
    "Adder9": {K.AO22: 1, K.C2: 16, K.OR2: 17},
    # AND2 next to OR4 has no generated counterpart; not checked structurally
    "Adder10": {K.AO21: 15, K.C2: 1, K.AND2: 1, K.OR4: 1, K.OR2: 1},
    "Adder11": {K.AO22: 3, K.AO21: 14, K.C2: 1, K.OR3: 1},
    "Adder12": {K.AO22: 5, K.AO21: 13, K.C2: 1, K.OR3: 1},
    "Adder13": {K.C2: 12, K.AO22: 3, K.AND4: 1, K.OR4: 2, K.OR2: 8},
    "Adder14": {K.C2: 11, K.AO22: 3, K.AND4: 1, K.OR4: 2, K.OR2: 7},
    "Adder15": {K.C2: 12, K.AO22: 1, K.OR2: 9},
    "Adder16": {K.C2: 11, K.AO22: 1, K.OR2: 8},
    "Adder17": {K.C2: 6, K.AO22: 9, K.OR2: 3},
}

# Adders with a generated netlist: legend -> configuration
CONFIGURATIONS: Dict[str, AdderSpec] = {
    "Adder1": AdderSpec.for_width(32, 32),
    "Adder5": AdderSpec.for_width(32, 0, redundant=False),
    "Adder6": AdderSpec.for_width(32, 0, redundant=True),
    "Adder11": AdderSpec.for_width(32, 2, redundant=True),
    "Adder12": AdderSpec.for_width(32, 4, redundant=True),
}

# Published reductions of the baseline's latency against other legends, in percent
PUBLISHED_REDUCTIONS: Dict[str, float] = {
    "Adder1": 31.0,
    "Adder13": 35.3,
    "Adder14": 30.5,
    "Adder15": 20.2,
    "Adder16": 18.7,
    "Adder17": 13.0,
}


def legend(name: str) -> AdderLegend:
    for entry in LEGENDS:
        if entry.name.lower() == name.lower():
            return entry
    raise UsageError(f"Unknown adder legend {name}; expected Adder1 .. Adder{len(LEGENDS)}")


def latency_expr_table() -> Dict[str, LatencyExpr]:
    """Legend name -> closed-form latency, buffer and register included"""
    return {
        name: LatencyExpr(coefficients=dict(coefficients), includes_buffer=True, includes_register=True)
        for name, coefficients in _FORMULAS.items()
    }
