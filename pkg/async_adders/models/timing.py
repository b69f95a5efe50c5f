from collections import Counter
from typing import Dict, Iterable, List

from pydantic import BaseModel, Field, field_validator

from async_adders.enums import GateKind
from async_adders.models.delays import DelayTable


class LatencyExpr(BaseModel):
    """Closed-form latency: a gate-kind multiset plus optional buffer and register terms"""
    coefficients: Dict[GateKind, int] = Field(default_factory=dict, description="Count per gate kind")
    includes_buffer: bool = Field(False, description="Add one BUF delay")
    includes_register: bool = Field(False, description="Add one register (C2) delay")

    @field_validator("coefficients", mode="before")
    @classmethod
    def drop_zeros(cls, value):
        if not isinstance(value, dict):
            return value
        parsed = {}
        for name, count in value.items():
            kind = GateKind.parse(name) if isinstance(name, str) else name
            if count < 0:
                raise ValueError(f"Negative coefficient for {kind.value}: {count}")
            if count:
                parsed[kind] = parsed.get(kind, 0) + count
        return parsed

    @classmethod
    def of_gates(cls, kinds: Iterable[GateKind], includes_register: bool = False) -> "LatencyExpr":
        return cls(coefficients=dict(Counter(kinds)), includes_register=includes_register)

    def evaluate(self, delays: DelayTable) -> int:
        total = sum(count * delays[kind] for kind, count in self.coefficients.items())
        if self.includes_buffer:
            total += delays[GateKind.BUF]
        if self.includes_register:
            total += delays[GateKind.C2]
        return total

    def same_gates(self, other: "LatencyExpr") -> bool:
        """Coefficient-for-coefficient equality, register included, buffer ignored"""
        return self.coefficients == other.coefficients and self.includes_register == other.includes_register

    def terms(self) -> List[str]:
        terms = ["REG"] if self.includes_register else []
        for kind in GateKind:
            count = self.coefficients.get(kind, 0)
            if count:
                terms.append(kind.value if count == 1 else f"{count} {kind.value}")
        if self.includes_buffer:
            terms.append("BUF")
        return terms

    def __str__(self) -> str:
        return " + ".join(self.terms()) or "0"
