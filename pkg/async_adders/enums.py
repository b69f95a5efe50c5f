from enum import Enum


class ExtendedEnum(Enum):
    @classmethod
    def values(cls):
        return list(map(lambda c: c.value, cls))

    @classmethod
    def str_values(cls) -> list[str]:
        return [c.value for c in cls]

    @classmethod
    def get(cls, key):
        return member.value if (member := cls.__members__.get(key)) else None


class GateKind(str, ExtendedEnum):
    BUF = "BUF"
    AND2 = "AND2"
    AND4 = "AND4"
    OR2 = "OR2"
    OR3 = "OR3"
    OR4 = "OR4"
    AO21 = "AO21"
    AO22 = "AO22"
    AO222 = "AO222"
    C2 = "C2"

    @property
    def arity(self) -> int:
        return GATE_ARITY[self]

    @property
    def is_sequential(self) -> bool:
        return self is GateKind.C2

    @classmethod
    def parse(cls, name: str) -> "GateKind":
        """CE2 and REG are accepted as spellings of the 2-input C-element"""
        key = name.strip().upper()
        if key in ("CE2", "REG"):
            return cls.C2
        if key not in cls.__members__:
            raise ValueError(f"Unknown gate kind: {name}")
        return cls[key]


GATE_ARITY = {
    GateKind.BUF: 1,
    GateKind.AND2: 2,
    GateKind.AND4: 4,
    GateKind.OR2: 2,
    GateKind.OR3: 3,
    GateKind.OR4: 4,
    GateKind.AO21: 3,
    GateKind.AO22: 4,
    GateKind.AO222: 6,
    GateKind.C2: 2,
}


class DecodeState(str, ExtendedEnum):
    VALID_1 = "valid-1"
    VALID_0 = "valid-0"
    SPACER = "spacer"
    ILLEGAL = "illegal"

    @property
    def is_valid(self) -> bool:
        return self in (DecodeState.VALID_1, DecodeState.VALID_0)

    @property
    def bit(self) -> int | None:
        return {DecodeState.VALID_1: 1, DecodeState.VALID_0: 0}.get(self)


class Phase(str, ExtendedEnum):
    SET = "set"
    RESET = "reset"


class IndicationClass(str, ExtendedEnum):
    STRONG = "strong"
    WEAK = "weak"
    EARLY = "early"


class ViolationKind(str, ExtendedEnum):
    ARITY = "arity"
    MULTIPLE_DRIVERS = "multiple_drivers"
    CYCLE = "cycle"
    DANGLING = "dangling"
    UNDRIVEN = "undriven"
    PORT = "port"
    DUPLICATE_ID = "duplicate_id"


class ReportSource(str, ExtendedEnum):
    FORMULA = "formula"
    PRACTICAL = "practical"


class ReportFormat(str, ExtendedEnum):
    CSV = "csv"
    YAML = "yaml"


class Circuit(str, ExtendedEnum):
    SAFA = "safa"
    DAFA = "dafa"
    RCA = "rca"
    DETECTOR = "detector"


class VerifyMode(str, ExtendedEnum):
    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"


class Encoding(str, ExtendedEnum):
    HOMOGENEOUS = "homogeneous"
    HETEROGENEOUS = "heterogeneous"
