from typing import Dict

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from async_adders.enums import GateKind
from async_adders.exceptions import ParseError
from async_adders.utils import FileHandler

# waveform timescale units and their long spellings
TIME_UNITS = {
    "s": "s", "second": "s",
    "ms": "ms", "millisecond": "ms",
    "us": "us", "microsecond": "us",
    "ns": "ns", "nanosecond": "ns",
    "ps": "ps", "picosecond": "ps",
    "fs": "fs", "femtosecond": "fs",
}


class DelayTable(BaseModel):
    """Typical propagation delay per gate kind, in integer time units"""
    model_config = ConfigDict(frozen=True)

    delays: Dict[GateKind, int] = Field(..., description="Delay of every gate kind; the register uses C2")
    time_unit: str = Field("ps", description="One time unit, as a waveform timescale: s, ms, us, ns, ps or fs")

    @field_validator("time_unit", mode="before")
    @classmethod
    def short_time_unit(cls, value):
        name = str(value).strip().lower()
        unit = TIME_UNITS.get(name) or TIME_UNITS.get(name.removesuffix("s"))
        if unit is None:
            raise ValueError(f"Unknown time unit {value!r}, expected s, ms, us, ns, ps or fs")
        return unit

    @field_validator("delays", mode="before")
    @classmethod
    def parse_kinds(cls, value):
        if not isinstance(value, dict):
            return value
        parsed: Dict[GateKind, int] = {}
        for name, delay in value.items():
            kind = GateKind.parse(name) if isinstance(name, str) else name
            if kind in parsed and parsed[kind] != delay:
                raise ValueError(f"Conflicting delays for {kind.value}: {parsed[kind]} and {delay}")
            parsed[kind] = delay
        return parsed

    @model_validator(mode="after")
    def complete_and_positive(self):
        missing = [k.value for k in GateKind if k not in self.delays]
        if missing:
            raise ValueError(f"Delay table has no entry for {', '.join(missing)}")
        for kind, delay in self.delays.items():
            floor = 0 if kind is GateKind.BUF else 1
            if delay < floor:
                raise ValueError(f"{kind.value} delay must be >= {floor}, got {delay}")
        return self

    def __getitem__(self, kind: GateKind) -> int:
        return self.delays[kind]

    @classmethod
    def uniform(cls, delay: int = 1, buf: int = 0, time_unit: str = "ps") -> "DelayTable":
        """Every gate `delay` units, BUF `buf` units"""
        delays = {kind: delay for kind in GateKind}
        delays[GateKind.BUF] = buf
        return cls(delays=delays, time_unit=time_unit)

    def with_overrides(self, **overrides: int) -> "DelayTable":
        delays = dict(self.delays)
        for name, delay in overrides.items():
            delays[GateKind.parse(name)] = delay
        return DelayTable(delays=delays, time_unit=self.time_unit)

    @classmethod
    def from_mapping(cls, data: dict) -> "DelayTable":
        """File layout: gate-kind names mapped to integers, plus an optional time_unit"""
        if not isinstance(data, dict):
            raise ParseError("Delay table must be a mapping of gate kinds to delays")
        data = dict(data)
        time_unit = str(data.pop("time_unit", "ps"))
        try:
            return cls(delays=data, time_unit=time_unit)
        except ValidationError as e:
            raise ParseError(f"Invalid delay table: {e}") from e

    @classmethod
    def load(cls, path: str) -> "DelayTable":
        return cls.from_mapping(FileHandler().read_structured(path))

    def to_mapping(self) -> dict:
        data = {kind.value: self.delays[kind] for kind in GateKind}
        data["time_unit"] = self.time_unit
        return data
