from typing import Optional

from pydantic import BaseModel, Field, model_validator

from async_adders.enums import Circuit, ReportFormat, VerifyMode

DEFAULT_SEED = 1729
DEFAULT_COUNT = 1000
DEFAULT_WIDTH = 32
DEFAULT_SAFA = 2


class RunConfig(BaseModel):
    """Options of one CLI run, from a YAML file and/or command-line flags"""
    command: str = Field(..., description="Subcommand to run")
    circuit: Optional[Circuit] = Field(default=None, description="Circuit family to generate")
    netlist: Optional[str] = Field(default=None, description="Netlist file to load instead of generating")
    width: int = Field(default=DEFAULT_WIDTH, ge=1, description="Adder width in bits")
    safa: int = Field(default=DEFAULT_SAFA, ge=0, description="Number of SAFAs in the low positions")
    redundant: bool = Field(default=True, description="AO21 (redundant) DAFA carry logic")
    pairs: int = Field(default=2, description="Rail pairs of a completion detector")
    stage: bool = Field(default=False, description="Wrap the function block with register and detector")
    delays: Optional[str] = Field(default=None, description="Delay table file; unit delays when absent")
    vectors: Optional[str] = Field(default=None, description="Vector file: hex A, hex B, carry-in per line")
    seed: int = Field(default=DEFAULT_SEED, description="Seed for every random choice in the run")
    count: Optional[int] = Field(default=None, ge=0, description="Random vectors or trials to draw")
    period: int = Field(default=0, ge=0, description="Minimum spacing of transaction starts")
    max_skew: int = Field(default=0, ge=0, description="Maximum seeded arrival jitter per input pair")
    mode: Optional[VerifyMode] = Field(default=None, description="exhaustive or random; exhaustive up to 8 bits by default")
    with_register: bool = Field(default=True, description="Include the input register in timing analysis")
    workers: Optional[int] = Field(default=None, ge=1, description="Parallel verification workers")
    output: Optional[str] = Field(default=None, description="Output file, stdout when absent")
    format: ReportFormat = Field(default=ReportFormat.CSV, description="Report format")
    source: str = Field(default="practical", description="formula, practical (alias table2) or both")
    vcd: Optional[str] = Field(default=None, description="Waveform dump path")

    @model_validator(mode="after")
    def check_combinations(self):
        if self.vectors and self.count is not None:
            raise ValueError("--vectors and --count are mutually exclusive")
        if self.netlist and self.circuit is not None:
            raise ValueError("--netlist and --circuit are mutually exclusive")
        if self.source == "table2":
            self.source = "practical"
        if self.source not in ("formula", "practical", "both"):
            raise ValueError(f"Unknown report source {self.source}")
        return self

    @property
    def draws(self) -> int:
        return DEFAULT_COUNT if self.count is None else self.count
