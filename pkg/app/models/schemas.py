"""
Pydantic Schemas for CLI Runs

RunConfig is validated before any computation; the payload models fix the
JSON shape each subcommand emits.
"""

from pydantic import BaseModel, Field, model_validator
from typing import Optional, List, Dict, Any
from enum import Enum


# ============== Enums ==============

class CommandName(str, Enum):
    """CLI subcommands."""
    EXPAND = "expand"
    VERIFY = "verify"
    SCAN = "scan"
    ASYMPTOTICS = "asymptotics"
    MEX = "mex"
    CONJECTURES = "conjectures"
    ACCEPTANCE = "acceptance"


class OutputFormat(str, Enum):
    """Report stream format."""
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


# ============== Run Configuration ==============

class RunConfig(BaseModel):
    """One CLI invocation, validated."""
    command: CommandName
    trunc: Optional[int] = Field(None, ge=0, description="Series truncation order")
    modulus: Optional[int] = Field(None, ge=2, description="Reduce or compare mod m")
    spec: Optional[str] = Field(None, description="Theta or eta-product spec string")
    target: Optional[str] = Field(None, description="Identity or conjecture id, or 'all'")
    t: Optional[int] = Field(None, ge=1, description="c_t series index")
    from_file: Optional[str] = Field(None, description="Series text file to scan")
    a_max: Optional[int] = Field(None, ge=1, description="Largest progression modulus A")
    min_hits: Optional[int] = Field(None, ge=1)
    n: Optional[int] = Field(None, ge=0, description="Sequence length / table size")
    k: Optional[int] = Field(None, ge=1, description="mex index")
    output: OutputFormat = OutputFormat.TEXT
    output_file: Optional[str] = None
    excel_output: Optional[str] = None
    quick: bool = False

    @model_validator(mode="after")
    def _required_inputs(self) -> "RunConfig":
        if self.command == CommandName.EXPAND and not self.spec:
            raise ValueError("expand needs a spec string")
        if self.command == CommandName.SCAN:
            if (self.t is None) == (self.from_file is None):
                raise ValueError("scan needs exactly one of --t or --from-file")
            if self.t is not None and self.modulus is None:
                raise ValueError("scan --t needs --mod")
        if self.command in (CommandName.VERIFY, CommandName.CONJECTURES) and not self.target:
            raise ValueError(f"{self.command.value} needs an id or 'all'")
        return self


# ============== Payloads ==============

class ExpandPayload(BaseModel):
    """Output of `expand`."""
    spec: str
    trunc: int
    modulus: Optional[int] = None
    coefficients: List[int]


class ProgressionPayload(BaseModel):
    A: int
    B: int
    mod: int
    verified_upto: int


class ScanPayload(BaseModel):
    """Output of `scan`."""
    source: str
    trunc: int
    modulus: int
    a_max: int
    min_hits: int
    progressions: List[ProgressionPayload]


class ScoreboardPayload(BaseModel):
    """Output of `acceptance`."""
    passed: int
    failed: int
    warnings: int
    criteria: List[Dict[str, Any]]
    discrepancies: List[Dict[str, Any]]
