"""
Run configuration schemas using Pydantic.

Every CLI invocation is turned into a RunConfig before any computation
starts, so range errors surface as validation failures (exit code 1) rather
than as failures deep inside the sieve or the series engines.
"""

from enum import Enum
from math import isqrt
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src import config
from src.jets import Precision
from src.sieve import SieveConfig
from src.singular import SeriesOptions

MAX_N = 10**8
MAX_Q = 2**20
MAX_SIEVE_ROWS = 10**7
MAX_DIGITS = 200


# ============================================
# Enums for Categorical Values
# ============================================

class Subcommand(str, Enum):
    """CLI subcommands."""
    SIEVE = "sieve"
    DSUM = "dsum"
    PSERIES = "pseries"
    SINGULAR = "singular"
    DELTA = "delta"
    MOMENT1 = "moment1"
    MOMENT2 = "moment2"
    INGHAM = "ingham"
    VERIFY = "verify"


class VerifySuite(str, Enum):
    """Verification suites run by `verify --suite`."""
    DUAL_IDENTITY = "dual-identity"
    PRIME_POWERS = "prime-powers"
    CARMICHAEL = "carmichael"
    CONTOUR = "contour"
    VORONOI = "voronoi"
    CORRELATION = "correlation"
    INGHAM = "ingham"
    DETERMINISM = "determinism"
    H_MULTIPLICATIVITY = "h-multiplicativity"
    P_SUP = "p-sup"


# ============================================
# Run Configuration Schema
# ============================================

class RunConfig(BaseModel):
    """
    Validated parameters of one CLI run.

    Fields not used by a subcommand are ignored by it; the fields a
    subcommand needs are checked in validate_subcommand.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    subcommand: Subcommand

    # Ranges and shifts
    N: Optional[int] = Field(None, ge=1, le=MAX_N, description="Range start N")
    H: Optional[int] = Field(None, ge=1, description="Largest shift H")
    h: Optional[int] = Field(None, ge=1, description="Single shift h")
    k: int = Field(3, ge=1, le=3, description="Divisor function index")
    lo: Optional[int] = Field(None, ge=0, description="Sieve interval start (exclusive)")
    hi: Optional[int] = Field(None, ge=1, description="Sieve interval end (inclusive)")
    theta: Optional[float] = Field(None, gt=0, lt=1, description="H = floor(N^theta)")

    # Singular series
    q: Optional[int] = Field(None, ge=1, le=MAX_Q, description="Modulus for pseries")
    x: Optional[float] = Field(None, gt=1, description="Evaluation point for singular")
    q_max: Optional[int] = Field(None, ge=1, le=MAX_Q, description="Fixed series truncation")
    rel_tol: float = Field(1e-3, gt=0, lt=1, description="Auto-mode relative tail target")
    dual: bool = Field(False, description="pseries: use the dual form P*")

    # Execution
    digits: int = Field(
        default_factory=lambda: max(30, config.PRECISION_DIGITS),
        ge=30,
        le=MAX_DIGITS,
        description="Significant decimal digits",
    )
    threads: int = Field(default_factory=lambda: config.WORKERS, ge=1, le=256)
    cache_dir: Optional[str] = Field(default_factory=lambda: config.CACHE_DIR)
    output: Optional[str] = Field(None, description="CSV path; standard output if unset")
    seed: int = Field(0, ge=0, description="Seed for sampled verify suites")
    suite: Optional[VerifySuite] = None
    no_timing: bool = Field(False, description="Write wall_ms as 0")
    log_level: str = Field(default_factory=lambda: config.LOG_LEVEL)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level {v}")
        return level

    @model_validator(mode="after")
    def validate_subcommand(self) -> "RunConfig":
        """Required fields and ranges per subcommand."""
        cmd = self.subcommand

        def need(*names: str) -> None:
            missing = [name for name in names if getattr(self, name) is None]
            if missing:
                raise ValueError(f"{cmd.value} requires {', '.join(missing)}")

        if cmd == Subcommand.SIEVE:
            need("lo", "hi")
            if not self.lo < self.hi:
                raise ValueError(f"sieve requires lo < hi, got ({self.lo}, {self.hi}]")
            if self.hi - self.lo > MAX_SIEVE_ROWS:
                raise ValueError(f"sieve prints at most {MAX_SIEVE_ROWS} rows")
        elif cmd == Subcommand.DSUM:
            need("N", "h")
        elif cmd == Subcommand.PSERIES:
            need("q")
        elif cmd == Subcommand.SINGULAR:
            need("x", "h")
        elif cmd == Subcommand.DELTA:
            need("N", "h")
            if self.h > isqrt(self.N):
                raise ValueError(f"delta requires h <= sqrt(N), got h={self.h}, N={self.N}")
        elif cmd == Subcommand.MOMENT1:
            need("N")
        elif cmd == Subcommand.MOMENT2:
            need("N")
            if self.H is None and self.theta is None:
                raise ValueError("moment2 requires H or theta")
        elif cmd == Subcommand.INGHAM:
            need("N", "h")
            if self.N < 1000:
                raise ValueError(f"ingham requires N >= 1000, got {self.N}")
        elif cmd == Subcommand.VERIFY:
            need("suite")

        if cmd in (Subcommand.MOMENT1, Subcommand.MOMENT2) and self.shift_count() > self.N:
            raise ValueError(f"H={self.shift_count()} exceeds N={self.N}")
        return self

    def shift_count(self) -> int:
        """H for the moment subcommands: explicit H, else floor(N^theta), else floor(sqrt(N))."""
        if self.H is not None:
            return self.H
        if self.theta is not None:
            return max(1, int(self.N ** self.theta + 1e-9))
        return max(1, isqrt(self.N))

    def precision(self) -> Precision:
        return Precision(self.digits)

    def sieve_config(self) -> SieveConfig:
        return SieveConfig(workers=self.threads, cache_dir=self.cache_dir)

    def series_options(self) -> SeriesOptions:
        return SeriesOptions(
            q_max=self.q_max,
            rel_tol=self.rel_tol,
            workers=self.threads,
            precision=self.precision(),
        )


# ============================================
# Utility Functions
# ============================================

def validate_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    Validate CLI arguments and return the run configuration.

    Args:
        data: Parsed arguments; None values fall back to field defaults

    Returns:
        Validated RunConfig instance

    Raises:
        ValidationError: If data is invalid
    """
    return RunConfig(**{key: value for key, value in data.items() if value is not None})
