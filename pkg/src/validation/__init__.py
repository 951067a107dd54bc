"""Run configuration validation using Pydantic schemas."""

from .schemas import (
    RunConfig,
    Subcommand,
    VerifySuite,
    validate_run_config,
)

__all__ = [
    "RunConfig",
    "Subcommand",
    "VerifySuite",
    "validate_run_config",
]
