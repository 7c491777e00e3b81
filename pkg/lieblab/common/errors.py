from __future__ import annotations

from typing import Any, Dict, Optional


class LiebLabError(RuntimeError):
    """Base error for every failure raised by the library."""


class InvalidInput(LiebLabError):
    pass


class DomainError(LiebLabError):
    pass


class BracketError(LiebLabError):
    def __init__(self, message: str, diagnostic: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostic = dict(diagnostic or {})


class ConfigError(LiebLabError):
    pass


class EvaluationAborted(LiebLabError):
    """A functional failed on a sampled tuple; ``witness`` holds the inputs."""

    def __init__(self, message: str, witness: Dict[str, Any]):
        super().__init__(message)
        self.witness = witness


__all__ = [
    "LiebLabError",
    "InvalidInput",
    "DomainError",
    "BracketError",
    "ConfigError",
    "EvaluationAborted",
]
