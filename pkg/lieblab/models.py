from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class MatrixFile(BaseModel):
    """JSON matrix fixture: ``{"dim": n, "re": [[...]], "im": [[...]]}``."""

    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    dim: int = Field(gt=0)
    cols: Optional[int] = Field(default=None, gt=0)
    re: List[List[float]]
    im: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "MatrixFile":
        if self.cols is None:
            self.cols = self.dim
        if self.im is None:
            self.im = [[0.0] * self.cols for _ in range(self.dim)]
        for name, rows in (("re", self.re), ("im", self.im)):
            if len(rows) != self.dim or any(len(row) != self.cols for row in rows):
                raise ValueError(f"'{name}' must be a {self.dim}x{self.cols} array")
        return self


class FunctionDescriptor(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    kind: Literal["power", "log", "affine", "pick", "a4", "conjugate"]
    params: Dict[str, Any] = Field(default_factory=dict)
    power: float = 1.0

    @field_validator("kind", mode="before")
    @classmethod
    def _normalize_kind(cls, value):
        return str(value).strip().lower() if value is not None else value


class MeanDescriptor(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    kind: Literal["arithmetic", "geometric", "harmonic", "power", "pick"]
    alpha: Optional[float] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    adjoint: bool = False

    @field_validator("kind", mode="before")
    @classmethod
    def _normalize_kind(cls, value):
        return str(value).strip().lower() if value is not None else value


class MapDescriptor(BaseModel):
    """Positive map in Kraus form, or one of the named constructions."""

    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    kind: Literal["kraus", "identity", "congruence", "compression", "pinching"] = "kraus"
    dim: Optional[int] = Field(default=None, gt=0)
    kraus: List[MatrixFile] = Field(default_factory=list)
    matrix: Optional[MatrixFile] = None
    blocks: Optional[List[int]] = None
    strict: bool = True
    unital: bool = False

    @model_validator(mode="after")
    def _check_payload(self) -> "MapDescriptor":
        if self.kind == "kraus" and not self.kraus:
            raise ValueError("kind 'kraus' needs a non-empty 'kraus' list")
        if self.kind in ("congruence", "compression") and self.matrix is None:
            raise ValueError(f"kind '{self.kind}' needs a 'matrix'")
        if self.kind in ("identity", "pinching") and self.dim is None:
            raise ValueError(f"kind '{self.kind}' needs 'dim'")
        return self


class LiebSpecDescriptor(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    f: FunctionDescriptor
    phi: MapDescriptor
    psi: MapDescriptor
    p: float
    q: float
    gamma_rule: Literal["sum", "extremal"] = "sum"


class RunConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    command: Literal["verify", "conjugate", "eval", "counterexample", "sweep"]
    seed: int = Field(default=42, ge=0)
    trials: int = Field(default=1000, ge=1)
    dims: List[int] = Field(default_factory=lambda: [2, 3])
    rel_tol: float = Field(default=1e-8, gt=0)
    cond_cap: float = Field(default=100.0, ge=1)
    jobs: int = Field(default=1, ge=1)
    out_path: Optional[Path] = None
    format: Literal["json", "csv"] = "json"

    @field_validator("dims", mode="before")
    @classmethod
    def _parse_dims(cls, value):
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        dims = [int(part) for part in value]
        if not dims or any(dim < 1 for dim in dims):
            raise ValueError("dims must be a non-empty list of positive integers")
        return dims

    @field_validator("out_path")
    @classmethod
    def _check_writable(cls, value: Optional[Path]) -> Optional[Path]:
        if value is None:
            return value
        parent = value.expanduser().resolve().parent
        if not parent.is_dir():
            raise ValueError(f"output directory does not exist: {parent}")
        return value

    def header(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "dims": list(self.dims),
            "rel_tol": self.rel_tol,
            "cond_cap": self.cond_cap,
        }


__all__ = [
    "MatrixFile",
    "FunctionDescriptor",
    "MeanDescriptor",
    "MapDescriptor",
    "LiebSpecDescriptor",
    "RunConfig",
]
