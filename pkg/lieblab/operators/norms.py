from __future__ import annotations

import logging
from typing import Any, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..common.errors import InvalidInput
from ..linalg.matrices import MatrixLike, as_array

logger = logging.getLogger(__name__)

PSD_CLIP = 1e-10

NormKind = Literal[
    "ky_fan_norm",
    "ky_fan_anti",
    "schatten",
    "trace_norm",
    "operator_norm",
    "derived_anti",
]
NORM_KINDS = ("ky_fan_norm", "schatten", "trace_norm", "operator_norm")


class NormSpec(BaseModel):
    """Symmetric norm or anti-norm on PSD matrices.

    ``schatten`` accepts ``p = "inf"``; ``derived_anti`` evaluates
    ``||A^-alpha||^(-1/alpha)`` from ``base`` and is 0 on singular ``A``.
    """

    model_config = ConfigDict(populate_by_name=True, extra="ignore", frozen=True)

    kind: NormKind
    k: Optional[int] = Field(default=None, ge=1)
    p: Optional[float] = None
    alpha: Optional[float] = Field(default=None, gt=0)
    base: Optional["NormSpec"] = None

    @field_validator("kind", mode="before")
    @classmethod
    def _normalize_kind(cls, value):
        return str(value).strip().lower() if value is not None else value

    @field_validator("p", mode="before")
    @classmethod
    def _parse_p(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
            return float("inf")
        return value

    @model_validator(mode="after")
    def _check_kind(self) -> "NormSpec":
        if self.kind in ("ky_fan_norm", "ky_fan_anti") and self.k is None:
            raise ValueError(f"{self.kind} needs 'k'")
        if self.kind == "schatten" and (self.p is None or self.p < 1):
            raise ValueError(f"schatten needs p >= 1, got {self.p}")
        if self.kind == "derived_anti":
            if self.base is None or self.alpha is None:
                raise ValueError("derived_anti needs 'base' and 'alpha'")
            if self.base.kind not in NORM_KINDS:
                raise ValueError(
                    f"derived_anti base must be a symmetric norm, got {self.base.kind}"
                )
        return self

    @property
    def is_anti(self) -> bool:
        return self.kind in ("ky_fan_anti", "derived_anti")

    @property
    def label(self) -> str:
        if self.kind in ("ky_fan_norm", "ky_fan_anti"):
            return f"{self.kind}[k={self.k}]"
        if self.kind == "schatten":
            return f"schatten[p={self.p:g}]"
        if self.kind == "derived_anti":
            return f"derived_anti[{self.base.label},alpha={self.alpha:g}]"
        return self.kind


NormSpec.model_rebuild()


def parse_norm(descriptor: Union[str, dict, NormSpec]) -> NormSpec:
    """Accept a NormSpec, a dict, or shorthand like ``ky_fan_anti:2`` / ``schatten:inf``."""
    if isinstance(descriptor, NormSpec):
        return descriptor
    if isinstance(descriptor, str):
        kind, _, arg = descriptor.partition(":")
        payload: dict[str, Any] = {"kind": kind}
        if arg:
            payload["p" if kind.strip() == "schatten" else "k"] = arg
        descriptor = payload
    return NormSpec.model_validate(descriptor)


def clipped_eigenvalues(matrix: MatrixLike) -> np.ndarray:
    values = np.linalg.eigvalsh(as_array(matrix))
    if values[0] < -PSD_CLIP:
        raise InvalidInput(
            f"Norm argument must be PSD: smallest eigenvalue {values[0]:.3e}"
        )
    return np.where(values <= PSD_CLIP, 0.0, values)


def eval_norm_eigs(spec: NormSpec, eigenvalues: Sequence[float]) -> float:
    """Evaluate ``spec`` from the (already clipped, ascending) spectrum."""
    values = np.sort(np.asarray(eigenvalues, dtype=float))
    dim = values.size
    if spec.kind in ("ky_fan_norm", "ky_fan_anti") and not 1 <= spec.k <= dim:
        raise InvalidInput(f"{spec.label} needs 1 <= k <= {dim}")
    if spec.kind == "ky_fan_norm":
        return float(np.sum(values[dim - spec.k :]))
    if spec.kind == "ky_fan_anti":
        return float(np.sum(values[: spec.k]))
    if spec.kind == "trace_norm":
        return float(np.sum(np.abs(values)))
    if spec.kind == "operator_norm":
        return float(np.max(np.abs(values)))
    if spec.kind == "schatten":
        if np.isinf(spec.p):
            return float(np.max(np.abs(values)))
        return float(np.sum(np.abs(values) ** spec.p) ** (1.0 / spec.p))
    if np.any(values <= 0):
        return 0.0
    inner = eval_norm_eigs(spec.base, values ** (-spec.alpha))
    return float(inner ** (-1.0 / spec.alpha))


def eval_norm(spec: Union[NormSpec, str, dict], matrix: MatrixLike) -> float:
    return eval_norm_eigs(parse_norm(spec), clipped_eigenvalues(matrix))


__all__ = [
    "NormSpec",
    "parse_norm",
    "eval_norm",
    "eval_norm_eigs",
    "clipped_eigenvalues",
    "PSD_CLIP",
]
