from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Any, Mapping, Union

import numpy as np

from ..common.errors import InvalidInput
from ..functions.scalar import (
    FnFlag,
    ScalarFn,
    make_affine,
    make_pick_integral,
    make_power,
    screen_flags,
)
from ..linalg.matrices import PosDefMatrix, pd_power

logger = logging.getLogger(__name__)

NORMALIZATION_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorMean:
    """Kubo-Ando mean ``A # B = A^1/2 m(A^-1/2 B A^-1/2) A^1/2``.

    With ``adjoint=True`` the mean is evaluated as ``(A^-1 # B^-1)^-1``.
    """

    rep_fn: ScalarFn
    label: str
    adjoint: bool = False

    def __post_init__(self) -> None:
        at_one = self.rep_fn.eval(1.0)
        if abs(at_one - 1.0) > NORMALIZATION_ATOL:
            raise InvalidInput(
                f"Representing function of {self.label} must satisfy m(1)=1, got {at_one!r}"
            )
        missing = screen_flags(
            self.rep_fn, (FnFlag.NON_DECREASING, FnFlag.CONCAVE)
        )
        if missing:
            raise InvalidInput(
                f"{self.label} fails operator-monotone screening: "
                f"{[flag.value for flag in missing]}"
            )


def _raw_mean(rep_fn: ScalarFn, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a_half = pd_power(a, 0.5)
    a_neg_half = pd_power(a, -0.5)
    inner = a_neg_half @ b @ a_neg_half
    values, vectors = np.linalg.eigh(0.5 * (inner + inner.conj().T))
    mapped = (vectors * rep_fn(values)) @ vectors.conj().T
    return a_half @ mapped @ a_half


def mean_apply(sigma: OperatorMean, a: PosDefMatrix, b: PosDefMatrix) -> PosDefMatrix:
    if a.dim != b.dim:
        raise InvalidInput(f"Mean arguments differ in size: {a.dim} vs {b.dim}")
    if not sigma.adjoint:
        return PosDefMatrix.from_array(_raw_mean(sigma.rep_fn, a.entries, b.entries))
    a_inv = pd_power(a.entries, -1.0)
    b_inv = pd_power(b.entries, -1.0)
    return PosDefMatrix.from_array(
        pd_power(_raw_mean(sigma.rep_fn, a_inv, b_inv), -1.0)
    )


def adjoint_mean(sigma: OperatorMean) -> OperatorMean:
    label = sigma.label[:-1] if sigma.adjoint else f"{sigma.label}*"
    return replace(sigma, label=label, adjoint=not sigma.adjoint)


def arithmetic_mean() -> OperatorMean:
    return OperatorMean(make_affine(0.5, 0.5), "arithmetic")


def geometric_mean() -> OperatorMean:
    return OperatorMean(make_power(0.5), "geometric")


def harmonic_mean() -> OperatorMean:
    # 2x/(1+x) = 1 + (x-1)/(x+1): a single Pick atom at lambda=1 with weight 1/2
    return OperatorMean(make_pick_integral(1.0, 0.0, [(1.0, 0.5)]), "harmonic")


def power_mean(alpha: float) -> OperatorMean:
    """Weighted geometric mean ``A #_alpha B`` with ``m(x) = x**alpha``."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInput(f"power mean needs 0 <= alpha <= 1, got {alpha}")
    return OperatorMean(make_power(alpha), f"power[{alpha:g}]")


def pick_mean(h1: float, b: float, atoms) -> OperatorMean:
    rep = make_pick_integral(h1, b, atoms)
    return OperatorMean(rep, f"pick[{rep.label}]")


BUILTIN_MEANS = {
    "arithmetic": arithmetic_mean,
    "geometric": geometric_mean,
    "harmonic": harmonic_mean,
}


def build_mean(descriptor: Union[Mapping[str, Any], Any]) -> OperatorMean:
    from ..models import MeanDescriptor

    if isinstance(descriptor, str):
        descriptor = {"kind": descriptor}
    parsed = (
        descriptor
        if isinstance(descriptor, MeanDescriptor)
        else MeanDescriptor.model_validate(dict(descriptor))
    )
    if parsed.kind in BUILTIN_MEANS:
        mean = BUILTIN_MEANS[parsed.kind]()
    elif parsed.kind == "power":
        if parsed.alpha is None:
            raise InvalidInput("power mean descriptor needs 'alpha'")
        mean = power_mean(parsed.alpha)
    else:
        params = parsed.params
        mean = pick_mean(
            params.get("h1", 1.0), params.get("b", 0.0), params.get("atoms", [])
        )
    return adjoint_mean(mean) if parsed.adjoint else mean


__all__ = [
    "OperatorMean",
    "mean_apply",
    "adjoint_mean",
    "arithmetic_mean",
    "geometric_mean",
    "harmonic_mean",
    "power_mean",
    "pick_mean",
    "build_mean",
    "BUILTIN_MEANS",
]
