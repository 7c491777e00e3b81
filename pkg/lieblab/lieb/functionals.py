from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np

from ..common.errors import DomainError, InvalidInput
from ..functions.scalar import ScalarFn
from ..linalg.matrices import (
    HermMatrix,
    PosDefMatrix,
    hermitian_part,
    mat_power,
    pd_power,
)
from ..operators.means import OperatorMean, mean_apply
from ..operators.norms import PSD_CLIP, NormSpec, eval_norm_eigs, parse_norm
from .maps import UNITAL_ATOL, PosLinMap

logger = logging.getLogger(__name__)

EPSTEIN_STEP = 1e-3
EPSTEIN_TOL = 1e-6


class GammaRule(str, Enum):
    SUM = "sum"
    EXTREMAL = "extremal"


@dataclass(frozen=True, eq=False)
class LiebSpec:
    """``f``, the maps ``Phi: M_n -> M_l`` and ``Psi: M_m -> M_l``, and the powers ``p, q``."""

    f: ScalarFn
    phi: PosLinMap
    psi: PosLinMap
    p: float
    q: float
    gamma_rule: GammaRule = GammaRule.SUM

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "gamma_rule", GammaRule(self.gamma_rule))
        if self.p == 0 and self.q == 0:
            raise InvalidInput("(p,q)≠(0,0) is required; got p=q=0")
        if self.phi.out_dim != self.psi.out_dim:
            raise InvalidInput(
                f"Phi and Psi must share an output size, got {self.phi.out_dim} "
                f"and {self.psi.out_dim}"
            )

    @property
    def gamma(self) -> float:
        if self.gamma_rule is GammaRule.SUM:
            return self.p + self.q
        if self.p >= 0 and self.q >= 0:
            return max(self.p, self.q)
        if self.p <= 0 and self.q <= 0:
            return min(self.p, self.q)
        raise InvalidInput(
            f"extremal gamma needs p, q of one sign, got p={self.p}, q={self.q}"
        )

    def with_function(self, f: ScalarFn) -> "LiebSpec":
        return LiebSpec(f, self.phi, self.psi, self.p, self.q, self.gamma_rule)


@dataclass(frozen=True, eq=False)
class LineSegment:
    """``x -> (A0 + x H, B0 + x K)``, positive definite for ``0 <= x <= x_max``."""

    a0: PosDefMatrix
    h: HermMatrix
    b0: PosDefMatrix
    k: HermMatrix
    x_max: float

    def __post_init__(self) -> None:
        if not self.x_max > 0:
            raise InvalidInput(f"x_max must be > 0, got {self.x_max}")
        if self.h.dim != self.a0.dim or self.k.dim != self.b0.dim:
            raise InvalidInput("Segment directions must match their base points")
        # A0 + xH is affine in x, so positivity at both ends covers the interval.
        self.point(self.x_max)

    def point(self, x: float) -> Tuple[PosDefMatrix, PosDefMatrix]:
        try:
            a = PosDefMatrix.from_array(self.a0.entries + x * self.h.entries)
            b = PosDefMatrix.from_array(self.b0.entries + x * self.k.entries)
        except InvalidInput as exc:
            raise InvalidInput(f"Segment leaves the positive cone at x={x:g}") from exc
        return a, b


def map_power(phi: PosLinMap, a: PosDefMatrix, p: float) -> np.ndarray:
    """``Phi(A**p)`` as a raw Hermitian array."""
    return phi(mat_power(a, p).entries)


def lieb_matrix(spec: LiebSpec, a: PosDefMatrix, b: PosDefMatrix) -> np.ndarray:
    """``Phi(A^p)^1/2 Psi(B^q) Phi(A^p)^1/2``."""
    outer = pd_power(map_power(spec.phi, a, spec.p), 0.5)
    return hermitian_part(outer @ map_power(spec.psi, b, spec.q) @ outer)


def _inverted_lieb_matrix(spec: LiebSpec, a: PosDefMatrix, b: PosDefMatrix) -> np.ndarray:
    outer = pd_power(map_power(spec.phi, a, -spec.p), 0.5)
    return hermitian_part(outer @ map_power(spec.psi, b, -spec.q) @ outer)


def lieb_trace(spec: LiebSpec, a: PosDefMatrix, b: PosDefMatrix) -> float:
    values = np.linalg.eigvalsh(lieb_matrix(spec, a, b))
    return float(np.sum(spec.f(values)))


def lieb_trace_inverted(spec: LiebSpec, a: PosDefMatrix, b: PosDefMatrix) -> float:
    """``Tr f((Phi(A^-p)^1/2 Psi(B^-q) Phi(A^-p)^1/2)^-1)``."""
    values = np.linalg.eigvalsh(_inverted_lieb_matrix(spec, a, b))
    if values[0] <= 0:
        raise DomainError(f"Inverted inner matrix is singular (lambda_min={values[0]:.3e})")
    return float(np.sum(spec.f(1.0 / values)))


def mean_matrix(
    spec: LiebSpec, sigma: OperatorMean, a: PosDefMatrix, b: PosDefMatrix
) -> PosDefMatrix:
    """``Phi(A^p) sigma Psi(B^q)``."""
    left = PosDefMatrix.from_array(map_power(spec.phi, a, spec.p))
    right = PosDefMatrix.from_array(map_power(spec.psi, b, spec.q))
    return mean_apply(sigma, left, right)


def _norm_values(f: ScalarFn, spectrum: np.ndarray, norms: Sequence[NormSpec]) -> np.ndarray:
    mapped = np.asarray(f(spectrum), dtype=float)
    out = np.empty(len(norms))
    for index, norm in enumerate(norms):
        if norm.is_anti:
            if np.any(mapped < -PSD_CLIP):
                raise DomainError(
                    f"{f.label} takes negative values under anti-norm {norm.label}"
                )
            out[index] = eval_norm_eigs(norm, np.where(mapped <= PSD_CLIP, 0.0, mapped))
        else:
            out[index] = eval_norm_eigs(norm, np.abs(mapped))
    return out


def mean_norm_values(
    spec: LiebSpec,
    sigma: OperatorMean,
    norms: Sequence[Union[NormSpec, str, dict]],
    a: PosDefMatrix,
    b: PosDefMatrix,
) -> np.ndarray:
    """Evaluate several (anti-)norms of ``f(Phi(A^p) sigma Psi(B^q))`` from one spectrum."""
    parsed = [parse_norm(norm) for norm in norms]
    return _norm_values(spec.f, mean_matrix(spec, sigma, a, b).eigenvalues, parsed)


def mean_norm_fn(
    spec: LiebSpec,
    sigma: OperatorMean,
    norm: Union[NormSpec, str, dict],
    a: PosDefMatrix,
    b: PosDefMatrix,
) -> float:
    return float(mean_norm_values(spec, sigma, [norm], a, b)[0])


def mean_trace(
    spec: LiebSpec, sigma: OperatorMean, a: PosDefMatrix, b: PosDefMatrix
) -> float:
    """``Tr f(Phi(A^p) sigma Psi(B^q))``."""
    return float(np.sum(spec.f(mean_matrix(spec, sigma, a, b).eigenvalues)))


def power_map_eigs(phi: PosLinMap, a: PosDefMatrix, inner: float, outer: float) -> np.ndarray:
    """Eigenvalues of ``Phi(A**inner)**outer``."""
    values = np.linalg.eigvalsh(map_power(phi, a, inner))
    if values[0] <= 0:
        raise DomainError(f"Phi(A^{inner:g}) is singular (lambda_min={values[0]:.3e})")
    return values**outer


def epstein_trace(
    f: ScalarFn, phi: PosLinMap, p: float, a: PosDefMatrix, inverted: bool = False
) -> float:
    """``Tr f(Phi(A^p)^(1/p))``, or ``Tr f(Phi(A^-p)^(-1/p))`` when ``inverted``."""
    if p == 0:
        raise InvalidInput("Epstein-type trace needs p != 0")
    sign = -1.0 if inverted else 1.0
    return float(np.sum(f(power_map_eigs(phi, a, sign * p, sign / p))))


def epstein_norm(
    h: ScalarFn,
    phi: PosLinMap,
    p: float,
    a: PosDefMatrix,
    norm: Union[NormSpec, str, dict],
    inverted: bool = False,
) -> float:
    """One-variable (anti-)norm forms.

    Anti-norms use ``Phi(A^p)^(1/p)`` / ``Phi(A^-p)^(-1/p)``; norms use
    ``Phi(A^p)^(-1/p)`` / ``Phi(A^-p)^(1/p)``.
    """
    if p == 0:
        raise InvalidInput("Epstein-type norm needs p != 0")
    spec = parse_norm(norm)
    inner = -p if inverted else p
    outer = (1.0 if spec.is_anti else -1.0) * (-1.0 if inverted else 1.0) / p
    return float(_norm_values(h, power_map_eigs(phi, a, inner, outer), [spec])[0])


def _require_unital(phi: PosLinMap, name: str) -> None:
    if phi.in_dim != phi.out_dim:
        raise InvalidInput(f"{name} must be unital; it maps {phi.in_dim} -> {phi.out_dim}")
    defect = float(np.max(np.abs(phi.image_of_identity() - np.eye(phi.out_dim))))
    if defect > UNITAL_ATOL:
        raise InvalidInput(f"{name} must be unital: |{name}(I) - I| = {defect:.3e}")


def log_limit_trace(
    f: ScalarFn,
    phi: PosLinMap,
    psi: PosLinMap,
    alpha: float,
    a: PosDefMatrix,
    b: PosDefMatrix,
) -> float:
    """``Tr f(exp(alpha Phi(log A) + (1 - alpha) Psi(log B)))`` for unital maps."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInput(f"alpha must lie in [0, 1], got {alpha}")
    _require_unital(phi, "Phi")
    _require_unital(psi, "Psi")
    log_a = a.eig.reconstruct(np.log(a.eigenvalues))
    log_b = b.eig.reconstruct(np.log(b.eigenvalues))
    exponent = alpha * phi(log_a) + (1.0 - alpha) * psi(log_b)
    return float(np.sum(f(np.exp(np.linalg.eigvalsh(hermitian_part(exponent))))))


def log_limit_approx(
    f: ScalarFn,
    phi: PosLinMap,
    psi: PosLinMap,
    alpha: float,
    a: PosDefMatrix,
    b: PosDefMatrix,
    r: float,
) -> float:
    """``Tr f((Phi(A^ar)^1/2 Psi(B^(1-a)r) Phi(A^ar)^1/2)^(1/r))``.

    Tends to the log limit as r -> 0.
    """
    if not r > 0:
        raise InvalidInput(f"r must be > 0, got {r}")
    outer = pd_power(map_power(phi, a, alpha * r), 0.5)
    inner = outer @ map_power(psi, b, (1.0 - alpha) * r) @ outer
    values = np.linalg.eigvalsh(hermitian_part(inner))
    return float(np.sum(f(values ** (1.0 / r))))


def epstein_value(spec: LiebSpec, seg: LineSegment, x: float) -> float:
    """``Tr (I + M(x)^(-1/(p+q)))^-1`` along the segment."""
    a, b = seg.point(x)
    values = np.linalg.eigvalsh(lieb_matrix(spec, a, b))
    if values[0] <= 0:
        raise InvalidInput(f"Inner matrix is singular at x={x:g}")
    return float(np.sum(1.0 / (1.0 + values ** (-1.0 / (spec.p + spec.q)))))


def epstein_probe(
    spec: LiebSpec, seg: LineSegment, x: float, step: float = EPSTEIN_STEP
) -> float:
    """Richardson-extrapolated second difference of ``epstein_value`` at ``x``."""
    if not step > 0:
        raise InvalidInput(f"step must be > 0, got {step}")
    if spec.p + spec.q == 0:
        raise InvalidInput("epstein_probe needs p + q != 0")
    samples = {k: epstein_value(spec, seg, x + k * step) for k in (-2, -1, 0, 1, 2)}

    def second(h_mult: int) -> float:
        h = h_mult * step
        return (samples[h_mult] - 2.0 * samples[0] + samples[-h_mult]) / (h * h)

    return (4.0 * second(1) - second(2)) / 3.0


def epstein_tolerance(spec: LiebSpec, seg: LineSegment, x: float) -> float:
    return EPSTEIN_TOL * (1.0 + abs(epstein_value(spec, seg, x)))


__all__ = [
    "GammaRule",
    "LiebSpec",
    "LineSegment",
    "map_power",
    "lieb_matrix",
    "lieb_trace",
    "lieb_trace_inverted",
    "mean_matrix",
    "mean_norm_fn",
    "mean_norm_values",
    "mean_trace",
    "power_map_eigs",
    "epstein_trace",
    "epstein_norm",
    "log_limit_trace",
    "log_limit_approx",
    "epstein_value",
    "epstein_probe",
    "epstein_tolerance",
    "EPSTEIN_STEP",
]
