"""Variational upper/lower evaluations of the Lieb-type trace.

For ``P = Phi(A^p)`` and ``Q = Psi(B^q)``,

    Tr f(P^1/2 Q P^1/2) = inf_X {Tr X Q X - Tr check(f)(X P^-1 X)}   (f concave)
    Tr f(P^1/2 Q P^1/2) = sup_X {Tr X Q X - Tr hat(f)(X P^-1 X)}     (f convex)

with ``X`` over positive definite matrices. Substituting ``X^2 = P^1/2 Y P^1/2``
reduces both to the scalar conjugate identities, whose optimizer is
``Y = f'(M)`` for ``M = P^1/2 Q P^1/2``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..common.errors import InvalidInput
from ..functions.conjugate import ConjugateDirection, ConjugateFn, SearchConfig
from ..functions.scalar import FnFlag
from ..linalg.matrices import (
    PosDefMatrix,
    Seed,
    hermitian_part,
    make_rng,
    pd_power,
    random_hermitian,
    spectral_apply,
)
from .functionals import LiebSpec, lieb_matrix, map_power

logger = logging.getLogger(__name__)

CANDIDATE_SCALE = 0.25


@dataclass(frozen=True)
class VariationalResult:
    value: float
    optimizer_value: float
    candidate_values: List[float]


def _blocks(spec: LiebSpec, a: PosDefMatrix, b: PosDefMatrix):
    return map_power(spec.phi, a, spec.p), map_power(spec.psi, b, spec.q)


def analytic_optimizer(spec: LiebSpec, a: PosDefMatrix, b: PosDefMatrix) -> np.ndarray:
    """``X* = (P^1/2 f'(M) P^1/2)^1/2``."""
    p_mat, _ = _blocks(spec, a, b)
    p_half = pd_power(p_mat, 0.5)
    slope = spectral_apply(lieb_matrix(spec, a, b), spec.f.derivative)
    return pd_power(hermitian_part(p_half @ slope @ p_half), 0.5)


def variational_objective(
    conj: ConjugateFn, x: np.ndarray, p_mat: np.ndarray, q_mat: np.ndarray
) -> float:
    """``Tr X Q X - Tr conj(X P^-1 X)``."""
    x = np.asarray(x, dtype=complex)
    quadratic = float(np.real(np.trace(x @ q_mat @ x)))
    inner = hermitian_part(x @ pd_power(p_mat, -1.0) @ x)
    values = np.linalg.eigvalsh(inner)
    if values[0] <= 0:
        raise InvalidInput("Variational candidates must be positive definite")
    return quadratic - float(np.sum(conj(values)))


def random_candidates(
    center: np.ndarray, rng_seed: Seed, count: int = 8, scale: float = CANDIDATE_SCALE
) -> List[np.ndarray]:
    """Positive definite perturbations ``C + t H`` of a positive definite center."""
    rng = make_rng(rng_seed)
    dim = center.shape[0]
    radius = scale * float(np.linalg.eigvalsh(center)[0])
    out = []
    for _ in range(count):
        direction = random_hermitian(dim, rng).entries
        direction = direction / np.linalg.norm(direction, 2)
        out.append(hermitian_part(center + rng.uniform(-1.0, 1.0) * radius * direction))
    return out


def _variational(
    spec: LiebSpec,
    a: PosDefMatrix,
    b: PosDefMatrix,
    candidates: Sequence[np.ndarray],
    direction: ConjugateDirection,
    search_cfg: Optional[SearchConfig],
) -> VariationalResult:
    required = (
        (FnFlag.NON_DECREASING, FnFlag.CONCAVE)
        if direction is ConjugateDirection.CHECK
        else (FnFlag.NON_DECREASING, FnFlag.CONVEX)
    )
    if not spec.f.has(*required):
        raise InvalidInput(
            f"{spec.f.label} must be declared {[flag.value for flag in required]}"
        )
    conj = ConjugateFn(spec.f, direction, search_cfg or SearchConfig())
    p_mat, q_mat = _blocks(spec, a, b)
    optimizer_value = variational_objective(
        conj, analytic_optimizer(spec, a, b), p_mat, q_mat
    )
    values = [variational_objective(conj, x, p_mat, q_mat) for x in candidates]
    pool = [optimizer_value, *values]
    best = min(pool) if direction is ConjugateDirection.CHECK else max(pool)
    logger.debug(
        f"variational {direction.value}: optimizer={optimizer_value:.10g} "
        f"best={best:.10g} over {len(values)} candidates"
    )
    return VariationalResult(best, optimizer_value, values)


def variational_inf_result(
    spec: LiebSpec,
    a: PosDefMatrix,
    b: PosDefMatrix,
    candidates: Sequence[np.ndarray] = (),
    search_cfg: Optional[SearchConfig] = None,
) -> VariationalResult:
    return _variational(spec, a, b, candidates, ConjugateDirection.CHECK, search_cfg)


def variational_sup_result(
    spec: LiebSpec,
    a: PosDefMatrix,
    b: PosDefMatrix,
    candidates: Sequence[np.ndarray] = (),
    search_cfg: Optional[SearchConfig] = None,
) -> VariationalResult:
    return _variational(spec, a, b, candidates, ConjugateDirection.HAT, search_cfg)


def variational_inf(
    spec: LiebSpec,
    a: PosDefMatrix,
    b: PosDefMatrix,
    candidates: Sequence[np.ndarray] = (),
) -> float:
    """Minimum of the concave-case objective over ``candidates`` and the optimizer."""
    return variational_inf_result(spec, a, b, candidates).value


def variational_sup(
    spec: LiebSpec,
    a: PosDefMatrix,
    b: PosDefMatrix,
    candidates: Sequence[np.ndarray] = (),
) -> float:
    """Maximum of the convex-case objective over ``candidates`` and the optimizer."""
    return variational_sup_result(spec, a, b, candidates).value


__all__ = [
    "VariationalResult",
    "analytic_optimizer",
    "variational_objective",
    "random_candidates",
    "variational_inf",
    "variational_sup",
    "variational_inf_result",
    "variational_sup_result",
]
