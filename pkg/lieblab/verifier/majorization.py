"""Weak majorization and the passage from Ky Fan (anti-)norm midpoint
inequalities to trace inequalities.

For ``F`` with values in positive definite matrices, the Ky Fan anti-norm
midpoint inequalities at a sampled pair say that the negated ascending
spectrum of ``F`` at the midpoint is weakly majorized by the negated average
of the endpoint spectra; that in turn forces ``Tr f(F)`` midpoint concavity
for every non-decreasing concave ``f``. Dually, Ky Fan norm inequalities for
``F^-1`` force midpoint convexity of ``Tr f(F^-1)`` for non-decreasing
convex ``f``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..common.errors import InvalidInput
from ..functions.scalar import ScalarFn, make_log, make_pick_integral, make_power
from ..lieb.functionals import LiebSpec, mean_matrix
from ..linalg.matrices import DEFAULT_COND_CAP, MatrixLike, as_array, pd_eigvals
from ..operators.means import OperatorMean
from .trials import DEFAULT_REL_TOL, PdTuple, Sampler, default_sampler, midpoint

logger = logging.getLogger(__name__)

PASSAGE_STREAM = 4
MAX_FAILURE_RECORDS = 10

PairMap = Callable[..., MatrixLike]


def weak_majorization(u: Sequence[float], v: Sequence[float], atol: float = 0.0) -> bool:
    """True when every descending partial sum of ``u`` is at most that of ``v``."""
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape:
        raise InvalidInput(
            f"weak majorization needs equal lengths, got {u.size} and {v.size}"
        )
    lhs = np.cumsum(np.sort(u)[::-1])
    rhs = np.cumsum(np.sort(v)[::-1])
    return bool(np.all(lhs <= rhs + atol))


def concave_battery() -> List[ScalarFn]:
    return [make_log(), make_power(0.5), make_pick_integral(0.5, 0.0, [(1.0, 0.25)])]


def convex_battery() -> List[ScalarFn]:
    return [make_power(1.0), make_power(1.5), make_power(2.0)]


@dataclass(frozen=True)
class PassageReport:
    samples: int
    anti_norm_hits: int
    norm_hits: int
    concave_failures: int
    convex_failures: int
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.concave_failures == 0 and self.convex_failures == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "samples": self.samples,
            "anti_norm_hits": self.anti_norm_hits,
            "norm_hits": self.norm_hits,
            "concave_failures": self.concave_failures,
            "convex_failures": self.convex_failures,
            "holds": self.holds,
            "failures": self.failures,
        }


def mean_power_map(spec: LiebSpec, sigma: OperatorMean) -> PairMap:
    """``(A, B) -> (Phi(A^p) sigma Psi(B^q))^(1/gamma)`` with the extremal gamma."""
    gamma = spec.gamma

    def pair_map(a, b):
        decomp = mean_matrix(spec, sigma, a, b).eig
        return decomp.reconstruct(decomp.eigenvalues ** (1.0 / gamma))

    return pair_map


def _trace_gap(
    f: ScalarFn, first: np.ndarray, second: np.ndarray, middle: np.ndarray
) -> float:
    """Normalized amount by which ``Tr f`` at the midpoint falls below the average."""
    t1, t2 = float(np.sum(f(first))), float(np.sum(f(second)))
    tm = float(np.sum(f(middle)))
    return ((t1 + t2) / 2.0 - tm) / (1.0 + abs(t1) + abs(t2))


def passage_check(
    pair_map: PairMap,
    samples: int = 200,
    seed: int = 42,
    *,
    dims: Sequence[int] = (2, 2),
    cond_cap: float = DEFAULT_COND_CAP,
    rel_tol: float = DEFAULT_REL_TOL,
    sampler: Optional[Sampler] = None,
    concave_fns: Optional[Sequence[ScalarFn]] = None,
    convex_fns: Optional[Sequence[ScalarFn]] = None,
) -> PassageReport:
    """Test the two implications on ``samples`` sampled pairs.

    A failure is a pair where the majorization antecedent holds but a battery
    function breaks the trace inequality beyond ``rel_tol``.
    """
    if samples < 1:
        raise InvalidInput(f"samples must be >= 1, got {samples}")
    sampler = sampler or default_sampler(dims, cond_cap)
    concave_fns = list(concave_fns or concave_battery())
    convex_fns = list(convex_fns or convex_battery())
    rng = np.random.default_rng(np.random.SeedSequence([seed, PASSAGE_STREAM]))

    def spectrum(args: PdTuple) -> np.ndarray:
        return pd_eigvals(as_array(pair_map(*args)))

    anti_hits = norm_hits = concave_failures = convex_failures = 0
    failures: List[Dict[str, Any]] = []
    for index in range(samples):
        first, second = sampler(rng)
        e1, e2 = spectrum(first), spectrum(second)
        em = spectrum(midpoint(first, second))
        if weak_majorization(-em, -(e1 + e2) / 2.0):
            anti_hits += 1
            for f in concave_fns:
                gap = _trace_gap(f, e1, e2, em)
                if gap > rel_tol:
                    concave_failures += 1
                    if len(failures) < MAX_FAILURE_RECORDS:
                        failures.append({"index": index, "f": f.label, "gap": gap})

        i1, i2, im = 1.0 / e1, 1.0 / e2, 1.0 / em
        if weak_majorization(im, (i1 + i2) / 2.0):
            norm_hits += 1
            for f in convex_fns:
                gap = -_trace_gap(f, i1, i2, im)
                if gap > rel_tol:
                    convex_failures += 1
                    if len(failures) < MAX_FAILURE_RECORDS:
                        failures.append(
                            {"index": index, "f": f.label, "gap": gap, "inverse": True}
                        )

    report = PassageReport(
        samples=samples,
        anti_norm_hits=anti_hits,
        norm_hits=norm_hits,
        concave_failures=concave_failures,
        convex_failures=convex_failures,
        failures=failures,
    )
    if not report.holds:
        logger.warning(
            f"passage check: {concave_failures} concave and {convex_failures} convex "
            f"implication failures over {samples} samples"
        )
    else:
        logger.debug(
            f"passage check: anti-norm antecedent on {anti_hits}/{samples}, "
            f"norm antecedent on {norm_hits}/{samples}"
        )
    return report


__all__ = [
    "weak_majorization",
    "passage_check",
    "PassageReport",
    "mean_power_map",
    "concave_battery",
    "convex_battery",
]
