"""Searches outside the proven regions.

``falsify_boundary`` looks for a concavity violation of
``Tr (Phi(A^p)^1/2 B^q Phi(A^p)^1/2)^s`` beyond the closed box
``0 <= p, q <= 1, 0 <= s <= 1/(p+q)`` (or its mirror), with ``Phi`` a random
congruence. ``missing_region_sweep`` runs convexity trials in the region the
known ranges leave open and draws no conclusion from them.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..common.errors import InvalidInput
from ..functions.scalar import make_power
from ..lieb.functionals import LiebSpec, lieb_trace
from ..lieb.maps import identity_map, random_congruence_map
from ..linalg.matrices import DEFAULT_COND_CAP
from .trials import (
    DEFAULT_REL_TOL,
    ConcavityReport,
    Direction,
    MidpointTrial,
    default_sampler,
    run_midpoint,
)

logger = logging.getLogger(__name__)

FALSIFY_STREAM = 2
SWEEP_STREAM = 3
DEFAULT_FALSIFY_TRIALS = 10000
DEFAULT_FALSIFICATION = (1.0, 1.0, 0.6)
NO_CLAIM_BANNER = (
    "NO CLAIM: exploratory sweep of an open region; "
    "passing or failing points prove nothing"
)
SWEEP_PS = (-0.75, -0.5, -0.25)
SWEEP_QS = (1.25, 1.5, 1.75)
SWEEP_STEPS = 3


def in_concavity_box(p: float, q: float, s: float) -> bool:
    """Closed region where ``x^s`` gives a jointly concave trace functional."""
    if 0 <= p <= 1 and 0 <= q <= 1 and p + q > 0:
        return 0 <= s <= 1.0 / (p + q)
    if -1 <= p <= 0 and -1 <= q <= 0 and p + q < 0:
        return 1.0 / (p + q) <= s <= 0
    return False


def _power_trial(
    p: float,
    q: float,
    s: float,
    direction: Direction,
    *,
    congruence: bool,
    dim: int,
    trials: int,
    seed_key: Tuple[int, ...],
    rel_tol: float,
    cond_cap: float,
) -> MidpointTrial:
    map_rng = np.random.default_rng(np.random.SeedSequence([*seed_key, dim, 0]))
    phi = random_congruence_map(dim, map_rng, cond_cap) if congruence else identity_map(dim)
    spec = LiebSpec(make_power(s), phi, identity_map(dim), p, q)

    def value(args):
        return lieb_trace(spec, *args)

    return MidpointTrial(
        functional=value,
        direction=direction,
        sampler=default_sampler((dim, dim), cond_cap),
        trials=trials,
        rel_tol=rel_tol,
        seed_key=(*seed_key, dim, 1),
        labels=(f"x^{s:g}",),
        params={"p": p, "q": q, "s": s, "dim": dim, "phi": phi.label, "psi": "id"},
    )


def falsify_boundary(
    p: float,
    q: float,
    s: float,
    trials: int = DEFAULT_FALSIFY_TRIALS,
    seed: int = 42,
    dim: int = 2,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    cond_cap: float = DEFAULT_COND_CAP,
    jobs: int = 1,
) -> ConcavityReport:
    """Search for a concavity violation at ``s`` outside the box.

    A report with no violation means the search missed; it is returned, not
    raised.
    """
    if in_concavity_box(p, q, s):
        raise InvalidInput(
            f"s={s:g} lies inside the concavity box for p={p:g}, q={q:g}; "
            "there is nothing to falsify"
        )
    trial = _power_trial(
        p,
        q,
        s,
        Direction.CONCAVE,
        congruence=True,
        dim=dim,
        trials=trials,
        seed_key=(seed, FALSIFY_STREAM),
        rel_tol=rel_tol,
        cond_cap=cond_cap,
    )
    report = run_midpoint(trial, jobs)
    if report.violations:
        logger.info(
            f"falsified p={p:g}, q={q:g}, s={s:g}: {report.violations}/{report.trials_run} "
            f"violations, worst gap {report.worst_gap:.3e}"
        )
    else:
        logger.warning(
            f"no concavity violation found for p={p:g}, q={q:g}, s={s:g} "
            f"in {report.trials_run} trials"
        )
    return report


def missing_region_points(
    ps: Sequence[float] = SWEEP_PS,
    qs: Sequence[float] = SWEEP_QS,
    steps: int = SWEEP_STEPS,
) -> List[Tuple[float, float, float]]:
    """Grid of ``(p, q, s)`` in the open region, skipping ``s = 1``.

    ``-1 < p < 0``, ``1 < q < 2`` and ``1/(p+q) <= s < min(1/(p+1), 1/(q-1))``.
    """
    points = []
    for p in ps:
        for q in qs:
            if not (-1 < p < 0 and 1 < q < 2):
                raise InvalidInput(f"(p, q) = ({p:g}, {q:g}) is outside the open region")
            low = 1.0 / (p + q)
            high = min(1.0 / (p + 1.0), 1.0 / (q - 1.0))
            if low >= high:
                continue
            for s in np.linspace(low, high, steps + 1)[:-1]:
                if abs(s - 1.0) > 1e-9:
                    points.append((p, q, float(s)))
    return points


def missing_region_sweep(
    trials: int = 200,
    seed: int = 42,
    dims: Sequence[int] = (2,),
    *,
    points: Optional[Sequence[Tuple[float, float, float]]] = None,
    rel_tol: float = DEFAULT_REL_TOL,
    cond_cap: float = DEFAULT_COND_CAP,
    jobs: int = 1,
) -> List[ConcavityReport]:
    """Convexity trials with ``Phi = Psi = id`` over the open region."""
    logger.warning(NO_CLAIM_BANNER)
    reports = []
    for index, (p, q, s) in enumerate(missing_region_points() if points is None else points):
        for dim in dims:
            trial = _power_trial(
                p,
                q,
                s,
                Direction.CONVEX,
                congruence=False,
                dim=dim,
                trials=trials,
                seed_key=(seed, SWEEP_STREAM, index),
                rel_tol=rel_tol,
                cond_cap=cond_cap,
            )
            reports.append(run_midpoint(trial, jobs))
    return reports


__all__ = [
    "falsify_boundary",
    "in_concavity_box",
    "missing_region_points",
    "missing_region_sweep",
    "NO_CLAIM_BANNER",
    "DEFAULT_FALSIFICATION",
    "DEFAULT_FALSIFY_TRIALS",
]
