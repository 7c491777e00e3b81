from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..common.errors import EvaluationAborted, InvalidInput, LiebLabError
from ..linalg.matrices import (
    DEFAULT_COND_CAP,
    PosDefMatrix,
    matrix_from_record,
    matrix_to_record,
    random_posdef,
)

logger = logging.getLogger(__name__)

LANE_SIZE = 100
DEFAULT_REL_TOL = 1e-8
DEFAULT_TRIALS = 1000
RAY_SCALE_RANGE = (0.2, 5.0)
RAY_NOISE = 0.1

PdTuple = Tuple[PosDefMatrix, ...]
Sampler = Callable[[np.random.Generator], Tuple[PdTuple, PdTuple]]
Functional = Callable[[PdTuple], Any]


class Direction(str, Enum):
    CONCAVE = "concave"
    CONVEX = "convex"


@dataclass(frozen=True, eq=False)
class MidpointTrial:
    """A functional, the direction it is expected to bend, and how to sample its inputs.

    The functional may return a float, a 1-d array of components (one report
    each under ``run_midpoint_components``) or, with ``operator_valued``, a
    Hermitian matrix compared in the Loewner order.
    """

    functional: Functional
    direction: Direction
    sampler: Sampler
    trials: int = DEFAULT_TRIALS
    rel_tol: float = DEFAULT_REL_TOL
    seed_key: Tuple[int, ...] = (42,)
    labels: Tuple[str, ...] = ("value",)
    params: Dict[str, Any] = field(default_factory=dict)
    operator_valued: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.trials < 1:
            raise InvalidInput(f"trials must be >= 1, got {self.trials}")
        if not self.rel_tol > 0:
            raise InvalidInput(f"rel_tol must be > 0, got {self.rel_tol}")
        if any(int(part) < 0 for part in self.seed_key):
            raise InvalidInput(f"seed_key entries must be >= 0, got {self.seed_key}")

    def lane_rng(self, lane: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([*self.seed_key, lane]))

    def lanes(self) -> List[Tuple[int, int]]:
        """``(lane, count)`` pairs; lane streams do not depend on the worker count."""
        full, rest = divmod(self.trials, LANE_SIZE)
        out = [(lane, LANE_SIZE) for lane in range(full)]
        if rest:
            out.append((full, rest))
        return out


@dataclass(frozen=True)
class ConcavityReport:
    trials_run: int
    violations: int
    worst_gap: float
    worst_witness: Optional[Dict[str, Any]]
    runtime_ms: int
    params: Dict[str, Any] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self) -> None:
        if self.violations > self.trials_run:
            raise InvalidInput("violations cannot exceed trials_run")
        if (self.worst_witness is not None) != (self.violations > 0):
            raise InvalidInput("worst_witness must be present exactly when violations > 0")

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params,
            "label": self.label,
            "trials": self.trials_run,
            "violations": self.violations,
            "worst_gap": self.worst_gap,
            "witness": self.worst_witness,
            "runtime_ms": self.runtime_ms,
        }


@dataclass
class _Tally:
    trials: int
    violations: np.ndarray
    worst_gap: np.ndarray
    witnesses: List[Optional[Dict[str, Any]]]


def midpoint(first: PdTuple, second: PdTuple) -> PdTuple:
    return tuple(
        PosDefMatrix.from_array(0.5 * (a.entries + b.entries)) for a, b in zip(first, second)
    )


def _records(args: PdTuple) -> List[Dict[str, Any]]:
    return [matrix_to_record(matrix) for matrix in args]


def _as_values(raw: Any, operator_valued: bool) -> np.ndarray:
    if operator_valued:
        return np.asarray(raw, dtype=complex)
    return np.atleast_1d(np.asarray(raw, dtype=float))


def _evaluate(
    trial: MidpointTrial, args: PdTuple, context: Dict[str, Any], pair: Tuple[PdTuple, PdTuple]
) -> np.ndarray:
    try:
        values = _as_values(trial.functional(args), trial.operator_valued)
    except (LiebLabError, np.linalg.LinAlgError) as exc:
        witness = dict(
            context, first=_records(pair[0]), second=_records(pair[1]), error=str(exc)
        )
        raise EvaluationAborted(
            f"Functional failed at lane {context['lane']} trial {context['index']}: {exc}",
            witness,
        ) from exc
    if not trial.operator_valued and not np.all(np.isfinite(values)):
        raise EvaluationAborted(
            f"Functional returned non-finite values at lane {context['lane']} "
            f"trial {context['index']}",
            dict(
                context,
                first=_records(pair[0]),
                second=_records(pair[1]),
                values=values.tolist(),
            ),
        )
    return values


def midpoint_gaps(
    direction: Direction,
    g1: np.ndarray,
    g2: np.ndarray,
    g_mid: np.ndarray,
    operator_valued: bool = False,
) -> np.ndarray:
    """Signed normalized gaps; positive means the expected inequality is broken."""
    if operator_valued:
        average = 0.5 * (g1 + g2)
        diff = g_mid - average if direction is Direction.CONCAVE else average - g_mid
        diff = 0.5 * (diff + diff.conj().T)
        scale = 1.0 + np.linalg.norm(g1, 2) + np.linalg.norm(g2, 2)
        return np.array([-float(np.linalg.eigvalsh(diff)[0]) / scale])
    average = 0.5 * (g1 + g2)
    diff = average - g_mid if direction is Direction.CONCAVE else g_mid - average
    return diff / (1.0 + np.abs(g1) + np.abs(g2))


def _run_lane(trial: MidpointTrial, lane: int, count: int) -> _Tally:
    rng = trial.lane_rng(lane)
    tally: Optional[_Tally] = None
    for index in range(count):
        first, second = trial.sampler(rng)
        mid = midpoint(first, second)
        context = {"lane": lane, "index": index}
        pair = (first, second)
        g1 = _evaluate(trial, first, context, pair)
        g2 = _evaluate(trial, second, context, pair)
        g_mid = _evaluate(trial, mid, context, pair)
        gaps = midpoint_gaps(trial.direction, g1, g2, g_mid, trial.operator_valued)
        if tally is None:
            tally = _Tally(
                trials=0,
                violations=np.zeros(gaps.size, dtype=int),
                worst_gap=np.full(gaps.size, -np.inf),
                witnesses=[None] * gaps.size,
            )
        tally.trials += 1
        broken = gaps > trial.rel_tol
        tally.violations += broken
        for component in np.flatnonzero(gaps > tally.worst_gap):
            tally.worst_gap[component] = gaps[component]
            if broken[component]:
                tally.witnesses[component] = _witness(
                    trial, context, pair, component, gaps, (g1, g2, g_mid)
                )
    return tally


def _witness(trial, context, pair, component, gaps, values) -> Dict[str, Any]:
    g1, g2, g_mid = values
    witness = dict(
        context,
        first=_records(pair[0]),
        second=_records(pair[1]),
        component=int(component),
        gap=float(gaps[component]),
    )
    if trial.operator_valued:
        witness["label"] = trial.labels[0]
        return witness
    witness["label"] = trial.labels[component] if component < len(trial.labels) else str(component)
    witness["values"] = {
        "first": float(g1[component]),
        "second": float(g2[component]),
        "midpoint": float(g_mid[component]),
    }
    return witness


def _run_lanes(trial: MidpointTrial, jobs: int) -> List[_Tally]:
    lanes = trial.lanes()
    if jobs <= 1 or len(lanes) == 1:
        return [_run_lane(trial, lane, count) for lane, count in lanes]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(lambda pair: _run_lane(trial, *pair), lanes))


def _merge(tallies: Sequence[_Tally], component: int) -> Tuple[int, int, float, Optional[Dict]]:
    trials = sum(t.trials for t in tallies)
    violations = int(sum(int(t.violations[component]) for t in tallies))
    worst, witness = -np.inf, None
    # Lane order breaks ties, which keeps the chosen witness independent of jobs.
    for tally in tallies:
        if tally.worst_gap[component] > worst:
            worst = float(tally.worst_gap[component])
            witness = tally.witnesses[component]
    return trials, violations, worst, witness if violations else None


def run_midpoint_components(trial: MidpointTrial, jobs: int = 1) -> List[ConcavityReport]:
    """One report per functional component, sharing the sampled inputs."""
    started = time.perf_counter()
    tallies = _run_lanes(trial, jobs)
    runtime_ms = int(round((time.perf_counter() - started) * 1000))
    size = tallies[0].worst_gap.size
    reports = []
    for component in range(size):
        trials, violations, worst, witness = _merge(tallies, component)
        label = trial.labels[component] if component < len(trial.labels) else str(component)
        reports.append(
            ConcavityReport(
                trials_run=trials,
                violations=violations,
                worst_gap=worst,
                worst_witness=witness,
                runtime_ms=runtime_ms,
                params=dict(trial.params, component=label) if size > 1 else dict(trial.params),
                label=label,
            )
        )
        if violations:
            logger.warning(
                f"{label} {trial.params}: {violations}/{trials} midpoint "
                f"{trial.direction.value} violations, worst gap {worst:.3e}"
            )
    return reports


def run_midpoint(trial: MidpointTrial, jobs: int = 1) -> ConcavityReport:
    """Run ``trial``; several components merge into their worst gap and largest count."""
    reports = run_midpoint_components(trial, jobs)
    if len(reports) == 1:
        return reports[0]
    worst = max(reports, key=lambda report: report.worst_gap)
    violations = max(report.violations for report in reports)
    return ConcavityReport(
        trials_run=reports[0].trials_run,
        violations=violations,
        worst_gap=worst.worst_gap,
        worst_witness=worst.worst_witness if violations else None,
        runtime_ms=reports[0].runtime_ms,
        params=dict(trial.params),
        label=",".join(trial.labels),
    )


def run_operator_midpoint(trial: MidpointTrial, jobs: int = 1) -> ConcavityReport:
    """Loewner-order midpoint test for matrix-valued functionals."""
    if not trial.operator_valued:
        raise InvalidInput("run_operator_midpoint needs an operator_valued trial")
    return run_midpoint_components(trial, jobs)[0]


def replay_witness(trial: MidpointTrial, witness: Dict[str, Any]) -> float:
    """Re-evaluate a stored witness and return its gap."""
    first = tuple(PosDefMatrix.from_array(matrix_from_record(r)) for r in witness["first"])
    second = tuple(PosDefMatrix.from_array(matrix_from_record(r)) for r in witness["second"])
    context = {"lane": witness.get("lane", -1), "index": witness.get("index", -1)}
    pair = (first, second)
    g1 = _evaluate(trial, first, context, pair)
    g2 = _evaluate(trial, second, context, pair)
    g_mid = _evaluate(trial, midpoint(first, second), context, pair)
    gaps = midpoint_gaps(trial.direction, g1, g2, g_mid, trial.operator_valued)
    return float(gaps[int(witness.get("component", 0))])


def pair_sampler(dims: Sequence[int], cond_cap: float = DEFAULT_COND_CAP) -> Sampler:
    """Independent positive definite tuples with one matrix per entry of ``dims``."""

    def sample(rng: np.random.Generator) -> Tuple[PdTuple, PdTuple]:
        first = tuple(random_posdef(dim, rng, cond_cap) for dim in dims)
        second = tuple(random_posdef(dim, rng, cond_cap) for dim in dims)
        return first, second

    return sample


def ray_pair_sampler(dims: Sequence[int], cond_cap: float = DEFAULT_COND_CAP) -> Sampler:
    """Second tuple close to a common positive multiple of the first."""
    lo, hi = np.log(RAY_SCALE_RANGE[0]), np.log(RAY_SCALE_RANGE[1])

    def sample(rng: np.random.Generator) -> Tuple[PdTuple, PdTuple]:
        first = tuple(random_posdef(dim, rng, cond_cap) for dim in dims)
        scale = float(np.exp(rng.uniform(lo, hi)))
        second = tuple(
            PosDefMatrix.from_array(
                scale * matrix.entries
                + RAY_NOISE * random_posdef(matrix.dim, rng, cond_cap).entries
            )
            for matrix in first
        )
        return first, second

    return sample


def mixed_sampler(*samplers: Sampler) -> Sampler:
    """Pick one of ``samplers`` uniformly per draw."""
    if not samplers:
        raise InvalidInput("mixed_sampler needs at least one sampler")

    def sample(rng: np.random.Generator) -> Tuple[PdTuple, PdTuple]:
        return samplers[int(rng.integers(len(samplers)))](rng)

    return sample


def default_sampler(dims: Sequence[int], cond_cap: float = DEFAULT_COND_CAP) -> Sampler:
    return mixed_sampler(pair_sampler(dims, cond_cap), ray_pair_sampler(dims, cond_cap))


__all__ = [
    "Direction",
    "MidpointTrial",
    "ConcavityReport",
    "midpoint",
    "midpoint_gaps",
    "run_midpoint",
    "run_midpoint_components",
    "run_operator_midpoint",
    "replay_witness",
    "pair_sampler",
    "ray_pair_sampler",
    "mixed_sampler",
    "default_sampler",
    "LANE_SIZE",
    "DEFAULT_REL_TOL",
    "DEFAULT_TRIALS",
]
