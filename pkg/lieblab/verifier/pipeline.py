from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence

from ..common.errors import ConfigError
from ..linalg.matrices import DEFAULT_COND_CAP
from .dataframe import reports_to_dataframe
from .metrics import calculate_gap_metrics
from .suites import ALL_SUITES, DEFAULT_DIMS, Suite, SuiteSettings, SuiteSpec
from .trials import (
    DEFAULT_REL_TOL,
    DEFAULT_TRIALS,
    ConcavityReport,
    Direction,
    run_midpoint_components,
)

logger = logging.getLogger(__name__)


def normalize_suite_id(raw: str) -> str:
    """``thm2.1`` -> ``thm2_1``, ``range-ii`` -> ``range_ii``."""
    return re.sub(r"[.\-\s]+", "_", str(raw).strip().lower())


@dataclass(frozen=True)
class SuiteResult:
    theorem_id: str
    expected: Direction
    reports: List[ConcavityReport]
    settings: SuiteSettings
    dims: Sequence[int] = DEFAULT_DIMS

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    def summary(self) -> Dict[str, Any]:
        return calculate_gap_metrics(reports_to_dataframe(self.reports))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.theorem_id,
            "expected": self.expected.value,
            "seed": self.settings.seed,
            "passed": self.passed,
            "summary": self.summary(),
            "points": [report.to_dict() for report in self.reports],
        }


def run_suite(
    suite: SuiteSpec,
    trials_per_point: int = DEFAULT_TRIALS,
    seed: int = 42,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    cond_cap: float = DEFAULT_COND_CAP,
    jobs: int = 1,
) -> List[ConcavityReport]:
    """Assert every grid hypothesis, then run one trial per (point, dim).

    Points with several norm components yield one report per component.
    """
    owner = suite.suite or default_pipeline().get(suite.theorem_id)
    for point in suite.param_grid:
        owner.check_hypothesis(point)
    settings = SuiteSettings(
        seed=seed,
        trials=trials_per_point,
        rel_tol=rel_tol,
        cond_cap=cond_cap,
        jobs=jobs,
    )
    reports: List[ConcavityReport] = []
    for index, point in enumerate(suite.param_grid):
        for dim in suite.dims:
            trial = owner.build_trial(point, index, dim, settings)
            reports.extend(run_midpoint_components(trial, jobs))
    failing = sum(1 for report in reports if not report.passed)
    logger.info(
        f"{suite.theorem_id}: {len(suite.param_grid)} points x {len(suite.dims)} dims, "
        f"{len(reports)} reports, {failing} with violations"
    )
    return reports


class SuitePipeline:
    def __init__(self, suites: Optional[Iterable[Suite]] = None):
        self._suites: Dict[str, Suite] = {}
        if suites:
            for suite in suites:
                self.register(suite)

    def register(self, suite: Suite) -> None:
        self._suites[suite.theorem_id] = suite

    def available(self) -> List[str]:
        return list(self._suites.keys())

    def get(self, theorem_id: str) -> Suite:
        key = normalize_suite_id(theorem_id)
        if key not in self._suites:
            raise ConfigError(
                f"Unknown suite '{theorem_id}'. Available: {self.available()}"
            )
        return self._suites[key]

    def run(
        self,
        theorem_id: str,
        settings: SuiteSettings,
        *,
        dims: Sequence[int] = DEFAULT_DIMS,
        grid: Optional[Iterable[Any]] = None,
    ) -> SuiteResult:
        suite = self.get(theorem_id)
        spec = suite.spec(dims, grid)
        reports = run_suite(
            spec,
            settings.trials,
            settings.seed,
            rel_tol=settings.rel_tol,
            cond_cap=settings.cond_cap,
            jobs=settings.jobs,
        )
        return SuiteResult(suite.theorem_id, suite.expected, reports, settings, spec.dims)


def default_pipeline() -> SuitePipeline:
    return SuitePipeline(suite() for suite in ALL_SUITES)


__all__ = [
    "SuitePipeline",
    "SuiteResult",
    "default_pipeline",
    "normalize_suite_id",
    "run_suite",
]
