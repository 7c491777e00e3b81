"""Theorem-indexed suites: grids of parameter points, their hypotheses, and the
functionals each point runs through the midpoint engine."""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Literal,
    NoReturn,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..common.errors import ConfigError, LiebLabError
from ..functions.scalar import (
    FnFlag,
    ScalarFn,
    build_function,
    make_power,
    screen_flags,
    standard_audit_grid,
)
from ..lieb.functionals import (
    GammaRule,
    LiebSpec,
    epstein_norm,
    epstein_trace,
    lieb_trace,
    lieb_trace_inverted,
    mean_norm_values,
    mean_trace,
)
from ..lieb.maps import PosLinMap, random_map
from ..linalg.matrices import DEFAULT_COND_CAP
from ..models import FunctionDescriptor, MeanDescriptor
from ..operators.means import build_mean
from ..operators.norms import NormSpec, parse_norm
from .trials import (
    DEFAULT_REL_TOL,
    DEFAULT_TRIALS,
    Direction,
    Functional,
    MidpointTrial,
    default_sampler,
)

logger = logging.getLogger(__name__)

DEFAULT_DIMS = (2, 3)
MAP_STREAM = 0
TRIAL_STREAM = 1
BOX_ATOL = 1e-12
DERIVED_ALPHAS = (0.5, 1.0, 2.0)
SCHATTEN_PS = (1.0, 2.0, math.inf)
TAIL_POINTS = 20

FormKind = Literal["direct", "inverted"]
MapKind = Literal["kraus", "identity", "congruence", "unital"]
NormFamily = Literal["anti", "norm"]

X_OVER_ONE_PLUS_X = {"h1": 0.5, "b": 0.0, "atoms": [[1.0, 0.25]]}


class GridPoint(BaseModel):
    """One parameter point of a suite grid.

    The function is either ``x^s`` (``s``) or a descriptor (``f``). Map kinds
    name how ``Phi`` and ``Psi`` are drawn for each dimension.
    """

    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    p: float = 0.0
    q: float = 0.0
    s: Optional[float] = None
    function: Optional[FunctionDescriptor] = Field(default=None, alias="f")
    mean: Optional[MeanDescriptor] = None
    norms: List[NormSpec] = Field(default_factory=list)
    norm_family: Optional[NormFamily] = None
    form: FormKind = "direct"
    phi: MapKind = "kraus"
    psi: MapKind = "kraus"
    direction: Optional[Direction] = None
    label: Optional[str] = None

    @field_validator("norms", mode="before")
    @classmethod
    def _parse_norms(cls, value):
        if value is None:
            return []
        return [parse_norm(item) for item in value]

    @field_validator("mean", mode="before")
    @classmethod
    def _parse_mean(cls, value):
        if isinstance(value, str):
            return {"kind": value}
        return value

    @model_validator(mode="after")
    def _check_function(self) -> "GridPoint":
        if self.s is None and self.function is None:
            raise ValueError("a grid point needs 's' or 'f'")
        return self

    def scalar_fn(self) -> ScalarFn:
        if self.function is not None:
            return build_function(self.function)
        return make_power(self.s)

    def norm_set(self, dim: int) -> List[NormSpec]:
        if self.norms:
            return list(self.norms)
        if self.norm_family == "anti":
            return [NormSpec(kind="ky_fan_anti", k=k) for k in range(1, dim + 1)] + [
                NormSpec(kind="derived_anti", alpha=alpha, base=NormSpec(kind="trace_norm"))
                for alpha in DERIVED_ALPHAS
            ]
        if self.norm_family == "norm":
            return [NormSpec(kind="ky_fan_norm", k=k) for k in range(1, dim + 1)] + [
                NormSpec(kind="schatten", p=p) for p in SCHATTEN_PS
            ]
        return []

    def describe(self) -> Dict[str, Any]:
        out = self.model_dump(mode="json", exclude_none=True)
        if not out.get("norms"):
            out.pop("norms", None)
        return out

    def name(self) -> str:
        if self.label:
            return self.label
        fn = f"s={self.s:g}" if self.function is None else self.function.kind
        return f"p={self.p:g}, q={self.q:g}, {fn}, {self.form}"


@dataclass(frozen=True)
class SuiteSettings:
    seed: int = 42
    trials: int = DEFAULT_TRIALS
    rel_tol: float = DEFAULT_REL_TOL
    cond_cap: float = DEFAULT_COND_CAP
    jobs: int = 1


@dataclass(frozen=True, eq=False)
class SuiteSpec:
    theorem_id: str
    param_grid: Tuple[GridPoint, ...]
    expected: Direction
    dims: Tuple[int, ...] = DEFAULT_DIMS
    suite: Optional["Suite"] = field(default=None, repr=False)


def _within(value: float, lo: float, hi: float) -> bool:
    return lo - BOX_ATOL <= value <= hi + BOX_ATOL


def _inv(x: float, at_zero: float) -> float:
    return at_zero if x == 0 else 1.0 / x


def _declared(fn: ScalarFn, *flags: FnFlag) -> Optional[str]:
    missing = [flag.value for flag in flags if flag not in fn.flags]
    return f"{fn.label} is not declared {missing}" if missing else None


def _screened(fn: ScalarFn, *flags: FnFlag) -> Optional[str]:
    try:
        missing = screen_flags(fn, flags)
    except LiebLabError as exc:
        return f"{fn.label} cannot be screened: {exc}"
    if missing:
        return f"{fn.label} fails screening for {[m.value for m in missing]}"
    return None


def _first(*reasons: Optional[str]) -> Optional[str]:
    return next((reason for reason in reasons if reason), None)


def _non_negative(fn: ScalarFn) -> Optional[str]:
    values = fn(standard_audit_grid())
    if np.any(values < 0):
        return f"{fn.label} takes negative values"
    return None


def _draw_maps(
    point: GridPoint, dim: int, rng: np.random.Generator
) -> Tuple[PosLinMap, PosLinMap]:
    return random_map(point.phi, dim, rng), random_map(point.psi, dim, rng)


class Suite(ABC):
    theorem_id: str = "base"
    expected: Direction = Direction.CONCAVE
    arity: int = 2
    summary: str = ""

    @abstractmethod
    def default_grid(self) -> List[GridPoint]:
        raise NotImplementedError

    @abstractmethod
    def hypothesis(self, point: GridPoint) -> Optional[str]:
        """Return why ``point`` falls outside the theorem, or None."""
        raise NotImplementedError

    @abstractmethod
    def functional(
        self, point: GridPoint, dim: int, rng: np.random.Generator
    ) -> Tuple[Functional, Tuple[str, ...]]:
        raise NotImplementedError

    def spec(
        self,
        dims: Sequence[int] = DEFAULT_DIMS,
        grid: Optional[Iterable[Any]] = None,
    ) -> SuiteSpec:
        points = self.default_grid() if grid is None else [
            item if isinstance(item, GridPoint) else GridPoint.model_validate(item)
            for item in grid
        ]
        return SuiteSpec(self.theorem_id, tuple(points), self.expected, tuple(dims), self)

    def direction_for(self, point: GridPoint) -> Direction:
        return Direction(point.direction) if point.direction else self.expected

    def reject(self, point: GridPoint, reason: str) -> NoReturn:
        raise ConfigError(f"{self.theorem_id} grid point [{point.name()}]: {reason}")

    def check_hypothesis(self, point: GridPoint) -> None:
        if self.arity == 2 and point.p == 0 and point.q == 0:
            self.reject(point, "(p,q)≠(0,0) is required")
        try:
            reason = self.hypothesis(point)
        except LiebLabError as exc:
            reason = str(exc)
        if reason:
            self.reject(point, reason)

    def build_trial(
        self, point: GridPoint, index: int, dim: int, settings: SuiteSettings
    ) -> MidpointTrial:
        rng = np.random.default_rng(
            np.random.SeedSequence([settings.seed, index, dim, MAP_STREAM])
        )
        functional, labels = self.functional(point, dim, rng)
        return MidpointTrial(
            functional=functional,
            direction=self.direction_for(point),
            sampler=default_sampler((dim,) * self.arity, settings.cond_cap),
            trials=settings.trials,
            rel_tol=settings.rel_tol,
            seed_key=(settings.seed, index, dim, TRIAL_STREAM),
            labels=labels,
            params=dict(point.describe(), dim=dim),
        )


class _LiebTraceSuite(Suite):
    """Two-variable trace functionals in direct or inverted form."""

    def functional(self, point, dim, rng):
        phi, psi = _draw_maps(point, dim, rng)
        f = point.scalar_fn()
        spec = LiebSpec(f, phi, psi, point.p, point.q)
        evaluate = lieb_trace_inverted if point.form == "inverted" else lieb_trace

        def value(args):
            return evaluate(spec, *args)

        return value, (f"{point.form}:{f.label}",)


class LiebTraceSuite(_LiebTraceSuite):
    theorem_id = "thm2_1"
    summary = "Tr f(Phi(A^p)^1/2 Psi(B^q) Phi(A^p)^1/2) with f(x^(p+q)) operator monotone"

    def hypothesis(self, point):
        p, q = point.p, point.q
        if not (_within(p, 0, 1) and _within(q, 0, 1)) and not (
            _within(p, -1, 0) and _within(q, -1, 0)
        ):
            return f"p, q must both lie in [0, 1] or in [-1, 0]; got p={p:g}, q={q:g}"
        if point.form != "direct":
            return "only the direct form is covered"
        g = point.scalar_fn().compose_power(p + q)
        if self.direction_for(point) is Direction.CONCAVE:
            return _first(
                _declared(g, FnFlag.OPERATOR_MONOTONE, FnFlag.NON_DECREASING),
                _screened(g, FnFlag.NON_DECREASING),
            )
        return _first(
            _declared(g, FnFlag.OPERATOR_MONOTONE, FnFlag.NON_INCREASING),
            _screened(g, FnFlag.NON_INCREASING),
        )

    def default_grid(self):
        positive = (0.25, 0.5, 1.0)
        points = [
            GridPoint(p=p, q=q, s=u / (p + q))
            for p in positive
            for q in positive
            for u in (0.25, 0.5, 1.0)
        ]
        for p, q in ((0.5, 0.5), (0.25, 1.0)):
            for params in (X_OVER_ONE_PLUS_X, {"h1": 1.0, "b": 0.5, "atoms": [[0.5, 0.5]]}):
                points.append(
                    GridPoint(
                        p=p,
                        q=q,
                        function=FunctionDescriptor(
                            kind="pick", params=params, power=1.0 / (p + q)
                        ),
                    )
                )
        negative = (-0.5, -1.0)
        points += [
            GridPoint(p=p, q=q, s=u / (p + q))
            for p in negative
            for q in negative
            for u in (0.5, 1.0)
        ]
        for p, q in ((0.5, 0.5), (1.0, 0.25), (-0.5, -0.5)):
            for u in (0.5, 1.0):
                points.append(GridPoint(p=p, q=q, s=-u / (p + q), direction="convex"))
        return points


class MeanNormSuite(Suite):
    theorem_id = "thm3_1"
    summary = "(anti-)norms of f(Phi(A^p) sigma Psi(B^q)) with f(x^gamma) operator monotone"

    def direction_for(self, point):
        if point.direction:
            return Direction(point.direction)
        return Direction.CONVEX if point.norm_family == "norm" else Direction.CONCAVE

    def hypothesis(self, point):
        p, q = point.p, point.q
        if _within(p, 0, 1) and _within(q, 0, 1):
            gamma = max(p, q)
        elif _within(p, -1, 0) and _within(q, -1, 0):
            gamma = min(p, q)
        else:
            return f"p, q must both lie in [0, 1] or in [-1, 0]; got p={p:g}, q={q:g}"
        f = point.scalar_fn()
        g = f.compose_power(gamma)
        norms = point.norm_set(2)
        if not norms:
            return "no norms given"
        concave = self.direction_for(point) is Direction.CONCAVE
        if concave and not all(norm.is_anti for norm in norms):
            return "the concave half needs anti-norms"
        if not concave and any(norm.is_anti for norm in norms):
            return "the convex half needs symmetric norms"
        monotone = FnFlag.NON_DECREASING if concave else FnFlag.NON_INCREASING
        return _first(
            _non_negative(f),
            _declared(g, FnFlag.OPERATOR_MONOTONE, monotone),
            _screened(g, monotone),
        )

    def functional(self, point, dim, rng):
        phi, psi = _draw_maps(point, dim, rng)
        spec = LiebSpec(point.scalar_fn(), phi, psi, point.p, point.q, GammaRule.EXTREMAL)
        sigma = build_mean(point.mean or "arithmetic")
        norms = point.norm_set(dim)

        def values(args):
            return mean_norm_values(spec, sigma, norms, *args)

        return values, tuple(norm.label for norm in norms)

    def default_grid(self):
        points = []
        for mean in ("arithmetic", "geometric", "harmonic"):
            for p, q in ((1.0, 0.5), (0.5, 0.5), (-0.5, -1.0)):
                gamma = max(p, q) if p >= 0 else min(p, q)
                for u in (0.5, 1.0):
                    points.append(
                        GridPoint(p=p, q=q, s=u / gamma, mean=mean, norm_family="anti")
                    )
                    points.append(
                        GridPoint(p=p, q=q, s=-u / gamma, mean=mean, norm_family="norm")
                    )
        return points


class EpsteinNormSuite(Suite):
    theorem_id = "cor3_2"
    arity = 1
    summary = "one-variable (anti-)norms of h(Phi(A^+-p)^(+-1/p)) for operator monotone h >= 0"

    def direction_for(self, point):
        if point.direction:
            return Direction(point.direction)
        return Direction.CONVEX if point.norm_family == "norm" else Direction.CONCAVE

    def hypothesis(self, point):
        if not (0 < point.p <= 1 + BOX_ATOL):
            return f"p must lie in (0, 1], got {point.p:g}"
        norms = point.norm_set(2)
        if not norms:
            return "no norms given"
        anti = {norm.is_anti for norm in norms}
        if len(anti) != 1:
            return "anti-norms and norms cannot share a grid point"
        if anti != {self.direction_for(point) is Direction.CONCAVE}:
            return "anti-norms are concave and norms convex"
        h = point.scalar_fn()
        return _first(
            _non_negative(h),
            _declared(h, FnFlag.OPERATOR_MONOTONE, FnFlag.NON_DECREASING),
            _screened(h, FnFlag.NON_DECREASING),
        )

    def functional(self, point, dim, rng):
        phi = random_map(point.phi, dim, rng)
        h = point.scalar_fn()
        norms = point.norm_set(dim)
        inverted = point.form == "inverted"

        def values(args):
            return np.array(
                [epstein_norm(h, phi, point.p, args[0], norm, inverted) for norm in norms]
            )

        return values, tuple(norm.label for norm in norms)

    def default_grid(self):
        functions = (
            FunctionDescriptor(kind="power", params={"s": 0.5}),
            FunctionDescriptor(kind="pick", params=X_OVER_ONE_PLUS_X),
        )
        return [
            GridPoint(p=p, function=fn, norm_family=family, form=form)
            for p in (0.5, 1.0)
            for fn in functions
            for family in ("anti", "norm")
            for form in ("direct", "inverted")
        ]


class MeanTraceSuite(Suite):
    theorem_id = "cor4_2"
    summary = "Tr f(Phi(A^p) sigma Psi(B^q)) with f(x^gamma) non-decreasing concave"

    def hypothesis(self, point):
        p, q = point.p, point.q
        if _within(p, 0, 1) and _within(q, 0, 1):
            gamma = max(p, q)
        elif _within(p, -1, 0) and _within(q, -1, 0):
            gamma = min(p, q)
        else:
            return f"p, q must both lie in [0, 1] or in [-1, 0]; got p={p:g}, q={q:g}"
        f = point.scalar_fn()
        if self.direction_for(point) is Direction.CONCAVE:
            return _screened(f.compose_power(gamma), FnFlag.NON_DECREASING, FnFlag.CONCAVE)
        return _screened(f.compose_power(-gamma), FnFlag.NON_DECREASING, FnFlag.CONVEX)

    def functional(self, point, dim, rng):
        phi, psi = _draw_maps(point, dim, rng)
        f = point.scalar_fn()
        spec = LiebSpec(f, phi, psi, point.p, point.q, GammaRule.EXTREMAL)
        sigma = build_mean(point.mean or "arithmetic")

        def value(args):
            return mean_trace(spec, sigma, *args)

        return value, (f"{sigma.label}:{f.label}",)

    def default_grid(self):
        points = []
        for mean in ("arithmetic", "geometric", "harmonic"):
            for p, q in ((1.0, 0.5), (0.5, 0.25), (-0.5, -1.0)):
                gamma = max(p, q) if p >= 0 else min(p, q)
                points.append(GridPoint(p=p, q=q, s=0.5 / gamma, mean=mean))
                points.append(
                    GridPoint(
                        p=p,
                        q=q,
                        function=FunctionDescriptor(kind="log", power=1.0 / gamma),
                        mean=mean,
                    )
                )
                for u in (1.0, 2.0):
                    points.append(
                        GridPoint(p=p, q=q, s=-u / gamma, mean=mean, direction="convex")
                    )
        return points


class EpsteinTraceSuite(Suite):
    theorem_id = "cor4_5"
    arity = 1
    summary = "Tr f(Phi(A^p)^(1/p)) and Tr f(Phi(A^-p)^(-1/p))"

    def hypothesis(self, point):
        f = point.scalar_fn()
        if self.direction_for(point) is Direction.CONCAVE:
            if not (0 < point.p <= 1 + BOX_ATOL):
                return f"the concave half needs 0 < p <= 1, got {point.p:g}"
            return _screened(f, FnFlag.NON_DECREASING, FnFlag.CONCAVE)
        if not _within(point.p, 1, 2):
            return f"the convex half needs 1 <= p <= 2, got {point.p:g}"
        if point.form != "direct":
            return "the convex half covers the direct form only"
        return _screened(f, FnFlag.NON_DECREASING, FnFlag.CONVEX)

    def functional(self, point, dim, rng):
        phi = random_map(point.phi, dim, rng)
        f = point.scalar_fn()
        inverted = point.form == "inverted"

        def value(args):
            return epstein_trace(f, phi, point.p, args[0], inverted)

        return value, (f"{point.form}:{f.label}",)

    def default_grid(self):
        concave = (
            FunctionDescriptor(kind="power", params={"s": 0.5}),
            FunctionDescriptor(kind="log"),
            FunctionDescriptor(kind="pick", params=X_OVER_ONE_PLUS_X),
        )
        points = [
            GridPoint(p=p, function=fn, form=form)
            for p in (0.5, 1.0)
            for fn in concave
            for form in ("direct", "inverted")
        ]
        points += [
            GridPoint(p=p, s=s, direction="convex")
            for p in (1.0, 1.5, 2.0)
            for s in (2.0, 1.5, 1.0)
        ]
        return points


class ShiftedPowerSuite(_LiebTraceSuite):
    theorem_id = "thm5_2"
    summary = "0 <= p, q <= 1 with f(x^(1+p)) or f(x^(1+q)) concave (convex)"

    def hypothesis(self, point):
        p, q = point.p, point.q
        if not (_within(p, 0, 1) and _within(q, 0, 1)):
            return f"p, q must lie in [0, 1]; got p={p:g}, q={q:g}"
        f = point.scalar_fn()
        if self.direction_for(point) is Direction.CONCAVE:
            monotone, shape = FnFlag.NON_DECREASING, FnFlag.CONCAVE
        else:
            monotone, shape = FnFlag.NON_INCREASING, FnFlag.CONVEX
        bent = [_screened(f.compose_power(1 + r), shape) for r in (p, q)]
        # one of the two compositions suffices
        return _first(_screened(f, monotone), bent[0] and bent[1])

    def default_grid(self):
        points = []
        for p, q in ((1.0, 1.0), (0.5, 1.0), (0.25, 0.5), (0.0, 1.0)):
            bound = max(1.0 / (1.0 + p), 1.0 / (1.0 + q))
            for form in ("direct", "inverted"):
                for s in (bound, bound / 2.0):
                    points.append(GridPoint(p=p, q=q, s=s, form=form))
                for s in (-0.5, -1.0):
                    points.append(GridPoint(p=p, q=q, s=s, form=form, direction="convex"))
        for params in (
            {"variant": "concave_capped", "s": 0.5, "r": 1.0},
            {"variant": "concave_spliced", "s1": 0.4, "s2": 0.3, "beta": 1.0, "r": 1.0},
        ):
            for form in ("direct", "inverted"):
                points.append(
                    GridPoint(
                        p=1.0,
                        q=1.0,
                        function=FunctionDescriptor(kind="a4", params=params),
                        form=form,
                    )
                )
        return points


class NegativePowerSuite(_LiebTraceSuite):
    theorem_id = "thm5_3"
    expected = Direction.CONVEX
    summary = "-1 < p <= 0 with f(x^(1+p)) convex"

    def hypothesis(self, point):
        p, q = point.p, point.q
        if not (-1 < p <= BOX_ATOL):
            return f"p must lie in (-1, 0], got {p:g}"
        low_q = _within(q, -1, 0)
        high_q = _within(q, 1, 2)
        if point.form == "direct" and not (low_q or high_q):
            return f"the direct form needs q in [-1, 0] or [1, 2], got {q:g}"
        if point.form == "inverted" and not (low_q or (high_q and point.psi == "identity")):
            return f"the inverted form needs q in [-1, 0], or q in [1, 2] with Psi=id; got {q:g}"
        f = point.scalar_fn()
        return _first(
            _screened(f, FnFlag.NON_DECREASING),
            _screened(f.compose_power(1 + p), FnFlag.CONVEX),
        )

    def default_grid(self):
        points = []
        for p in (-0.25, -0.5, -0.75):
            s = 1.0 / (1.0 + p)
            points += [GridPoint(p=p, q=q, s=s) for q in (-0.5, -1.0, 1.0, 1.5, 2.0)]
            points += [GridPoint(p=p, q=q, s=s, form="inverted") for q in (-0.5, -1.0)]
            points += [
                GridPoint(p=p, q=q, s=s, form="inverted", psi="identity")
                for q in (1.0, 1.5, 2.0)
            ]
        points.append(
            GridPoint(
                p=-0.5,
                q=1.0,
                function=FunctionDescriptor(
                    kind="a4", params={"variant": "shifted_power", "s": 2.0, "r": 0.5}
                ),
            )
        )
        return points


class SuperlinearPowerSuite(_LiebTraceSuite):
    theorem_id = "thm5_4"
    expected = Direction.CONVEX
    summary = "1 < p <= 2 with f(x^(p-1)) convex"

    def hypothesis(self, point):
        p, q = point.p, point.q
        if not (1 < p <= 2 + BOX_ATOL):
            return f"p must lie in (1, 2], got {p:g}"
        if not _within(q, -1, 0):
            return f"q must lie in [-1, 0], got {q:g}"
        if point.form == "inverted" and point.phi != "identity":
            return "the inverted form needs Phi=id"
        f = point.scalar_fn()
        return _first(
            _screened(f, FnFlag.NON_DECREASING),
            _screened(f.compose_power(p - 1), FnFlag.CONVEX),
        )

    def default_grid(self):
        points = []
        for p in (1.5, 2.0):
            for u in (1.0, 1.5):
                for q in (-0.5, -1.0):
                    s = u / (p - 1.0)
                    points.append(GridPoint(p=p, q=q, s=s))
                    points.append(GridPoint(p=p, q=q, s=s, form="inverted", phi="identity"))
        return points


class QuadraticSuite(_LiebTraceSuite):
    theorem_id = "thm5_6"
    expected = Direction.CONVEX
    summary = "q = 2, -1 <= p <= 0, f concave with f(x)/x -> 0 and f(x^(2+p)) convex"

    def hypothesis(self, point):
        p, q = point.p, point.q
        if not _within(p, -1, 0) or abs(q - 2.0) > BOX_ATOL:
            return f"needs -1 <= p <= 0 and q = 2; got p={p:g}, q={q:g}"
        if point.form != "direct":
            return "only the direct form is covered"
        f = point.scalar_fn()
        grid = standard_audit_grid()
        ratio = f(grid[-TAIL_POINTS:]) / grid[-TAIL_POINTS:]
        sublinear = None if np.all(np.diff(ratio) < 0) else f"{f.label}(x)/x is not decaying"
        return _first(
            _screened(f, FnFlag.NON_DECREASING, FnFlag.CONCAVE),
            sublinear,
            _screened(f.compose_power(2 + p), FnFlag.CONVEX),
        )

    def default_grid(self):
        points = []
        for p in (0.0, -0.25, -0.5):
            low = 1.0 / (2.0 + p)
            points += [GridPoint(p=p, q=2.0, s=s) for s in (low, (low + 1.0) / 2.0)]
        return points


class _RangeSuite(_LiebTraceSuite):
    expected = Direction.CONVEX

    def hypothesis(self, point):
        if point.s is None or point.function is not None:
            return "range suites take f = x^s"
        if point.form != "direct":
            return "range suites cover the direct form"
        if self.in_range(point.p, point.q, point.s, point.phi, point.psi):
            return None
        if self.in_range(point.q, point.p, point.s, point.psi, point.phi):
            return None
        return f"(p, q, s) = ({point.p:g}, {point.q:g}, {point.s:g}) is outside the range"

    @abstractmethod
    def in_range(self, p: float, q: float, s: float, phi: str, psi: str) -> bool:
        raise NotImplementedError


class RangeISuite(_RangeSuite):
    theorem_id = "range_i"
    summary = "0 <= p, q <= 1 with s <= 0, or -1 <= p, q <= 0 with s >= 0"

    def in_range(self, p, q, s, phi, psi):
        if _within(p, 0, 1) and _within(q, 0, 1):
            return s <= BOX_ATOL
        if _within(p, -1, 0) and _within(q, -1, 0):
            return s >= -BOX_ATOL
        return False

    def default_grid(self):
        return [
            GridPoint(p=p, q=q, s=s)
            for p, q, s in (
                (0.5, 0.5, -0.5),
                (1.0, 0.25, -1.0),
                (-0.5, -0.5, 0.5),
                (-1.0, -0.25, 1.0),
            )
        ]


class RangeIISuite(_RangeSuite):
    theorem_id = "range_ii"
    summary = "-1 <= p <= 0, 1 <= q <= 2, s >= min(1/(p+1), 1/(q-1))"

    def in_range(self, p, q, s, phi, psi):
        if not (_within(p, -1, 0) and _within(q, 1, 2)):
            return False
        return s >= min(_inv(p + 1, math.inf), _inv(q - 1, math.inf)) - BOX_ATOL

    def default_grid(self):
        points = [
            GridPoint(p=p, q=q, s=s)
            for p, q, ss in (
                (-0.5, 1.5, (2.0, 3.0)),
                (-0.25, 2.0, (1.0, 2.0)),
                (-1.0, 2.0, (1.0, 2.0)),
                (0.0, 1.0, (1.0, 2.0)),
            )
            for s in ss
        ]
        points.append(GridPoint(p=1.5, q=-0.5, s=2.0))
        return points


class RangeIIISuite(_RangeSuite):
    theorem_id = "range_iii"
    summary = "0 <= p <= 1, -2 <= q <= -1, s <= max(1/(p-1), 1/(q+1)), Psi = id"

    def in_range(self, p, q, s, phi, psi):
        if psi != "identity" or not (_within(p, 0, 1) and _within(q, -2, -1)):
            return False
        return s <= max(_inv(p - 1, -math.inf), _inv(q + 1, -math.inf)) + BOX_ATOL

    def default_grid(self):
        points = [
            GridPoint(p=p, q=q, s=s, psi="identity")
            for p, q, ss in (
                (0.5, -1.5, (-2.0, -3.0)),
                (0.0, -2.0, (-1.0, -2.0)),
                (0.25, -1.0, (-4.0 / 3.0, -2.0)),
            )
            for s in ss
        ]
        points.append(GridPoint(p=-1.5, q=0.5, s=-2.0, phi="identity"))
        return points


class RangeIVSuite(_RangeSuite):
    theorem_id = "range_iv"
    summary = "-1 <= p <= 0, q = 2, s >= 1/(2+p)"

    def in_range(self, p, q, s, phi, psi):
        if not (_within(p, -1, 0) and abs(q - 2.0) <= BOX_ATOL):
            return False
        return s >= 1.0 / (2.0 + p) - BOX_ATOL

    def default_grid(self):
        return [
            GridPoint(p=p, q=2.0, s=s)
            for p, ss in (
                (0.0, (0.5, 1.0, 1.5)),
                (-0.5, (1.0 / 1.5, 1.0, 1.5)),
                (-1.0, (1.0, 1.5)),
            )
            for s in ss
        ]


ALL_SUITES = (
    LiebTraceSuite,
    MeanNormSuite,
    EpsteinNormSuite,
    MeanTraceSuite,
    EpsteinTraceSuite,
    ShiftedPowerSuite,
    NegativePowerSuite,
    SuperlinearPowerSuite,
    QuadraticSuite,
    RangeISuite,
    RangeIISuite,
    RangeIIISuite,
    RangeIVSuite,
)


__all__ = [
    "GridPoint",
    "SuiteSettings",
    "SuiteSpec",
    "Suite",
    "ALL_SUITES",
    "DEFAULT_DIMS",
    "LiebTraceSuite",
    "MeanNormSuite",
    "EpsteinNormSuite",
    "MeanTraceSuite",
    "EpsteinTraceSuite",
    "ShiftedPowerSuite",
    "NegativePowerSuite",
    "SuperlinearPowerSuite",
    "QuadraticSuite",
    "RangeISuite",
    "RangeIISuite",
    "RangeIIISuite",
    "RangeIVSuite",
]
