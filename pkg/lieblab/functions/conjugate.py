from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..common.errors import BracketError, InvalidInput, LiebLabError
from .scalar import FnFlag, ScalarFn, screen_flags

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
MOLLIFIER_NODES = 64


class ConjugateDirection(str, Enum):
    HAT = "hat"
    CHECK = "check"


REQUIRED_CLASS = {
    ConjugateDirection.HAT: (FnFlag.NON_DECREASING, FnFlag.CONVEX),
    ConjugateDirection.CHECK: (FnFlag.NON_DECREASING, FnFlag.CONCAVE),
}


@dataclass(frozen=True)
class SearchConfig:
    """Log-grid bracketing followed by golden-section refinement in ``log x``."""

    bracket_lo: float = 1e-6
    bracket_hi: float = 1e6
    grid_size: int = 121
    refine_iters: int = 80
    tol: float = 1e-9
    zero_probe: float = 1e-300

    def __post_init__(self) -> None:
        if not (0 < self.bracket_lo < self.bracket_hi):
            raise InvalidInput(
                f"Need 0 < bracket_lo < bracket_hi, got {self.bracket_lo}, {self.bracket_hi}"
            )
        if self.tol <= 0:
            raise InvalidInput(f"tol must be > 0, got {self.tol}")
        if self.grid_size < 3 or self.refine_iters < 1:
            raise InvalidInput("grid_size must be >= 3 and refine_iters >= 1")
        if not (0 < self.zero_probe < self.bracket_lo):
            raise InvalidInput("zero_probe must lie in (0, bracket_lo)")

    def grid(self) -> np.ndarray:
        return np.geomspace(self.bracket_lo, self.bracket_hi, self.grid_size)


def _safe_values(f: ScalarFn, xs: np.ndarray) -> np.ndarray:
    try:
        return np.asarray(f(xs), dtype=float)
    except LiebLabError:
        out = np.full(xs.shape, np.nan)
        for index, x in enumerate(xs):
            try:
                out[index] = f.eval(float(x))
            except LiebLabError:
                continue
        return out


def _golden_max(
    objective: Callable[[float], float], lo: float, hi: float, iters: int, tol: float
) -> Tuple[float, float]:
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = objective(c), objective(d)
    for _ in range(iters):
        if hi - lo <= tol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = objective(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = objective(d)
    return (c, fc) if fc >= fd else (d, fd)


def _conjugate_value(
    f: ScalarFn, t: float, direction: ConjugateDirection, cfg: SearchConfig
) -> float:
    if not t > 0:
        raise InvalidInput(f"conjugate argument must be > 0, got {t}")
    sign = 1.0 if direction is ConjugateDirection.HAT else -1.0
    grid = cfg.grid()
    values = sign * (grid * t - _safe_values(f, grid))
    if np.all(np.isnan(values)):
        raise BracketError(
            f"{direction.value}({f.label}) undefined on the search grid",
            diagnostic={"t": t},
        )
    best = int(np.nanargmax(values))
    if best == grid.size - 1:
        raise BracketError(
            f"{direction.value}({f.label})({t:g}) drifted to the upper bracket edge",
            diagnostic={"t": t, "x": float(grid[-1]), "direction": direction.value},
        )

    def objective(u: float) -> float:
        x = math.exp(u)
        try:
            return sign * (x * t - f.eval(x))
        except LiebLabError:
            return -math.inf

    if best == 0:
        lo, hi = math.log(cfg.zero_probe), math.log(grid[1])
    else:
        lo, hi = math.log(grid[best - 1]), math.log(grid[best + 1])
    _, refined = _golden_max(objective, lo, hi, cfg.refine_iters, cfg.tol)
    result = max(refined, float(values[best]))
    if best == 0:
        # Supremum may sit at x -> 0+, where the objective tends to -f(0+).
        try:
            result = max(result, -sign * f.eval(cfg.zero_probe))
        except LiebLabError:
            pass
    return sign * result


def hat(f: ScalarFn, t: float, cfg: Optional[SearchConfig] = None) -> float:
    """``sup_{x>0} {x t - f(x)}`` for non-decreasing convex ``f``."""
    return float(ConjugateFn(f, ConjugateDirection.HAT, cfg or SearchConfig())(float(t)))


def check(f: ScalarFn, t: float, cfg: Optional[SearchConfig] = None) -> float:
    """``inf_{x>0} {x t - f(x)}`` for non-decreasing concave ``f``."""
    return float(ConjugateFn(f, ConjugateDirection.CHECK, cfg or SearchConfig())(float(t)))


@dataclass(frozen=True, eq=False)
class ConjugateFn:
    source: ScalarFn
    direction: ConjugateDirection
    search_cfg: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self) -> None:
        direction = ConjugateDirection(self.direction)
        object.__setattr__(self, "direction", direction)
        required = REQUIRED_CLASS[direction]
        if not self.source.has(*required):
            raise InvalidInput(
                f"{direction.value} needs a source declared "
                f"{[flag.value for flag in required]}; {self.source.label} "
                f"declares {sorted(flag.value for flag in self.source.flags)}"
            )
        # Conjugates are in the class by construction; screening them would
        # only re-run the nested search.
        if self.source.origin != "conjugate":
            missing = screen_flags(self.source, required)
            if missing:
                raise InvalidInput(
                    f"{self.source.label} fails sampled screening for "
                    f"{[flag.value for flag in missing]}"
                )

    def __call__(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        if np.ndim(t) == 0:
            return _conjugate_value(self.source, float(t), self.direction, self.search_cfg)
        ts = np.asarray(t, dtype=float)
        out = np.empty(ts.shape)
        for index, value in np.ndenumerate(ts):
            out[index] = _conjugate_value(
                self.source, float(value), self.direction, self.search_cfg
            )
        return out

    def as_scalar_fn(self) -> ScalarFn:
        descriptor = None
        if self.source.descriptor is not None:
            descriptor = {
                "kind": "conjugate",
                "params": {
                    "direction": self.direction.value,
                    "source": self.source.descriptor,
                },
                "power": 1.0,
            }
        return ScalarFn(
            func=self.__call__,
            label=f"{self.direction.value}({self.source.label})",
            flags=frozenset(REQUIRED_CLASS[self.direction]),
            descriptor=descriptor,
            origin="conjugate",
        )


def conjugate(
    f: ScalarFn,
    direction: Union[ConjugateDirection, str],
    cfg: Optional[SearchConfig] = None,
) -> ScalarFn:
    return ConjugateFn(f, ConjugateDirection(direction), cfg or SearchConfig()).as_scalar_fn()


def conjugate_table(
    f: ScalarFn,
    direction: Union[ConjugateDirection, str],
    ts: Sequence[float],
    cfg: Optional[SearchConfig] = None,
) -> pd.DataFrame:
    conj = ConjugateFn(f, ConjugateDirection(direction), cfg or SearchConfig())
    rows = []
    for t in ts:
        try:
            rows.append({"t": float(t), "value": float(conj(float(t)))})
        except BracketError as exc:
            logger.warning(f"Skipping t={t:g}: {exc}")
    return pd.DataFrame(rows, columns=["t", "value"])


@lru_cache(maxsize=None)
def mollifier_rule(nodes: int = MOLLIFIER_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes with bump weights ``c*exp(-1/(1-t^2))`` summing to 1."""
    points, weights = np.polynomial.legendre.leggauss(nodes)
    bump = np.exp(-1.0 / (1.0 - points**2))
    mass = weights * bump
    mass = mass / mass.sum()
    points.setflags(write=False)
    mass.setflags(write=False)
    return points, mass


def mollify(f: ScalarFn, eps: float) -> ScalarFn:
    """``f_eps(x) = int phi(t) f(x exp(-eps t)) dt`` by quadrature."""
    if not eps > 0:
        raise InvalidInput(f"eps must be > 0, got {eps}")
    points, mass = mollifier_rule()
    dilations = np.exp(-eps * points)

    def func(x: np.ndarray) -> np.ndarray:
        samples = f(np.asarray(x, dtype=float)[..., None] * dilations)
        return samples @ mass

    def deriv(x: np.ndarray) -> np.ndarray:
        slopes = f.derivative(np.asarray(x, dtype=float)[..., None] * dilations)
        return (slopes * dilations) @ mass

    return ScalarFn(
        func=func,
        label=f"{f.label}[eps={eps:g}]",
        flags=f.flags,
        deriv=deriv,
    )


__all__ = [
    "ConjugateDirection",
    "SearchConfig",
    "ConjugateFn",
    "hat",
    "check",
    "conjugate",
    "conjugate_table",
    "mollify",
    "mollifier_rule",
]
