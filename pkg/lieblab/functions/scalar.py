from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from ..common.errors import DomainError, InvalidInput

logger = logging.getLogger(__name__)

AUDIT_GRID_LO = 1e-3
AUDIT_GRID_HI = 1e3
AUDIT_GRID_SIZE = 201
SCREEN_TOL = 1e-8
DERIVATIVE_STEP = 1e-5

ArrayFn = Callable[[np.ndarray], np.ndarray]


class FnFlag(str, Enum):
    """Declared shape classes.

    ``OPERATOR_MONOTONE`` together with ``NON_INCREASING`` means operator
    monotone decreasing.
    """

    NON_DECREASING = "non_decreasing"
    NON_INCREASING = "non_increasing"
    CONVEX = "convex"
    CONCAVE = "concave"
    OPERATOR_MONOTONE = "operator_monotone_by_construction"


SHAPE_FLAGS = (
    FnFlag.NON_DECREASING,
    FnFlag.NON_INCREASING,
    FnFlag.CONVEX,
    FnFlag.CONCAVE,
)
CONSTANT_FLAGS = frozenset(FnFlag)


def _freeze_flags(flags: Iterable[Union[FnFlag, str]]) -> FrozenSet[FnFlag]:
    return frozenset(FnFlag(flag) for flag in flags)


@dataclass(frozen=True, eq=False)
class ScalarFn:
    """Real function on (0, inf), vectorized over numpy arrays."""

    func: ArrayFn
    label: str
    flags: FrozenSet[FnFlag] = frozenset()
    deriv: Optional[ArrayFn] = None
    descriptor: Optional[Dict[str, Any]] = field(default=None, repr=False)
    origin: str = field(default="catalogue", repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "flags", _freeze_flags(self.flags))

    def __call__(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        arr = np.asarray(x, dtype=float)
        return _checked(self.func, arr, self.label, scalar=np.ndim(x) == 0)

    def eval(self, x: float) -> float:
        return float(self(x))

    def has(self, *flags: FnFlag) -> bool:
        return all(flag in self.flags for flag in flags)

    def derivative(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        arr = np.asarray(x, dtype=float)
        if self.deriv is not None:
            return _checked(self.deriv, arr, f"{self.label}'", scalar=np.ndim(x) == 0)
        step = DERIVATIVE_STEP * arr
        slope = (self(arr + step) - self(arr - step)) / (2.0 * step)
        return float(slope) if np.ndim(x) == 0 else slope

    def compose_power(self, gamma: float) -> "ScalarFn":
        """Return ``x -> f(x**gamma)``."""
        gamma = float(gamma)
        if gamma == 1.0:
            return self
        if self.descriptor is not None:
            descriptor = dict(self.descriptor)
            descriptor["power"] = float(descriptor.get("power", 1.0)) * gamma
            return build_function(descriptor)
        return _compose_generic(self, gamma)


def _checked(func: ArrayFn, arr: np.ndarray, label: str, scalar: bool):
    if np.any(arr <= 0):
        raise DomainError(f"{label} is only defined on (0, inf); got {arr[arr <= 0][:3]}")
    with np.errstate(all="ignore"):
        out = np.asarray(func(arr), dtype=float) + np.zeros_like(arr)
    finite = np.isfinite(out)
    if not np.all(finite):
        raise DomainError(f"{label} is not finite at x={arr[~finite][:3]}")
    return float(out) if scalar else out


def _composed_flags(flags: FrozenSet[FnFlag], exponent: float) -> FrozenSet[FnFlag]:
    if exponent == 0:
        return CONSTANT_FLAGS
    up = FnFlag.NON_DECREASING in flags
    down = FnFlag.NON_INCREASING in flags
    convex = FnFlag.CONVEX in flags
    concave = FnFlag.CONCAVE in flags
    om = FnFlag.OPERATOR_MONOTONE in flags
    out = set()
    if up:
        out.add(FnFlag.NON_DECREASING if exponent > 0 else FnFlag.NON_INCREASING)
    if down:
        out.add(FnFlag.NON_INCREASING if exponent > 0 else FnFlag.NON_DECREASING)
    if om and (0 < abs(exponent) <= 1) and (up or down):
        out.add(FnFlag.OPERATOR_MONOTONE)
        # OM increasing composed with an OM-decreasing power is OM decreasing.
        ends_up = up == (exponent > 0)
        out.add(FnFlag.CONCAVE if ends_up else FnFlag.CONVEX)
    if up and convex and (exponent >= 1 or exponent < 0):
        out.add(FnFlag.CONVEX)
    if up and concave and 0 < exponent <= 1:
        out.add(FnFlag.CONCAVE)
    if down and convex and 0 < exponent <= 1:
        out.add(FnFlag.CONVEX)
    return frozenset(out)


def _compose_generic(base: ScalarFn, gamma: float) -> ScalarFn:
    inner = base.func
    outer_deriv = base.deriv

    def composed(x: np.ndarray) -> np.ndarray:
        return inner(x**gamma)

    deriv = None
    if outer_deriv is not None:

        def deriv(x: np.ndarray) -> np.ndarray:
            return outer_deriv(x**gamma) * gamma * x ** (gamma - 1.0)

    return ScalarFn(
        func=composed,
        label=f"{base.label}(x^{gamma:g})",
        flags=_composed_flags(base.flags, gamma),
        deriv=deriv,
    )


def _power_flags(s: float) -> FrozenSet[FnFlag]:
    # exponents such as u/(p+q)*(p+q) land within a few ulps of 1
    s = round(s, 12)
    if s == 0:
        return CONSTANT_FLAGS
    flags = {FnFlag.NON_DECREASING if s > 0 else FnFlag.NON_INCREASING}
    if s >= 1 or s < 0:
        flags.add(FnFlag.CONVEX)
    if 0 < s <= 1:
        flags.add(FnFlag.CONCAVE)
    if -1 <= s <= 1:
        flags.add(FnFlag.OPERATOR_MONOTONE)
    return frozenset(flags)


def make_power(s: float) -> ScalarFn:
    s = float(s)
    return ScalarFn(
        func=lambda x: x**s,
        label=f"x^{s:g}",
        flags=_power_flags(s),
        deriv=lambda x: s * x ** (s - 1.0),
        descriptor={"kind": "power", "params": {"s": s}, "power": 1.0},
    )


def make_log(scale: float = 1.0) -> ScalarFn:
    scale = float(scale)
    if scale == 0:
        flags = CONSTANT_FLAGS
    elif scale > 0:
        flags = frozenset(
            {FnFlag.NON_DECREASING, FnFlag.CONCAVE, FnFlag.OPERATOR_MONOTONE}
        )
    else:
        flags = frozenset(
            {FnFlag.NON_INCREASING, FnFlag.CONVEX, FnFlag.OPERATOR_MONOTONE}
        )
    label = "log" if scale == 1.0 else f"{scale:g}*log"
    return ScalarFn(
        func=lambda x: scale * np.log(x),
        label=label,
        flags=flags,
        deriv=lambda x: scale / x,
        descriptor={"kind": "log", "params": {}, "power": scale},
    )


def make_affine(a: float, b: float) -> ScalarFn:
    a, b = float(a), float(b)
    flags = {FnFlag.CONVEX, FnFlag.CONCAVE, FnFlag.OPERATOR_MONOTONE}
    if a >= 0:
        flags.add(FnFlag.NON_DECREASING)
    if a <= 0:
        flags.add(FnFlag.NON_INCREASING)
    return ScalarFn(
        func=lambda x: a * x + b,
        label=f"{a:g}*x+{b:g}",
        flags=frozenset(flags),
        deriv=lambda x: np.full_like(x, a),
        descriptor={"kind": "affine", "params": {"a": a, "b": b}, "power": 1.0},
    )


@dataclass(frozen=True, eq=False)
class PickIntegralFn(ScalarFn):
    """``h1 + b*x + sum w*(x-1)(1+lam)/(x+lam)`` over finitely many atoms."""

    h1: float = 0.0
    b: float = 0.0
    atoms: Tuple[Tuple[float, float], ...] = ()


def make_pick_integral(
    h1: float, b: float, atoms: Sequence[Sequence[float]]
) -> PickIntegralFn:
    h1, b = float(h1), float(b)
    pairs = tuple((float(lam), float(weight)) for lam, weight in atoms)
    if b < 0:
        raise InvalidInput(f"Pick linear coefficient must be >= 0, got {b}")
    for lam, weight in pairs:
        if lam < 0 or weight < 0:
            raise InvalidInput(
                f"Pick atoms need lambda >= 0 and weight >= 0, got ({lam}, {weight})"
            )

    def func(x: np.ndarray) -> np.ndarray:
        total = h1 + b * x
        for lam, weight in pairs:
            total = total + weight * (x - 1.0) * (1.0 + lam) / (x + lam)
        return total

    def deriv(x: np.ndarray) -> np.ndarray:
        total = np.full_like(x, b)
        for lam, weight in pairs:
            total = total + weight * (1.0 + lam) ** 2 / (x + lam) ** 2
        return total

    flags = {FnFlag.NON_DECREASING, FnFlag.CONCAVE, FnFlag.OPERATOR_MONOTONE}
    if not any(weight > 0 for _, weight in pairs):
        flags.add(FnFlag.CONVEX)
    atom_label = ",".join(f"({lam:g},{weight:g})" for lam, weight in pairs)
    return PickIntegralFn(
        func=func,
        label=f"pick[h1={h1:g},b={b:g},atoms={atom_label}]",
        flags=frozenset(flags),
        deriv=deriv,
        descriptor={
            "kind": "pick",
            "params": {"h1": h1, "b": b, "atoms": [list(pair) for pair in pairs]},
            "power": 1.0,
        },
        h1=h1,
        b=b,
        atoms=pairs,
    )


class A4Variant(str, Enum):
    SHIFTED_POWER = "shifted_power"
    POWER_EXCESS = "power_excess"
    CONVEX_SPLICED = "convex_spliced"
    CONCAVE_CAPPED = "concave_capped"
    CONCAVE_SPLICED = "concave_spliced"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidInput(message)


def _spliced(s1: float, s2: float, alpha: float, beta: float) -> Tuple[ArrayFn, ArrayFn]:
    def func(x: np.ndarray) -> np.ndarray:
        right = beta * (x**s2 - alpha**s2) + alpha**s1
        return np.where(x <= alpha, x**s1, right)

    def deriv(x: np.ndarray) -> np.ndarray:
        return np.where(x <= alpha, s1 * x ** (s1 - 1.0), beta * s2 * x ** (s2 - 1.0))

    return func, deriv


def make_example_a4(
    variant: Union[A4Variant, str], params: Mapping[str, float]
) -> ScalarFn:
    """Piecewise families whose power compositions stay convex or concave.

    ``params`` may carry ``r``; when present the exponent bounds tied to ``r``
    are enforced as well (``s >= 1/(1-r)`` for the convex families, ``s <=
    1/(1+r)`` for the concave ones).
    """
    variant = A4Variant(variant)
    p = {key: float(value) for key, value in params.items()}
    r = p.get("r")
    alpha = p.get("alpha", 1.0)
    _require(alpha > 0, f"alpha must be > 0, got {alpha}")
    convex_family = variant in (
        A4Variant.SHIFTED_POWER,
        A4Variant.POWER_EXCESS,
        A4Variant.CONVEX_SPLICED,
    )
    if r is not None:
        if convex_family:
            _require(0 < r < 1, f"r must lie in (0, 1) for {variant.value}, got {r}")
        else:
            _require(r > 0, f"r must be > 0 for {variant.value}, got {r}")
    low = 1.0 / (1.0 - r) if convex_family and r is not None else 1.0

    if variant in (A4Variant.SHIFTED_POWER, A4Variant.POWER_EXCESS):
        s = p.get("s", 2.0)
        _require(s >= low, f"s must be >= {low:g}, got {s}")
        if variant is A4Variant.SHIFTED_POWER:

            def func(x: np.ndarray) -> np.ndarray:
                return np.maximum(x - alpha, 0.0) ** s

            def deriv(x: np.ndarray) -> np.ndarray:
                return np.where(x > alpha, s * np.maximum(x - alpha, 0.0) ** (s - 1.0), 0.0)

            label = f"(x-{alpha:g})_+^{s:g}"
        else:

            def func(x: np.ndarray) -> np.ndarray:
                return np.maximum(x**s - alpha**s, 0.0)

            def deriv(x: np.ndarray) -> np.ndarray:
                return np.where(x > alpha, s * x ** (s - 1.0), 0.0)

            label = f"(x^{s:g}-{alpha:g}^{s:g})_+"
        flags = {FnFlag.NON_DECREASING, FnFlag.CONVEX}

    elif variant is A4Variant.CONVEX_SPLICED:
        s1, s2 = p.get("s1", 2.0), p.get("s2", 2.0)
        _require(min(s1, s2) >= low, f"s1, s2 must be >= {low:g}, got {s1}, {s2}")
        floor = (s1 / s2) * alpha ** (s1 - s2)
        beta = p.get("beta", floor)
        _require(beta >= floor, f"beta must be >= {floor:g}, got {beta}")
        func, deriv = _spliced(s1, s2, alpha, beta)
        label = f"splice[x^{s1:g}|{beta:g}(x^{s2:g}-a^{s2:g})+a^{s1:g}, a={alpha:g}]"
        flags = {FnFlag.NON_DECREASING, FnFlag.CONVEX}

    elif variant is A4Variant.CONCAVE_CAPPED:
        s = p.get("s", 0.5)
        high = 1.0 if r is None else 1.0 / (1.0 + r)
        _require(0 < s < 1 and s <= high, f"s must lie in (0, {high:g}] and < 1, got {s}")
        knot = (s / alpha) ** (1.0 / (1.0 - s))
        cap = (1.0 - s) * (s / alpha) ** (s / (1.0 - s))

        def func(x: np.ndarray) -> np.ndarray:
            return np.where(x <= knot, x**s - alpha * x, cap)

        def deriv(x: np.ndarray) -> np.ndarray:
            return np.where(x <= knot, s * x ** (s - 1.0) - alpha, 0.0)

        label = f"cap[x^{s:g}-{alpha:g}x, knot={knot:g}]"
        flags = {FnFlag.NON_DECREASING, FnFlag.CONCAVE}

    else:
        s1, s2 = p.get("s1", 0.5), p.get("s2", 0.5)
        high = 1.0 if r is None else 1.0 / (1.0 + r)
        _require(
            0 < s1 <= high and 0 < s2 <= high,
            f"s1, s2 must lie in (0, {high:g}], got {s1}, {s2}",
        )
        ceiling = (s1 / s2) * alpha ** (s1 - s2)
        beta = p.get("beta", ceiling)
        _require(0 < beta <= ceiling, f"beta must lie in (0, {ceiling:g}], got {beta}")
        func, deriv = _spliced(s1, s2, alpha, beta)
        label = f"splice[x^{s1:g}|{beta:g}(x^{s2:g}-a^{s2:g})+a^{s1:g}, a={alpha:g}]"
        flags = {FnFlag.NON_DECREASING, FnFlag.CONCAVE}

    return ScalarFn(
        func=func,
        label=label,
        flags=frozenset(flags),
        deriv=deriv,
        descriptor={
            "kind": "a4",
            "params": {"variant": variant.value, **p},
            "power": 1.0,
        },
    )


@dataclass(frozen=True)
class ClassReport:
    """Sampled shape screen of ``x -> f(x**exponent)``.

    Margins are the most negative normalized increment (or slope change) in
    the direction each flag requires; a flag is granted when its margin is
    above ``-tol``.
    """

    flags: FrozenSet[FnFlag]
    margins: Dict[FnFlag, float]
    exponent: float
    tol: float

    @property
    def worst_margin(self) -> float:
        return min(self.margins.values())

    def missing(self, required: Iterable[FnFlag]) -> List[FnFlag]:
        return [flag for flag in required if flag in SHAPE_FLAGS and flag not in self.flags]


def standard_audit_grid() -> np.ndarray:
    return np.geomspace(AUDIT_GRID_LO, AUDIT_GRID_HI, AUDIT_GRID_SIZE)


def classify_sampled(
    f: Union[ScalarFn, ArrayFn],
    grid: Optional[np.ndarray] = None,
    gamma: float = 1.0,
    tol: float = SCREEN_TOL,
) -> ClassReport:
    grid = standard_audit_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 5:
        raise InvalidInput("classification grid needs at least 5 points")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InvalidInput("classification grid must be strictly increasing in (0, inf)")

    points = grid**gamma
    if isinstance(f, ScalarFn):
        values = np.asarray(f(points), dtype=float)
    else:
        values = _checked(f, points, getattr(f, "__name__", "f"), scalar=False)

    rises = np.diff(values) / (1.0 + np.abs(values[:-1]) + np.abs(values[1:]))
    slopes = np.diff(values) / np.diff(grid)
    bends = np.diff(slopes) / (1.0 + np.abs(slopes[:-1]) + np.abs(slopes[1:]))

    margins = {
        FnFlag.NON_DECREASING: float(rises.min()),
        FnFlag.NON_INCREASING: float((-rises).min()),
        FnFlag.CONVEX: float(bends.min()),
        FnFlag.CONCAVE: float((-bends).min()),
    }
    flags = frozenset(flag for flag, margin in margins.items() if margin >= -tol)
    report = ClassReport(flags=flags, margins=margins, exponent=gamma, tol=tol)
    logger.debug(
        f"classify_sampled gamma={gamma:g}: flags={sorted(f.value for f in flags)} "
        f"worst_margin={report.worst_margin:.3e}"
    )
    return report


def screen_flags(
    f: ScalarFn,
    required: Iterable[FnFlag],
    gamma: float = 1.0,
    grid: Optional[np.ndarray] = None,
) -> List[FnFlag]:
    """Return the required shape flags that the sampled screen does not confirm."""
    report = classify_sampled(f, grid, gamma)
    missing = report.missing(required)
    if missing:
        logger.debug(
            f"{f.label} fails screening for {[flag.value for flag in missing]} "
            f"at gamma={gamma:g}"
        )
    return missing


def build_function(descriptor: Union[Mapping[str, Any], Any]) -> ScalarFn:
    """Build a ScalarFn from ``{"kind": ..., "params": {...}, "power": e}``.

    ``power`` composes the base with ``x**e``.
    """
    from ..models import FunctionDescriptor

    if isinstance(descriptor, FunctionDescriptor):
        parsed = descriptor
    else:
        parsed = FunctionDescriptor.model_validate(dict(descriptor))
    params = dict(parsed.params)
    power = float(parsed.power)

    if parsed.kind == "power":
        return make_power(float(params.get("s", 1.0)) * power)
    if parsed.kind == "log":
        return make_log(power)
    if parsed.kind == "affine":
        base = make_affine(params.get("a", 1.0), params.get("b", 0.0))
    elif parsed.kind == "pick":
        base = make_pick_integral(
            params.get("h1", 0.0), params.get("b", 0.0), params.get("atoms", [])
        )
    elif parsed.kind == "a4":
        variant = params.pop("variant", None)
        if variant is None:
            raise InvalidInput("a4 descriptor needs params.variant")
        base = make_example_a4(variant, params)
    else:
        from .conjugate import conjugate

        source = params.get("source")
        if source is None:
            raise InvalidInput("conjugate descriptor needs params.source")
        base = conjugate(build_function(source), params.get("direction", "hat"))

    if abs(power - 1.0) <= 1e-12:
        return base
    composed = _compose_generic(base, power)
    return ScalarFn(
        func=composed.func,
        label=composed.label,
        flags=composed.flags,
        deriv=composed.deriv,
        descriptor=parsed.model_dump(),
    )


__all__ = [
    "FnFlag",
    "ScalarFn",
    "PickIntegralFn",
    "A4Variant",
    "ClassReport",
    "make_power",
    "make_log",
    "make_affine",
    "make_pick_integral",
    "make_example_a4",
    "classify_sampled",
    "screen_flags",
    "standard_audit_grid",
    "build_function",
    "SCREEN_TOL",
]
