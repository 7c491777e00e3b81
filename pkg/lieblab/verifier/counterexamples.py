from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from ..common.errors import InvalidInput
from ..lieb.maps import PosLinMap, compression_map
from ..linalg.matrices import PosDefMatrix, pd_power

logger = logging.getLogger(__name__)

CROSS_CHECK_ATOL = 1e-9
HALF_PROJECTION = np.array([[0.5, 0.5], [0.5, 0.5]])


class CompressionPair(NamedTuple):
    lhs: float
    rhs: float
    convexity_violated: bool
    direct_lhs: float
    direct_rhs: float

    @property
    def consistent(self) -> bool:
        return (
            abs(self.lhs - self.direct_lhs) <= CROSS_CHECK_ATOL * max(1.0, abs(self.lhs))
            and abs(self.rhs - self.direct_rhs) <= CROSS_CHECK_ATOL * max(1.0, abs(self.rhs))
        )


def _compressed_trace(phi: PosLinMap, a: np.ndarray, p: float, s: float) -> float:
    """``Tr Phi(A^-p)^(-s/p)``."""
    image = phi(pd_power(a, -p))
    return float(np.sum(np.linalg.eigvalsh(image) ** (-s / p)))


def remark_4_6(t: float, p: float, s: float) -> CompressionPair:
    """Compression counterexample to convexity of ``A -> Tr Phi(A^-p)^(-s/p)``.

    With ``A1 = diag(1, t)``, ``A2 = diag(t, 1)`` and ``Phi`` the compression
    by ``[[.5, .5], [.5, .5]]``, the midpoint value is ``((1+t)/2)^s`` and both
    endpoints give ``((1+t^-p)/2)^(-s/p)``.
    """
    if not (t > 0 and p > 0 and s > 0):
        raise InvalidInput(f"t, p, s must be > 0; got t={t}, p={p}, s={s}")
    lhs = ((1.0 + t) / 2.0) ** s
    rhs = ((1.0 + t ** (-p)) / 2.0) ** (-s / p)

    phi = compression_map(HALF_PROJECTION, reduced=True)
    first = PosDefMatrix.from_array(np.diag([1.0, t]))
    second = PosDefMatrix.from_array(np.diag([t, 1.0]))
    middle = (first.entries + second.entries) / 2.0
    direct_lhs = _compressed_trace(phi, middle, p, s)
    direct_rhs = (
        _compressed_trace(phi, first.entries, p, s)
        + _compressed_trace(phi, second.entries, p, s)
    ) / 2.0

    pair = CompressionPair(lhs, rhs, bool(lhs > rhs), direct_lhs, direct_rhs)
    logger.debug(
        f"compression pair t={t:g} p={p:g} s={s:g}: lhs={lhs:.12g} rhs={rhs:.12g} "
        f"direct=({direct_lhs:.12g}, {direct_rhs:.12g})"
    )
    if not pair.consistent:
        logger.warning(
            f"closed forms and direct evaluation disagree at t={t:g}, p={p:g}, s={s:g}"
        )
    return pair


__all__ = ["CompressionPair", "remark_4_6", "CROSS_CHECK_ATOL"]
