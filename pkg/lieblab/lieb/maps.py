from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Mapping, Sequence, Tuple, Union

import numpy as np

from ..common.errors import InvalidInput
from ..linalg.matrices import (
    PD_FLOOR,
    HermMatrix,
    MatrixLike,
    Seed,
    as_array,
    hermitian_part,
    make_rng,
    matrix_from_record,
    pd_power,
    random_invertible,
)

logger = logging.getLogger(__name__)

UNITAL_ATOL = 1e-10
MAX_RANDOM_RANK = 2


@dataclass(frozen=True, eq=False)
class PosLinMap:
    """Completely positive map ``X -> sum K_i X K_i*`` with ``K_i`` of shape (out, in)."""

    kraus: Tuple[np.ndarray, ...]
    label: str = "kraus"
    strict: bool = True
    unital: bool = False

    def __post_init__(self) -> None:
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise InvalidInput("A positive map needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise InvalidInput(
                f"Kraus operators must share one 2-d shape, got {[k.shape for k in ops]}"
            )
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        image = self._image(np.eye(self.in_dim))
        if self.strict:
            smallest = float(np.linalg.eigvalsh(image)[0])
            if smallest <= PD_FLOOR:
                raise InvalidInput(
                    f"{self.label} is not strictly positive: "
                    f"lambda_min(Phi(I)) = {smallest:.3e}"
                )
        if self.unital:
            if self.in_dim != self.out_dim:
                raise InvalidInput(f"{self.label} cannot be unital across sizes")
            defect = float(np.max(np.abs(image - np.eye(self.out_dim))))
            if defect > UNITAL_ATOL:
                raise InvalidInput(f"{self.label} is not unital: |Phi(I)-I| = {defect:.3e}")

    @property
    def in_dim(self) -> int:
        return int(self.kraus[0].shape[1])

    @property
    def out_dim(self) -> int:
        return int(self.kraus[0].shape[0])

    @property
    def rank(self) -> int:
        return len(self.kraus)

    def _image(self, arr: np.ndarray) -> np.ndarray:
        total = np.zeros((self.out_dim, self.out_dim), dtype=complex)
        for k in self.kraus:
            total += k @ arr @ k.conj().T
        return hermitian_part(total)

    def __call__(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr, dtype=complex)
        if arr.shape != (self.in_dim, self.in_dim):
            raise InvalidInput(
                f"{self.label} acts on {self.in_dim}x{self.in_dim}, got {arr.shape}"
            )
        return self._image(arr)

    def image_of_identity(self) -> np.ndarray:
        return self._image(np.eye(self.in_dim))


def apply_map(phi: PosLinMap, matrix: MatrixLike) -> HermMatrix:
    return HermMatrix.symmetrized(phi(as_array(matrix)))


def identity_map(dim: int) -> PosLinMap:
    return PosLinMap((np.eye(dim),), label=f"id[{dim}]", unital=True)


def congruence_map(x: np.ndarray) -> PosLinMap:
    """``A -> X* A X``."""
    x = np.asarray(x, dtype=complex)
    return PosLinMap((x.conj().T,), label="congruence")


def compression_map(e: np.ndarray, reduced: bool = True) -> PosLinMap:
    """Compression ``A -> E A E`` by a Hermitian ``E``.

    With ``reduced=True`` a rank-one projection is realized through its unit
    range vector ``v`` as ``A -> v* A v`` on 1x1 outputs, which keeps the map
    strictly positive; otherwise the full (non-strict) map is returned.
    """
    e = np.asarray(e, dtype=complex)
    if not reduced:
        return PosLinMap((e,), label="compression", strict=False)
    values, vectors = np.linalg.eigh(hermitian_part(e))
    keep = values > PD_FLOOR
    if not np.any(keep):
        raise InvalidInput("compression needs a non-zero E")
    rows = (vectors[:, keep] * np.sqrt(values[keep])).conj().T
    return PosLinMap((rows,), label="compression")


def pinching_map(blocks: Sequence[int]) -> PosLinMap:
    """Block-diagonal pinching with the given block sizes."""
    sizes = [int(size) for size in blocks]
    if not sizes or any(size < 1 for size in sizes):
        raise InvalidInput(f"pinching needs positive block sizes, got {blocks}")
    dim = sum(sizes)
    ops = []
    start = 0
    for size in sizes:
        proj = np.zeros((dim, dim))
        proj[start : start + size, start : start + size] = np.eye(size)
        ops.append(proj)
        start += size
    return PosLinMap(tuple(ops), label=f"pinching{sizes}", unital=True)


def random_kraus_map(
    in_dim: int,
    out_dim: int,
    rng_seed: Seed,
    rank: int = MAX_RANDOM_RANK,
) -> PosLinMap:
    """Random CP map of the given Kraus rank with ``Tr Phi(I) = out_dim``."""
    rng = make_rng(rng_seed)
    ops = [
        rng.standard_normal((out_dim, in_dim)) + 1j * rng.standard_normal((out_dim, in_dim))
        for _ in range(max(1, int(rank)))
    ]
    scale = np.sqrt(out_dim / np.real(sum(np.trace(k @ k.conj().T) for k in ops)))
    return PosLinMap(tuple(scale * k for k in ops), label=f"kraus[r={len(ops)}]")


def random_unital_map(dim: int, rng_seed: Seed, rank: int = MAX_RANDOM_RANK) -> PosLinMap:
    base = random_kraus_map(dim, dim, rng_seed, rank)
    fix = pd_power(base.image_of_identity(), -0.5)
    return PosLinMap(
        tuple(fix @ k for k in base.kraus), label=f"unital[r={base.rank}]", unital=True
    )


def random_congruence_map(dim: int, rng_seed: Seed, cond_cap: float = 100.0) -> PosLinMap:
    return congruence_map(random_invertible(dim, rng_seed, cond_cap))


def random_map(kind: str, dim: int, rng_seed: Seed, cond_cap: float = 100.0) -> PosLinMap:
    """Sampler used by suites: ``kraus``, ``identity``, ``congruence`` or ``unital``."""
    if kind == "identity":
        return identity_map(dim)
    if kind == "congruence":
        return random_congruence_map(dim, rng_seed, cond_cap)
    if kind == "unital":
        return random_unital_map(dim, rng_seed)
    if kind == "kraus":
        return random_kraus_map(dim, dim, rng_seed)
    raise InvalidInput(f"Unknown map kind {kind!r}")


def build_map(descriptor: Union[Mapping[str, Any], Any]) -> PosLinMap:
    from ..models import MapDescriptor

    parsed = (
        descriptor
        if isinstance(descriptor, MapDescriptor)
        else MapDescriptor.model_validate(dict(descriptor))
    )
    if parsed.kind == "identity":
        return identity_map(parsed.dim)
    if parsed.kind == "pinching":
        blocks = parsed.blocks or [1] * parsed.dim
        if sum(blocks) != parsed.dim:
            raise InvalidInput(f"pinching blocks {blocks} do not sum to dim {parsed.dim}")
        return pinching_map(blocks)
    if parsed.kind == "congruence":
        return congruence_map(matrix_from_record(parsed.matrix.model_dump()))
    if parsed.kind == "compression":
        return compression_map(
            matrix_from_record(parsed.matrix.model_dump()), reduced=parsed.strict
        )
    ops = tuple(matrix_from_record(k.model_dump()) for k in parsed.kraus)
    return PosLinMap(ops, strict=parsed.strict, unital=parsed.unital)


__all__ = [
    "PosLinMap",
    "apply_map",
    "identity_map",
    "congruence_map",
    "compression_map",
    "pinching_map",
    "random_kraus_map",
    "random_unital_map",
    "random_congruence_map",
    "random_map",
    "build_map",
]
