from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, Callable, Dict, Sequence, Union

import numpy as np

from ..common.errors import InvalidInput

if TYPE_CHECKING:
    from ..functions.scalar import ScalarFn

logger = logging.getLogger(__name__)

HERMITIAN_ATOL = 1e-12
PD_FLOOR = 1e-10
UNITARY_ATOL = 1e-10
DEFAULT_COND_CAP = 100.0

Seed = Union[int, Sequence[int], np.random.SeedSequence, np.random.Generator]
MatrixLike = Union["HermMatrix", "PosDefMatrix", np.ndarray]


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def as_array(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, PosDefMatrix):
        return matrix.base.entries
    if isinstance(matrix, HermMatrix):
        return matrix.entries
    return np.asarray(matrix, dtype=complex)


def hermitian_part(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=complex)
    return 0.5 * (arr + arr.conj().T)


@dataclass(frozen=True, eq=False)
class HermMatrix:
    """Dense complex Hermitian matrix with read-only entries."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InvalidInput(f"Expected a non-empty square matrix, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("Matrix has non-finite entries")
        skew = float(np.max(np.abs(arr - arr.conj().T)))
        if skew > HERMITIAN_ATOL:
            raise InvalidInput(f"Matrix is not Hermitian: max |X - X*| = {skew:.3e}")
        arr = hermitian_part(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def symmetrized(cls, arr: np.ndarray) -> "HermMatrix":
        """Wrap a computed matrix, discarding its rounding-level skew part."""
        return cls(hermitian_part(arr))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def __add__(self, other: "HermMatrix") -> "HermMatrix":
        return HermMatrix.symmetrized(self.entries + as_array(other))

    def __sub__(self, other: "HermMatrix") -> "HermMatrix":
        return HermMatrix.symmetrized(self.entries - as_array(other))

    def scaled(self, factor: float) -> "HermMatrix":
        return HermMatrix.symmetrized(float(factor) * self.entries)


@dataclass(frozen=True, eq=False)
class SpectralDecomp:
    eigenvalues: np.ndarray
    unitary: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.eigenvalues, dtype=float)
        unitary = np.array(self.unitary, dtype=complex)
        if np.any(np.diff(values) < 0):
            raise InvalidInput("Eigenvalues must be sorted ascending")
        defect = np.max(np.abs(unitary @ unitary.conj().T - np.eye(values.size)))
        if defect > UNITARY_ATOL:
            raise InvalidInput(f"Eigenvector matrix is not unitary ({defect:.3e})")
        values.setflags(write=False)
        unitary.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "unitary", unitary)

    def reconstruct(self, values: np.ndarray | None = None) -> np.ndarray:
        diag = self.eigenvalues if values is None else np.asarray(values)
        return hermitian_part((self.unitary * diag) @ self.unitary.conj().T)


def eig_herm(matrix: MatrixLike) -> SpectralDecomp:
    if isinstance(matrix, PosDefMatrix):
        return matrix.eig
    herm = matrix if isinstance(matrix, HermMatrix) else HermMatrix(matrix)
    values, vectors = np.linalg.eigh(herm.entries)
    return SpectralDecomp(eigenvalues=values, unitary=vectors)


@dataclass(frozen=True, eq=False)
class PosDefMatrix:
    """Hermitian matrix whose smallest eigenvalue exceeds ``PD_FLOOR``."""

    base: HermMatrix
    eig: SpectralDecomp = field(init=False, repr=False)

    def __post_init__(self) -> None:
        decomp = eig_herm(self.base)
        smallest = float(decomp.eigenvalues[0])
        if smallest <= PD_FLOOR:
            raise InvalidInput(
                f"Matrix is not positive definite: smallest eigenvalue {smallest:.3e}"
            )
        object.__setattr__(self, "eig", decomp)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "PosDefMatrix":
        return cls(HermMatrix.symmetrized(arr))

    @property
    def entries(self) -> np.ndarray:
        return self.base.entries

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eig.eigenvalues

    def trace(self) -> float:
        return self.base.trace()


def spectral_apply(arr: np.ndarray, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Functional calculus on a raw Hermitian array."""
    values, vectors = np.linalg.eigh(hermitian_part(arr))
    mapped = np.asarray(func(values), dtype=float)
    return hermitian_part((vectors * mapped) @ vectors.conj().T)


def pd_power(arr: np.ndarray, p: float) -> np.ndarray:
    values, vectors = np.linalg.eigh(hermitian_part(arr))
    if values[0] <= PD_FLOOR:
        raise InvalidInput(
            f"Power {p} needs a positive definite argument (lambda_min={values[0]:.3e})"
        )
    return hermitian_part((vectors * values**p) @ vectors.conj().T)


def pd_eigvals(arr: np.ndarray) -> np.ndarray:
    values = np.linalg.eigvalsh(hermitian_part(arr))
    if values[0] <= PD_FLOOR:
        raise InvalidInput(f"Matrix is not positive definite (lambda_min={values[0]:.3e})")
    return values


def apply_fn(matrix: Union[PosDefMatrix, HermMatrix], f: "ScalarFn") -> HermMatrix:
    """Return ``U diag(f(lambda)) U*``; ``f`` raises DomainError off its domain."""
    decomp = eig_herm(matrix)
    values = np.asarray(f(decomp.eigenvalues), dtype=float)
    return HermMatrix.symmetrized(decomp.reconstruct(values))


def mat_power(matrix: PosDefMatrix, p: float) -> PosDefMatrix:
    if not isinstance(matrix, PosDefMatrix):
        matrix = PosDefMatrix(matrix if isinstance(matrix, HermMatrix) else HermMatrix(matrix))
    if p == 0:
        return PosDefMatrix.from_array(np.eye(matrix.dim))
    if p == 1:
        return matrix
    return PosDefMatrix.from_array(matrix.eig.reconstruct(matrix.eigenvalues**p))


def mat_exp_herm(matrix: MatrixLike) -> PosDefMatrix:
    return PosDefMatrix.from_array(spectral_apply(as_array(matrix), np.exp))


def mat_log(matrix: PosDefMatrix) -> HermMatrix:
    return HermMatrix.symmetrized(matrix.eig.reconstruct(np.log(matrix.eigenvalues)))


def random_posdef(
    dim: int, rng_seed: Seed, cond_cap: float = DEFAULT_COND_CAP
) -> PosDefMatrix:
    """Draw ``G G*`` and squeeze its spectrum into ``[cond_cap**-0.5, cond_cap**0.5]``."""
    if dim < 1:
        raise InvalidInput(f"dim must be positive, got {dim}")
    if cond_cap < 1:
        raise InvalidInput(f"cond_cap must be >= 1, got {cond_cap}")
    rng = make_rng(rng_seed)
    gauss = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    values, vectors = np.linalg.eigh(gauss @ gauss.conj().T)
    log_values = np.log(np.maximum(values, np.finfo(float).tiny))
    log_values -= log_values.mean()
    half_band = 0.5 * np.log(cond_cap)
    shift = rng.uniform(-0.5 * half_band, 0.5 * half_band)
    log_values = np.clip(log_values + shift, -half_band, half_band)
    return PosDefMatrix.from_array((vectors * np.exp(log_values)) @ vectors.conj().T)


def random_unitary(dim: int, rng_seed: Seed) -> np.ndarray:
    rng = make_rng(rng_seed)
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gauss)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(dim: int, rng_seed: Seed, scale: float = 1.0) -> HermMatrix:
    rng = make_rng(rng_seed)
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermMatrix.symmetrized(scale * 0.5 * (gauss + gauss.conj().T))


def random_invertible(
    dim: int, rng_seed: Seed, cond_cap: float = DEFAULT_COND_CAP
) -> np.ndarray:
    rng = make_rng(rng_seed)
    left = random_unitary(dim, rng)
    right = random_unitary(dim, rng)
    half_band = 0.5 * np.log(max(cond_cap, 1.0))
    singular = np.exp(rng.uniform(-half_band, half_band, size=dim))
    return (left * singular) @ right


def loewner_gap(upper: MatrixLike, lower: MatrixLike) -> float:
    """Smallest eigenvalue of ``upper - lower``; non-negative iff ``lower <= upper``."""
    return float(np.linalg.eigvalsh(hermitian_part(as_array(upper) - as_array(lower)))[0])


def max_abs_diff(left: MatrixLike, right: MatrixLike) -> float:
    return float(np.max(np.abs(as_array(left) - as_array(right))))


def rel_frobenius(left: MatrixLike, right: MatrixLike) -> float:
    reference = np.linalg.norm(as_array(right))
    diff = np.linalg.norm(as_array(left) - as_array(right))
    return float(diff / reference) if reference > 0 else float(diff)


def matrix_to_record(matrix: MatrixLike) -> Dict[str, Any]:
    arr = as_array(matrix)
    return {
        "dim": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "re": np.real(arr).tolist(),
        "im": np.imag(arr).tolist(),
    }


def matrix_from_record(record: Dict[str, Any]) -> np.ndarray:
    from ..models import MatrixFile

    parsed = MatrixFile.model_validate(record)
    return np.asarray(parsed.re, dtype=float) + 1j * np.asarray(parsed.im, dtype=float)


def load_matrix(path: Union[str, Path]) -> HermMatrix:
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        record = json.load(handle)
    logger.debug(f"Loaded matrix fixture from {path}")
    return HermMatrix(matrix_from_record(record))


def dump_matrix(matrix: MatrixLike, path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        json.dump(matrix_to_record(matrix), handle, indent=2)


__all__ = [
    "HERMITIAN_ATOL",
    "PD_FLOOR",
    "DEFAULT_COND_CAP",
    "HermMatrix",
    "PosDefMatrix",
    "SpectralDecomp",
    "eig_herm",
    "apply_fn",
    "mat_power",
    "mat_exp_herm",
    "mat_log",
    "random_posdef",
    "random_unitary",
    "random_hermitian",
    "random_invertible",
    "loewner_gap",
    "max_abs_diff",
    "rel_frobenius",
    "matrix_to_record",
    "matrix_from_record",
    "load_matrix",
    "dump_matrix",
    "make_rng",
    "as_array",
    "hermitian_part",
    "spectral_apply",
    "pd_power",
    "pd_eigvals",
]
