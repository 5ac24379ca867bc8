"""Complex block-diagonal matrix arithmetic and the ambient multi-matrix algebra.

The ambient object is a finite direct sum of full matrix blocks, realized as
block-diagonal N x N complex matrices.  Elements are stored dense even when
block-diagonal; desk-scale sizes make sparsity pointless.  All scalars are
double precision and tolerances default to 1e-10 absolute.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import BlockMismatch, ShapeMismatch, TraceNotFaithful

DEFAULT_TOL = 1e-10


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=complex))
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DimensionVector:
    """Ordered block sizes (n_1, ..., n_k) of a multi-matrix algebra."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims or any(n < 1 for n in dims):
            raise ValueError("block sizes must be a non-empty list of positive integers")
        object.__setattr__(self, "dims", dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    @property
    def ambient_size(self) -> int:
        """Total matrix size N = sum of block sizes."""
        return sum(self.dims)

    @property
    def linear_dim(self) -> int:
        """Linear dimension of the algebra, the sum of squared block sizes."""
        return sum(n * n for n in self.dims)

    @property
    def block_slices(self) -> list[slice]:
        offs = np.concatenate([[0], np.cumsum(self.dims)])
        return [slice(int(offs[j]), int(offs[j + 1])) for j in range(len(self.dims))]


@dataclass(frozen=True)
class AmbientAlgebra:
    """The multi-matrix algebra realized block-diagonally inside M_N."""

    dims: DimensionVector

    @classmethod
    def full(cls, n: int) -> "AmbientAlgebra":
        return cls(DimensionVector((n,)))

    @property
    def size(self) -> int:
        return self.dims.ambient_size

    @cached_property
    def block_mask(self) -> np.ndarray:
        mask = np.zeros((self.size, self.size), dtype=bool)
        for sl in self.dims.block_slices:
            mask[sl, sl] = True
        mask.setflags(write=False)
        return mask

    def off_block_mass(self, entries: np.ndarray) -> float:
        return float(np.max(np.abs(np.where(self.block_mask, 0.0, entries)), initial=0.0))

    def contains(self, entries: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        scale = max(1.0, float(np.max(np.abs(entries), initial=0.0)))
        return entries.shape == (self.size, self.size) and self.off_block_mass(entries) <= tol * scale

    def element(self, entries: np.ndarray, check: bool = True) -> "MatrixElement":
        entries = np.asarray(entries, dtype=complex)
        if entries.shape != (self.size, self.size):
            raise ShapeMismatch(f"expected {self.size}x{self.size}, got {entries.shape}")
        if check and not self.contains(entries):
            raise BlockMismatch("entries have support outside the block pattern")
        return MatrixElement(_freeze(entries), self)

    def identity(self) -> "MatrixElement":
        return self.element(np.eye(self.size))

    def matrix_unit(self, block: int, row: int, col: int) -> "MatrixElement":
        sl = self.dims.block_slices[block]
        m = np.zeros((self.size, self.size), dtype=complex)
        m[sl.start + row, sl.start + col] = 1.0
        return self.element(m)

    def blocks(self, entries: np.ndarray) -> list[np.ndarray]:
        return [entries[sl, sl] for sl in self.dims.block_slices]

    def random_element(self, rng: np.random.Generator, hermitian: bool = False) -> "MatrixElement":
        m = np.zeros((self.size, self.size), dtype=complex)
        for sl in self.dims.block_slices:
            n = sl.stop - sl.start
            blk = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            m[sl, sl] = 0.5 * (blk + blk.conj().T) if hermitian else blk
        return self.element(m)


@dataclass(frozen=True)
class MatrixElement:
    """A dense N x N complex matrix together with its home algebra."""

    entries: np.ndarray
    home: AmbientAlgebra

    def __post_init__(self):
        object.__setattr__(self, "entries", _freeze(self.entries))

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __repr__(self):
        return f"MatrixElement(size={self.size}, dims={self.home.dims.dims})"


class TraceFunctional:
    """A faithful positive tracial state stored as a density matrix.

    The common case is a block-weight trace: weight t_j on every minimal
    projection of block j, normalized so that sum_j n_j t_j = 1.  The density
    form also admits central non-uniform weights used by the minimal-index
    search.
    """

    def __init__(self, ambient: AmbientAlgebra, density: np.ndarray,
                 weights: tuple[float, ...] | None = None):
        density = np.asarray(density, dtype=complex)
        if density.shape != (ambient.size, ambient.size):
            raise ShapeMismatch("density has the wrong size")
        if np.max(np.abs(density - density.conj().T)) > 1e-12:
            raise ValueError("density must be Hermitian")
        eigs = np.linalg.eigvalsh(density)
        if eigs[0] <= 1e-14:
            raise TraceNotFaithful(f"density has eigenvalue {eigs[0]:.3e} <= 0")
        if abs(np.trace(density).real - 1.0) > 1e-10:
            raise ValueError("density must have unit trace (state normalization)")
        self.ambient = ambient
        self.density = _freeze(density)
        self.weights = None if weights is None else tuple(float(w) for w in weights)

    @classmethod
    def from_block_weights(cls, ambient: AmbientAlgebra, weights) -> "TraceFunctional":
        weights = tuple(float(w) for w in weights)
        if len(weights) != len(ambient.dims):
            raise BlockMismatch("one weight per block is required")
        if any(w <= 0 for w in weights):
            raise TraceNotFaithful("all block weights must be positive")
        total = sum(n * w for n, w in zip(ambient.dims, weights))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights are not normalized: sum n_j t_j = {total}")
        rho = np.zeros((ambient.size, ambient.size), dtype=complex)
        for w, sl in zip(weights, ambient.dims.block_slices):
            rho[sl, sl] = w * np.eye(sl.stop - sl.start)
        return cls(ambient, rho, weights)

    @classmethod
    def uniform(cls, ambient: AmbientAlgebra) -> "TraceFunctional":
        n = ambient.size
        return cls.from_block_weights(ambient, (1.0 / n,) * len(ambient.dims))

    @classmethod
    def markov_for_scalar(cls, ambient: AmbientAlgebra) -> "TraceFunctional":
        """Block weights n_j / sum(n_i^2) (exact rationals, then floats)."""
        dims = ambient.dims.dims
        denom = sum(n * n for n in dims)
        weights = [Fraction(n, denom) for n in dims]
        return cls.from_block_weights(ambient, [float(w) for w in weights])

    def value(self, entries: np.ndarray) -> complex:
        return complex(np.trace(self.density @ entries))

    def inner(self, x: np.ndarray, y: np.ndarray) -> complex:
        """GNS inner product <x, y> = trace(x* y)."""
        return complex(np.trace(self.density @ x.conj().T @ y))

    def gram(self, stack: np.ndarray) -> np.ndarray:
        """Gram matrix of a stack of matrices under the GNS inner product."""
        weighted = stack @ self.density
        flat = stack.reshape(stack.shape[0], -1)
        wflat = weighted.reshape(stack.shape[0], -1)
        return flat.conj() @ wflat.T

    def is_tracial_on(self, stack: np.ndarray, tol: float = 1e-10,
                      rng: np.random.Generator | None = None, samples: int = 24) -> bool:
        rng = rng or np.random.default_rng(0)
        d = stack.shape[0]
        for _ in range(samples):
            cx = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            cy = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            x = np.tensordot(cx, stack, axes=1)
            y = np.tensordot(cy, stack, axes=1)
            if abs(self.value(x @ y) - self.value(y @ x)) > tol * max(1.0, abs(self.value(x @ y))):
                return False
        return True

    def __repr__(self):
        if self.weights is not None:
            return f"TraceFunctional(weights={self.weights})"
        return "TraceFunctional(density)"


def _check_same_home(a: MatrixElement, b: MatrixElement):
    if a.home is not b.home and a.home != b.home:
        raise ShapeMismatch("elements live in different home algebras")


def product(a: MatrixElement, b: MatrixElement) -> MatrixElement:
    """Matrix product; block-diagonal support is preserved."""
    _check_same_home(a, b)
    return MatrixElement(a.entries @ b.entries, a.home)


def adjoint(a: MatrixElement) -> MatrixElement:
    """Conjugate transpose."""
    return MatrixElement(a.entries.conj().T, a.home)


def operator_norm(a: MatrixElement | np.ndarray) -> float:
    """Largest singular value (the C*-norm of the element)."""
    entries = a.entries if isinstance(a, MatrixElement) else np.asarray(a)
    if entries.size == 0:
        return 0.0
    return float(np.linalg.norm(entries, 2))


def is_positive(a: MatrixElement | np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Hermitian within tol and minimum eigenvalue >= -tol."""
    entries = a.entries if isinstance(a, MatrixElement) else np.asarray(a)
    scale = max(1.0, operator_norm(entries))
    if np.max(np.abs(entries - entries.conj().T)) > tol * scale:
        return False
    w = np.linalg.eigvalsh(0.5 * (entries + entries.conj().T))
    return bool(w[0] >= -tol * scale)


def apply_trace(tau: TraceFunctional, a: MatrixElement) -> complex:
    """Evaluate the trace: sum over blocks of t_j times the block trace."""
    if a.home != tau.ambient:
        raise BlockMismatch("element and trace have different block structure")
    return tau.value(a.entries)
