"""Concrete *-subalgebras, unital inclusions, commutants and inclusion matrices.

A subalgebra is carried by an explicit orthonormal basis under the normalized
Hilbert-Schmidt inner product <x, y> = Tr(x* y) / N of its ambient space.
Subspace questions (containment, intersection, commutants) reduce to dense
null-space and projection computations on vectorized matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _linalg as la
from .errors import (
    NotAnAlgebra,
    NotSubalgebra,
    NotUnital,
    ShapeMismatch,
)
from .multimatrix import AmbientAlgebra, DimensionVector, MatrixElement

CLOSURE_TOL = 1e-9
ORTHO_TOL = 1e-10
RANK_RTOL = 1e-8

# full pairwise product verification up to this dimension; sampled beyond
_FULL_CLOSURE_LIMIT = 160


class ConcreteAlgebra:
    """A unital *-closed subspace of an ambient algebra with orthonormal basis.

    ``basis_stack`` has shape (d, N, N); its rows vectorize (divided by
    sqrt(N)) to an orthonormal family under the standard inner product, which
    makes the matrices orthonormal under the normalized Hilbert-Schmidt form.
    """

    def __init__(self, ambient: AmbientAlgebra, basis_stack: np.ndarray,
                 unit_flag: bool = True, validate: bool = True,
                 label: str = "", rng_seed: int = 0):
        basis_stack = np.ascontiguousarray(np.asarray(basis_stack, dtype=complex))
        if basis_stack.ndim != 3 or basis_stack.shape[1:] != (ambient.size, ambient.size):
            raise ShapeMismatch("basis stack must have shape (d, N, N)")
        self.ambient = ambient
        self.basis_stack = basis_stack
        self.unit_flag = unit_flag
        self.label = label
        self._rng_seed = rng_seed
        if validate:
            self.validate()

    # -- construction -----------------------------------------------------

    @classmethod
    def span(cls, ambient: AmbientAlgebra, matrices, *, unit_flag: bool = True,
             validate: bool = True, label: str = "",
             rtol: float = RANK_RTOL) -> "ConcreteAlgebra":
        """Orthonormalize a spanning family (no closure is performed)."""
        stack = np.asarray([m.entries if isinstance(m, MatrixElement) else m
                            for m in matrices], dtype=complex)
        n = ambient.size
        q = la.orthonormal_rows(stack.reshape(len(stack), -1) / np.sqrt(n), rtol)
        basis = (q * np.sqrt(n)).reshape(-1, n, n)
        return cls(ambient, basis, unit_flag=unit_flag, validate=validate, label=label)

    @classmethod
    def full_algebra(cls, ambient: AmbientAlgebra, label: str = "") -> "ConcreteAlgebra":
        """The whole multi-matrix algebra, with a canonical matrix-unit basis."""
        n = ambient.size
        mats = []
        for sl in ambient.dims.block_slices:
            for a in range(sl.start, sl.stop):
                for b in range(sl.start, sl.stop):
                    m = np.zeros((n, n), dtype=complex)
                    m[a, b] = np.sqrt(n)
                    mats.append(m)
        return cls(ambient, np.asarray(mats), validate=False, label=label)

    @classmethod
    def scalars(cls, ambient: AmbientAlgebra, label: str = "") -> "ConcreteAlgebra":
        return cls(ambient, np.eye(ambient.size, dtype=complex)[None, :, :],
                   validate=False, label=label)

    # -- basic data --------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis_stack.shape[0]

    @cached_property
    def vec_rows(self) -> np.ndarray:
        """Rows orthonormal under the standard inner product on C^(N^2)."""
        n = self.ambient.size
        return self.basis_stack.reshape(self.dim, -1) / np.sqrt(n)

    @property
    def basis(self) -> list[MatrixElement]:
        return [MatrixElement(m, self.ambient) for m in self.basis_stack]

    def unit(self) -> np.ndarray:
        return np.eye(self.ambient.size, dtype=complex)

    # -- subspace machinery -------------------------------------------------

    def coords(self, x: np.ndarray) -> np.ndarray:
        """Coefficients of x in the orthonormal basis (best approximation)."""
        n = self.ambient.size
        return self.vec_rows.conj() @ (np.asarray(x).reshape(-1) / np.sqrt(n))

    def coords_stack(self, stack: np.ndarray) -> np.ndarray:
        n = self.ambient.size
        flat = stack.reshape(stack.shape[0], -1) / np.sqrt(n)
        return flat @ self.vec_rows.conj().T

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(c), self.basis_stack, axes=1)

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.from_coords(self.coords(x))

    def residual(self, x: np.ndarray) -> float:
        n = self.ambient.size
        r = np.asarray(x) - self.project(x)
        return float(np.linalg.norm(r) / np.sqrt(n))

    def contains_matrix(self, x: np.ndarray, tol: float = CLOSURE_TOL) -> bool:
        n = self.ambient.size
        scale = max(1.0, float(np.linalg.norm(x) / np.sqrt(n)))
        return self.residual(x) <= tol * scale

    def subspace_leq(self, other: "ConcreteAlgebra", tol: float = CLOSURE_TOL) -> bool:
        return la.max_containment_residual(other.vec_rows, self.vec_rows) <= tol

    def subspace_equal(self, other: "ConcreteAlgebra", tol: float = CLOSURE_TOL) -> bool:
        return self.dim == other.dim and self.subspace_leq(other, tol)

    def distance(self, other: "ConcreteAlgebra") -> float:
        return la.subspace_distance(self.vec_rows, other.vec_rows)

    # -- validation ---------------------------------------------------------

    def validate(self, tol: float = CLOSURE_TOL):
        gram = self.vec_rows @ self.vec_rows.conj().T
        if np.max(np.abs(gram - np.eye(self.dim))) > ORTHO_TOL:
            raise NotAnAlgebra("basis is not orthonormal")
        if self.unit_flag and not self.contains_matrix(self.unit(), tol):
            raise NotAnAlgebra("unit is missing from the span")
        adj = np.conj(np.swapaxes(self.basis_stack, 1, 2))
        if self._worst_residual(adj) > tol:
            raise NotAnAlgebra("span is not closed under the adjoint")
        if self._closure_residual() > tol:
            raise NotAnAlgebra("span is not closed under products")

    def _worst_residual(self, stack: np.ndarray) -> float:
        n = self.ambient.size
        flat = stack.reshape(stack.shape[0], -1) / np.sqrt(n)
        return float(np.max(la.residual_norms(self.vec_rows, flat), initial=0.0))

    def _closure_residual(self) -> float:
        d = self.dim
        if d <= _FULL_CLOSURE_LIMIT:
            prods = la.pairwise_products(self.basis_stack, self.basis_stack)
            return self._worst_residual(prods)
        rng = np.random.default_rng(self._rng_seed)
        idx = rng.integers(0, d, size=(1024, 2))
        prods = np.einsum("kij,kjl->kil", self.basis_stack[idx[:, 0]],
                          self.basis_stack[idx[:, 1]], optimize=True)
        return self._worst_residual(prods)

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"ConcreteAlgebra(dim={self.dim}, N={self.ambient.size}{tag})"


@dataclass
class UnitalInclusion:
    """A pair of concrete algebras sub <= sup sharing ambient and unit."""

    sub: ConcreteAlgebra
    sup: ConcreteAlgebra
    label: str = ""

    def __post_init__(self):
        if self.sub.ambient != self.sup.ambient:
            raise ShapeMismatch("sub and sup must share the ambient algebra")
        if not self.sub.subspace_leq(self.sup):
            raise NotSubalgebra("sub is not contained in sup")
        if not (self.sub.contains_matrix(self.sub.unit())
                and self.sup.contains_matrix(self.sup.unit())):
            raise NotUnital("both algebras must contain the ambient unit")

    def __repr__(self):
        return f"UnitalInclusion({self.label or 'B in A'}: {self.sub.dim} <= {self.sup.dim})"


@dataclass
class InclusionMatrixData:
    """Multiplicity matrix of a unital multi-matrix inclusion."""

    matrix: np.ndarray           # shape (k_sub, k_sup), nonnegative integers
    sub_dims: DimensionVector
    sup_dims: DimensionVector

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=int)
        if m.shape != (len(self.sub_dims), len(self.sup_dims)):
            raise ShapeMismatch("inclusion matrix shape mismatch")
        if np.any(m < 0):
            raise ValueError("multiplicities must be nonnegative")
        self.matrix = m
        predicted = m.T @ np.asarray(self.sub_dims.dims)
        if not np.array_equal(predicted, np.asarray(self.sup_dims.dims)):
            raise NotUnital(
                f"dimension consistency fails: Lambda^T m = {predicted.tolist()}"
                f" but sup dims = {list(self.sup_dims.dims)}")


@dataclass
class BlockStructure:
    """Artin-Wedderburn data of a concrete algebra.

    ``unitary`` conjugates the algebra into block-diagonal form where block j
    acts as M_{n_j} tensor 1_{m_j}; ``block_isometries[j]`` is the N x
    (n_j * m_j) column slice for block j, with columns ordered so that index
    (a, mu) = a * m_j + mu separates the matrix part from the multiplicity.
    """

    dims: DimensionVector
    multiplicities: tuple[int, ...]
    unitary: np.ndarray
    central_projections: list[np.ndarray]
    minimal_projections: list[np.ndarray]
    block_isometries: list[np.ndarray]

    def abstract_blocks(self, x: np.ndarray) -> list[np.ndarray]:
        """Compress x in the algebra to its list of n_j x n_j block matrices."""
        out = []
        for n_j, m_j, iso in zip(self.dims, self.multiplicities, self.block_isometries):
            comp = iso.conj().T @ x @ iso
            comp = comp.reshape(n_j, m_j, n_j, m_j)
            out.append(np.einsum("aubu->ab", comp) / m_j)
        return out

    def embed_block(self, j: int, mat: np.ndarray) -> np.ndarray:
        """Embed an n_j x n_j matrix as (mat tensor 1_{m_j}) inside block j."""
        n_j, m_j = self.dims.dims[j], self.multiplicities[j]
        iso = self.block_isometries[j]
        big = np.kron(np.asarray(mat, dtype=complex), np.eye(m_j))
        return iso @ big @ iso.conj().T


# ---------------------------------------------------------------------------
# lattice operations
# ---------------------------------------------------------------------------

def subalgebra_from_generators(ambient: AmbientAlgebra, generators, *,
                               label: str = "", rtol: float = RANK_RTOL,
                               max_rounds: int | None = None) -> ConcreteAlgebra:
    """Smallest unital *-closed subspace containing the generators.

    The span of {1} + generators + adjoints is closed under pairwise products
    until the dimension stabilizes; each round orthonormalizes the enlarged
    family.  Terminates because the dimension strictly increases and is
    bounded by N^2.
    """
    n = ambient.size
    mats = [np.eye(n, dtype=complex)]
    for g in generators:
        e = g.entries if isinstance(g, MatrixElement) else np.asarray(g, dtype=complex)
        mats.append(e)
        mats.append(e.conj().T)
    q = la.orthonormal_rows(np.asarray(mats).reshape(len(mats), -1) / np.sqrt(n), rtol)
    rounds = max_rounds or (n * n + 2)
    for _ in range(rounds):
        basis = (q * np.sqrt(n)).reshape(-1, n, n)
        prods = la.pairwise_products(basis, basis)
        cand = np.vstack([q, prods.reshape(len(prods), -1) / np.sqrt(n)])
        q_new = la.orthonormal_rows(cand, rtol)
        if q_new.shape[0] == q.shape[0]:
            q = q_new
            break
        q = q_new
    basis = (q * np.sqrt(n)).reshape(-1, n, n)
    return ConcreteAlgebra(ambient, basis, validate=True, label=label)


def intersect(c: ConcreteAlgebra, d: ConcreteAlgebra, *,
              label: str = "") -> ConcreteAlgebra:
    """Subspace intersection; automatically *-closed and product-closed."""
    if c.ambient != d.ambient:
        raise ShapeMismatch("intersection requires a common ambient algebra")
    n2 = c.ambient.size ** 2
    eye = np.eye(n2, dtype=complex)
    comp_c = eye - c.vec_rows.T @ c.vec_rows.conj()
    comp_d = eye - d.vec_rows.T @ d.vec_rows.conj()
    nullity = la.null_space_rows(np.vstack([comp_c, comp_d]))
    n = c.ambient.size
    basis = (nullity * np.sqrt(n)).reshape(-1, n, n)
    return ConcreteAlgebra(c.ambient, basis, validate=True, label=label)


def join(c: ConcreteAlgebra, d: ConcreteAlgebra, *, label: str = "") -> ConcreteAlgebra:
    """Smallest algebra containing both (generated C*-algebra)."""
    gens = list(c.basis_stack) + list(d.basis_stack)
    return subalgebra_from_generators(c.ambient, gens, label=label)


def relative_commutant(s: ConcreteAlgebra, t: ConcreteAlgebra, *,
                       label: str = "") -> ConcreteAlgebra:
    """Elements of t commuting with every basis element of s.

    Solved as the null space of the stacked commutator operators acting on
    t-coordinates.
    """
    if s.ambient != t.ambient:
        raise ShapeMismatch("commutant requires a common ambient algebra")
    blocks = []
    for sm in s.basis_stack:
        comm = np.einsum("ijk,kl->ijl", t.basis_stack, sm) \
            - np.einsum("jk,ikl->ijl", sm, t.basis_stack)
        blocks.append(comm.reshape(t.dim, -1).T)
    coeffs = la.null_space_rows(np.vstack(blocks))
    mats = np.tensordot(coeffs, t.basis_stack, axes=1)
    if len(mats) == 0:
        mats = np.zeros((0, t.ambient.size, t.ambient.size), dtype=complex)
    return ConcreteAlgebra.span(t.ambient, mats, validate=True, label=label)


# ---------------------------------------------------------------------------
# block structure (Artin-Wedderburn data)
# ---------------------------------------------------------------------------

def _center_basis(s: ConcreteAlgebra, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal coefficient basis of the center of s.

    Constraints are commutators against a few random integer combinations of
    the basis; candidates are then verified against every basis element and
    in the rare degenerate draw the offending element is appended as an
    extra constraint.
    """
    d = s.dim
    probes = []
    for _ in range(2):
        coeff = rng.integers(-4, 5, size=d) + 1j * rng.integers(-4, 5, size=d)
        probes.append(np.tensordot(coeff, s.basis_stack, axes=1))
    for _ in range(d + 2):
        blocks = []
        for a in probes:
            comm = np.einsum("ijk,kl->ijl", s.basis_stack, a) \
                - np.einsum("jk,ikl->ijl", a, s.basis_stack)
            blocks.append(comm.reshape(d, -1).T)
        coeffs = la.null_space_rows(np.vstack(blocks))
        bad = None
        for c in coeffs:
            z = np.tensordot(c, s.basis_stack, axes=1)
            comms = np.abs(np.einsum("ijk,kl->ijl", s.basis_stack, z)
                           - np.einsum("jk,ikl->ijl", z, s.basis_stack)).max(axis=(1, 2))
            worst = int(np.argmax(comms))
            if comms[worst] > 1e-8:
                bad = worst
                break
        if bad is None:
            return coeffs
        probes.append(s.basis_stack[bad])
    raise NotAnAlgebra("center computation did not stabilize")


def _split_projections(mats_in_alg, op: np.ndarray, rng, expected: int | None,
                       tol: float = 1e-7) -> list[np.ndarray]:
    """Spectral projections of a Hermitian element, grouped at gaps."""
    w, u = np.linalg.eigh(op)
    spread = max(float(w[-1] - w[0]), 1.0)
    for gap in (1e-5, 1e-6, 1e-7):
        clusters = la.cluster_eigenvalues(w, gap * spread)
        if expected is None or len(clusters) == expected:
            return [u[:, idx] @ u[:, idx].conj().T for idx in clusters]
    clusters = la.cluster_eigenvalues(w, 1e-6 * spread)
    return [u[:, idx] @ u[:, idx].conj().T for idx in clusters]


def block_structure(s: ConcreteAlgebra, seed: int = 7) -> BlockStructure:
    """Dimension vector and block-adapting unitary of a *-closed algebra.

    Degenerate spectra are split by seeded random integer combinations of
    central (respectively corner) generators, so the output is deterministic
    for a fixed seed.
    """
    try:
        s.validate()
    except NotAnAlgebra:
        raise
    rng = np.random.default_rng(seed)
    n = s.ambient.size
    center_coeffs = _center_basis(s, rng)
    k = center_coeffs.shape[0]
    center_stack = np.tensordot(center_coeffs, s.basis_stack, axes=1)

    # generic Hermitian central element -> minimal central projections
    central_projs = None
    for _ in range(8):
        coeff = rng.integers(-7, 8, size=k) + 1j * rng.integers(-7, 8, size=k)
        z = np.tensordot(coeff, center_stack, axes=1)
        z = z + z.conj().T
        projs = _split_projections(None, z, rng, expected=k)
        if len(projs) == k:
            central_projs = projs
            break
    if central_projs is None:
        raise NotAnAlgebra("could not separate the minimal central projections")

    dims: list[int] = []
    mults: list[int] = []
    minimal_projs: list[np.ndarray] = []
    isometries: list[np.ndarray] = []
    for p in central_projs:
        rank = int(round(float(np.trace(p).real)))
        corner = np.einsum("jk,ikl,lm->ijm", p, s.basis_stack, p)
        qc = la.orthonormal_rows(corner.reshape(s.dim, -1) / np.sqrt(n))
        dsq = qc.shape[0]
        n_j = int(round(np.sqrt(dsq)))
        if n_j * n_j != dsq or rank % n_j != 0:
            raise NotAnAlgebra(f"corner dimension {dsq} is not a perfect square")
        m_j = rank // n_j
        corner_stack = (qc * np.sqrt(n)).reshape(-1, n, n)

        # minimal projections inside the corner via a generic Hermitian element
        sub_projs = None
        for _ in range(8):
            coeff = rng.integers(-7, 8, size=dsq) + 1j * rng.integers(-7, 8, size=dsq)
            x = np.tensordot(coeff, corner_stack, axes=1)
            x = x + x.conj().T + 2.0 * float(np.max(np.abs(x)) + 1.0) * p
            projs = _split_projections(None, x, rng, expected=None)
            projs = [q for q in projs
                     if abs(float(np.trace(q @ p).real) - np.trace(q).real) < 1e-6
                     and np.trace(q).real > 0.5]
            projs = [q for q in projs if int(round(np.trace(q).real)) == m_j]
            if len(projs) >= n_j:
                sub_projs = projs[:n_j]
                break
        if sub_projs is None:
            raise NotAnAlgebra("could not split a corner into minimal projections")

        q1 = sub_projs[0]
        # partial isometries q1 -> q_a inside the corner algebra
        isos = [q1]
        w = np.tensordot(rng.standard_normal(dsq) + 1j * rng.standard_normal(dsq),
                         corner_stack, axes=1)
        for q_a in sub_projs[1:]:
            t = q_a @ w @ q1
            uu, ss, vv = np.linalg.svd(t)
            if int(np.sum(ss > 1e-8 * max(ss[0], 1e-300))) < m_j:
                raise NotAnAlgebra("degenerate intertwiner; retry with a new seed")
            isos.append(uu[:, :m_j] @ vv[:m_j, :])

        wq, uq = np.linalg.eigh(q1)
        xi = uq[:, wq > 0.5]
        cols = []
        for v_a in isos:
            block_cols = v_a @ xi
            cols.append(block_cols)
        iso_j = np.concatenate(cols, axis=1)   # ordered (a, mu)
        dims.append(n_j)
        mults.append(m_j)
        minimal_projs.append(q1)
        isometries.append(iso_j)

    order = sorted(range(len(dims)), key=lambda j: (dims[j], -mults[j], j))
    dims = [dims[j] for j in order]
    mults = [mults[j] for j in order]
    central_projs = [central_projs[j] for j in order]
    minimal_projs = [minimal_projs[j] for j in order]
    isometries = [isometries[j] for j in order]

    if sum(d * d for d in dims) != s.dim:
        raise NotAnAlgebra("block dimensions do not add up to the algebra dimension")
    unitary = np.concatenate(isometries, axis=1)
    return BlockStructure(DimensionVector(tuple(dims)), tuple(mults), unitary,
                          central_projs, minimal_projs, isometries)


def inclusion_matrix(inc: UnitalInclusion, seed: int = 7) -> InclusionMatrixData:
    """Multiplicity of each sub block inside each sup block.

    Computed by rank bookkeeping: the trace of a minimal sub projection
    against each central sup projection, divided by the sup multiplicity.
    """
    bs_sub = block_structure(inc.sub, seed=seed)
    bs_sup = block_structure(inc.sup, seed=seed)
    k_sub, k_sup = len(bs_sub.dims), len(bs_sup.dims)
    lam = np.zeros((k_sub, k_sup))
    for i, q in enumerate(bs_sub.minimal_projections):
        for j, (p, m_j) in enumerate(zip(bs_sup.central_projections,
                                         bs_sup.multiplicities)):
            lam[i, j] = float(np.trace(q @ p).real) / m_j
    rounded = np.rint(lam).astype(int)
    if np.max(np.abs(lam - rounded)) > 1e-6:
        raise NotUnital(f"non-integer multiplicities: {lam.tolist()}")
    return InclusionMatrixData(rounded, bs_sub.dims, bs_sup.dims)
