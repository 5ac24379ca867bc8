"""Dense linear-algebra helpers: vectorization, row spans, null spaces.

Everything here works on plain complex ndarrays.  Matrices are vectorized
row-major; a set of vectors is always a 2-D array whose *rows* are the
vectors.  Rank decisions use singular-value thresholding relative to the
largest singular value.
"""
from __future__ import annotations

import numpy as np

RANK_RTOL = 1e-8

# above this row/column count the Gram-eigh route is used instead of a full
# SVD (same rank decisions, roughly 3x faster for square-ish stacks)
_SVD_DIRECT_LIMIT = 900


def vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).reshape(-1)


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(v).reshape(n, n)


def orthonormal_rows(rows: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (as rows) of the row span of ``rows``.

    Rank is cut at ``rtol`` times the largest singular value.
    """
    a = np.atleast_2d(np.asarray(rows, dtype=complex))
    if a.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=complex)
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return np.zeros((0, a.shape[1]), dtype=complex)
    if min(a.shape) <= _SVD_DIRECT_LIMIT:
        _, s, vh = np.linalg.svd(a, full_matrices=False)
        keep = s > rtol * s[0]
        return np.ascontiguousarray(vh[keep])
    # Gram route: eigenvectors of a a^H give left singular vectors
    g = a @ a.conj().T
    w, u = np.linalg.eigh(g)
    w = w[::-1]
    u = u[:, ::-1]
    smax = np.sqrt(max(w[0], 0.0))
    keep = w > (rtol * smax) ** 2
    if not np.any(keep):
        return np.zeros((0, a.shape[1]), dtype=complex)
    q = (u[:, keep].conj().T @ a) / np.sqrt(w[keep])[:, None]
    # one re-orthonormalization pass to clean up the squared conditioning
    _, s2, vh2 = np.linalg.svd(q, full_matrices=False) if q.shape[0] <= _SVD_DIRECT_LIMIT else (None, None, None)
    if vh2 is not None:
        return np.ascontiguousarray(vh2[s2 > rtol * s2[0]])
    return q


def null_space_rows(a: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (rows) of the right null space of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    m, n = a.shape
    if m == 0 or not np.any(np.abs(a) > 0):
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > rtol * s[0]))
    return np.ascontiguousarray(vh[rank:])


def project_rows(q: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Project the rows of ``x`` onto the row span of the orthonormal ``q``."""
    if q.shape[0] == 0:
        return np.zeros_like(np.atleast_2d(x))
    x = np.atleast_2d(x)
    return (x @ q.conj().T) @ q


def residual_norms(q: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Euclidean norms of the components of ``x`` rows outside span(q)."""
    x = np.atleast_2d(x)
    r = x - project_rows(q, x)
    return np.linalg.norm(r, axis=1)


def max_containment_residual(q_sup: np.ndarray, q_sub: np.ndarray) -> float:
    """Largest residual of a (unit) row of ``q_sub`` outside span(q_sup)."""
    if q_sub.shape[0] == 0:
        return 0.0
    return float(np.max(residual_norms(q_sup, q_sub)))


def subspace_distance(q1: np.ndarray, q2: np.ndarray) -> float:
    """Operator-norm distance between the projectors onto two row spans.

    For equal dimensions this is the sine of the largest principal angle;
    different dimensions give the worst containment failure instead.
    """
    if q1.shape[0] != q2.shape[0]:
        return max(max_containment_residual(q1, q2), max_containment_residual(q2, q1))
    if q1.shape[0] == 0:
        return 0.0
    s = np.linalg.svd(q1 @ q2.conj().T, compute_uv=False)
    smin = float(s[-1]) if s.size else 0.0
    return float(np.sqrt(max(0.0, 1.0 - min(smin, 1.0) ** 2)))


def cluster_eigenvalues(vals: np.ndarray, gap: float) -> list[np.ndarray]:
    """Group sorted real eigenvalues into clusters split at gaps > ``gap``."""
    order = np.argsort(vals)
    sorted_vals = vals[order]
    clusters: list[list[int]] = [[order[0]]]
    for prev, idx in zip(range(len(vals) - 1), order[1:]):
        if sorted_vals[prev + 1] - sorted_vals[prev] > gap:
            clusters.append([])
        clusters[-1].append(idx)
    return [np.array(c) for c in clusters]


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def psd_pseudo_inverse(x: np.ndarray, rtol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Pseudo-inverse of a PSD matrix plus its range projection."""
    w, u = np.linalg.eigh(hermitian_part(x))
    wmax = max(float(w[-1]), 0.0)
    keep = w > rtol * max(wmax, 1e-300)
    if not np.any(keep):
        n = x.shape[0]
        return np.zeros_like(x), np.zeros((n, n), dtype=complex)
    uk = u[:, keep]
    pinv = (uk / w[keep]) @ uk.conj().T
    ran = uk @ uk.conj().T
    return pinv, ran


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Deterministic batch of complex unit vectors, shape (count, dim)."""
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def pairwise_products(stack_a: np.ndarray, stack_b: np.ndarray,
                      chunk: int = 128) -> np.ndarray:
    """All products a_i @ b_j, flattened to shape (len_a * len_b, n, n)."""
    na, n, _ = stack_a.shape
    nb = stack_b.shape[0]
    out = np.empty((na * nb, n, n), dtype=complex)
    for start in range(0, na, chunk):
        stop = min(start + chunk, na)
        block = np.einsum("aij,bjk->abik", stack_a[start:stop], stack_b,
                          optimize=True)
        out[start * nb:stop * nb] = block.reshape(-1, n, n)
    return out
