"""Numerical linear algebra substrate: tolerances, norms, ranks, frames.

All matrices are dense ``numpy.ndarray`` objects with dtype ``complex128``.
Rank decisions are always made relative to the largest singular value of
the matrix at hand, never against an absolute cutoff, so that uniformly
scaled inputs produce identical decisions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg

from .errors import NotHermitianError, ShapeError, ToleranceError

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "as_matrix",
    "as_vector",
    "operator_norm",
    "rank_and_kernel",
    "numerical_rank",
    "kernel_basis",
    "psd_below_identity",
    "orthonormalize",
    "projector",
    "subspace_distance",
    "subspaces_equal",
]

# Above this edge length, operator_norm switches from a full SVD to a
# Lanczos eigensolve of the Gram operator; the crossover is well below
# the point where dense SVD time becomes noticeable.
_DENSE_SVD_LIMIT = 600


@dataclass(frozen=True)
class ToleranceConfig:
    """Bundle of the numerical thresholds used across the package.

    rank_rel_tol : singular values below ``rank_rel_tol * sigma_max`` are
        treated as zero in rank decisions.
    psd_tol : eigenvalues above ``-psd_tol`` count as nonnegative in
        positive-semidefiniteness tests.
    iter_tol : convergence threshold for iterative computations.
    max_iter : iteration budget for iterative computations.
    """

    rank_rel_tol: float = 1e-9
    psd_tol: float = 1e-9
    iter_tol: float = 1e-12
    max_iter: int = 10_000

    def __post_init__(self):
        for name in ("rank_rel_tol", "psd_tol", "iter_tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0 < value < 1):
                raise ToleranceError(f"{name} must lie in (0, 1), got {value!r}")
        if not (isinstance(self.max_iter, int) and self.max_iter >= 1):
            raise ToleranceError(f"max_iter must be a positive integer, got {self.max_iter!r}")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got ndim={m.ndim}")
    if m.size and not np.isfinite(m).all():
        raise ShapeError("matrix contains non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def as_vector(v) -> np.ndarray:
    """Coerce ``v`` to a finite 1-d complex128 array."""
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim != 1:
        raise ShapeError(f"expected a 1-d array, got ndim={x.ndim}")
    if x.size and not np.isfinite(x).all():
        raise ShapeError("vector contains non-finite entries")
    return x


def operator_norm(a, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest singular value of ``a``.

    Small matrices get a full SVD.  Large ones get a Lanczos eigensolve of
    the Gram operator with a deterministic start vector, accurate to
    ``tol.iter_tol`` relative error, which is all downstream rank and
    convergence decisions require.
    """
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    if max(m.shape) <= _DENSE_SVD_LIMIT:
        return float(np.linalg.svd(m, compute_uv=False)[0])
    n = m.shape[1]
    gram = scipy.sparse.linalg.LinearOperator(
        (n, n), matvec=lambda v: m.conj().T @ (m @ v), dtype=np.complex128
    )
    v0 = np.full(n, 1.0 / np.sqrt(n))
    top = scipy.sparse.linalg.eigsh(
        gram, k=1, which="LA", v0=v0, tol=tol.iter_tol, maxiter=tol.max_iter,
        return_eigenvectors=False,
    )
    return float(np.sqrt(max(top[0].real, 0.0)))


def rank_and_kernel(a, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Numerical rank of ``a`` and an orthonormal basis of its kernel.

    Rank counts singular values exceeding ``rank_rel_tol * sigma_max``;
    the kernel basis is the trailing right singular vectors, returned as
    the columns of an ``(ncols, ncols - rank)`` matrix.
    """
    m = as_matrix(a)
    ncols = m.shape[1]
    if m.size == 0:
        return 0, np.eye(ncols, dtype=np.complex128)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    cutoff = tol.rank_rel_tol * (s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(s > cutoff))
    return rank, vh[rank:].conj().T


def numerical_rank(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    return rank_and_kernel(a, tol)[0]


def kernel_basis(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return rank_and_kernel(a, tol)[1]


def psd_below_identity(a, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether the Hermitian matrix ``a`` satisfies ``0 <= a <= I``.

    ``a`` must be Hermitian within ``tol.psd_tol`` (relative to its norm);
    it is symmetrized before the eigensolve so the test is well posed.
    Eigenvalues in ``[-psd_tol, 1 + psd_tol]`` pass.
    """
    m = as_matrix(a, square=True)
    if m.size == 0:
        return True
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.conj().T).max() > tol.psd_tol * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    eigs = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return bool(eigs[0] >= -tol.psd_tol and eigs[-1] <= 1.0 + tol.psd_tol)


def orthonormalize(v, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the column span of ``v``.

    Uses an SVD; directions whose singular value falls below
    ``rank_rel_tol * sigma_max`` are discarded, so the result can have
    fewer columns than the input (zero columns for a zero input).
    """
    m = as_matrix(v)
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    cutoff = tol.rank_rel_tol * (s[0] if s.size else 0.0)
    rank = int(np.count_nonzero(s > cutoff))
    return u[:, :rank]


def projector(frame) -> np.ndarray:
    """Orthogonal projector ``F F*`` onto the span of an orthonormal frame."""
    f = as_matrix(frame)
    return f @ f.conj().T


def subspace_distance(frame_a, frame_b) -> float:
    """Operator-norm distance between the projectors of two frames.

    Equal subspaces give 0; orthogonal directions give 1.
    """
    return operator_norm(projector(frame_a) - projector(frame_b))


def subspaces_equal(frame_a, frame_b, tol: float = 1e-8) -> bool:
    """Whether two orthonormal frames span the same subspace.

    Requires matching dimension and projector distance below ``tol``.
    """
    a = as_matrix(frame_a)
    b = as_matrix(frame_b)
    if a.shape[1] != b.shape[1]:
        return False
    return subspace_distance(a, b) <= tol
