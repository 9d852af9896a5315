"""Cyclic and separating vector analysis for commuting tuples.

Krylov subspaces, multiplicity counts, separating-vector certificates and
the greedy separating-set construction, the Gram operator of a vector's
word orbit, the induced intertwiner from truncated Fock space, and the
quasi-affine witness identifying a cyclic nilpotent tuple with its model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    NotCommutingError,
    NotCyclicError,
    NotNilpotentError,
    ShapeError,
    WitnessSearchError,
)
from .fock import TruncatedFock
from .ideals import QuotientAlgebra, annihilator, model_space, model_tuple, quotient_algebra
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_vector,
    kernel_basis,
    numerical_rank,
    operator_norm,
)
from .polynomials import Polynomial
from .subspaces import SubspaceBasis, generated_invariant, intertwiner_space
from .tuples import RowTuple, _commuting, nilpotency_index

__all__ = [
    "GramReport",
    "krylov",
    "is_cyclic",
    "multiplicity",
    "is_separating",
    "separating_witness",
    "separating_greedy",
    "gram_operator",
    "fock_intertwiner",
    "quasiaffine_witness",
]


def _check_vector(t: RowTuple, xi) -> np.ndarray:
    v = as_vector(xi)
    if v.shape[0] != t.dim:
        raise ShapeError(f"vector length {v.shape[0]} does not match dim {t.dim}")
    return v


def _require_commuting(t: RowTuple, tol: ToleranceConfig) -> None:
    if not _commuting(t, tol):
        raise NotCommutingError("tuple matrices do not commute")


def krylov(t: RowTuple, xi, tol: ToleranceConfig = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of ``span{T^α ξ}`` (the orbit of ξ)."""
    _require_commuting(t, tol)
    return generated_invariant(t, [_check_vector(t, xi)], tol)


def is_cyclic(t: RowTuple, xi, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether the orbit of ξ spans the whole space."""
    return krylov(t, xi, tol).dim == t.dim


def multiplicity(
    t: RowTuple,
    *,
    exhaustive: bool = False,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> int:
    """Least cardinality of a cyclic set for a commuting nilpotent tuple.

    Computed as ``dim(H / Σ_k T_k H)``: by graded Nakayama, the minimal
    number of module generators.  With ``exhaustive`` the count is instead
    brute-forced by sampling candidate generating sets of growing size
    (suitable for small dimensions only).
    """
    if nilpotency_index(t, tol=tol) is None:
        raise NotNilpotentError("multiplicity requires a nilpotent tuple")
    if t.dim == 0:
        return 0
    if not exhaustive:
        return t.dim - numerical_rank(np.hstack(t.mats), tol)
    rng = np.random.default_rng(seed)
    for size in range(1, t.dim + 1):
        for _ in range(40):
            seeds = [
                rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
                for _ in range(size)
            ]
            if generated_invariant(t, seeds, tol).dim == t.dim:
                return size
    raise WitnessSearchError("exhaustive multiplicity search failed to generate")


def _quotient(
    t: RowTuple, quotient: QuotientAlgebra | None, tol: ToleranceConfig
) -> QuotientAlgebra:
    if quotient is None:
        return quotient_algebra(annihilator(t, tol), tol)
    return quotient


def _orbit_columns(t: RowTuple, xi: np.ndarray, q: QuotientAlgebra) -> np.ndarray:
    """Columns ``T^α ξ`` over the quotient monomial basis."""
    return np.column_stack([t.monomial(alpha) @ xi for alpha in q.monomial_basis])


def is_separating(
    t: RowTuple,
    xi,
    tol: ToleranceConfig = DEFAULT_TOL,
    *,
    quotient: QuotientAlgebra | None = None,
) -> bool:
    """Whether ``p(T)ξ = 0`` forces ``p(T) = 0``.

    Equivalent to the orbit of ξ having the dimension of the quotient
    algebra, i.e. injectivity of ``[p] ↦ p(T)ξ``.
    """
    v = _check_vector(t, xi)
    q = _quotient(t, quotient, tol)
    return numerical_rank(_orbit_columns(t, v, q), tol) == q.dim


def separating_witness(
    t: RowTuple,
    xi,
    tol: ToleranceConfig = DEFAULT_TOL,
    *,
    quotient: QuotientAlgebra | None = None,
) -> Polynomial | None:
    """A polynomial with ``p(T)ξ = 0`` but ``p(T) ≠ 0``, if one exists.

    Returns None exactly when ξ is separating.  The witness has unit
    coefficient norm over the quotient monomial basis, so ``p(T)`` is
    bounded away from zero by the smallest singular value of the
    evaluation map on basis classes.
    """
    v = _check_vector(t, xi)
    q = _quotient(t, quotient, tol)
    ker = kernel_basis(_orbit_columns(t, v, q), tol)
    if ker.shape[1] == 0:
        return None
    coeffs = ker[:, 0]
    return Polynomial(
        t.d, {alpha: coeffs[i] for i, alpha in enumerate(q.monomial_basis)}
    )


def separating_greedy(
    t: RowTuple,
    seed: int = 0,
    *,
    sampler: str = "gaussian",
    tol: ToleranceConfig = DEFAULT_TOL,
    max_tries: int = 64,
    with_trace: bool = False,
):
    """Greedy construction of a separating set of at most δ vectors.

    Maintains the joint kernel ``K = {[p] : p(T)ξ_j = 0 ∀j}`` in quotient
    coordinates, starting from the full algebra, and repeatedly samples a
    vector that strictly shrinks it.  The ``gaussian`` sampler draws
    seeded complex normals; the deterministic ``basis`` sampler walks the
    standard basis in index order.  Returns the chosen vectors (and the
    kernel-dimension trace when ``with_trace``).
    """
    if sampler not in ("gaussian", "basis"):
        raise ShapeError(f"unknown sampler {sampler!r}; use 'gaussian' or 'basis'")
    q = _quotient(t, None, tol)
    rng = np.random.default_rng(seed)
    kframe = np.eye(q.dim, dtype=np.complex128)
    chosen: list[np.ndarray] = []
    trace = [q.dim]
    while kframe.shape[1] > 0:
        accepted = False
        for attempt in range(max_tries if sampler == "gaussian" else t.dim):
            if sampler == "gaussian":
                cand = rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
            else:
                cand = np.zeros(t.dim, dtype=np.complex128)
                cand[attempt] = 1.0
            shrunk = kframe @ kernel_basis(
                _orbit_columns(t, cand, q) @ kframe, tol
            )
            if shrunk.shape[1] < kframe.shape[1]:
                chosen.append(cand)
                kframe = shrunk
                trace.append(kframe.shape[1])
                accepted = True
                break
        if not accepted:
            raise WitnessSearchError(
                "greedy separating search could not shrink the joint kernel"
            )
    if with_trace:
        return chosen, trace
    return chosen


@dataclass(frozen=True)
class GramReport:
    """Gram operator of a word orbit with its norm bound."""

    gram: np.ndarray
    bound: float
    cyclic: bool


def gram_operator(
    t: RowTuple, xi, tol: ToleranceConfig = DEFAULT_TOL
) -> GramReport:
    """``G = Σ_w (T_w ξ)(T_w ξ)ᴴ`` summed over all words.

    For commuting tuples the word sum collapses to multi-index terms with
    multinomial weights, which is exactly the iteration of the completely
    positive map ``Φ(X) = Σ T_k X T_kᴴ`` on ``ξξᴴ``; the sum is finite
    for nilpotent tuples and truncated at convergence for pure ones.
    """
    v = _check_vector(t, xi)
    _require_commuting(t, tol)
    term = np.outer(v, v.conj())
    gram = np.zeros_like(term)
    for _ in range(tol.max_iter):
        gram = gram + term
        scale = max(1.0, float(np.abs(gram).max()))
        if np.abs(term).max() <= tol.iter_tol * scale:
            gram = (gram + gram.conj().T) / 2.0
            return GramReport(gram, operator_norm(gram, tol), is_cyclic(t, v, tol))
        term = sum(mat @ term @ mat.conj().T for mat in t.mats)
    raise ConvergenceError("gram series did not converge within the budget")


def fock_intertwiner(
    t: RowTuple, xi, max_length: int, tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Matrix of ``e_w ↦ T_w ξ`` on the truncated Fock space.

    When ``max_length`` reaches the nilpotency index, the result
    intertwines the creation operators with the tuple exactly, and its
    squared norm equals the Gram bound.
    """
    v = _check_vector(t, xi)
    space = TruncatedFock(t.d, max_length)
    orbit: dict[tuple[int, ...], np.ndarray] = {(): v}
    cols = []
    for word in space.basis():
        if word not in orbit:
            orbit[word] = t.mats[word[0] - 1] @ orbit[word[1:]]
        cols.append(orbit[word])
    return np.column_stack(cols)


def quasiaffine_witness(
    t: RowTuple,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
    *,
    max_tries: int = 32,
) -> np.ndarray:
    """Invertible ``X`` with ``X (M_J)_k = T_k X`` for ``J = Ann(T)``.

    Requires a cyclic nilpotent tuple, for which the model tuple of the
    annihilator acts on a space of matching dimension.  The intertwiner
    solution space is searched for an invertible element by seeded random
    combination; the result is normalized to unit operator norm.
    """
    ann = annihilator(t, tol)
    if multiplicity(t, tol=tol) != 1:
        raise NotCyclicError("quasi-affine witness requires a cyclic tuple")
    model = model_tuple(model_space(ann, tol=tol))
    if model.dim != t.dim:
        raise WitnessSearchError(
            f"model dimension {model.dim} does not match tuple dimension {t.dim}"
        )
    space = intertwiner_space(model, t, tol)
    if not space.basis:
        raise WitnessSearchError("intertwiner space is trivial")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        w = rng.standard_normal(len(space.basis)) + 1j * rng.standard_normal(
            len(space.basis)
        )
        x = sum(c * b for c, b in zip(w, space.basis))
        if x.shape[0] == x.shape[1] and numerical_rank(x, tol) == x.shape[0]:
            return x / operator_norm(x, tol)
    raise WitnessSearchError(
        "no invertible intertwiner found within the retry budget"
    )
