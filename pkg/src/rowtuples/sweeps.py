"""Randomized instance generators and property-sweep runners.

The generators produce commuting nilpotent row contractions with
controlled invariants (cyclicity, adjoint cyclicity, quotient dimension)
from random monomial staircases, similarity conjugations, and direct
sums.  The sweep runners drive the rigidity, splitting, greedy, witness,
and decomposition properties over seeded instance streams; they are
shared by the test suite and the command-line ``sweep`` command.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fock import TruncatedDA, TruncatedFock, creation_matrix
from .ideals import (
    AnnihilatorBasis,
    annihilator,
    model_space,
    model_tuple,
    monomial_annihilator,
    quotient_algebra,
)
from .linalg import DEFAULT_TOL, ToleranceConfig, numerical_rank, operator_norm
from .polynomials import Polynomial
from .subspaces import (
    SubspaceBasis,
    Verdict,
    generated_invariant,
    is_invariant,
    rigidity_coinvariant_check,
    rigidity_invariant_check,
    splitting_construct,
)
from .tuples import RowTuple, nilpotency_index
from .vectors import fock_intertwiner, gram_operator, quasiaffine_witness, separating_greedy

__all__ = [
    "SweepOutcome",
    "SUITES",
    "random_staircase",
    "staircase_generators",
    "random_monomial_ideal",
    "random_similarity",
    "cyclic_instance",
    "adjoint_cyclic_instance",
    "proper_invariant",
    "random_coinvariant",
    "splitting_instance",
    "small_nilpotent_instance",
    "run_suite",
]


def random_staircase(rng, d: int, max_size: int) -> set[tuple[int, ...]]:
    """Random order ideal (staircase) in N^d containing the origin."""
    target = int(rng.integers(1, max_size + 1))
    lam = {(0,) * d}
    while len(lam) < target:
        frontier = set()
        for alpha in lam:
            for k in range(d):
                up = list(alpha)
                up[k] += 1
                cand = tuple(up)
                if cand in lam:
                    continue
                if all(
                    cand[j] == 0
                    or tuple(c - (1 if j == i else 0) for i, c in enumerate(cand))
                    in lam
                    for j in range(d)
                ):
                    frontier.add(cand)
        if not frontier:
            break
        ordered = sorted(frontier)
        lam.add(ordered[int(rng.integers(len(ordered)))])
    return lam


def staircase_generators(d: int, staircase) -> list[tuple[int, ...]]:
    """Minimal monomials outside the staircase (ideal generators)."""
    lam = set(staircase)
    tops = [max(a[k] for a in lam) + 1 for k in range(d)]
    gens = []
    for alpha in itertools.product(*(range(t + 1) for t in tops)):
        if alpha in lam:
            continue
        below = [
            tuple(c - (1 if j == i else 0) for i, c in enumerate(alpha))
            for j in range(d)
            if alpha[j] > 0
        ]
        if all(b in lam for b in below):
            gens.append(alpha)
    return sorted(gens)


def random_monomial_ideal(rng, d: int, max_delta: int) -> AnnihilatorBasis:
    lam = random_staircase(rng, d, max_delta)
    return monomial_annihilator(d, staircase_generators(d, lam))


def random_similarity(
    rng, t: RowTuple, spread: float = 0.2, tol: ToleranceConfig = DEFAULT_TOL
) -> RowTuple:
    """Conjugate by a well-conditioned perturbation of the identity.

    The result is rescaled into a row contraction when the conjugation
    pushes the row norm above one; scaling preserves nilpotency, the
    staircase of a monomial annihilator, and all cyclicity invariants.
    """
    g = rng.standard_normal((t.dim, t.dim)) + 1j * rng.standard_normal((t.dim, t.dim))
    s = np.eye(t.dim) + spread * g / operator_norm(g, tol)
    sinv = np.linalg.inv(s)
    mats = [s @ mat @ sinv for mat in t.mats]
    row = operator_norm(np.hstack(mats), tol)
    if row > 1.0:
        mats = [mat / (row * (1.0 + 1e-12)) for mat in mats]
    return RowTuple(mats)


def cyclic_instance(rng, d: int = 2, max_delta: int = 8) -> RowTuple:
    """Random cyclic nilpotent row contraction (a conjugated model tuple)."""
    ann = random_monomial_ideal(rng, d, max_delta)
    return random_similarity(rng, model_tuple(model_space(ann)))


def adjoint_cyclic_instance(rng, d: int = 2, max_side: int = 3) -> RowTuple:
    """Random instance whose adjoint is cyclic (a conjugated box model).

    Box staircases have a unique maximal element, so the model's socle is
    simple and the adjoint tuple is cyclic; similarity preserves this.
    """
    sides = [int(rng.integers(1, max_side + 1)) for _ in range(d)]
    if all(s == 1 for s in sides):
        sides[int(rng.integers(d))] = 2
    gens = [
        tuple(sides[k] if j == k else 0 for j in range(d)) for k in range(d)
    ]
    ann = monomial_annihilator(d, gens)
    return random_similarity(rng, model_tuple(model_space(ann)))


def proper_invariant(rng, t: RowTuple) -> SubspaceBasis:
    """Random invariant subspace inside ``Σ_k T_k H`` (always proper)."""
    w = rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
    v = sum(mat @ w for mat in t.mats)
    return generated_invariant(t, [v])


def random_coinvariant(rng, t: RowTuple) -> SubspaceBasis:
    """Adjoint-orbit closure of a random vector (co-invariant by duality)."""
    v = rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
    return generated_invariant(t.adjoint(), [v])


def _sub_box_staircase(rng, sides) -> set[tuple[int, ...]]:
    """Random staircase contained in the box with the given sides."""
    box = set(itertools.product(*(range(s) for s in sides)))
    target = int(rng.integers(1, len(box) + 1))
    lam = {(0,) * len(sides)}
    while len(lam) < target:
        frontier = set()
        for alpha in lam:
            for k in range(len(sides)):
                up = list(alpha)
                up[k] += 1
                cand = tuple(up)
                if cand in lam or cand not in box:
                    continue
                if all(
                    cand[j] == 0
                    or tuple(c - (1 if j == i else 0) for i, c in enumerate(cand))
                    in lam
                    for j in range(len(sides))
                ):
                    frontier.add(cand)
        if not frontier:
            break
        ordered = sorted(frontier)
        lam.add(ordered[int(rng.integers(len(ordered)))])
    return lam


def splitting_instance(rng, d: int = 2, max_side: int = 3):
    """Direct sum ``A ⊕ B`` with ``M = 0 ⊕ H_B`` satisfying the splitting hypotheses.

    ``B`` is a box model (adjoint cyclic) and ``Ann(A) ⊇ Ann(B)``, so the
    restriction to ``M`` has the full annihilator.
    """
    sides = [int(rng.integers(1, max_side + 1)) for _ in range(d)]
    if all(s == 1 for s in sides):
        sides[int(rng.integers(d))] = 2
    box_gens = [
        tuple(sides[k] if j == k else 0 for j in range(d)) for k in range(d)
    ]
    b = model_tuple(model_space(monomial_annihilator(d, box_gens)))
    lam_a = _sub_box_staircase(rng, sides)
    a = model_tuple(model_space(monomial_annihilator(d, staircase_generators(d, lam_a))))
    mats = []
    for ma, mb in zip(a.mats, b.mats):
        block = np.zeros((a.dim + b.dim, a.dim + b.dim), dtype=np.complex128)
        block[: a.dim, : a.dim] = ma
        block[a.dim :, a.dim :] = mb
        mats.append(block)
    t = RowTuple(mats)
    frame = np.zeros((a.dim + b.dim, b.dim), dtype=np.complex128)
    frame[a.dim :, :] = np.eye(b.dim)
    return t, SubspaceBasis(a.dim + b.dim, frame)


def small_nilpotent_instance(rng, dim_cap: int = 4) -> RowTuple:
    """Random commuting nilpotent tuple of dimension ≤ ``dim_cap``.

    Mixes conjugated cyclic models (indecomposable), direct sums of
    Jordan cells (decomposable), and polynomial tuples in one nilpotent
    Jordan block (either, depending on the sampled coefficients).
    """
    kind = int(rng.integers(3))
    if kind == 0:
        ann = random_monomial_ideal(rng, 2, dim_cap)
        return random_similarity(rng, model_tuple(model_space(ann)))
    if kind == 1:
        a = int(rng.integers(1, dim_cap))
        b = int(rng.integers(1, dim_cap + 1 - a))
        block = np.zeros((a + b, a + b))
        block[:a, :a] = np.eye(a, k=-1)
        block[a:, a:] = np.eye(b, k=-1)
        t = RowTuple([block / 2.0, np.zeros((a + b, a + b))])
        return random_similarity(rng, t)
    n = int(rng.integers(2, dim_cap + 1))
    shift = np.eye(n, k=-1)
    mats = []
    for _ in range(2):
        coeffs = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)
        if rng.random() < 0.3:
            coeffs[0] = 0.0
        mat = sum(c * np.linalg.matrix_power(shift, j + 1) for j, c in enumerate(coeffs))
        mats.append(mat)
    t = RowTuple(mats)
    row = operator_norm(np.hstack(t.mats))
    if row > 1.0:
        t = RowTuple([m / (row * (1.0 + 1e-12)) for m in t.mats])
    return random_similarity(rng, t)


@dataclass(frozen=True)
class SweepOutcome:
    """Aggregate result of one property suite."""

    name: str
    total: int
    passed: int
    failed: int
    violations: int
    messages: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.violations == 0


def _streams(seed: int, count: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _outcome(name, results):
    passed = sum(1 for ok, _, viol in results if ok and not viol)
    violations = sum(1 for _, _, viol in results if viol)
    failed = len(results) - passed - violations
    messages = tuple(msg for ok, msg, viol in results if (not ok or viol) and msg)[:8]
    return SweepOutcome(name, len(results), passed, failed, violations, messages)


def sweep_rigidity_full(seed: int = 0, count: int = 200) -> SweepOutcome:
    """Rigidity sweep: cyclic tuples whose invariant subspace fills the space."""
    results = []
    for i, rng in enumerate(_streams(seed, count)):
        t = cyclic_instance(rng, d=2, max_delta=8)
        m = SubspaceBasis.full(t.dim) if i % 8 == 7 else proper_invariant(rng, t)
        rep = rigidity_invariant_check(t, m, SubspaceBasis.full(t.dim))
        viol = rep.verdict is Verdict.THEOREM_VIOLATION
        ok = rep.verdict is Verdict.CONSISTENT
        results.append((ok, f"instance {i}: {rep.verdict.value}" if not ok else "", viol))
    return _outcome("rigidity-full", results)


def sweep_rigidity_coinvariant(seed: int = 0, count: int = 200) -> SweepOutcome:
    """Rigidity sweep: co-invariant pairs under a cyclic tuple."""
    results = []
    for i, rng in enumerate(_streams(seed, count)):
        t = cyclic_instance(rng, d=2, max_delta=8)
        m = random_coinvariant(rng, t)
        n = m if i % 8 == 7 else random_coinvariant(rng, t)
        rep = rigidity_coinvariant_check(t, m, n)
        viol = rep.verdict is Verdict.THEOREM_VIOLATION
        ok = rep.verdict is Verdict.CONSISTENT
        results.append((ok, f"instance {i}: {rep.verdict.value}" if not ok else "", viol))
    return _outcome("rigidity-coinvariant", results)


def sweep_rigidity_adjoint(seed: int = 0, count: int = 200) -> SweepOutcome:
    """Rigidity sweep: invariant pairs under an adjoint-cyclic tuple."""
    results = []
    for i, rng in enumerate(_streams(seed, count)):
        t = adjoint_cyclic_instance(rng, d=2, max_side=3)
        m = proper_invariant(rng, t)
        n = m if i % 8 == 7 else proper_invariant(rng, t)
        rep = rigidity_invariant_check(t, m, n)
        viol = rep.verdict is Verdict.THEOREM_VIOLATION
        ok = rep.verdict is Verdict.CONSISTENT
        results.append((ok, f"instance {i}: {rep.verdict.value}" if not ok else "", viol))
    return _outcome("rigidity-adjoint", results)


def sweep_splitting(seed: int = 0, count: int = 100) -> SweepOutcome:
    """Splitting-construction sweep: verify the three postconditions."""
    results = []
    for i, rng in enumerate(_streams(seed, count)):
        t, m = splitting_instance(rng, d=2, max_side=3)
        inner = int(rng.integers(2**31))
        try:
            n = splitting_construct(t, m, seed=inner)
        except Exception as exc:  # noqa: BLE001 - aggregated into the outcome
            results.append((False, f"instance {i}: {exc}", False))
            continue
        stacked = np.hstack([m.frame, n.frame])
        svals = np.linalg.svd(stacked, compute_uv=False) if stacked.size else np.array([])
        checks = [
            is_invariant(t, n),
            m.dim + n.dim == t.dim,
            svals.size == 0 or svals[-1] > 1e-8,
            numerical_rank(stacked) == t.dim,
        ]
        ok = all(checks)
        results.append((ok, f"instance {i}: checks={checks}" if not ok else "", False))
    return _outcome("splitting", results)


def sweep_greedy(seed: int = 0, count: int = 200) -> SweepOutcome:
    """Greedy separating-set sweep: size bound and strict kernel descent."""
    results = []
    for i, rng in enumerate(_streams(seed, count)):
        if rng.random() < 0.3:
            ann1 = random_monomial_ideal(rng, 2, 6)
            ann2 = random_monomial_ideal(rng, 2, 6)
            t1 = model_tuple(model_space(ann1))
            t2 = model_tuple(model_space(ann2))
            mats = []
            for m1, m2 in zip(t1.mats, t2.mats):
                block = np.zeros(
                    (t1.dim + t2.dim, t1.dim + t2.dim), dtype=np.complex128
                )
                block[: t1.dim, : t1.dim] = m1
                block[t1.dim :, t1.dim :] = m2
                mats.append(block)
            t = random_similarity(rng, RowTuple(mats))
        else:
            t = cyclic_instance(rng, d=2, max_delta=12)
        q = quotient_algebra(annihilator(t))
        delta = q.dim
        inner = int(rng.integers(2**31))
        try:
            chosen, trace = separating_greedy(t, seed=inner, with_trace=True)
        except Exception as exc:  # noqa: BLE001
            results.append((False, f"instance {i}: {exc}", False))
            continue
        strict = all(a > b for a, b in zip(trace, trace[1:]))
        joint = np.vstack(
            [
                np.column_stack([t.monomial(alpha) @ xi for alpha in q.monomial_basis])
                for xi in chosen
            ]
        )
        separating = numerical_rank(joint) == delta
        ok = len(chosen) <= delta and strict and separating and trace[-1] == 0
        results.append(
            (ok, f"instance {i}: size={len(chosen)} delta={delta} trace={trace}" if not ok else "", False)
        )
    return _outcome("greedy", results)


def sweep_transform(seed: int = 0, count: int = 100) -> SweepOutcome:
    """Quasi-affine witness sweep with Gram and Fock intertwiner checks."""
    results = []
    for i, rng in enumerate(_streams(seed, count)):
        t = cyclic_instance(rng, d=2, max_delta=8)
        inner = int(rng.integers(2**31))
        try:
            x = quasiaffine_witness(t, seed=inner)
        except Exception as exc:  # noqa: BLE001
            results.append((False, f"instance {i}: {exc}", False))
            continue
        ann = annihilator(t)
        space = model_space(ann)
        model = model_tuple(space)
        residual = max(
            operator_norm(x @ mk - tk @ x) for mk, tk in zip(model.mats, t.mats)
        )
        full_rank = numerical_rank(x) == t.dim
        const = space.frame.conj().T @ TruncatedDA(t.d, space.degree_cap).coordinates(
            Polynomial.constant(t.d, 1.0)
        )
        const = const / np.linalg.norm(const)
        xi = x @ const
        gram = gram_operator(t, xi)
        idx = nilpotency_index(t)
        y = fock_intertwiner(t, xi, idx)
        fock = TruncatedFock(t.d, idx)
        fock_res = max(
            operator_norm(y @ creation_matrix(k, fock) - t.mats[k - 1] @ y)
            for k in range(1, t.d + 1)
        )
        ok = (
            residual < 1e-8
            and full_rank
            and gram.bound <= 1.0 + 1e-8
            and fock_res < 1e-10
        )
        results.append(
            (
                ok,
                f"instance {i}: res={residual:.2e} rank={full_rank} "
                f"bound={gram.bound:.6f} fock={fock_res:.2e}"
                if not ok
                else "",
                False,
            )
        )
    return _outcome("transform", results)


def sweep_decompose(seed: int = 0, count: int = 200) -> SweepOutcome:
    """Decomposition sweep: certificate validity and find-consistency."""
    from .subspaces import decomposition_exists, decomposition_find

    results = []
    for i, rng in enumerate(_streams(seed, count)):
        t = small_nilpotent_instance(rng, dim_cap=4)
        inner = int(rng.integers(2**31))
        rep = decomposition_exists(t, seed=inner)
        ok = True
        msg = ""
        if rep.exists:
            e = rep.idempotent
            cert = (
                operator_norm(e @ e - e) < 1e-9
                and all(
                    operator_norm(e @ mat - mat @ e) < 1e-8 for mat in t.mats
                )
                and 0 < round(np.trace(e).real) < t.dim
            )
            pair = decomposition_find(t, seed=inner)
            ok = cert and pair is not None
            if not ok:
                msg = f"instance {i}: cert={cert} pair={pair is not None}"
        else:
            ok = rep.idempotent is None and decomposition_find(t, seed=inner) is None
            if not ok:
                msg = f"instance {i}: inconsistent absence"
        results.append((ok, msg, False))
    return _outcome("decompose", results)


SUITES = {
    "rigidity-full": sweep_rigidity_full,
    "rigidity-coinvariant": sweep_rigidity_coinvariant,
    "rigidity-adjoint": sweep_rigidity_adjoint,
    "splitting": sweep_splitting,
    "greedy": sweep_greedy,
    "transform": sweep_transform,
    "decompose": sweep_decompose,
}


def run_suite(name: str, seed: int = 0, count: int | None = None) -> list[SweepOutcome]:
    """Run one named suite, or all of them, and return the outcomes."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}, all")
    outcomes = []
    for entry in names:
        fn = SUITES[entry]
        outcomes.append(fn(seed=seed) if count is None else fn(seed=seed, count=count))
    return outcomes
