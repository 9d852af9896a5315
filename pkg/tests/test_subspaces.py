import numpy as np
import pytest

from rowtuples.errors import DomainError, HypothesisError, ShapeError
from rowtuples.fixtures import fromgriff, jordan, maxcount, rectangle
from rowtuples.ideals import annihilator, annihilators_equal
from rowtuples.linalg import operator_norm
from rowtuples.subspaces import (
    SubspaceBasis,
    Verdict,
    compress,
    decomposition_exists,
    decomposition_find,
    generated_invariant,
    intertwiner_space,
    is_invariant,
    restrict,
    rigidity_coinvariant_check,
    rigidity_invariant_check,
    splitting_construct,
)
from rowtuples.tuples import RowTuple
from rowtuples.vectors import multiplicity

E1 = np.array([1.0, 0.0, 0.0], dtype=complex)
E2 = np.array([0.0, 1.0, 0.0], dtype=complex)
E3 = np.array([0.0, 0.0, 1.0], dtype=complex)


def two_jordan_cells() -> RowTuple:
    j = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    z = np.zeros((2, 2))
    return RowTuple([np.block([[j, z], [z, j]])])


class TestSubspaceBasis:
    def test_rejects_non_orthonormal_frame(self):
        with pytest.raises(ShapeError):
            SubspaceBasis(2, np.array([[1.0], [1.0]]))

    def test_from_span_gram_schmidt(self):
        cols = np.array([[1.0, 1.0], [1.0, -1.0], [0.0, 0.0]], dtype=complex)
        s = SubspaceBasis.from_span(cols)
        assert s.dim == 2
        p = s.projector()
        assert np.abs(p - np.diag([1.0, 1.0, 0.0])).max() < 1e-12

    def test_from_span_drops_dependent_columns(self):
        cols = np.array([[1.0, 2.0], [0.0, 0.0]], dtype=complex)
        assert SubspaceBasis.from_span(cols).dim == 1

    def test_full_zero_complement(self):
        full = SubspaceBasis.full(3)
        zero = SubspaceBasis.zero(3)
        assert full.dim == 3 and zero.dim == 0
        assert full.complement().dim == 0
        assert zero.complement().dim == 3
        s = SubspaceBasis.from_span(E1.reshape(3, 1))
        c = s.complement()
        assert c.dim == 2
        assert np.abs(s.frame.conj().T @ c.frame).max() < 1e-12


class TestInvariance:
    def test_e2_span_invariant_for_maxcount(self):
        t = maxcount()
        m = SubspaceBasis.from_span(E2.reshape(3, 1))
        assert is_invariant(t, m)

    def test_e1_span_not_invariant(self):
        t = maxcount()
        m = SubspaceBasis.from_span(E1.reshape(3, 1))
        assert not is_invariant(t, m)

    def test_trivial_subspaces_invariant(self):
        t = fromgriff(2)
        assert is_invariant(t, SubspaceBasis.full(t.dim))
        assert is_invariant(t, SubspaceBasis.zero(t.dim))

    def test_generated_is_invariant_and_minimal(self):
        t = maxcount()
        g = generated_invariant(t, [E1])
        assert g.dim == 2
        assert is_invariant(t, g)
        p = g.projector()
        assert np.linalg.norm(p @ E1 - E1) < 1e-12

    def test_restrict_and_compress(self):
        t = maxcount()
        m = SubspaceBasis.from_span(E2.reshape(3, 1))
        r = restrict(t, m)
        assert r.dim == 1
        assert all(np.abs(mat).max() < 1e-14 for mat in r.mats)
        c = compress(t, m.complement())
        assert c.dim == 2

    def test_restrict_rejects_non_invariant(self):
        t = maxcount()
        m = SubspaceBasis.from_span(E1.reshape(3, 1))
        with pytest.raises(DomainError):
            restrict(t, m)


class TestIntertwinerSpace:
    def test_jordan_commutant_dims(self):
        # a single nonderogatory cell has commutant {p(T)}: dimension = size
        assert len(intertwiner_space(jordan(2), jordan(2)).basis) == 2
        assert len(intertwiner_space(jordan(3), jordan(3)).basis) == 3

    def test_zero_tuple_commutant_is_everything(self):
        z = RowTuple([np.zeros((2, 2), dtype=complex)])
        assert len(intertwiner_space(z, z).basis) == 4

    def test_basis_elements_intertwine(self):
        s, t = jordan(3), jordan(3)
        for x in intertwiner_space(s, t).basis:
            for sk, tk in zip(s.mats, t.mats):
                assert operator_norm(x @ sk - tk @ x) < 1e-10

    def test_basis_frobenius_orthonormal(self):
        basis = intertwiner_space(jordan(3), jordan(3)).basis
        for i, x in enumerate(basis):
            for j, y in enumerate(basis):
                ip = np.vdot(x.ravel(), y.ravel())
                assert abs(ip - (1.0 if i == j else 0.0)) < 1e-10

    def test_cross_intertwiners_between_different_sizes(self):
        # maps J2 -> J3 intertwining the shifts: dimension 2
        basis = intertwiner_space(jordan(2), jordan(3)).basis
        for x in basis:
            assert x.shape == (3, 2)
            assert operator_norm(x @ jordan(2).mats[0] - jordan(3).mats[0] @ x) < 1e-10


class TestRigidity:
    def test_adjoint_cyclic_route_consistent(self):
        t = maxcount()
        g = generated_invariant(t, [E1])
        full = SubspaceBasis.full(3)
        rep = rigidity_invariant_check(t, g, full)
        assert rep.verdict is Verdict.CONSISTENT
        assert rep.route == "adjoint-cyclic"
        assert rep.annihilators_match is False
        assert rep.subspaces_match is False

    def test_equal_subspaces_consistent(self):
        t = maxcount()
        g = generated_invariant(t, [E1])
        rep = rigidity_invariant_check(t, g, g)
        assert rep.verdict is Verdict.CONSISTENT
        assert rep.annihilators_match is True
        assert rep.subspaces_match is True

    def test_inapplicable_when_no_hypothesis_holds(self):
        t = two_jordan_cells()
        m = generated_invariant(t, [np.array([0, 1, 0, 0], dtype=complex)])
        n = generated_invariant(t, [np.array([0, 0, 0, 1], dtype=complex)])
        rep = rigidity_invariant_check(t, m, n)
        assert rep.verdict is Verdict.INAPPLICABLE
        assert rep.route is None

    def test_coinvariant_route_on_cyclic_tuple(self):
        j = jordan(3)
        m = generated_invariant(j.adjoint(), [E2])  # span{e1, e2}
        assert m.dim == 2
        rep = rigidity_coinvariant_check(j, m, m)
        assert rep.verdict is Verdict.CONSISTENT
        assert rep.route == "cyclic"

    def test_coinvariant_different_pairs_differ_in_both(self):
        j = jordan(3)
        m = generated_invariant(j.adjoint(), [E2])
        n = generated_invariant(j.adjoint(), [E1])  # span{e1}
        rep = rigidity_coinvariant_check(j, m, n)
        assert rep.verdict is Verdict.CONSISTENT
        assert rep.annihilators_match is False
        assert rep.subspaces_match is False

    def test_coinvariant_inapplicable_without_cyclicity(self):
        t = maxcount()  # multiplicity 2
        m = generated_invariant(t.adjoint(), [E1])
        rep = rigidity_coinvariant_check(t, m, m)
        assert rep.verdict is Verdict.INAPPLICABLE


class TestDecomposition:
    def test_maxcount_is_indecomposable(self):
        rep = decomposition_exists(maxcount())
        assert rep.exists is False
        assert rep.commutant_dim == 3
        assert rep.semisimple_dim == 1
        assert rep.idempotent is None

    def test_fromgriff3_is_indecomposable(self):
        rep = decomposition_exists(fromgriff(3))
        assert rep.exists is False
        assert rep.commutant_dim == 13
        assert rep.semisimple_dim == 1

    def test_jordan_cell_is_indecomposable(self):
        rep = decomposition_exists(jordan(3))
        assert rep.exists is False
        assert rep.commutant_dim == 3
        assert rep.semisimple_dim == 1

    def test_two_cells_decompose(self):
        t = two_jordan_cells()
        rep = decomposition_exists(t)
        assert rep.exists is True
        assert rep.commutant_dim == 8
        assert rep.semisimple_dim == 4
        e = rep.idempotent
        assert np.abs(e @ e - e).max() < 1e-9
        tr = np.trace(e).real
        assert abs(tr - round(tr)) < 1e-9
        assert 0 < round(tr) < 4
        for mat in t.mats:
            assert operator_norm(e @ mat - mat @ e) < 1e-9

    def test_find_returns_complementary_invariant_pair(self):
        t = two_jordan_cells()
        out = decomposition_find(t)
        assert out is not None
        m, n = out
        assert m.dim + n.dim == 4
        assert 0 < m.dim < 4
        assert is_invariant(t, m) and is_invariant(t, n)
        stacked = np.hstack([m.frame, n.frame])
        assert np.linalg.matrix_rank(stacked) == 4

    def test_find_cyclic_part(self):
        t = two_jordan_cells()
        out = decomposition_find(t, want_cyclic=True)
        assert out is not None
        m, _ = out
        assert multiplicity(restrict(t, m)) == 1

    def test_find_none_when_indecomposable(self):
        assert decomposition_find(jordan(3)) is None

    def test_scalar_tuple_decomposes(self):
        # no nilpotency is needed: 0.5*I has a full matrix commutant
        rep = decomposition_exists(RowTuple([np.eye(2) * 0.5]))
        assert rep.exists is True
        assert rep.commutant_dim == 4
        assert rep.semisimple_dim == 4


class TestSplitting:
    def test_block_sum_splits_off_one_cell(self):
        t = two_jordan_cells()
        m = generated_invariant(
            t, [np.array([1, 0, 0, 0], dtype=complex), np.array([0, 1, 0, 0], dtype=complex)]
        )
        assert m.dim == 2
        n = splitting_construct(t, m, seed=0)
        assert n.dim == 2
        assert is_invariant(t, n)
        stacked = np.hstack([m.frame, n.frame])
        assert np.linalg.matrix_rank(stacked) == 4
        smin = np.linalg.svd(stacked, compute_uv=False)[-1]
        assert smin > 1e-8

    def test_full_subspace_gives_zero_complement(self):
        t = maxcount()
        n = splitting_construct(t, SubspaceBasis.full(3), seed=0)
        assert n.dim == 0

    def test_hypothesis_failures_are_named(self):
        t = two_jordan_cells()
        with pytest.raises(HypothesisError) as info:
            splitting_construct(RowTuple([np.eye(2) * 0.5]), SubspaceBasis.full(2))
        assert info.value.hypothesis == "nilpotent"

        with pytest.raises(HypothesisError) as info:
            splitting_construct(maxcount(), SubspaceBasis.from_span(E1.reshape(3, 1)))
        assert info.value.hypothesis == "invariant_subspace"

        # restriction to the whole block sum has adjoint multiplicity 2
        with pytest.raises(HypothesisError) as info:
            splitting_construct(t, SubspaceBasis.full(4))
        assert info.value.hypothesis == "adjoint_cyclic"

        # span{e2} is invariant but the restriction is the zero tuple on C
        m = generated_invariant(maxcount(), [E2])
        with pytest.raises(HypothesisError) as info:
            splitting_construct(maxcount(), m)
        assert info.value.hypothesis == "annihilator_equality"

    def test_restriction_annihilator_preserved_on_split(self):
        t = two_jordan_cells()
        m = generated_invariant(
            t, [np.array([1, 0, 0, 0], dtype=complex), np.array([0, 1, 0, 0], dtype=complex)]
        )
        n = splitting_construct(t, m, seed=3)
        r = restrict(t, n)
        assert annihilators_equal(annihilator(r), annihilator(t))
