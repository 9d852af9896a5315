import math

import numpy as np
import pytest

from rowtuples.errors import NotCyclicError, NotNilpotentError, ShapeError
from rowtuples.fixtures import fromgriff, jordan, maxcount, rectangle
from rowtuples.fock import TruncatedFock, creation_matrix
from rowtuples.ideals import annihilator, model_space, model_tuple, quotient_algebra
from rowtuples.linalg import operator_norm
from rowtuples.sweeps import random_similarity
from rowtuples.tuples import RowTuple, poly_eval
from rowtuples.vectors import (
    GramReport,
    fock_intertwiner,
    gram_operator,
    is_cyclic,
    is_separating,
    krylov,
    multiplicity,
    quasiaffine_witness,
    separating_greedy,
    separating_witness,
)

E1 = np.array([1.0, 0.0, 0.0], dtype=complex)
E2 = np.array([0.0, 1.0, 0.0], dtype=complex)
E3 = np.array([0.0, 0.0, 1.0], dtype=complex)


class TestKrylov:
    def test_orbit_of_e1_is_two_dimensional(self):
        t = maxcount()
        k = krylov(t, E1)
        assert k.dim == 2
        # the orbit contains e1 and T_k e1 ∝ e2, nothing more
        p = k.projector()
        assert np.linalg.norm(p @ E1 - E1) < 1e-12
        assert np.linalg.norm(p @ E2 - E2) < 1e-12
        assert np.linalg.norm(p @ E3) < 1e-12

    def test_no_single_cyclic_vector(self):
        t = maxcount()
        rng = np.random.default_rng(11)
        for _ in range(25):
            v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            assert not is_cyclic(t, v)

    def test_adjoint_is_cyclic_from_e2(self):
        assert is_cyclic(maxcount().adjoint(), E2)

    def test_vector_length_checked(self):
        with pytest.raises(ShapeError):
            krylov(maxcount(), np.array([1.0, 0.0]))

    def test_jordan_top_vector_cyclic(self):
        assert is_cyclic(jordan(4), np.eye(4, dtype=complex)[:, 0])


class TestMultiplicity:
    def test_maxcount_needs_two_generators(self):
        t = maxcount()
        assert multiplicity(t) == 2
        assert multiplicity(t, exhaustive=True) == 2

    def test_jordan_is_cyclic(self):
        assert multiplicity(jordan(3)) == 1

    def test_rectangle(self):
        # C[x1,x2]/(x1^a, x2^b) is cyclic as a module over itself
        assert multiplicity(rectangle(3, 2)) == 1

    def test_direct_sum_adds(self):
        j = jordan(2).mats[0]
        two = RowTuple([np.block([[j, np.zeros((2, 2))], [np.zeros((2, 2)), j]])])
        assert multiplicity(two) == 2

    def test_requires_nilpotent(self):
        t = RowTuple([np.eye(2) * 0.5])
        with pytest.raises(NotNilpotentError):
            multiplicity(t)

    def test_zero_tuple_multiplicity_is_dimension(self):
        t = RowTuple([np.zeros((3, 3))] * 2)
        assert multiplicity(t) == 3
        assert multiplicity(t, exhaustive=True) == 3


class TestSeparating:
    def test_e2_is_not_separating(self):
        assert not is_separating(maxcount(), E2)

    def test_no_single_vector_separates_maxcount(self):
        # T1 v and T2 v are always parallel to e2, so the orbit of any
        # vector has rank at most 2 < delta = 3
        t = maxcount()
        rng = np.random.default_rng(5)
        for _ in range(10):
            v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            assert not is_separating(t, v)
            w = separating_witness(t, v)
            assert np.linalg.norm(poly_eval(w, t) @ v) < 1e-10
            assert operator_norm(poly_eval(w, t)) > 0.1

    def test_generic_vector_separates_cyclic_tuples(self):
        rng = np.random.default_rng(5)
        for t in (jordan(4), rectangle(2, 2)):
            for _ in range(5):
                v = rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
                assert is_separating(t, v)
                assert separating_witness(t, v) is None

    def test_witness_formula_on_nonseparating_family(self):
        # vectors with v2 = v3 = components forcing the kernel direction
        t = maxcount()
        v = np.array([1.0, 2.0, 3.0], dtype=complex)
        w = separating_witness(t, v)
        assert w is not None
        # w ∝ (v3 x1 + (v3 - v1) x2) normalized: (3 x1 + 2 x2)/sqrt(13)
        expect = {(1, 0): 3 / math.sqrt(13), (0, 1): 2 / math.sqrt(13)}
        for alpha, c in expect.items():
            assert abs(abs(w.coeffs[alpha]) - c) < 1e-12
        # certificate quality: annihilates v but not the algebra
        assert np.linalg.norm(poly_eval(w, t) @ v) < 1e-12
        assert operator_norm(poly_eval(w, t)) > 0.1

    def test_witness_for_e2_certifies(self):
        t = maxcount()
        w = separating_witness(t, E2)
        assert w is not None
        assert np.linalg.norm(poly_eval(w, t) @ E2) < 1e-12
        assert operator_norm(poly_eval(w, t)) > 0.1

    def test_witness_has_unit_coefficient_norm(self):
        t = maxcount()
        q = quotient_algebra(annihilator(t))
        w = separating_witness(t, E2, quotient=q)
        coeffs = np.array([w.coeffs.get(a, 0.0) for a in q.monomial_basis])
        assert abs(np.linalg.norm(coeffs) - 1.0) < 1e-12

    def test_cyclic_implies_separating(self):
        # for nilpotent commuting tuples a cyclic vector always separates
        rng = np.random.default_rng(2)
        t = jordan(4)
        for _ in range(10):
            v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            if is_cyclic(t, v):
                assert is_separating(t, v)


class TestSeparatingGreedy:
    def test_basis_walk_reproduces_known_pair(self):
        t = maxcount()
        chosen, trace = separating_greedy(t, sampler="basis", with_trace=True)
        assert trace == [3, 1, 0]
        assert len(chosen) == 2
        assert np.allclose(chosen[0], E1)
        assert np.allclose(chosen[1], E3)

    def test_gaussian_needs_at_most_delta_vectors(self):
        t = maxcount()
        q = quotient_algebra(annihilator(t))
        chosen = separating_greedy(t, seed=3)
        assert 1 <= len(chosen) <= q.dim

    def test_chosen_set_is_jointly_separating(self):
        t = fromgriff(3)
        q = quotient_algebra(annihilator(t))
        chosen = separating_greedy(t, seed=1)
        cols = np.hstack(
            [
                np.column_stack([t.monomial(a) @ v for a in q.monomial_basis]).T
                for v in chosen
            ]
        )
        assert np.linalg.matrix_rank(cols.T) == q.dim

    def test_single_generic_vector_suffices_when_separating(self):
        chosen = separating_greedy(jordan(3), seed=0)
        assert len(chosen) == 1

    def test_unknown_sampler_rejected(self):
        with pytest.raises(ShapeError):
            separating_greedy(maxcount(), sampler="sobol")


class TestGramOperator:
    def test_worked_example(self):
        rep = gram_operator(maxcount(), E1)
        assert isinstance(rep, GramReport)
        expect = np.diag([1.0, 1.0 / 3.0, 0.0])
        assert np.abs(rep.gram - expect).max() < 1e-12
        assert abs(rep.bound - 1.0) < 1e-12
        assert rep.cyclic is False

    def test_zero_vector(self):
        rep = gram_operator(maxcount(), np.zeros(3))
        assert np.abs(rep.gram).max() == 0.0
        assert rep.bound == 0.0

    def test_gram_is_positive_semidefinite(self):
        t = fromgriff(3)
        rng = np.random.default_rng(7)
        for _ in range(5):
            v = rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
            rep = gram_operator(t, v)
            eigs = np.linalg.eigvalsh(rep.gram)
            assert eigs.min() > -1e-10

    def test_witness_image_of_constant_has_contractive_gram(self):
        # for a cyclic tuple, pushing the model's constant through the
        # quasi-affine witness produces a vector with gram bound <= 1
        rng = np.random.default_rng(21)
        for t0 in (jordan(3), rectangle(2, 2)):
            t = random_similarity(rng, t0)
            X = quasiaffine_witness(t, seed=2)
            frame = model_space(annihilator(t)).frame
            const = frame.conj().T @ np.eye(frame.shape[0], 1, dtype=complex)[:, 0]
            xi = X @ (const / np.linalg.norm(const))
            rep = gram_operator(t, xi)
            assert rep.bound <= 1.0 + 1e-8

    def test_bound_scales_quadratically(self):
        t = maxcount()
        one = gram_operator(t, E1)
        double = gram_operator(t, 2 * E1)
        assert abs(double.bound - 4 * one.bound) < 1e-10


class TestFockIntertwiner:
    def test_shape_and_norm(self):
        X = fock_intertwiner(maxcount(), E1, 2)
        assert X.shape == (3, 7)
        assert abs(operator_norm(X) - 1.0) < 1e-12

    def test_first_column_is_the_vector(self):
        X = fock_intertwiner(maxcount(), E1, 2)
        assert np.allclose(X[:, 0], E1)

    def test_intertwines_creation_operators(self):
        t = maxcount()
        X = fock_intertwiner(t, E1, 3)
        fock = TruncatedFock(2, 3)
        for k in range(2):
            resid = t.mats[k] @ X - X @ creation_matrix(k + 1, fock)
            assert operator_norm(resid) < 1e-12

    def test_gram_factorization(self):
        # G = X X^H reproduces the word-orbit gram operator
        t = fromgriff(2)
        rng = np.random.default_rng(3)
        v = rng.standard_normal(t.dim) + 1j * rng.standard_normal(t.dim)
        X = fock_intertwiner(t, v, 4)
        rep = gram_operator(t, v)
        assert np.abs(X @ X.conj().T - rep.gram).max() < 1e-10


class TestQuasiaffineWitness:
    def test_jordan_model_intertwiner(self):
        t = jordan(3)
        X = quasiaffine_witness(t, seed=0)
        m = model_tuple(model_space(annihilator(t)))
        assert X.shape == (3, 3)
        assert abs(operator_norm(X) - 1.0) < 1e-12
        assert np.linalg.matrix_rank(X) == 3
        resid = max(
            operator_norm(t.mats[k] @ X - X @ m.mats[k]) for k in range(t.d)
        )
        assert resid < 1e-12

    def test_conjugated_model_recovers_intertwiner(self):
        rng = np.random.default_rng(9)
        t = random_similarity(rng, rectangle(2, 2))
        X = quasiaffine_witness(t, seed=4)
        m = model_tuple(model_space(annihilator(t)))
        resid = max(
            operator_norm(t.mats[k] @ X - X @ m.mats[k]) for k in range(t.d)
        )
        assert resid < 1e-8
        assert np.linalg.matrix_rank(X) == t.dim

    def test_noncyclic_tuple_rejected(self):
        with pytest.raises(NotCyclicError):
            quasiaffine_witness(maxcount())
