from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from obsfreq.classical import make_distribution, point_mass, random_distribution, uniform
from obsfreq.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    MalformedExpression,
    NonCommuting,
    NotAProjector,
    NotNested,
    ZeroContext,
)
from obsfreq.operators import (
    And,
    Not,
    Or,
    Projector,
    StateVector,
    Var,
    binary_projector,
    boolean_operator,
    born,
    classical_embeddability,
    complement,
    diagonal_projector,
    identity,
    meet,
    nonlinearity_witness,
    observability_operators,
    parse_expression,
    projector_onto,
    ratio_frequency,
    superposition_gap,
    ternary_embed,
    tomographic_embed,
)
from obsfreq.ternary import make_ternary, measurable_frequency, random_ternary, ternary_point_mass, uniform_ternary

from .oracles import classical_prob, eval_tuple_free, random_expression


class TestStateVector:
    def test_uniform(self):
        assert np.allclose(tomographic_embed(uniform(2)).coords, [0.5] * 4, atol=0)

    def test_point_mass_is_basis_vector(self):
        s = tomographic_embed(point_mass(2, (False, True)))
        assert s.coords.tolist() == [0.0, 0.0, 1.0, 0.0]

    def test_table(self):
        s = tomographic_embed(make_distribution(2, (0.3, 0.2, 0.1, 0.4)))
        assert np.allclose(s.coords, np.sqrt([0.3, 0.2, 0.1, 0.4]), rtol=0, atol=1e-15)
        assert abs(np.linalg.norm(s.coords) - 1) <= 1e-12

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            StateVector(np.array([1.0, 1.0]))

    def test_ternary_uniform(self):
        assert np.allclose(ternary_embed(uniform_ternary(1)).coords, [3**-0.5] * 3, rtol=0, atol=1e-15)

    def test_ternary_point_mass(self):
        s = ternary_embed(ternary_point_mass("TU"))
        assert s.coords.tolist() == [0, 0, 1, 0, 0, 0, 0, 0, 0]

    def test_ternary_norm(self):
        rng = np.random.default_rng(8)
        for _ in range(10_000):
            s = ternary_embed(random_ternary(2, rng))
            assert abs(np.linalg.norm(s.coords) - 1) <= 1e-12


class TestProjector:
    def test_rejects_non_idempotent(self):
        with pytest.raises(NotAProjector):
            Projector(np.diag([2.0, 0.0]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotAProjector):
            Projector(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_complex_rank_one(self):
        p = projector_onto([1, 1j])
        assert p.matrix.dtype.kind == "c"
        assert not p.is_diagonal

    def test_binary_P(self):
        assert np.diag(binary_projector(2, 0, True).matrix).tolist() == [1, 1, 0, 0]

    def test_binary_Q(self):
        assert np.diag(binary_projector(2, 1, True).matrix).tolist() == [1, 0, 1, 0]

    def test_binary_false(self):
        assert np.diag(binary_projector(1, 0, False).matrix).tolist() == [0, 1]

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            binary_projector(2, 2)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_observability_nesting(self, n):
        for i in range(n):
            p, ps = observability_operators(n, i)
            assert np.array_equal(p.matrix @ ps.matrix, p.matrix)
            assert np.array_equal(ps.matrix @ p.matrix, p.matrix)

    def test_observability_dialogue_matrices(self):
        p, ps = observability_operators(2, 0)
        assert np.diag(p.matrix).tolist() == [1, 1, 1, 0, 0, 0, 0, 0, 0]
        assert np.diag(ps.matrix).tolist() == [1, 1, 1, 1, 1, 1, 0, 0, 0]

    def test_observability_single(self):
        p, ps = observability_operators(1, 0)
        assert np.diag(p.matrix).tolist() == [1, 0, 0]
        assert np.diag(ps.matrix).tolist() == [1, 1, 0]


class TestBorn:
    def test_uniform_half(self):
        assert born(tomographic_embed(uniform(2)), binary_projector(2, 0)) == pytest.approx(0.5, abs=1e-15)

    def test_eigenvector(self):
        assert born(StateVector.basis(4, 1), binary_projector(2, 0)) == 1.0

    def test_identity(self, rng):
        s = StateVector.normalized(rng.normal(size=8) + 1j * rng.normal(size=8))
        assert born(s, identity(8)) == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            born(StateVector.basis(4, 0), identity(8))


class TestBooleanOperator:
    def test_not(self):
        assert np.diag(boolean_operator(Not(Var(0)), 1).matrix).tolist() == [0, 1]

    def test_and(self):
        assert np.diag(boolean_operator(And(Var(0), Var(1)), 2).matrix).tolist() == [1, 0, 0, 0]

    def test_or(self):
        assert np.diag(boolean_operator(Or(Var(0), Var(1)), 2).matrix).tolist() == [1, 1, 1, 0]

    def test_de_morgan(self):
        lhs = boolean_operator(Not(And(Var(0), Var(1))), 2).matrix
        rhs = boolean_operator(Or(Not(Var(0)), Not(Var(1))), 2).matrix
        assert np.allclose(lhs, rhs, rtol=0, atol=1e-12)

    def test_not_is_complement(self, rng):
        for _ in range(50):
            e = random_expression(rng, 3, 3)
            assert np.array_equal(boolean_operator(Not(e), 3).matrix, np.eye(8) - boolean_operator(e, 3).matrix)

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            boolean_operator(Var(3), 2)

    def test_malformed(self):
        with pytest.raises(MalformedExpression):
            boolean_operator(("and", 0, 1), 2)

    def test_born_matches_enumeration(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            n = int(rng.integers(1, 5))
            d = random_distribution(n, rng)
            e = random_expression(rng, n, 3)
            want = classical_prob(d.weights, n, lambda a: eval_tuple_free(e, a))
            assert abs(born(tomographic_embed(d), boolean_operator(e, n)) - want) <= 1e-12

    def test_non_commuting_and_rejected(self):
        with pytest.raises(NonCommuting):
            meet(diagonal_projector([1, 0]), projector_onto([1, 1]))


class TestParser:
    def test_precedence(self):
        assert parse_expression("p AND NOT q OR r", ["p", "q", "r"]) == Or(And(Var(0), Not(Var(1))), Var(2))

    def test_symbols_and_parentheses(self):
        assert parse_expression("~(p0 | p1) & p2") == And(Not(Or(Var(0), Var(1))), Var(2))

    @pytest.mark.parametrize("text", ["p AND", "(p", "p q", "x", "p & & q", ""])
    def test_malformed(self, text):
        with pytest.raises(MalformedExpression):
            parse_expression(text, ["p", "q"])

    def test_roundtrip_semantics(self):
        e = parse_expression("p and not q or r", ["p", "q", "r"])
        for a in product((True, False), repeat=3):
            assert eval_tuple_free(e, a) == ((a[0] and not a[1]) or a[2])


class TestRatioFrequency:
    def test_tu_vector(self):
        s = ternary_embed(ternary_point_mass("TU"))
        assert ratio_frequency(s, *observability_operators(2, 0)) == 1.0

    def test_matches_measurable_frequency(self):
        d = make_ternary(1, (0.3, 0.1, 0.6))
        r = ratio_frequency(ternary_embed(d), *observability_operators(1, 0))
        assert r == pytest.approx(0.75, abs=1e-12)
        assert r == pytest.approx(measurable_frequency(d, 0), abs=1e-12)

    def test_perfect_box(self):
        with pytest.raises(ZeroContext):
            ratio_frequency(ternary_embed(ternary_point_mass("UU")), *observability_operators(2, 0))

    def test_not_nested(self):
        p, ps = observability_operators(1, 0)
        with pytest.raises(NotNested):
            ratio_frequency(StateVector.basis(3, 0), ps, p)

    def test_dimension_mismatch(self):
        p, ps = observability_operators(2, 0)
        with pytest.raises(DimensionMismatch):
            ratio_frequency(StateVector.basis(3, 0), p, ps)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(0, 1), min_size=27, max_size=27).filter(lambda w: sum(w) > 1e-3), st.integers(0, 2))
    def test_consistency(self, w, i):
        d = make_ternary(3, np.array(w) / sum(w))
        try:
            want = measurable_frequency(d, i)
        except Exception:
            return
        assert ratio_frequency(ternary_embed(d), *observability_operators(3, i)) == pytest.approx(want, abs=1e-12)


class TestNonlinearity:
    def test_quadratic_forms_pass_identity(self, rng):
        x = rng.normal(size=(3, 3))
        x = x + x.T
        s1 = rng.normal(size=3)
        s1 /= np.linalg.norm(s1)
        s2 = rng.normal(size=3)
        s2 -= (s1 @ s2) * s1
        s2 /= np.linalg.norm(s2)
        assert superposition_gap(lambda v: v @ x @ v, s1, s2, 0.3) <= 1e-12

    def test_witness_found(self):
        w = nonlinearity_witness(100, seed=1)
        assert w.found and w.discrepancy > 1e-6
        # re-evaluate the reported witness directly
        p, ps = observability_operators(1, 0)

        def f(v):
            return (v @ p.matrix @ v) / (v @ ps.matrix @ v)

        assert superposition_gap(f, w.s1, w.s2, w.weight) == pytest.approx(w.discrepancy, rel=1e-9)

    def test_u_free_is_linear(self):
        w = nonlinearity_witness(100, seed=1, u_free=True)
        assert w.linear_on_subspace and not w.found

    def test_deterministic(self):
        a, b = nonlinearity_witness(50, seed=9), nonlinearity_witness(50, seed=9)
        assert a.discrepancy == b.discrepancy and np.array_equal(a.s1, b.s1)

    def test_two_propositions(self):
        assert nonlinearity_witness(100, seed=2, n=2, i=1).found

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            nonlinearity_witness(3, seed=0)


class TestEmbeddability:
    def test_diagonal_family(self):
        assert classical_embeddability([binary_projector(3, i) for i in range(3)]).embeddable

    def test_non_commuting_pair(self):
        res = classical_embeddability([diagonal_projector([1, 0]), projector_onto([1, 1])])
        assert not res.embeddable and res.pair == (0, 1)
        commutator = np.diag([1.0, 0.0]) @ (np.ones((2, 2)) / 2) - (np.ones((2, 2)) / 2) @ np.diag([1.0, 0.0])
        assert np.abs(commutator).max() == 0.5

    def test_singleton(self):
        assert classical_embeddability([projector_onto([1, 1j])]).embeddable

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            classical_embeddability([identity(2), identity(3)])

    def test_complement_commutes(self):
        p = projector_onto([1, 2j, 0])
        assert classical_embeddability([p, complement(p)]).embeddable
