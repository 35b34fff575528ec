import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from conftest import random_matrix, random_quad
from core.algebra import (cube_constant, eval_quad, eval_quad_at, flip_delta, low_rank_embedding,
                          perturb_equivalent, restrict, simple_inequality_holds, square_decompose,
                          translation_directions)
from core.errors import DimensionMismatchError, FormatError
from core.formats import dump_quad, parse_dist, parse_matrix, parse_quad
from core.rational import format_rational, parse_rational
from core.types import DiscreteDist, LinearConstraint, QuadPoly, RatMatrix, SignVector
from engine.exact import QuadricSpec, histogram, vector_event_prob
from ranklab.linalg import rank

rationals = st.fractions(min_value=0, max_value=10, max_denominator=12)


def remark_polynomial() -> QuadPoly:
    """(1 + x1)(x1 + x2 + x3 + x4)"""
    return QuadPoly.product_of_linear([1, 0, 0, 0], 1, [1, 1, 1, 1], 0)


def test_parse_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-7") == Fraction(-7)
    assert parse_rational(" 4 / 2 ") == 2
    assert format_rational(Fraction(3)) == "3/1"
    for bad in ("1.5", "1/0", "", "a/b", 0.5, True):
        with pytest.raises(FormatError):
            parse_rational(bad)


def test_eval_quad_examples():
    x1x2 = QuadPoly.from_monomials(2, {(0, 1): 1})
    assert eval_quad(x1x2, SignVector.from_signs([1, 1])) == 1

    square = QuadPoly.square_of_linear([1, 1])
    assert eval_quad(square, SignVector.from_signs([1, -1])) == 0

    q = remark_polynomial()
    for rest in product((-1, 1), repeat=3):
        assert eval_quad(q, SignVector.from_signs([-1, *rest])) == 0


def test_eval_quad_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        eval_quad(QuadPoly.constant(3, 1), SignVector.all_plus(2))


def test_flip_delta_examples():
    x1x2 = QuadPoly.from_monomials(2, {(0, 1): 1})
    assert flip_delta(x1x2, SignVector.all_plus(2), 0) == -2
    assert flip_delta(QuadPoly.constant(5, 7), SignVector.all_minus(5), 3) == 0
    assert flip_delta(QuadPoly.linear([1] * 5), SignVector.all_plus(5), 3) == -2
    with pytest.raises(IndexError):
        flip_delta(x1x2, SignVector.all_plus(2), 2)


@given(st.integers(0, 2 ** 32), st.integers(1, 16), st.data())
@settings(max_examples=200, deadline=None)
def test_flip_delta_matches_reevaluation(seed, n, data):
    rng = random.Random(seed)
    q = random_quad(rng, n)
    x = SignVector(n, rng.getrandbits(n))
    j = data.draw(st.integers(0, n - 1))
    assert eval_quad(q, x.flip(j)) - eval_quad(q, x) == flip_delta(q, x, j)


def test_from_monomials_uses_half_offdiagonal():
    q = QuadPoly.from_monomials(2, {(0, 1): 3})
    assert q.A[0, 1] == Fraction(3, 2)
    assert q.monomials() == {(0, 1): Fraction(3)}
    assert parse_quad(dump_quad(q)) == q


def test_parse_quad_rejects_lower_triangle():
    with pytest.raises(FormatError):
        parse_quad({"n": 2, "quad": [[1, 0, "1"]], "lin": ["0", "0"], "const": "0"})


def test_perturb_equivalent_diagonal_only():
    rng = random.Random(3)
    q = random_quad(rng, 4)
    n = q.n
    lam = Fraction(5, 3)
    q_star = perturb_equivalent(q, RatMatrix.empty(n), [], RatMatrix.zeros(n, 0), RatMatrix.zeros(0, n), [lam] * n)
    for bits in range(1 << n):
        x = SignVector(n, bits)
        assert eval_quad(q_star, x) == eval_quad(q, x)


def test_perturb_equivalent_empty_constraint_is_identity():
    rng = random.Random(4)
    q = random_quad(rng, 3)
    q_star = perturb_equivalent(q, RatMatrix.empty(3), [], RatMatrix.zeros(3, 0), RatMatrix.zeros(0, 3), [0, 0, 0])
    assert q_star == q


def test_perturb_equivalent_kills_product_on_fiber():
    # (x1+x2)(x3+x4): A = (uvᵀ + vuᵀ)/2 с u = (1,1,0,0) = M, L = v/2, R = vᵀ/2
    q = QuadPoly.product_of_linear([1, 1, 0, 0], 0, [0, 0, 1, 1], 0)
    M = RatMatrix.from_rows([[1, 1, 0, 0]])
    L = RatMatrix.from_rows([[0], [0], [Fraction(-1, 2)], [Fraction(-1, 2)]])
    R = RatMatrix.from_rows([[0, 0, Fraction(-1, 2), Fraction(-1, 2)]])
    q_star = perturb_equivalent(q, M, [0], L, R, [0] * 4)
    assert q_star.A.is_zero()
    constraint = LinearConstraint(M, [0])
    for bits in range(16):
        x = SignVector(4, bits)
        if constraint.holds(x.signs()):
            assert eval_quad(q_star, x) == eval_quad(q, x) == 0


@pytest.mark.parametrize("seed", range(40))
def test_perturb_equivalent_agrees_on_constraint(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    k = rng.randint(0, 2)
    q = random_quad(rng, n)
    M = random_matrix(rng, k, n, bound=1)
    x0 = [rng.choice((-1, 1)) for _ in range(n)]
    w = M.mat_vec(x0)
    L = random_matrix(rng, n, k)
    R = random_matrix(rng, k, n)
    D = [rng.randint(-2, 2) for _ in range(n)]
    q_star = perturb_equivalent(q, M, w, L, R, D)
    constraint = LinearConstraint(M, w)
    for bits in range(1 << n):
        x = SignVector(n, bits)
        if constraint.holds(x.signs()):
            assert eval_quad(q_star, x) == eval_quad(q, x)


def test_square_decompose_examples():
    assert square_decompose(RatMatrix.identity(2)) == [(1, (1, 0)), (1, (0, 1))]
    x1x2 = QuadPoly.from_monomials(2, {(0, 1): 1})
    assert square_decompose(x1x2.A) == [(Fraction(1, 4), (1, 1)), (Fraction(-1, 4), (1, -1))]
    assert square_decompose(RatMatrix.zeros(3, 3)) == []


@given(st.integers(0, 2 ** 32), st.integers(1, 7))
@settings(max_examples=150, deadline=None)
def test_square_decompose_reconstructs_form(seed, n):
    rng = random.Random(seed)
    A = random_quad(rng, n, density=0.5).A
    terms = square_decompose(A)
    assert len(terms) == rank(A)
    rebuilt = RatMatrix.zeros(n, n)
    for lam, g in terms:
        rebuilt = rebuilt + RatMatrix.from_rows([[lam * a * b for b in g] for a in g], cols=n)
    assert rebuilt == A
    if terms:
        assert rank(RatMatrix.from_rows([g for _, g in terms], cols=n)) == len(terms)


def test_translation_directions_examples():
    x1_sq = QuadPoly.from_monomials(3, {(0, 0): 1})
    basis = translation_directions(x1_sq)
    assert len(basis) == 2
    assert all(v[0] == 0 for v in basis)
    assert translation_directions(QuadPoly.from_monomials(2, {(0, 1): 1})) == []
    assert translation_directions(QuadPoly.from_monomials(2, {(0, 0): 1}, [0, 1])) == []


@pytest.mark.parametrize("seed", range(20))
def test_translation_directions_leave_value_unchanged(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    # вырожденная квадратичная часть через малое число квадратов
    g = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
    q = QuadPoly.square_of_linear(g, rng.randint(-2, 2))
    for v in translation_directions(q):
        for _ in range(20):
            w = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
            lam = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            moved = [a + lam * b for a, b in zip(w, v)]
            assert eval_quad_at(q, moved) == eval_quad_at(q, w)


@pytest.mark.parametrize("seed", range(15))
def test_low_rank_embedding_matches_histogram(seed):
    rng = random.Random(seed)
    q = random_quad(rng, rng.randint(1, 8), bound=2, denominators=(1,))
    vectors, P = low_rank_embedding(q)
    for bits in range(1 << q.n):
        x = SignVector(q.n, bits)
        y = [sum((s * a[i] for s, a in zip(x.signs(), vectors)), Fraction(0)) for i in range(P.n)]
        assert eval_quad_at(P, y) == eval_quad(q, x)
    expected = histogram(q).point_prob(0)
    assert vector_event_prob(vectors, QuadricSpec.unconstrained(P)) == expected


def test_restrict_and_cube_constant():
    q = remark_polynomial()
    fixed = restrict(q, {0: Fraction(-1)})
    assert fixed.n == 3
    assert cube_constant(fixed) == 0
    assert cube_constant(q) is None
    assert cube_constant(QuadPoly.from_monomials(2, {(0, 0): 2, (1, 1): 3}, None, 1)) == 6


@given(rationals, rationals, rationals)
@settings(max_examples=500, deadline=None)
def test_simple_inequality(a, b, c):
    holds = simple_inequality_holds(a, b, c)
    if a * a <= a * b + c:
        assert holds
        # a ≤ b + √c ⟺ a ≤ b или (a − b)² ≤ c
        assert a <= b or (a - b) ** 2 <= c


def test_discrete_dist_validation():
    with pytest.raises(FormatError):
        DiscreteDist(((0, Fraction(1, 2)), (1, Fraction(1, 3))))
    with pytest.raises(FormatError):
        parse_dist({"atoms": [["1", "1/2"], ["1", "1/2"]]})
    d = parse_dist({"atoms": [["2", "1/4"], ["-1", "3/4"]]})
    assert d.support == (-1, 2)
    assert d.max_atom() == (-1, Fraction(3, 4))


def test_matrix_format_and_empty_matrix():
    M = parse_matrix({"rows": 0, "cols": 3, "entries": []})
    assert M.shape == (0, 3)
    assert rank(M) == 0
    with pytest.raises(FormatError):
        parse_matrix({"rows": 2, "cols": 2, "entries": [["1", "2"]]})
