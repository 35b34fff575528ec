import random
from fractions import Fraction
from itertools import combinations, product

import networkx as nx
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from conftest import random_quad, random_symmetric
from core.algebra import cube_constant, restrict
from core.errors import CapExceededError, ParameterError
from core.types import DiscreteDist, QuadPoly, RatMatrix
from engine.general import ProductDist
from structure.fixing import SearchStatus, box_is_fixing, fixing_box_robustness, min_fixing_number, verify_witness
from structure.representation import majority_outcome, median, represent_discrete
from structure.robustness import (matching_lower_bound, min_vertex_cover, naive_offdiag_robustness,
                                  offdiag_robustness, support_graph)


def remark_polynomial() -> QuadPoly:
    return QuadPoly.product_of_linear([1, 0, 0, 0], 1, [1, 1, 1, 1], 0)


def sparse_quad(rng: random.Random, n: int) -> QuadPoly:
    """Редкий граф носителя: число фиксации заметно меньше n"""
    return random_quad(rng, n, bound=2, density=rng.choice((0.15, 0.3, 0.5)))


def symmetric_from_graph(graph: nx.Graph, n: int) -> RatMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i, j in graph.edges:
        rows[i][j] = rows[j][i] = Fraction(1)
    return RatMatrix.from_rows(rows, cols=n)


def test_min_fixing_number_examples():
    result = min_fixing_number(remark_polynomial())
    assert result.m == 1
    assert result.verdict == SearchStatus.EXACT
    assert result.to_json()["verdict"] == "exact"
    assert result.witness.indices == (0,)
    assert result.witness.values == (-1,)
    assert result.witness.pinned_value == 0

    assert min_fixing_number(QuadPoly.from_monomials(2, {(0, 1): 1})).m == 2

    constant = min_fixing_number(QuadPoly.from_monomials(3, {(1, 1): 5}, None, 2))
    assert constant.m == 0
    assert constant.witness.indices == ()
    assert constant.witness.pinned_value == 7


def test_min_fixing_number_over_cap_reports_lower_bound():
    q = QuadPoly.from_monomials(16, {(2 * i, 2 * i + 1): 1 for i in range(8)})
    result = min_fixing_number(q, cap=14)
    assert result.verdict == SearchStatus.INCONCLUSIVE
    assert result.m is None
    assert result.lower_bound == 8


@pytest.mark.parametrize("seed", range(40))
def test_min_fixing_number_is_minimal(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    q = sparse_quad(rng, n)
    result = min_fixing_number(q)
    assert verify_witness(q, result.witness)
    assert result.m == len(result.witness.indices)
    for size in range(result.m):
        for subset in combinations(range(n), size):
            for signs in product((-1, 1), repeat=size):
                fixed = restrict(q, dict(zip(subset, map(Fraction, signs))))
                assert cube_constant(fixed) is None


def test_fixing_box_robustness_examples():
    rademacher = ProductDist.rademacher(4)
    result = fixing_box_robustness(remark_polynomial(), rademacher, Fraction(1, 2))
    assert result.m == 1
    assert result.verdict == SearchStatus.EXACT
    assert result.box[0] == (-1,)
    assert box_is_fixing(remark_polynomial(), result.box)

    constant = fixing_box_robustness(QuadPoly.constant(3, 1), ProductDist.uniform_on(3, [0, 1, 2]), Fraction(1, 2))
    assert constant.m == 0

    x1x2 = QuadPoly.from_monomials(2, {(0, 1): 1})
    result = fixing_box_robustness(x1x2, ProductDist.uniform_on(2, [-1, 0, 1]), Fraction(1, 2))
    assert result.m == 1
    assert box_is_fixing(x1x2, result.box)


def test_fixing_box_robustness_rejects_bad_delta():
    with pytest.raises(ParameterError):
        fixing_box_robustness(QuadPoly.constant(2), ProductDist.rademacher(2), 1)


def test_fixing_box_robustness_over_cap():
    result = fixing_box_robustness(QuadPoly.constant(5), ProductDist.uniform_integers(5, 1), Fraction(1, 2), cap=100)
    assert result.verdict == SearchStatus.INCONCLUSIVE


@pytest.mark.parametrize("seed", range(40))
def test_box_robustness_matches_fixing_number_for_signs(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    q = sparse_quad(rng, n)
    box = fixing_box_robustness(q, ProductDist.rademacher(n), Fraction(1, 2))
    assert box.m == min_fixing_number(q).m
    assert box_is_fixing(q, box.box)


def test_offdiag_robustness_examples():
    single = QuadPoly.from_monomials(5, {(0, 1): 1}).A
    assert offdiag_robustness(single) == 0
    assert offdiag_robustness(symmetric_from_graph(nx.complete_graph(5), 5)) == 3
    assert offdiag_robustness(RatMatrix.diagonal([1, 2, 3])) == -1


def test_min_vertex_cover_cap():
    with pytest.raises(CapExceededError):
        min_vertex_cover(nx.cycle_graph(12), cap=10)


@pytest.mark.parametrize("seed", range(60))
def test_offdiag_robustness_matches_naive(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 10)
    A = random_symmetric(rng, n, bound=2, zero_prob=rng.choice((0.5, 0.7, 0.9)))
    assert offdiag_robustness(A) == naive_offdiag_robustness(A)


@pytest.mark.parametrize("seed", range(30))
def test_min_vertex_cover_is_optimal(seed):
    rng = random.Random(seed)
    graph = nx.gnp_random_graph(rng.randint(2, 12), rng.choice((0.2, 0.4, 0.7)), seed=seed)
    cover = set(min_vertex_cover(graph))
    assert all(i in cover or j in cover for i, j in graph.edges)
    complement_size = graph.number_of_nodes() - len(cover)
    # независимое множество дополнения к минимальному покрытию наибольшее
    assert complement_size == len(max(nx.find_cliques(nx.complement(graph)), key=len))


def test_matching_lower_bound_examples():
    assert matching_lower_bound(symmetric_from_graph(nx.complete_graph(4), 4))[0] == 2
    assert matching_lower_bound(symmetric_from_graph(nx.path_graph(3), 3)) == (1, [(0, 1)])
    assert matching_lower_bound(RatMatrix.identity(4)) == (0, [])


@pytest.mark.parametrize("seed", range(40))
def test_matching_and_robustness_inequalities(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    A = random_symmetric(rng, n, bound=1, zero_prob=0.6)
    ell, pairs = matching_lower_bound(A)
    s = offdiag_robustness(A)
    assert ell - 1 <= s <= 2 * ell - 1
    used = [v for pair in pairs for v in pair]
    assert len(used) == len(set(used))
    graph = support_graph(A)
    assert all(graph.has_edge(i, j) for i, j in pairs)


def test_represent_discrete_examples():
    assert represent_discrete(DiscreteDist.rademacher()).atoms == (((0, 1), 1),)
    assert represent_discrete(DiscreteDist.constant(Fraction(5, 2))).atoms == (((Fraction(5, 2), 0), 1),)
    uniform = DiscreteDist.uniform_on([0, 1, 2])
    out = represent_discrete(uniform)
    assert out.atoms == (((1, 0), Fraction(1, 3)), ((1, 1), Fraction(2, 3)))
    assert out.law() == dict(uniform.atoms)


def test_median_and_majority():
    d = DiscreteDist(((0, Fraction(1, 4)), (1, Fraction(1, 4)), (3, Fraction(1, 2))))
    assert majority_outcome(d) == 3
    assert median(d) == 3
    assert majority_outcome(DiscreteDist.uniform_on([0, 1, 2])) is None
    assert median(DiscreteDist.uniform_on([0, 1, 2, 3])) == 2


@st.composite
def discrete_dists(draw):
    size = draw(st.integers(1, 6))
    values = draw(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=4),
                           min_size=size, max_size=size, unique=True))
    weights = draw(st.lists(st.integers(1, 12), min_size=size, max_size=size))
    total = sum(weights)
    return DiscreteDist(tuple((v, Fraction(w, total)) for v, w in zip(values, weights)))


def check_representation(d: DiscreteDist) -> None:
    out = represent_discrete(d)
    assert out.total() == 1
    assert all(p > 0 for _, p in out.atoms)
    assert out.law() == dict(d.atoms)
    assert sum(1 for (_, b), _ in out.atoms if b == 0) <= 1
    heavy = [v for v, p in d.atoms if p > Fraction(1, 2)]
    if heavy:
        z = heavy[0]
        assert all(a + b == z for (a, b), _ in out.atoms)
    assert out.zero_beta_mass() <= d.max_atom()[1]


@pytest.mark.parametrize("seed", range(100))
def test_represent_discrete_seeded(seed):
    rng = random.Random(seed)
    size = rng.randint(1, 6)
    values = rng.sample(range(-20, 21), size)
    weights = [rng.randint(1, 12) for _ in range(size)]
    total = sum(weights)
    d = DiscreteDist(tuple((Fraction(v, 3), Fraction(w, total)) for v, w in zip(values, weights)))
    check_representation(d)


@given(discrete_dists())
@settings(max_examples=200, deadline=None)
def test_represent_discrete_properties(d):
    check_representation(d)
