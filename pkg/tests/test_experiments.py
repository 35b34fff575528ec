import json
import random
from fractions import Fraction
from math import comb, sqrt

import networkx as nx
import pytest
from pydantic import ValidationError

from conftest import random_quad
from core.algebra import eval_quad
from core.errors import CapExceededError, DimensionMismatchError, FormatError, ParameterError
from core.formats import dump_quad
from core.types import QuadPoly, SignVector
from experiments.decoupling import verify_decoupling
from experiments.edgestats import Graph, edge_stats, edge_stats_bitset, parse_edge_list
from experiments.families import FAMILIES, generate
from experiments.scheduler import format_instance_count
from experiments.sweep import COLUMNS, NOT_APPLICABLE, SWEEP_SCHEMA, ExperimentSpec, run_sweep, sweep_csv
from structure.robustness import offdiag_robustness


def graph_from_networkx(graph: nx.Graph) -> Graph:
    return Graph(graph.number_of_nodes(), frozenset(graph.edges))


def test_edge_stats_complete_and_empty():
    stats = edge_stats(Graph.complete(7), 4)
    assert stats.counts == {6: comb(7, 4)}
    assert edge_stats(Graph.empty(7), 4).counts == {0: comb(7, 4)}
    assert edge_stats(Graph.empty(3), 0).counts == {0: 1}


def test_edge_stats_cycle():
    stats = edge_stats(Graph.cycle(5), 3)
    assert stats.counts == {1: 5, 2: 5}
    assert stats.ratio(2) == Fraction(1, 2)
    assert stats.ratio(0) == 0
    assert stats.shape(0) is None
    assert stats.shape(3) is None
    assert stats.shape(1) == pytest.approx(3 ** 0.5)
    assert [row["count"] for row in stats.rows()] == [0, 5, 5, 0]


@pytest.mark.parametrize("seed", range(100))
def test_edge_stats_matches_bitset(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 12)
    g = graph_from_networkx(nx.gnp_random_graph(n, rng.random(), seed=seed))
    k = rng.randint(0, n)
    stats = edge_stats(g, k)
    assert stats == edge_stats_bitset(g, k)
    assert sum(stats.counts.values()) == comb(n, k) == stats.total


def test_edge_stats_limits():
    with pytest.raises(CapExceededError):
        edge_stats(Graph.complete(30), 15)
    with pytest.raises(ValueError):
        edge_stats(Graph.empty(4), 5)


def test_parse_edge_list():
    g = parse_edge_list("# треугольник\n0 1\n1 2\n\n2 0  # замыкание\n")
    assert g.n == 3
    assert g.edges == frozenset({(0, 1), (1, 2), (0, 2)})
    assert parse_edge_list("0 1", n=5).n == 5
    for bad in ("0 1 2", "a b", "1 1", "0 7"):
        with pytest.raises(FormatError):
            parse_edge_list(bad, n=4)


def test_decoupling_examples():
    report = verify_decoupling(QuadPoly.constant(4), [0, 1])
    assert report.lhs == report.rhs == 1
    assert report.passed

    x1x2 = QuadPoly.from_monomials(2, {(0, 1): 1})
    report = verify_decoupling(x1x2, [0])
    assert report.lhs == report.rhs == 0
    assert report.passed
    assert report.to_json()["pass"] is True


def test_decoupling_equality_for_linear_form():
    report = verify_decoupling(QuadPoly.linear([1, 1]), [0])
    assert report.lhs == Fraction(1, 2)
    assert report.rhs == Fraction(1, 4)
    assert report.lhs_squared == report.rhs


@pytest.mark.parametrize("seed", range(200))
def test_decoupling_holds_on_random_quadratics(seed):
    rng = random.Random(seed)
    n = 10
    q = random_quad(rng, n, bound=2)
    z = eval_quad(q, SignVector(n, rng.getrandbits(n)))
    I = rng.sample(range(n), rng.choice((1, n // 2)))
    report = verify_decoupling(q, I, z=z)
    assert report.lhs > 0
    assert report.lhs_squared <= report.rhs
    assert report.passed


def test_decoupling_sampled():
    report = verify_decoupling(QuadPoly.constant(3), [0], trials=500, seed=4)
    assert report.mode == "sampled"
    assert report.lhs == report.rhs == 1
    assert report.passed

    q = QuadPoly.linear([1, 1, 1, 1])
    first = verify_decoupling(q, [0, 1], trials=5000, seed=9)
    assert first == verify_decoupling(q, [0, 1], trials=5000, seed=9)
    assert first.passed
    assert first.samples == 5000


def test_decoupling_errors():
    q = random_quad(random.Random(0), 14)
    with pytest.raises(CapExceededError):
        verify_decoupling(q, range(7), cap=10)
    with pytest.raises(DimensionMismatchError):
        verify_decoupling(q, [14])
    with pytest.raises(ValueError):
        verify_decoupling(q, [0], trials=0)


def test_families_are_deterministic():
    for family in FAMILIES:
        assert generate(family, 6, seed=2, replicate=1) == generate(family, 6, seed=2, replicate=1)
    assert generate("random_dense", 6, seed=2, replicate=0) != generate("random_dense", 6, seed=2, replicate=1)


def test_family_shapes():
    assert generate("squared_sum", 3) == QuadPoly.square_of_linear([1, 1, 1])
    matching = generate("random_matching_support", 8, seed=5)
    assert offdiag_robustness(matching.A) == 3
    assert offdiag_robustness(generate("diagonal", 5).A) == -1


def test_generate_errors():
    with pytest.raises(ParameterError):
        generate("nonexistent", 4)
    with pytest.raises(ParameterError):
        generate("squared_sum", 0)


def test_experiment_spec_needs_one_source():
    with pytest.raises(ValidationError):
        ExperimentSpec()
    with pytest.raises(ValidationError):
        ExperimentSpec(family="squared_sum", input="instances.json")
    with pytest.raises(ValidationError):
        ExperimentSpec(family="nonexistent")


def test_sweep_squared_sum():
    sizes = list(range(2, 11))
    rows = run_sweep(ExperimentSpec(family="squared_sum", sizes=sizes))
    assert [row["n"] for row in rows] == [str(m) for m in sizes]
    for m, row in zip(sizes, rows):
        assert Fraction(row["erdos_lo_ref"]) == Fraction(comb(m, m // 2), 2 ** m)
        if m % 2 == 0:
            # (Σx)² = 0 ровно при Σx = 0
            assert Fraction(row["zero_prob"]) == Fraction(comb(m, m // 2), 2 ** m)
            best = max(comb(m, m // 2), 2 * comb(m, m // 2 + 1))
            assert Fraction(row["sup_prob"]) == Fraction(best, 2 ** m)
        else:
            assert Fraction(row["zero_prob"]) == 0
        assert row["offdiag_s"] == str(m - 2)
        # при n − 1 фиксированных остаётся (x + a)², постоянный только при a = 0
        assert row["m_fixing"] == str(m if m % 2 == 0 else m - 1)
        assert float(row["fixing_shape"]) == pytest.approx(1 / sqrt(int(row["m_fixing"])))
    assert rows[2]["fixing_shape"] == "0.5"


def test_sweep_diagonal_family_marks_bounds_not_applicable():
    rows = run_sweep(ExperimentSpec(family="diagonal", sizes=[3, 5], replicates=2, seed=7))
    assert len(rows) == 4
    for row in rows:
        assert row["offdiag_s"] == "-1"
        for column in ("main_bound_log2", "main_bound_clamped", "offdiag_shape", "ratio_offdiag"):
            assert row[column] == NOT_APPLICABLE
        assert row["sup_prob"] != NOT_APPLICABLE


def test_sweep_is_deterministic():
    spec = ExperimentSpec(family="random_dense", sizes=[3, 6, 9], replicates=2, seed=11)
    first = sweep_csv(run_sweep(spec))
    assert sweep_csv(run_sweep(spec)) == first
    parallel = spec.model_copy(update={"workers": 2})
    assert sweep_csv(run_sweep(parallel)) == first
    lines = first.splitlines()
    assert lines[0] == SWEEP_SCHEMA
    assert lines[1] == ",".join(COLUMNS)
    assert len(lines) == 2 + 6


def test_sweep_from_input_file(tmp_path):
    path = tmp_path / "instances.json"
    instances = [dump_quad(QuadPoly.from_monomials(2, {(0, 1): 1})), dump_quad(QuadPoly.linear([1, 1, 1]))]
    path.write_text(json.dumps(instances), encoding="utf-8")
    rows = run_sweep(ExperimentSpec(input=str(path)))
    assert [row["instance_id"] for row in rows] == ["input-0000", "input-0001"]
    assert rows[0]["sup_prob"] == "1/2"
    assert rows[1]["sup_prob"] == "3/8"


def test_run_sweep_rejects_other_kinds():
    with pytest.raises(ParameterError):
        run_sweep(ExperimentSpec(kind="edgestats"))


def test_format_instance_count():
    assert format_instance_count(1) == "1 экземпляр"
    assert format_instance_count(3) == "3 экземпляра"
    assert format_instance_count(11) == "11 экземпляров"
    assert format_instance_count(25) == "25 экземпляров"
