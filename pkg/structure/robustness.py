# structure/robustness.py
"""
Внедиагональная робастность симметричной матрицы и жадное паросочетание.

Граф носителя G: вершины 0..n−1, ребро {i, j} при A[i,j] ≠ 0, i ≠ j.
Главная подматрица на множестве S имеет ненулевой внедиагональный элемент
⟺ S не независимо в G, поэтому наибольшее s равно τ(G) − 1.
"""
import logging
from itertools import combinations
from typing import List, Optional, Set, Tuple

import networkx as nx

from core.errors import CapExceededError, DimensionMismatchError, ParameterError
from core.types import RatMatrix

logger = logging.getLogger(__name__)

DEFAULT_COVER_CAP = 40


def support_graph(A: RatMatrix) -> nx.Graph:
    """Граф внедиагонального носителя A"""
    n, m = A.shape
    if n != m:
        raise DimensionMismatchError(f"Ожидалась квадратная матрица, получено {A.shape}")
    if not A.is_symmetric():
        raise ParameterError("Матрица A должна быть симметричной")
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((i, j) for i in range(n) for j in range(i + 1, n) if A[i, j] != 0)
    return graph


def greedy_matching(graph: nx.Graph) -> List[Tuple[int, int]]:
    """Максимальное по включению паросочетание: рёбра в лексикографическом порядке"""
    used: Set[int] = set()
    pairs = []
    for i, j in sorted(tuple(sorted(e)) for e in graph.edges):
        if i not in used and j not in used:
            pairs.append((i, j))
            used.update((i, j))
    return pairs


def _branch(graph: nx.Graph, chosen: List[int], best: List[int]) -> List[int]:
    if graph.number_of_edges() == 0:
        return list(chosen) if len(chosen) < len(best) else best
    if len(chosen) + len(greedy_matching(graph)) >= len(best):
        return best
    v = max(sorted(graph.nodes), key=lambda u: graph.degree(u))
    if graph.degree(v) == 1:
        # все компоненты - отдельные рёбра
        extra = [min(e) for e in graph.edges]
        candidate = chosen + extra
        return candidate if len(candidate) < len(best) else best

    rest = graph.copy()
    rest.remove_node(v)
    best = _branch(rest, chosen + [v], best)

    neighbours = sorted(graph.neighbors(v))
    if len(chosen) + len(neighbours) < len(best):
        rest = graph.copy()
        rest.remove_nodes_from(neighbours + [v])
        best = _branch(rest, chosen + neighbours, best)
    return best


def min_vertex_cover(graph: nx.Graph, cap: int = DEFAULT_COVER_CAP) -> List[int]:
    """
    Минимальное вершинное покрытие точным методом ветвей и границ.

    Ветвление по вершине v наибольшей степени: v в покрытии или все её соседи.
    Граница - размер жадного паросочетания остатка.

    :raises CapExceededError: если неизолированных вершин больше cap
    """
    core = graph.subgraph([v for v in graph.nodes if graph.degree(v) > 0]).copy()
    if core.number_of_nodes() > cap:
        raise CapExceededError(
            f"Точное покрытие для {core.number_of_nodes()} вершин превышает лимит {cap}; "
            f"используйте matching_lower_bound",
            size=core.number_of_nodes(), cap=cap,
        )
    initial = sorted({v for e in greedy_matching(core) for v in e})
    cover = sorted(_branch(core, [], initial))
    logger.debug(f"Минимальное покрытие {cover} для графа с {core.number_of_edges()} рёбрами")
    return cover


def offdiag_robustness(A: RatMatrix, cap: int = DEFAULT_COVER_CAP) -> int:
    """
    Наибольшее s, при котором каждая главная подматрица на ≥ n − s индексах
    имеет ненулевой внедиагональный элемент; −1 для диагональной A.
    """
    cover = min_vertex_cover(support_graph(A), cap)
    return len(cover) - 1


def matching_lower_bound(A: RatMatrix) -> Tuple[int, List[Tuple[int, int]]]:
    """
    Жадное паросочетание графа носителя.

    ℓ не больше наибольшего паросочетания ν, и τ ≤ 2ℓ.

    :return: (ℓ, пары индексов)
    """
    pairs = greedy_matching(support_graph(A))
    return len(pairs), pairs


def naive_offdiag_robustness(A: RatMatrix) -> int:
    """Перебор всех подмножеств; только для проверки при малых n"""
    n = A.rows
    graph = support_graph(A)

    def has_edge(subset) -> bool:
        return any(graph.has_edge(i, j) for i, j in combinations(subset, 2))

    best: Optional[int] = None
    for s in range(n):
        if all(has_edge(S) for size in range(n - s, n + 1) for S in combinations(range(n), size)):
            best = s
        else:
            break
    return -1 if best is None else best
