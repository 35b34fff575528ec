# experiments/edgestats.py
"""
Число k-вершинных подмножеств графа, индуцирующих ровно ℓ рёбер.

Основной подсчёт идёт обходом сочетаний с пошаговым счётом рёбер,
проверочный - по битовым маскам (перебор масок веса k приёмом Госпера).
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from core.errors import CapExceededError, FormatError

logger = logging.getLogger(__name__)

DEFAULT_EDGESTATS_CAP = 100_000_000


@dataclass(frozen=True)
class Graph:
    """Простой граф на вершинах 0..n−1"""
    n: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise FormatError(f"Петля в вершине {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise FormatError(f"Ребро ({u}, {v}) вне диапазона вершин 0..{self.n - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, frozenset())

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    def neighbours(self) -> List[set]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def parse_edge_list(text: str, n: Optional[int] = None) -> Graph:
    """
    Список рёбер: по одной паре «u v» в строке, вершины с нуля.

    Пустые строки и строки с # пропускаются. Без n число вершин равно
    наибольшему номеру плюс один.
    """
    edges = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"Строка {number}: ожидалась пара «u v», получено {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"Строка {number}: номера вершин должны быть целыми, получено {line!r}")
        edges.append((u, v))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, frozenset(edges))


def load_graph(path: str, n: Optional[int] = None) -> Graph:
    with open(path, "r", encoding="utf-8") as file:
        return parse_edge_list(file.read(), n)


@dataclass(frozen=True)
class EdgeStats:
    n: int
    k: int
    total: int
    counts: Dict[int, int]

    def ratio(self, ell: int) -> Fraction:
        return Fraction(self.counts.get(ell, 0), self.total)

    def shape(self, ell: int) -> Optional[float]:
        """1/√(min(ℓ, C(k,2) − ℓ)/k) с единичной константой; только форма зависимости"""
        gap = min(ell, math.comb(self.k, 2) - ell)
        if gap <= 0:
            return None
        return 1 / math.sqrt(gap / self.k)

    def rows(self) -> List[Dict]:
        return [
            {
                "l": ell,
                "count": self.counts.get(ell, 0),
                "ratio": str(self.ratio(ell)),
                "ratio_float": float(self.ratio(ell)),
                "shape": self.shape(ell),
            }
            for ell in range(math.comb(self.k, 2) + 1)
        ]

    def to_json(self) -> Dict:
        return {
            "n": self.n,
            "k": self.k,
            "total": self.total,
            "counts": {str(ell): c for ell, c in sorted(self.counts.items())},
            "rows": self.rows(),
            "shape_note": "shape-only, unit constant",
        }


def _check(g: Graph, k: int, cap: int) -> int:
    if not 0 <= k <= g.n:
        raise ValueError(f"Нужно 0 ≤ k ≤ n = {g.n}, получено k = {k}")
    total = math.comb(g.n, k)
    if total > cap:
        raise CapExceededError(f"C({g.n},{k}) = {total} превышает лимит {cap}", size=total, cap=cap)
    return total


def edge_stats(g: Graph, k: int, cap: int = DEFAULT_EDGESTATS_CAP) -> EdgeStats:
    """Точные N_G(k, ℓ) обходом сочетаний в глубину"""
    total = _check(g, k, cap)
    adj = g.neighbours()
    counts: Counter = Counter()
    chosen: List[int] = []

    def walk(start: int, edges: int) -> None:
        if len(chosen) == k:
            counts[edges] += 1
            return
        for v in range(start, g.n - (k - len(chosen)) + 1):
            added = sum(1 for u in chosen if u in adj[v])
            chosen.append(v)
            walk(v + 1, edges + added)
            chosen.pop()

    walk(0, 0)
    logger.info(f"Подсчёт по {total} подмножествам из {k} вершин завершён")
    return EdgeStats(g.n, k, total, dict(counts))


def _masks_of_weight(n: int, k: int) -> Iterable[int]:
    if k == 0:
        yield 0
        return
    mask = (1 << k) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        low = mask & -mask
        ripple = mask + low
        mask = (((ripple ^ mask) >> 2) // low) | ripple


def edge_stats_bitset(g: Graph, k: int, cap: int = DEFAULT_EDGESTATS_CAP) -> EdgeStats:
    """Те же числа через маски смежности; независимая проверка edge_stats"""
    total = _check(g, k, cap)
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    counts: Counter = Counter()
    for mask in _masks_of_weight(g.n, k):
        twice = 0
        rest = mask
        while rest:
            v = (rest & -rest).bit_length() - 1
            twice += bin(adj[v] & mask).count("1")
            rest &= rest - 1
        counts[twice // 2] += 1
    return EdgeStats(g.n, k, total, dict(counts))
