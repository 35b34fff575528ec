# structure/fixing.py
"""
Число фиксации многочлена и робастность по фиксирующим коробкам.

m - наименьшее число переменных, значения которых (±1) делают Q постоянным
на оставшемся кубе; при меньшем числе зафиксированных переменных Q ни при
каком присваивании не определён. Фиксируемое множество обязано покрывать все
рёбра графа носителя, а свободная переменная без соседей - иметь нулевой
линейный коэффициент. Оба условия сокращают перебор.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from core.algebra import cube_constant, eval_quad_at, restrict
from core.errors import ParameterError
from core.types import QuadPoly
from engine.general import ProductDist
from structure.robustness import greedy_matching, support_graph

logger = logging.getLogger(__name__)

DEFAULT_FIXING_CAP = 14
DEFAULT_BOX_CAP = 2_000_000


class SearchStatus(str, Enum):
    """exact: найден минимум и свидетель; inconclusive: перебор упёрся в лимит"""
    EXACT = "exact"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FixingWitness:
    indices: Tuple[int, ...]
    values: Tuple[Fraction, ...]
    pinned_value: Fraction

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(zip(self.indices, self.values))

    def to_json(self) -> Dict:
        return {
            "indices": list(self.indices),
            "values": [str(v) for v in self.values],
            "pinned_value": str(self.pinned_value),
        }


@dataclass(frozen=True)
class FixingResult:
    """m и свидетель; при превышении лимита m = None и известна только нижняя граница"""
    verdict: SearchStatus
    m: Optional[int]
    witness: Optional[FixingWitness]
    lower_bound: int
    examined: int = 0

    def to_json(self) -> Dict:
        data = {"verdict": self.verdict.value, "m": self.m, "lower_bound": self.lower_bound,
                "examined": self.examined}
        if self.witness is not None:
            data["witness"] = self.witness.to_json()
        return data


def verify_witness(q: QuadPoly, witness: FixingWitness) -> bool:
    """Q после подстановки равен pinned_value во всех точках оставшегося куба"""
    fixed = witness.as_dict()
    free = [i for i in range(q.n) if i not in fixed]
    point = [Fraction(0)] * q.n
    for i, v in fixed.items():
        point[i] = v
    for signs in product((-1, 1), repeat=len(free)):
        for i, s in zip(free, signs):
            point[i] = Fraction(s)
        if eval_quad_at(q, point) != witness.pinned_value:
            return False
    return True


def _pins(q: QuadPoly, subset: Sequence[int], free: Sequence[int], signs: Sequence[int]) -> bool:
    """Все свободные переменные получают нулевой линейный коэффициент"""
    for i in free:
        coef = q.b[i] + 2 * sum(q.A[i, f] * s for f, s in zip(subset, signs))
        if coef != 0:
            return False
    return True


def min_fixing_number(q: QuadPoly, cap: int = DEFAULT_FIXING_CAP) -> FixingResult:
    """
    Точное число фиксации перебором множеств по возрастанию размера.

    Множества идут в лексикографическом порядке, присваивания - от (−1, …, −1).
    Постоянный Q даёт m = 0 с пустым свидетелем.
    """
    n = q.n
    value = cube_constant(q)
    if value is not None:
        return FixingResult(SearchStatus.EXACT, 0, FixingWitness((), (), value), 0)

    graph = support_graph(q.A)
    matching = len(greedy_matching(graph))
    lower = max(1, matching)
    if n > cap:
        logger.warning(f"n = {n} больше лимита {cap}: известна только нижняя граница m ≥ {lower}")
        return FixingResult(SearchStatus.INCONCLUSIVE, None, None, lower)

    edges = [tuple(sorted(e)) for e in graph.edges]
    forced = {i for i in range(n) if graph.degree(i) == 0 and q.b[i] != 0}
    examined = 0
    for size in range(max(lower, len(forced)), n + 1):
        for subset in combinations(range(n), size):
            chosen = set(subset)
            if not forced <= chosen or any(i not in chosen and j not in chosen for i, j in edges):
                continue
            free = [i for i in range(n) if i not in chosen]
            for signs in product((-1, 1), repeat=size):
                examined += 1
                if not _pins(q, subset, free, signs):
                    continue
                values = tuple(Fraction(s) for s in signs)
                pinned = cube_constant(restrict(q, dict(zip(subset, values))))
                witness = FixingWitness(subset, values, pinned)
                logger.info(f"Число фиксации m = {size}, свидетель {dict(zip(subset, signs))}")
                return FixingResult(SearchStatus.EXACT, size, witness, lower, examined)
    # фиксация всех n переменных всегда даёт константу
    raise AssertionError("перебор не нашёл фиксирующего множества")


@dataclass(frozen=True)
class BoxResult:
    verdict: SearchStatus
    m: Optional[int]
    box: Tuple[Tuple[Fraction, ...], ...] = ()
    examined: int = 0

    def to_json(self) -> Dict:
        return {
            "verdict": self.verdict.value,
            "m": self.m,
            "box": [[str(v) for v in R] for R in self.box],
            "examined": self.examined,
        }


def box_is_fixing(q: QuadPoly, box: Sequence[Sequence[Fraction]]) -> bool:
    """Постоянство Q на коробке полным перебором её точек"""
    values = set()
    for point in product(*box):
        values.add(eval_quad_at(q, point))
        if len(values) > 1:
            return False
    return True


def _box_options(d, delta: Fraction) -> List[Tuple[Tuple[Fraction, ...], int]]:
    """
    Варианты R_i для одной переменной с их стоимостью.

    Одноточечные множества и минимальные по включению множества из ≥ 2 атомов
    с массой > 1 − δ. Остальные варианты не улучшают минимум: подмножество
    фиксирующей коробки тоже фиксирующее.
    """
    threshold = 1 - delta
    singles = [((v,), 1 if p <= threshold else 0) for v, p in d.atoms]
    heavy = []
    support = d.atoms
    for size in range(2, len(support) + 1):
        for subset in combinations(support, size):
            if sum(p for _, p in subset) <= threshold:
                continue
            values = tuple(v for v, _ in subset)
            if any(p > threshold for _, p in subset):
                continue
            if any(set(h) < set(values) for h, _ in heavy):
                continue
            heavy.append((values, 0))
    return heavy + sorted(singles, key=lambda o: o[1])


def fixing_box_robustness(q: QuadPoly, d: ProductDist, delta, cap: int = DEFAULT_BOX_CAP) -> BoxResult:
    """
    Точный минимум #{i : Pr[ζ_i ∈ R_i] ≤ 1 − δ} по фиксирующим коробкам.

    Поиск с возвратом: переменные с |R_i| ≥ 2 образуют независимое множество
    графа носителя, поэтому на них Q распадается в сумму функций одной
    переменной, и постоянство проверяется покоординатно. Найденная коробка
    перепроверяется полным перебором.

    :param cap: предел Π|supp ζ_i| и числа узлов поиска
    """
    n = q.n
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ParameterError(f"Нужно 0 < δ < 1, получено δ = {delta}")
    if d.n != n:
        raise ParameterError(f"Распределение на {d.n} переменных, многочлен на {n}")
    if d.size > cap:
        logger.warning(f"Произведение носителей превышает лимит {cap}: вердикт inconclusive")
        return BoxResult(SearchStatus.INCONCLUSIVE, None)

    graph = support_graph(q.A)
    options = [_box_options(dist, delta) for dist in d.dists]

    # начальная коробка: самый тяжёлый атом каждой переменной
    heaviest = tuple((dist.max_atom()[0],) for dist in d.dists)
    best_cost = sum(1 for dist in d.dists if dist.max_atom()[1] <= 1 - delta)
    best_box = heaviest
    chosen: List[Tuple[Fraction, ...]] = []
    examined = 0

    def separable_constant() -> bool:
        for i, R in enumerate(chosen):
            if len(R) < 2:
                continue
            beta = q.b[i] + 2 * sum(q.A[i, f] * chosen[f][0] for f in range(n) if f != i and len(chosen[f]) == 1)
            if len({q.A[i, i] * x * x + beta * x for x in R}) > 1:
                return False
        return True

    def search(i: int, cost: int) -> bool:
        nonlocal best_cost, best_box, examined
        examined += 1
        if examined > cap:
            return False
        if cost >= best_cost:
            return True
        if i == n:
            if separable_constant() and box_is_fixing(q, chosen):
                best_cost, best_box = cost, tuple(chosen)
            return True
        for R, extra in options[i]:
            if len(R) >= 2 and any(len(chosen[j]) >= 2 for j in graph.neighbors(i) if j < i):
                continue
            chosen.append(R)
            finished = search(i + 1, cost + extra)
            chosen.pop()
            if not finished:
                return False
        return True

    if not search(0, 0):
        logger.warning(f"Поиск коробки превысил {cap} узлов: вердикт inconclusive")
        return BoxResult(SearchStatus.INCONCLUSIVE, None, examined=examined)
    logger.info(f"Робастность по коробкам m = {best_cost} (δ = {delta})")
    return BoxResult(SearchStatus.EXACT, best_cost, best_box, examined)
