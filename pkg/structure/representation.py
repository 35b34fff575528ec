# structure/representation.py
"""
Представление конечной случайной величины в виде ζ = α + ξβ.

ξ - независимый симметричный знак, (α, β) - конечное совместное
распределение. Построение:
  * есть исход z массы ≥ 1/2: с вероятностью 1 − 2ρ пара (z, 0), иначе
    ((z + Y)/2, (z − Y)/2), где ρ = Pr[ζ ≠ z], Y ~ ζ | ζ ≠ z;
  * иначе берётся медиана x = наибольший атом с Pr[ζ ≥ x] ≥ 1/2,
    ρ₁ = Pr[ζ < x], ρ₂ = Pr[ζ > x], Y₁ ~ ζ | ζ < x, Y₂ ~ ζ | ζ > x.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from core.types import DiscreteDist

logger = logging.getLogger(__name__)

Pair = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class ReprOutput:
    """Атомы совместного закона (α, β); ξ - независимый знак"""
    atoms: Tuple[Tuple[Pair, Fraction], ...]

    def law(self) -> Dict[Fraction, Fraction]:
        """Закон α + ξβ"""
        result: Dict[Fraction, Fraction] = defaultdict(Fraction)
        for (a, b), p in self.atoms:
            result[a + b] += p / 2
            result[a - b] += p / 2
        return {v: p for v, p in result.items() if p}

    def zero_beta_mass(self) -> Fraction:
        return sum((p for (_, b), p in self.atoms if b == 0), Fraction(0))

    def total(self) -> Fraction:
        return sum((p for _, p in self.atoms), Fraction(0))

    def to_json(self) -> Dict:
        return {"atoms": [[str(a), str(b), str(p)] for (a, b), p in self.atoms]}


def _collect(weighted: List[Tuple[Pair, Fraction]]) -> ReprOutput:
    merged: Dict[Pair, Fraction] = defaultdict(Fraction)
    for pair, p in weighted:
        if p:
            merged[pair] += p
    return ReprOutput(tuple(sorted(merged.items())))


def _conditional(d: DiscreteDist, keep) -> List[Tuple[Fraction, Fraction]]:
    """Условное распределение ζ при keep(ζ); пусто при нулевой массе"""
    atoms = [(v, p) for v, p in d.atoms if keep(v)]
    mass = sum(p for _, p in atoms)
    return [(v, p / mass) for v, p in atoms] if mass else []


def majority_outcome(d: DiscreteDist):
    """Наибольший атом массы ≥ 1/2 или None"""
    heavy = [v for v, p in d.atoms if p >= Fraction(1, 2)]
    return max(heavy) if heavy else None


def median(d: DiscreteDist) -> Fraction:
    """Наибольший атом x с Pr[ζ ≥ x] ≥ 1/2"""
    tail = Fraction(0)
    for v, p in reversed(d.atoms):
        tail += p
        if tail >= Fraction(1, 2):
            return v
    return d.atoms[0][0]


def represent_discrete(d: DiscreteDist) -> ReprOutput:
    z = majority_outcome(d)
    if z is not None:
        rho = 1 - d.prob(z)
        weighted = [((z, Fraction(0)), 1 - 2 * rho)]
        for y, py in _conditional(d, lambda v: v != z):
            weighted.append((((z + y) / 2, (z - y) / 2), 2 * rho * py))
        logger.debug(f"Есть исход большинства z = {z}, ρ = {rho}")
        return _collect(weighted)

    x = median(d)
    rho1 = sum((p for v, p in d.atoms if v < x), Fraction(0))
    rho2 = sum((p for v, p in d.atoms if v > x), Fraction(0))
    lower = _conditional(d, lambda v: v < x)
    upper = _conditional(d, lambda v: v > x)
    logger.debug(f"Медиана x = {x}, ρ₁ = {rho1}, ρ₂ = {rho2}")

    if rho1 >= rho2:
        weighted = [((x, Fraction(0)), 1 - 2 * rho1)]
        side = lower
        excess = rho1 - rho2
    else:
        weighted = [((x, Fraction(0)), 1 - 2 * rho2)]
        side = upper
        excess = rho2 - rho1
    for y, py in side:
        weighted.append((((x + y) / 2, (x - y) / 2), 2 * excess * py))
    paired = 2 * min(rho1, rho2)
    for y1, p1 in lower:
        for y2, p2 in upper:
            weighted.append((((y2 + y1) / 2, (y2 - y1) / 2), paired * p1 * p2))
    return _collect(weighted)
