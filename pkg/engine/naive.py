# engine/naive.py
"""Перебор без пошагового пересчёта: каждая точка вычисляется заново. Служит эталоном."""
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from core.algebra import eval_quad, eval_quad_at
from core.types import DyadicProb, LinearConstraint, QuadPoly, RatMatrix, SignVector, as_vector
from engine.exact import AtomHistogram, QuadricSpec


def all_sign_vectors(n: int):
    for bits in range(1 << n):
        yield SignVector(n, bits)


def naive_histogram(q: QuadPoly, constraint: Optional[LinearConstraint] = None) -> AtomHistogram:
    counts = Counter()
    for x in all_sign_vectors(q.n):
        if constraint is not None and constraint.k and not constraint.holds(x.signs()):
            continue
        counts[eval_quad(q, x)] += 1
    return AtomHistogram(tuple(sorted(counts.items())), 1 << q.n)


def naive_linear_system_prob(constraint: LinearConstraint) -> DyadicProb:
    n = constraint.n
    count = sum(1 for x in all_sign_vectors(n) if constraint.holds(x.signs()))
    return DyadicProb(count, 1 << n)


def naive_vector_event_prob(vectors: Sequence[Sequence], spec: QuadricSpec) -> DyadicProb:
    vectors = [as_vector(v) for v in vectors]
    n = len(vectors)
    count = 0
    for signs in product((-1, 1), repeat=n):
        y = [sum((s * v[i] for s, v in zip(signs, vectors)), Fraction(0)) for i in range(spec.r)]
        if spec.constraints.holds(y) and eval_quad_at(spec.P, y) == 0:
            count += 1
    return DyadicProb(count, 1 << n)


def naive_hamming_event_prob(A: RatMatrix, v: Sequence, threshold: int) -> DyadicProb:
    v = as_vector(v)
    count = 0
    for x in all_sign_vectors(A.cols):
        y = A.mat_vec(x.signs())
        if sum(1 for a, b in zip(y, v) if a != b) < threshold:
            count += 1
    return DyadicProb(count, 1 << A.cols)
