import random
from fractions import Fraction
from itertools import combinations
from math import ceil

import pytest

from bounds.formulas import (geometric, halasz_affine, halasz_fjz, halasz_sub, hamming_ball, hamming_threshold,
                             key_lemma, low_rank, odlyzko)
from bounds.logbound import exact_le_bound
from conftest import distinct_offdiag_symmetric, random_matrix, random_quad
from core.errors import DimensionMismatchError, HypothesisFailure, ParameterError
from core.types import LinearConstraint, QuadPoly, RatMatrix
from engine.exact import QuadricSpec, hamming_event_prob, histogram, linear_system_prob, vector_event_prob
from ranklab.certificates import Verdict, verify_halasz, verify_m_cert, verify_split
from ranklab.halasz import greedy_disjoint_bases, halasz_membership
from ranklab.linalg import inverse, rank, rank_and_kernel, solve
from ranklab.mclass import greedy_rank_r_pairs, m_membership
from ranklab.perturbation import block_identity_rank, min_perturbed_rank
from ranklab.splitting import matrix_split, pair_count


def brute_force_member(M: RatMatrix, s: int) -> bool:
    k, n = M.shape
    for size in range(s + 1):
        for deleted in combinations(range(n), size):
            kept = [j for j in range(n) if j not in deleted]
            if rank(M.columns(kept)) < k:
                return False
    return True


def random_full_rank(rng: random.Random, k: int, n: int) -> RatMatrix:
    while True:
        M = random_matrix(rng, k, n, bound=3)
        if rank(M) == k:
            return M


def test_rank_and_kernel_examples():
    assert rank_and_kernel(RatMatrix.identity(3)) == (3, [])
    r, kernel = rank_and_kernel(RatMatrix.zeros(2, 3))
    assert r == 0
    assert sorted(kernel) == sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    M = RatMatrix.from_rows([[1, 1, 1, 1], [1, 1, 0, 0]])
    r, kernel = rank_and_kernel(M)
    assert r == 2 and len(kernel) == 2
    for v in kernel:
        assert M.mat_vec(v) == (0, 0)


@pytest.mark.parametrize("seed", range(30))
def test_rank_matches_kernel_dimension(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    M = RatMatrix.from_rows([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(cols)] for _ in range(rows)])
    r, kernel = rank_and_kernel(M)
    assert r == rank(M)
    assert r + len(kernel) == cols
    for v in kernel:
        assert all(x == 0 for x in M.mat_vec(v))


def test_solve_and_inverse():
    P = RatMatrix.from_rows([[2, 1], [1, 1]])
    assert P @ inverse(P) == RatMatrix.identity(2)
    x = solve(P, [3, 2])
    assert P.mat_vec(x) == (3, 2)
    assert solve(RatMatrix.from_rows([[1, 1], [1, 1]]), [0, 1]) is None
    with pytest.raises(ZeroDivisionError):
        inverse(RatMatrix.from_rows([[1, 1], [1, 1]]))


def test_greedy_disjoint_bases_examples():
    I2 = [[1, 0], [0, 1]]
    M = RatMatrix.from_rows([r + r + r for r in I2])
    assert greedy_disjoint_bases(M) == [(0, 1), (2, 3), (4, 5)]
    assert greedy_disjoint_bases(RatMatrix.from_rows([[1, 2, 3], [0, 0, 0]])) == []
    assert greedy_disjoint_bases(RatMatrix.from_rows([[1], [1]])) == []


def test_halasz_membership_examples():
    M = RatMatrix.from_rows([[1, 1, 1, 1], [1, 1, 0, 0]])
    member = halasz_membership(M, 1)
    assert member.verdict == Verdict.MEMBER
    non_member = halasz_membership(M, 2)
    assert non_member.verdict == Verdict.NON_MEMBER
    assert non_member.min_weight == 2
    assert verify_halasz(M, 1, member) and verify_halasz(M, 2, non_member)

    assert halasz_membership(RatMatrix.empty(5), 7).verdict == Verdict.MEMBER

    ones = RatMatrix.from_rows([[1] * 6])
    assert halasz_membership(ones, 5).verdict == Verdict.MEMBER
    assert halasz_membership(ones, 6).verdict == Verdict.NON_MEMBER


def test_halasz_membership_rank_deficient():
    M = RatMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    cert = halasz_membership(M, 0)
    assert cert.verdict == Verdict.NON_MEMBER
    assert cert.deletion == ()
    assert verify_halasz(M, 0, cert)


def test_halasz_membership_inconclusive_over_budget():
    rng = random.Random(1)
    M = random_full_rank(rng, 3, 12)
    cert = halasz_membership(M, 11, budget=1)
    assert cert.verdict == Verdict.INCONCLUSIVE
    assert not verify_halasz(M, 11, cert)
    assert cert.to_json()["verdict"] == "inconclusive"


@pytest.mark.parametrize("seed", range(100))
def test_halasz_membership_matches_brute_force(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    n = rng.randint(k, 12)
    M = random_matrix(rng, k, n, bound=2, zero_prob=0.4)
    for s in range(4):
        cert = halasz_membership(M, s)
        expected = brute_force_member(M, s)
        assert cert.verdict == (Verdict.MEMBER if expected else Verdict.NON_MEMBER)
        assert verify_halasz(M, s, cert)


@pytest.mark.parametrize("seed", range(40))
def test_disjoint_bases_and_membership_agree(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    n = rng.randint(k, 12)
    M = random_matrix(rng, k, n, bound=2, zero_prob=0.2)
    t = len(greedy_disjoint_bases(M))
    for s in range(t):
        assert brute_force_member(M, s)
    for s in range(1, 5):
        if brute_force_member(M, s):
            assert t >= ceil(s / k)


def test_min_perturbed_rank_examples():
    rng = random.Random(0)
    A = random_matrix(rng, 4, 5)
    assert min_perturbed_rank(A, RatMatrix.empty(5), RatMatrix.empty(4)) == rank(A)

    q = QuadPoly.product_of_linear([1, 1, 0, 0], 0, [0, 0, 1, 1], 0)
    T = U = RatMatrix.from_rows([[1, 1, 0, 0]])
    assert min_perturbed_rank(q.A, T, U) == 0

    with pytest.raises(DimensionMismatchError):
        min_perturbed_rank(A, RatMatrix.empty(4), RatMatrix.empty(4))


def _check_min_perturbed_rank(seed: int, samples: int) -> None:
    rng = random.Random(seed)
    k = rng.randint(1, 2)
    n, m = rng.randint(k + 1, 5), rng.randint(k + 1, 5)
    A = random_matrix(rng, n, m)
    T = random_full_rank(rng, k, m)
    U = random_full_rank(rng, k, n)
    value = min_perturbed_rank(A, T, U)
    assert value == block_identity_rank(A, T, U)
    for _ in range(samples):
        L = random_matrix(rng, n, k, bound=4, zero_prob=0.1)
        R = random_matrix(rng, k, m, bound=4, zero_prob=0.1)
        assert rank(A + L @ T + U.transpose() @ R) >= value


@pytest.mark.parametrize("seed", range(40))
def test_min_perturbed_rank_never_undercut(seed):
    _check_min_perturbed_rank(seed, 100)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_min_perturbed_rank_never_undercut_full(seed):
    _check_min_perturbed_rank(1000 + seed, 500)


def test_m_membership_without_constraints():
    identity = RatMatrix.identity(4)
    cert = greedy_rank_r_pairs(identity, 1, 4)
    assert cert.verdict == Verdict.MEMBER
    assert len(cert.pairs) == 4
    assert verify_m_cert(RatMatrix.empty(4), RatMatrix.empty(4), identity, cert)
    assert greedy_rank_r_pairs(identity, 1, 5).verdict == Verdict.NOT_FOUND


@pytest.mark.parametrize("seed", range(10))
def test_m_membership_invariant_under_scaling(seed):
    rng = random.Random(seed)
    T = random_full_rank(rng, 1, 6)
    U = random_full_rank(rng, 1, 6)
    A = random_matrix(rng, 6, 6)
    cert = m_membership(T, U, A, 1, 2)
    scaled = m_membership(T.scale(2), U.scale(3), A.scale(2), 1, 2)
    assert cert.verdict == scaled.verdict
    if cert.verdict == Verdict.MEMBER:
        assert verify_m_cert(T, U, A, cert)


def test_m_membership_rejects_small_index_sets():
    T = RatMatrix.from_rows([[1, 1]])
    U = RatMatrix.from_rows([[1, 1, 1]])
    with pytest.raises(ParameterError):
        m_membership(T, U, RatMatrix.zeros(3, 2), 2, 1)


@pytest.mark.parametrize("seed", range(50))
def test_matrix_split_without_constraints_round_trip(seed):
    rng = random.Random(seed)
    M = RatMatrix.empty(10)
    A = distinct_offdiag_symmetric(rng, 10)
    result = matrix_split(M, A, 8)
    assert len(result.I) <= 8
    assert result.s_prime == pair_count(0, 8) == 1
    assert verify_split(M, A, 8, result)
    A_JI = A.submatrix(result.J, result.I)
    cert = m_membership(M.columns(result.I), M.columns(result.J), A_JI, 2, result.s_prime)
    assert cert.verdict == Verdict.MEMBER


@pytest.mark.parametrize("seed", range(10))
def test_matrix_split_single_row(seed):
    rng = random.Random(seed)
    M = RatMatrix.from_rows([[rng.choice((-1, 1)) * rng.randint(1, 5) for _ in range(14)]])
    A = distinct_offdiag_symmetric(rng, 14)
    result = matrix_split(M, A, 12)
    assert result.s_prime == 1
    (I_pair, J_pair), = result.pairs_global
    assert len(I_pair) == len(J_pair) == 3
    assert verify_split(M, A, 12, result)
    cert = m_membership(M.columns(result.I), M.columns(result.J), A.submatrix(result.J, result.I), 2, 1)
    assert cert.verdict == Verdict.MEMBER


def test_matrix_split_needs_offdiagonal_entry():
    with pytest.raises(HypothesisFailure):
        matrix_split(RatMatrix.empty(10), RatMatrix.diagonal(range(1, 11)), 8)


def test_matrix_split_rejects_small_s():
    rng = random.Random(0)
    with pytest.raises(ParameterError):
        matrix_split(RatMatrix.from_rows([[1] * 14]), distinct_offdiag_symmetric(rng, 14), 11)


@pytest.mark.parametrize("seed", range(100))
def test_linear_system_prob_below_rank_bounds(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    n = rng.randint(k, 14)
    M = random_matrix(rng, k, n, bound=2, zero_prob=0.2)
    w = M.mat_vec([rng.choice((-1, 1)) for _ in range(n)])
    p = linear_system_prob(LinearConstraint(M, w))
    assert exact_le_bound(p, odlyzko(rank(M)))
    t = len(greedy_disjoint_bases(M))
    if t:
        assert exact_le_bound(p, halasz_fjz(k, t))


def _disjoint_bases_vectors(rng: random.Random, r: int, t: int):
    columns = []
    for _ in range(t):
        B = random_full_rank(rng, r, r)
        columns.extend(B.col(j) for j in range(r))
    rng.shuffle(columns)
    return columns


@pytest.mark.parametrize("seed", range(50))
def test_vector_event_prob_below_geometric_bound(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    d = rng.randint(0, min(1, r - 1))
    t = rng.choice([c for c in range(1, 12 // r + 1) if c % (2 ** d) == 0])
    vectors = _disjoint_bases_vectors(rng, r, t)
    # W = {y : y_j = w_j при j > d + 1} имеет размерность d + 1
    fixed = list(range(d + 1, r))
    M = RatMatrix.from_rows([[1 if c == j else 0 for c in range(r)] for j in fixed], cols=r)
    w = [rng.randint(-2, 2) for _ in fixed]
    P = random_quad(rng, r, bound=2)
    # ненулевой коэффициент при y_1² не даёт P обратиться в нуль на W
    if P.A[0, 0] == 0:
        P = P + QuadPoly.from_monomials(r, {(0, 0): 1})
    spec = QuadricSpec(r, P, LinearConstraint(M, w))
    p = vector_event_prob(vectors, spec)
    assert exact_le_bound(p, geometric(d, r, t))


def _matrix_from_columns(columns, rows: int) -> RatMatrix:
    return RatMatrix.from_rows([[c[i] for c in columns] for i in range(rows)], cols=len(columns))


@pytest.mark.parametrize("seed", range(60))
def test_linear_system_prob_below_robust_rank_bound(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 2)
    t = rng.randint(1, 12 // k)
    M = _matrix_from_columns(_disjoint_bases_vectors(rng, k, t), k)
    w = M.mat_vec([rng.choice((-1, 1)) for _ in range(M.cols)])
    p = linear_system_prob(LinearConstraint(M, w))
    checked = 0
    for s in range(1, M.cols + 1):
        cert = halasz_membership(M, s)
        if cert.verdict == Verdict.MEMBER:
            assert exact_le_bound(p, halasz_sub(k, s))
            checked += 1
    # t непересекающихся базисов дают принадлежность при s = t − 1
    assert checked >= t - 1


@pytest.mark.parametrize("seed", range(60))
def test_affine_subspace_prob_below_bound(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    t = rng.randint(1, 12 // k)
    d = rng.randint(0, k - 1)
    M = _matrix_from_columns(_disjoint_bases_vectors(rng, k, t), k)
    # W = {y : Ly = c} при L полного ранга k − d имеет размерность d
    L = random_full_rank(rng, k - d, k)
    c = (L @ M).mat_vec([rng.choice((-1, 1)) for _ in range(M.cols)])
    p = linear_system_prob(LinearConstraint(L @ M, c))
    assert p.value > 0
    assert exact_le_bound(p, halasz_affine(k, d, t))


def _low_rank_quad(rng: random.Random, n: int, rank_bound: int) -> QuadPoly:
    q = QuadPoly.linear([rng.randint(-2, 2) for _ in range(n)], rng.randint(-3, 3))
    for _ in range(rank_bound):
        u = [rng.randint(-2, 2) for _ in range(n)]
        q = q + QuadPoly.square_of_linear(u).scale(rng.choice((-2, -1, 1, 2)))
    return q


@pytest.mark.parametrize("seed", range(40))
def test_low_rank_joint_prob_below_bound(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 1)
    r = rng.randint(2, 3)
    n = rng.randint(4, 11)
    M = random_full_rank(rng, k, n) if k else RatMatrix.empty(n)
    w = M.mat_vec([rng.choice((-1, 1)) for _ in range(n)])
    q = _low_rank_quad(rng, n, r - 1)
    assert rank(q.A) <= r - 1
    p = histogram(q, LinearConstraint(M, w)).point_prob(0)
    for s in range(1, n + 1):
        if halasz_membership(M, s).verdict != Verdict.MEMBER:
            break
        bound = low_rank(k, s, r)
        # при s < 2^(3r²)(k+r)² оценка обрезается до 1
        assert bound.clamped
        assert exact_le_bound(p, bound)


def _robust_block_matrix(rng: random.Random, r: int, blocks: int) -> RatMatrix:
    """blocks невырожденных r x r блоков на диагонали, прочие элементы случайны"""
    size = r * blocks
    entries = [[0 if rng.random() < 0.5 else rng.randint(-2, 2) for _ in range(size)] for _ in range(size)]
    for b in range(blocks):
        block = random_full_rank(rng, r, r)
        for i in range(r):
            for j in range(r):
                entries[b * r + i][b * r + j] = block[i, j]
    return RatMatrix.from_rows(entries, cols=size)


@pytest.mark.parametrize("seed", range(40))
def test_hamming_event_prob_below_hamming_ball(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 2)
    t = rng.randint(1, (12 // r - 1) // 2)
    # из 2t + 1 блоков удаление t строк и t столбцов задевает не больше 2t
    A = _robust_block_matrix(rng, r, 2 * t + 1)
    v = A.mat_vec([rng.choice((-1, 1)) for _ in range(A.cols)])
    p = hamming_event_prob(A, v, hamming_threshold(r, t))
    assert p.value > 0
    assert exact_le_bound(p, hamming_ball(r, t))


@pytest.mark.parametrize("seed", range(40))
def test_hamming_event_prob_below_key_lemma(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 2)
    size = rng.randint(r, 10)
    A = random_matrix(rng, size, size, bound=2, zero_prob=0.3)
    v = [rng.randint(-2, 2) for _ in range(size)]
    for s in range(1, size // r + 1):
        if greedy_rank_r_pairs(A, r, s).verdict != Verdict.MEMBER:
            break
        # не больше s/6 ненулевых координат у Aξ − v
        p = hamming_event_prob(A, v, s // 6 + 1)
        assert exact_le_bound(p, key_lemma(0, r, s))
