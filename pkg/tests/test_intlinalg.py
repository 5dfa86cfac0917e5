import itertools
import random
from fractions import Fraction

import pytest

from fsets import intlinalg as IL


def _det(M):
    M = [[Fraction(x) for x in row] for row in M]
    n, det = len(M), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def _rank_q(A):
    M = [[Fraction(x) for x in row] for row in A]
    rk, cols = 0, len(M[0]) if M else 0
    for c in range(cols):
        piv = next((r for r in range(rk, len(M)) if M[r][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        for r in range(len(M)):
            if r != rk and M[r][c]:
                f = M[r][c] / M[rk][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rk])]
        rk += 1
    return rk


def _random_matrix(rng):
    m, n = rng.randint(1, 3), rng.randint(1, 4)
    return [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]


@pytest.mark.parametrize("seed", range(5))
def test_hermite_is_unimodular_echelon(seed):
    rng = random.Random(seed)
    for _ in range(40):
        A = _random_matrix(rng)
        H, U, piv = IL.column_hermite(A)
        n = len(A[0])
        assert [[sum(A[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(len(A))] == H
        assert abs(_det(U)) == 1
        assert len(piv) == _rank_q(A) == IL.rank(A)
        for j, r in enumerate(piv):
            assert H[r][j] > 0 and all(H[i][j] == 0 for i in range(r))
            assert all(0 <= H[r][l] < H[r][j] for l in range(j))


@pytest.mark.parametrize("seed", range(5))
def test_solve_matches_box_search(seed):
    rng = random.Random(100 + seed)
    for _ in range(30):
        A = _random_matrix(rng)
        n = len(A[0])
        if rng.random() < 0.5:
            x = [rng.randint(-2, 2) for _ in range(n)]
            b = IL.matvec(A, x)
        else:
            b = [rng.randint(-5, 5) for _ in A]
        sol = IL.solve(A, b)
        box = [list(c) for c in itertools.product(range(-3, 4), repeat=n) if IL.matvec(A, list(c)) == b]
        if sol is None:
            assert not box
            continue
        x0, kernel = sol
        assert IL.matvec(A, x0) == b
        assert all(not any(IL.matvec(A, v)) for v in kernel)
        assert len(kernel) == n - IL.rank(A)


def test_solve_mixed_congruences():
    # 2x + 3y = 1 exactly, x = 2 (mod 5)
    sol = IL.solve_mixed([[2, 3], [1, 0]], [1, 2], [0, 5])
    x0, kernel = sol
    assert 2 * x0[0] + 3 * x0[1] == 1 and (x0[0] - 2) % 5 == 0
    for v in kernel:
        assert 2 * v[0] + 3 * v[1] == 0 and v[0] % 5 == 0
    assert IL.solve_mixed([[2]], [1], [4]) is None  # 2x = 1 (mod 4)


def test_row_hermite_spans_same_lattice():
    rows = [[2, 4, 6], [3, 6, 9], [1, 1, 1]]
    basis = IL.row_hermite(rows)
    assert len(basis) == 2
    for r in rows:
        assert IL.solve(IL.transpose(basis), r) is not None
