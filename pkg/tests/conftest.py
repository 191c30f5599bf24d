import random

import pytest

from zpbrace.latform import GramMatrix


def random_symmetric(rng: random.Random, p: int, n: int, N: int) -> GramMatrix:
    """Symmetric matrix with entries biased towards higher valuations."""
    m = p ** N
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            x = rng.randrange(m) * p ** rng.choice((0, 0, 1, 1, 2, 3)) % m
            rows[i][j] = rows[j][i] = x
    return GramMatrix.from_rows(p, N, rows)


def random_unimodular(rng: random.Random, p: int, n: int, N: int) -> list[list[int]]:
    """Product of a permutation, a unit diagonal and two unitriangular factors."""
    m = p ** N
    L = [[rng.randrange(m) if j < i else int(i == j) for j in range(n)] for i in range(n)]
    U = [[rng.randrange(m) if j > i else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        U[i][i] = rng.choice([u for u in range(1, min(m, 50)) if u % p])
    perm = list(range(n))
    rng.shuffle(perm)
    P = [[int(perm[i] == j) for j in range(n)] for i in range(n)]

    def mul(A, B):
        return [[sum(a * b for a, b in zip(r, c)) % m for c in zip(*B)] for r in A]

    return mul(mul(P, L), U)


@pytest.fixture
def rng():
    return random.Random(20261016)
