"""Brute-force reference implementations for tiny instances.

Nothing in here imports the elimination code of :mod:`zpbrace.latform`; the
point of these routines is to disagree loudly when the fast paths are wrong.
They are exponential and budget-gated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BudgetExceeded
from .latform import GramMatrix, JordanBlock, JordanInvariant
from .padic import SquareClass

DEFAULT_BUDGET = 10**6


def _val(x: int, p: int, N: int) -> int:
    x %= p ** N
    v = 0
    while v < N and x % p == 0:
        x //= p
        v += 1
    return v


def _squares(p: int) -> frozenset[int]:
    return frozenset(x * x % p for x in range(1, p))


def _cls(u: int, p: int) -> SquareClass:
    return SquareClass.SQUARE if u % p in _squares(p) else SquareClass.NONSQUARE


def bf_jordan(G: GramMatrix) -> JordanInvariant:
    """Jordan invariant by elimination with 1x1 and 2x2 pivot blocks.

    A 2x2 pivot is taken whenever the minimal valuation only occurs off the
    diagonal, so no basis vector is ever replaced by a sum e_i + e_j.
    """
    p, N = G.ctx.p, G.ctx.N
    m = p ** N
    A = [list(r) for r in G.entries]
    live = list(range(G.n))
    pieces: list[tuple[int, int, SquareClass]] = []

    def eliminate(r, coeffs):
        for piv, f in coeffs:
            if f:
                A[r] = [(x - f * y) % m for x, y in zip(A[r], A[piv])]
                for row in A:
                    row[r] = (row[r] - f * row[piv]) % m

    while live:
        v = min(_val(A[i][j], p, N) for i in live for j in live)
        if v == N:
            break
        pv = p ** v
        diag = [i for i in live if _val(A[i][i], p, N) == v]
        if diag:
            i = diag[-1]
            u = A[i][i] // pv
            uinv = pow(u, -1, m)
            live.remove(i)
            for r in live:
                eliminate(r, [(i, (A[r][i] // pv) * uinv % m)])
            pieces.append((v, 1, _cls(u, p)))
        else:
            i, j = [(i, j) for i in live for j in live if i < j and _val(A[i][j], p, N) == v][-1]
            a, b, c = A[i][i] // pv, A[i][j] // pv, A[j][j] // pv
            det = a * c - b * b
            dinv = pow(det, -1, m)
            live.remove(i)
            live.remove(j)
            for r in live:
                x, y = A[r][i] // pv, A[r][j] // pv
                # (x, y) times the inverse of [[a, b], [b, c]]
                fi = (x * c - y * b) * dinv % m
                fj = (y * a - x * b) * dinv % m
                eliminate(r, [(i, fi), (j, fj)])
            pieces.append((v, 2, _cls(det, p)))

    blocks = []
    for scale in sorted({s for s, _, _ in pieces}):
        rank, disc = 0, SquareClass.SQUARE
        for s, r, d in pieces:
            if s == scale:
                rank += r
                disc = disc * d
        blocks.append(JordanBlock(scale, rank, disc))
    return JordanInvariant(tuple(blocks), len(live))


def _det(A, m: int) -> int:
    n = len(A)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= A[i][perm[i]]
        total += sign * prod
    return total % m


def bf_congruent(
    G1: Sequence[Sequence[int]],
    G2: Sequence[Sequence[int]],
    p: int,
    k: int,
    allow_scaling: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Exhaustive search for A in GL_n(Z/p^k) and eps with A G1 A^t = eps G2."""
    n = len(G1)
    if len(G2) != n:
        return False
    m = p ** k
    if m ** (n * n) > budget:
        raise BudgetExceeded(f"{m}^{n * n} matrices exceed the budget {budget}")
    target = [[x % m for x in row] for row in G2]
    q = next(x for x in range(2, p) if x % p not in _squares(p))
    targets = [target]
    if allow_scaling:
        targets.append([[q * x % m for x in row] for row in target])
    for flat in itertools.product(range(m), repeat=n * n):
        A = [flat[i * n:(i + 1) * n] for i in range(n)]
        if _det(A, m) % p == 0:
            continue
        AG = [[sum(A[i][l] * G1[l][j] for l in range(n)) % m for j in range(n)] for i in range(n)]
        img = [[sum(AG[i][l] * A[j][l] for l in range(n)) % m for j in range(n)] for i in range(n)]
        if img in targets:
            return True
    return False


@dataclass
class FiniteAlgebraTable:
    """Full multiplication table of a product on (Z/p^k)^n."""

    p: int
    k: int
    n: int
    elements: list[tuple[int, ...]]
    table: list[list[int]]
    index: dict[tuple[int, ...], int] = field(repr=False)

    @classmethod
    def from_product(
        cls,
        p: int,
        k: int,
        n: int,
        product: Callable[[tuple[int, ...], tuple[int, ...]], Sequence[int]],
        budget: int = DEFAULT_BUDGET,
    ) -> FiniteAlgebraTable:
        m = p ** k
        size = m ** n
        if size * size > budget:
            raise BudgetExceeded(f"table with {size}^2 entries exceeds the budget {budget}")
        elements = list(itertools.product(range(m), repeat=n))
        index = {e: i for i, e in enumerate(elements)}
        table = [[index[tuple(x % m for x in product(a, b))] for b in elements] for a in elements]
        return cls(p, k, n, elements, table, index)

    @classmethod
    def zero(cls, p: int, k: int, n: int) -> FiniteAlgebraTable:
        return cls.from_product(p, k, n, lambda a, b: (0,) * n)

    def add(self, i: int, j: int) -> int:
        m = self.p ** self.k
        return self.index[tuple((x + y) % m for x, y in zip(self.elements[i], self.elements[j]))]

    def smul(self, lam: int, i: int) -> int:
        m = self.p ** self.k
        return self.index[tuple(lam * x % m for x in self.elements[i])]


@dataclass
class AlgebraReport:
    commutative: bool = True
    associative: bool = True
    bilinear: bool = True
    three_nilpotent: bool = True
    radical: bool = True
    counterexamples: dict[str, list] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all((self.commutative, self.associative, self.bilinear,
                    self.three_nilpotent, self.radical))

    def _fail(self, name: str, witness) -> None:
        setattr(self, name, False)
        bucket = self.counterexamples.setdefault(name, [])
        if len(bucket) < 5:
            bucket.append(witness)


def bf_verify_algebra(T: FiniteAlgebraTable, triple_budget: int = DEFAULT_BUDGET) -> AlgebraReport:
    """Check the ring axioms of the table literally, over every pair and triple."""
    size = len(T.elements)
    if size ** 3 > triple_budget:
        raise BudgetExceeded(f"{size}^3 triples exceed the budget {triple_budget}")
    mul, el = T.table, T.elements
    zero = T.index[(0,) * T.n]
    rep = AlgebraReport()
    for a in range(size):
        for b in range(size):
            ab = mul[a][b]
            if ab != mul[b][a]:
                rep._fail("commutative", (el[a], el[b]))
            for lam in range(1, T.p ** T.k):
                if mul[T.smul(lam, a)][b] != T.smul(lam, ab):
                    rep._fail("bilinear", (lam, el[a], el[b]))
                    break
            for c in range(size):
                if mul[ab][c] != mul[a][mul[b][c]]:
                    rep._fail("associative", (el[a], el[b], el[c]))
                if mul[ab][c] != zero:
                    rep._fail("three_nilpotent", (el[a], el[b], el[c]))
                if mul[T.add(a, b)][c] != T.add(mul[a][c], mul[b][c]):
                    rep._fail("bilinear", (el[a], el[b], el[c]))
        # circle inverse: a + b + ab = 0 for some b
        if not any(T.add(T.add(a, b), mul[a][b]) == zero for b in range(size)):
            rep._fail("radical", (el[a],))
    return rep
