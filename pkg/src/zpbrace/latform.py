"""Symmetric bilinear forms over Z_p given by Gram matrices.

Everything here works on residues modulo p**N.  Jordan splitting follows the
usual constructive argument for odd p: pivot on an entry of minimal valuation,
clear its row and column, repeat, then normalise the unit parts of each scale
to diag(1, ..., 1, eps) with eps in {1, q}.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import InsufficientPrecision, NotSymmetric, NotUnimodular
from .padic import (
    PAdicCtx,
    PAdicInt,
    SquareClass,
    canonical_nonsquare,
    square_class_int,
    sqrt_unit_int,
    valuation_int,
)

Matrix = tuple[tuple[int, ...], ...]


# -- small exact linear algebra mod m ---------------------------------------

def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B, m: int) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % m for col in Bt] for row in A]


def congruence(T, G, m: int) -> list[list[int]]:
    """T * G * T^t mod m."""
    if not T:
        return []
    return mat_mul(mat_mul(T, G, m), [list(r) for r in zip(*T)], m)


def mat_inv(A, p: int, N: int) -> list[list[int]]:
    """Inverse mod p**N of a matrix whose determinant is a unit."""
    m = p ** N
    n = len(A)
    W = [[x % m for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if W[r][c] % p), None)
        if piv is None:
            raise NotUnimodular("matrix is not invertible modulo p")
        W[c], W[piv] = W[piv], W[c]
        inv = pow(W[c][c], -1, m)
        W[c] = [x * inv % m for x in W[c]]
        for r in range(n):
            if r != c and W[r][c]:
                f = W[r][c]
                W[r] = [(x - f * y) % m for x, y in zip(W[r], W[c])]
    return [row[n:] for row in W]


def det_int(A) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# -- types -------------------------------------------------------------------

@dataclass(frozen=True)
class GramMatrix:
    ctx: PAdicCtx
    entries: Matrix

    def __post_init__(self):
        m = self.ctx.modulus
        rows = tuple(tuple(int(x) % m for x in row) for row in self.entries)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("Gram matrix must be square")
        for i, row in enumerate(rows):
            for j in range(i):
                if row[j] != rows[j][i]:
                    raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, p: int, N: int, rows: Sequence[Sequence[int]]) -> GramMatrix:
        return cls(PAdicCtx(p, N), tuple(tuple(r) for r in rows))

    @classmethod
    def diagonal(cls, p: int, N: int, diag: Sequence[int]) -> GramMatrix:
        n = len(diag)
        return cls.from_rows(p, N, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> PAdicInt:
        return self.ctx(self.entries[i][j])

    def scaled(self, alpha: int) -> GramMatrix:
        return GramMatrix(self.ctx, tuple(tuple(alpha * x for x in r) for r in self.entries))

    def at_precision(self, N: int) -> GramMatrix:
        """Reduce (or re-embed, for N larger) using least nonnegative representatives."""
        return GramMatrix(self.ctx.with_precision(N), self.entries)

    def transformed(self, T) -> GramMatrix:
        return GramMatrix(self.ctx, tuple(map(tuple, congruence(T, self.entries, self.ctx.modulus))))

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "N": self.ctx.N, "entries": [list(r) for r in self.entries]}


class JordanBlock(NamedTuple):
    scale: int
    rank: int
    disc: SquareClass

    def sort_key(self):
        return (self.scale, self.rank, self.disc.rank_key)

    def to_json(self) -> dict:
        return {"scale": self.scale, "rank": self.rank, "disc": self.disc.value}


@dataclass(frozen=True)
class JordanInvariant:
    blocks: tuple[JordanBlock, ...]
    radical_rank_at_precision: int = 0

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks) + self.radical_rank_at_precision

    def truncated(self, t: int) -> tuple[JordanBlock, ...]:
        return tuple(b for b in self.blocks if b.scale < t)

    def to_json(self) -> dict:
        return {
            "blocks": [b.to_json() for b in self.blocks],
            "radical_rank_at_precision": self.radical_rank_at_precision,
        }


@dataclass(frozen=True)
class CongruenceWitness:
    transform: Matrix
    epsilon: int = 1

    def to_json(self) -> dict:
        return {"transform": [list(r) for r in self.transform], "epsilon": self.epsilon}


def flip_odd(blocks: Sequence[JordanBlock]) -> tuple[JordanBlock, ...]:
    """Effect of scaling the form by a non-square unit on its Jordan blocks."""
    return tuple(b._replace(disc=b.disc.flip()) if b.rank % 2 else b for b in blocks)


# -- Jordan splitting ---------------------------------------------------------

def _diagonalize(A: list[list[int]], p: int, N: int):
    """Symmetric elimination in place; returns (T, diag valuations) with T A0 T^t = A."""
    m = p ** N
    n = len(A)
    T = identity(n)

    def add_to(i, j, f):
        # e_i <- e_i + f e_j
        A[i] = [(x + f * y) % m for x, y in zip(A[i], A[j])]
        for row in A:
            row[i] = (row[i] + f * row[j]) % m
        T[i] = [(x + f * y) % m for x, y in zip(T[i], T[j])]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        T[i], T[j] = T[j], T[i]

    vals = []
    for k in range(n):
        best, where = N, None
        for i in range(k, n):
            for j in range(i, n):
                v = valuation_int(A[i][j], p, N)
                if v < best:
                    best, where = v, (i, j)
        if where is None:
            break
        diag = next((i for i in range(k, n) if valuation_int(A[i][i], p, N) == best), None)
        if diag is None:
            i, j = where
            # diagonal entries sit strictly above `best`, so 2*A[i][j] dominates
            add_to(i, j, 1)
            diag = i
        swap(k, diag)
        pk = p ** best
        uinv = pow(A[k][k] // pk, -1, m)
        for r in range(k + 1, n):
            if A[r][k]:
                f = (A[r][k] // pk) * uinv % m
                add_to(r, k, -f)
        vals.append(best)
    return T, vals


def _normalize(A, T, vals, p: int, N: int):
    """Rescale and recombine rows of T so T G T^t is the canonical Jordan form."""
    m = p ** N
    q = canonical_nonsquare(p)
    units = []
    for k, v in enumerate(vals):
        u = A[k][k] // p ** v
        cls = square_class_int(u, p)
        target = 1 if cls is SquareClass.SQUARE else q
        s = sqrt_unit_int(target * pow(u, -1, m) % m, p, N)
        T[k] = [x * s % m for x in T[k]]
        units.append(target)

    blocks = []
    start = 0
    while start < len(vals):
        v = vals[start]
        end = start
        while end < len(vals) and vals[end] == v:
            end += 1
        idx = list(range(start, end))
        ones = [i for i in idx if units[i] == 1]
        qs = [i for i in idx if units[i] != 1]
        order = ones + qs
        rows = [T[i] for i in order]
        first_q = len(ones)
        if len(qs) >= 2:
            x, y = _sum_of_two_squares(pow(q, -1, m), p, N)
            for a in range(first_q, first_q + 2 * (len(qs) // 2), 2):
                ra, rb = rows[a], rows[a + 1]
                rows[a] = [(x * s + y * t) % m for s, t in zip(ra, rb)]
                rows[a + 1] = [(-y * s + x * t) % m for s, t in zip(ra, rb)]
        T[start:end] = rows
        disc = SquareClass.NONSQUARE if len(qs) % 2 else SquareClass.SQUARE
        blocks.append(JordanBlock(v, end - start, disc))
        start = end
    return blocks


def _sum_of_two_squares(c: int, p: int, N: int) -> tuple[int, int]:
    """x, y with x^2 + y^2 = c mod p^N, for a non-square unit c."""
    m = p ** N
    for x in range(p):
        d = (c - x * x) % m
        if d % p and square_class_int(d, p) is SquareClass.SQUARE:
            return x, sqrt_unit_int(d, p, N)
    raise AssertionError("unreachable for odd p")


def jordan_matrix(inv: JordanInvariant, ctx: PAdicCtx) -> Matrix:
    """The canonical block-diagonal form p^i diag(1, ..., 1, eps) followed by zeros."""
    diag = []
    for b in inv.blocks:
        pv = ctx.p ** b.scale
        diag += [pv] * (b.rank - 1)
        diag.append(pv * (ctx.q if b.disc is SquareClass.NONSQUARE else 1))
    diag += [0] * inv.radical_rank_at_precision
    n = len(diag)
    m = ctx.modulus
    return tuple(tuple(diag[i] % m if i == j else 0 for j in range(n)) for i in range(n))


def jordan_split(G: GramMatrix) -> tuple[JordanInvariant, CongruenceWitness]:
    p, N = G.ctx.p, G.ctx.N
    A = [list(r) for r in G.entries]
    T, vals = _diagonalize(A, p, N)
    blocks = _normalize(A, T, vals, p, N)
    inv = JordanInvariant(tuple(blocks), G.n - len(vals))
    return inv, CongruenceWitness(tuple(map(tuple, T)), 1)


def jordan_invariant(G: GramMatrix) -> JordanInvariant:
    return jordan_split(G)[0]


def discriminant(G: GramMatrix) -> tuple[int | None, SquareClass | None]:
    p, N = G.ctx.p, G.ctx.N
    d = det_int(G.entries) % G.ctx.modulus
    v = valuation_int(d, p, N)
    if v >= N:
        return None, None
    return v, square_class_int(d // p ** v, p)


def radical_split(G: GramMatrix) -> tuple[GramMatrix, int, CongruenceWitness]:
    inv, wit = jordan_split(G)
    r = G.n - inv.radical_rank_at_precision
    J = jordan_matrix(inv, G.ctx)
    regular = GramMatrix(G.ctx, tuple(row[:r] for row in J[:r]))
    return regular, inv.radical_rank_at_precision, wit


def unimodular_normal_form(G: GramMatrix) -> GramMatrix:
    v, disc = discriminant(G)
    if v != 0:
        raise NotUnimodular(f"determinant has valuation {'>= N' if v is None else v}")
    d = 1 if disc is SquareClass.SQUARE else G.ctx.q
    return GramMatrix.diagonal(G.ctx.p, G.ctx.N, [1] * (G.n - 1) + [d])


def _require_regular(*invs: JordanInvariant):
    for inv in invs:
        if inv.radical_rank_at_precision:
            raise InsufficientPrecision(
                f"{inv.radical_rank_at_precision} direction(s) vanish at the working precision"
            )


def congruence_witness(G1: GramMatrix, G2: GramMatrix) -> CongruenceWitness | None:
    """A unimodular A and eps in {1, q} with A G1 A^t = eps G2, or None."""
    if G1.ctx != G2.ctx:
        raise ValueError("forms live in different contexts")
    if G1.n != G2.n:
        return None
    inv1, w1 = jordan_split(G1)
    _require_regular(inv1, jordan_invariant(G2))
    p, N = G1.ctx.p, G1.ctx.N
    for eps in (1, G1.ctx.q):
        inv2, w2 = jordan_split(G2.scaled(eps))
        if inv2.blocks == inv1.blocks:
            A = mat_mul(mat_inv(w2.transform, p, N), w1.transform, G1.ctx.modulus)
            return CongruenceWitness(tuple(map(tuple, A)), eps)
    return None


def congruent_up_to_unit(G1: GramMatrix, G2: GramMatrix) -> int | None:
    w = congruence_witness(G1, G2)
    return None if w is None else w.epsilon


def pt_equivalent(G1: GramMatrix, G2: GramMatrix, t: int) -> bool:
    if t > G1.ctx.N or t > G2.ctx.N:
        raise InsufficientPrecision(f"t={t} exceeds the working precision")
    if G1.ctx.p != G2.ctx.p:
        raise ValueError("forms over different primes")
    b1 = jordan_invariant(G1).truncated(t)
    b2 = jordan_invariant(G2).truncated(t)
    # scaling by any unit acts through its square class
    return b1 == b2 or b1 == flip_odd(b2)
