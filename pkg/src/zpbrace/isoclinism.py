"""Torsion algebras with M.M cyclic of order p^t, up to isoclinism.

Such an algebra is presented by its product form b on M/Ann(M) with values
in Z/p^t (a :class:`TorsionForm`).  Any symmetric Z_p-lattice reducing to b
is a covering; the Jordan blocks of a covering below scale t, taken up to a
global unit rescaling, are the same for every covering and classify the
isoclinism class.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .brace import BraceAlgebra, Element, Torsion, dot
from .errors import NoNondegenerateLift, PrecisionTooSmall
from .latform import GramMatrix, JordanBlock, Matrix, flip_odd, jordan_invariant
from .padic import PAdicCtx, valuation_int

PRECISION_MARGIN = 8


@dataclass(frozen=True)
class TorsionForm:
    t: int
    gram: GramMatrix

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be positive")
        if self.gram.ctx.N != self.t:
            object.__setattr__(self, "gram", self.gram.at_precision(self.t))

    @classmethod
    def from_rows(cls, p: int, t: int, rows: Sequence[Sequence[int]]) -> TorsionForm:
        return cls(t, GramMatrix.from_rows(p, t, rows))

    @property
    def p(self) -> int:
        return self.gram.ctx.p

    @property
    def n(self) -> int:
        return self.gram.n

    @property
    def image_valuation(self) -> int:
        """v with b(M, M) generating p^v Z/p^t (v = t for the zero form)."""
        return min((valuation_int(x, self.p, self.t) for r in self.gram.entries for x in r),
                   default=self.t)

    @property
    def surjective(self) -> bool:
        """Whether the values of b generate all of Z/p^t.  Reported, never enforced."""
        return self.image_valuation == 0

    def to_json(self) -> dict:
        return {"p": self.p, "t": self.t, "entries": [list(r) for r in self.gram.entries]}


@dataclass(frozen=True)
class Covering:
    gram_lift: GramMatrix
    t: int

    def reduces_to(self, F: TorsionForm) -> bool:
        m = F.p ** F.t
        return all(x % m == y for r1, r2 in zip(self.gram_lift.entries, F.gram.entries)
                   for x, y in zip(r1, r2))

    def to_json(self) -> dict:
        return {"t": self.t, **self.gram_lift.to_json()}


@dataclass(frozen=True)
class Plain:
    pass


@dataclass(frozen=True)
class Nondegenerate:
    h: int


def lift(F: TorsionForm, N: int, strategy: Plain | Nondegenerate = Plain(),
         perturbation: Matrix | None = None) -> Covering:
    """A covering of F at precision N.

    ``perturbation`` adds p^t * P for a symmetric integer matrix P before the
    strategy is applied, producing a different member of the same class.
    """
    if N < F.t:
        raise PrecisionTooSmall(f"precision {N} is below t={F.t}")
    ctx = PAdicCtx(F.p, N)
    rows = [list(r) for r in F.gram.entries]
    if perturbation is not None:
        pt = F.p ** F.t
        rows = [[x + pt * d for x, d in zip(r, pr)] for r, pr in zip(rows, perturbation)]
    if isinstance(strategy, Plain):
        return Covering(GramMatrix(ctx, rows), F.t)
    if strategy.h < F.t:
        raise ValueError(f"shift exponent h={strategy.h} must be at least t={F.t}")
    h = strategy.h
    while h < N:
        ph = F.p ** h
        G = GramMatrix(ctx, [[x - ph * (i == j) for j, x in enumerate(r)] for i, r in enumerate(rows)])
        if not jordan_invariant(G).radical_rank_at_precision:
            return Covering(G, F.t)
        h += 1
    raise NoNondegenerateLift(f"no shift p^h with {strategy.h} <= h < {N} gives a regular lift")


@dataclass(frozen=True)
class IsoclinismInvariant:
    blocks: tuple[JordanBlock, ...]

    def to_json(self) -> list:
        return [b.to_json() for b in self.blocks]


def _key(blocks):
    return [b.sort_key() for b in blocks]


def canonical_blocks(blocks: Sequence[JordanBlock]) -> tuple[JordanBlock, ...]:
    """Pick the smaller of the blocks and their image under a non-square rescaling."""
    blocks = tuple(blocks)
    flipped = flip_odd(blocks)
    return min(blocks, flipped, key=_key)


def covering_invariant(C: Covering) -> IsoclinismInvariant:
    return IsoclinismInvariant(canonical_blocks(jordan_invariant(C.gram_lift).truncated(C.t)))


def isoclinism_invariant(F: TorsionForm, N: int | None = None) -> IsoclinismInvariant:
    N = F.t + PRECISION_MARGIN if N is None else N
    C = lift(F, N)
    if jordan_invariant(C.gram_lift).radical_rank_at_precision:
        C = lift(F, N, Nondegenerate(F.t))
    return covering_invariant(C)


def isoclinic(F1: TorsionForm, F2: TorsionForm) -> bool:
    if F1.p != F2.p:
        raise ValueError("forms over different primes")
    return F1.t == F2.t and isoclinism_invariant(F1) == isoclinism_invariant(F2)


def direct_sum_trivial(F: TorsionForm, r: int) -> TorsionForm:
    """F on M (+) T where T.T = 0 and T has rank r."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    n = F.n
    rows = [list(row) + [0] * r for row in F.gram.entries]
    rows += [[0] * (n + r) for _ in range(r)]
    return TorsionForm.from_rows(F.p, F.t, rows)


@dataclass(frozen=True)
class StemAlgebra:
    """(M/Ann(M)) (+) Z/p^t with (m1, x) . (m2, y) = (0, b(m1, m2))."""

    quotient_rank: int
    t: int
    form: TorsionForm

    @property
    def algebra(self) -> BraceAlgebra:
        # the stem is the torsion algebra whose defining matrix is the form itself
        return BraceAlgebra(self.form.gram.ctx, self.quotient_rank + 1, Torsion(self.t),
                            self.form.gram.entries)

    def dot(self, a: Element, b: Element) -> Element:
        return dot(self.algebra, a, b)

    @property
    def surjective(self) -> bool:
        return self.form.surjective

    def to_json(self) -> dict:
        return {"quotient_rank": self.quotient_rank, "t": self.t,
                "product_image": f"p^{self.form.image_valuation} Z/p^{self.t}",
                "surjective": self.surjective, "form": self.form.to_json()}


def stem(F: TorsionForm) -> StemAlgebra:
    return StemAlgebra(F.n, F.t, F)


# -- counting ------------------------------------------------------------------

def count_isoclinism_formula(n: int, t: int) -> int:
    """sum_{s=1}^t C(t,s) 2^(s-1) (C(n-1,s-1) + C(n/2-1,s-1)), C(a,b)=0 for non-integer a."""
    if n < 1 or t < 1:
        raise ValueError("n and t must be positive")
    total = 0
    for s in range(1, t + 1):
        even_part = comb(n // 2 - 1, s - 1) if n % 2 == 0 else 0
        total += comb(t, s) * 2 ** (s - 1) * (comb(n - 1, s - 1) + even_part)
    return total


def _compositions(n: int, s: int):
    for cuts in itertools.combinations(range(1, n), s - 1):
        edges = (0,) + cuts + (n,)
        yield tuple(b - a for a, b in zip(edges, edges[1:]))


def count_isoclinism_enumerate(n: int, t: int, min_scale_zero: bool = False) -> int:
    """Count Jordan data below scale t up to a global non-square rescaling.

    Walks every scale set, every ordered rank composition of n over it and
    every disc vector (0 = square, 1 = non-square), and collects orbit
    representatives under "flip the disc of every odd-rank block".  Shares
    no code with the Jordan machinery.  With ``min_scale_zero`` only scale
    sets containing 0 are kept.
    """
    if n < 1 or t < 1:
        raise ValueError("n and t must be positive")
    orbits = set()
    for s in range(1, min(n, t) + 1):
        for scales in itertools.combinations(range(t), s):
            if min_scale_zero and scales[0] != 0:
                continue
            for ranks in _compositions(n, s):
                for discs in itertools.product((0, 1), repeat=s):
                    flipped = tuple(d ^ (r % 2) for d, r in zip(discs, ranks))
                    orbits.add((scales, ranks, min(discs, flipped)))
    return len(orbits)
