"""Commutative 3-nilpotent algebras with cyclic M.M and their braces.

An algebra of rank n is determined by a symmetric (n-1)x(n-1) defining
matrix Theta: for a = (a', a_n) and b = (b', b_n),

    a . b = (0, ..., 0, a' Theta b'^t),     a o b = a + b + a . b.

Elements are plain tuples of residues; the last coordinate spans the
annihilator line.  Two moduli are supported: ``TorsionFree(N)`` models Z_p
truncated at p**N, ``Torsion(k)`` is the honest ring Z/p^k.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import BudgetExceeded, RankDeficient, UnitKernel
from .latform import (
    CongruenceWitness,
    GramMatrix,
    Matrix,
    congruence_witness,
    jordan_split,
)
from .padic import PAdicCtx

Element = tuple[int, ...]

DEFAULT_TRIPLE_BUDGET = 10**6


@dataclass(frozen=True)
class TorsionFree:
    N: int

    def to_json(self):
        return {"kind": "torsion_free", "N": self.N}


@dataclass(frozen=True)
class Torsion:
    k: int

    def to_json(self):
        return {"kind": "torsion", "k": self.k}


Mode = Union[TorsionFree, Torsion]


def _exponent(mode: Mode) -> int:
    return mode.N if isinstance(mode, TorsionFree) else mode.k


@dataclass(frozen=True)
class BraceAlgebra:
    """(M, +, ., o) on (Z/p^e)^n.  Build through :func:`from_theta`; the raw
    constructor performs no validation at all."""

    ctx: PAdicCtx
    n: int
    mode: Mode
    theta: Matrix

    @property
    def modulus(self) -> int:
        return self.ctx.modulus

    def element(self, coords: Iterable[int]) -> Element:
        e = tuple(int(c) % self.modulus for c in coords)
        if len(e) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(e)}")
        return e

    def basis(self, i: int) -> Element:
        """e_i with 1-based index, matching e_1..e_n."""
        return tuple(int(j == i - 1) for j in range(self.n))

    @property
    def zero(self) -> Element:
        return (0,) * self.n

    def gram(self) -> GramMatrix:
        return GramMatrix(self.ctx, self.theta)

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "n": self.n, "mode": self.mode.to_json(),
                "theta": [list(r) for r in self.theta]}


def from_theta(theta: GramMatrix | Matrix, mode: Mode, p: int | None = None) -> BraceAlgebra:
    """Algebra of rank len(theta)+1 whose products are read off Theta.

    ``theta`` is reduced to the modulus of ``mode``.  Torsion-free mode demands
    maximal rank at that precision; torsion mode demands that no combination
    of Theta's columns with a unit coefficient vanishes.  Both conditions are
    the statement that Jordan splitting finds no radical direction.
    """
    if isinstance(theta, GramMatrix):
        p = theta.ctx.p
        rows = theta.entries
    else:
        if p is None:
            raise ValueError("p is required when theta is given as raw rows")
        rows = tuple(tuple(r) for r in theta)
    ctx = PAdicCtx(p, _exponent(mode))
    G = GramMatrix(ctx, rows)
    inv, _ = jordan_split(G)
    if inv.radical_rank_at_precision:
        if isinstance(mode, TorsionFree):
            raise RankDeficient(
                f"theta has {inv.radical_rank_at_precision} direction(s) vanishing mod {p}^{ctx.N}"
            )
        raise UnitKernel("a unit-coefficient combination of theta's columns vanishes")
    return BraceAlgebra(ctx, G.n + 1, mode, G.entries)


def _pair(A: BraceAlgebra, a: Element, b: Element) -> int:
    th, m = A.theta, A.modulus
    k = A.n - 1
    return sum(a[i] * th[i][j] * b[j] for i in range(k) for j in range(k)) % m


def dot(A: BraceAlgebra, a: Element, b: Element) -> Element:
    return (0,) * (A.n - 1) + (_pair(A, a, b),)


def add(A: BraceAlgebra, a: Element, b: Element) -> Element:
    m = A.modulus
    return tuple((x + y) % m for x, y in zip(a, b))


def neg(A: BraceAlgebra, a: Element) -> Element:
    m = A.modulus
    return tuple(-x % m for x in a)


def circle(A: BraceAlgebra, a: Element, b: Element) -> Element:
    c = add(A, a, b)
    return c[:-1] + ((c[-1] + _pair(A, a, b)) % A.modulus,)


def circle_inverse(A: BraceAlgebra, a: Element) -> Element:
    m = A.modulus
    return tuple(-x % m for x in a[:-1]) + ((_pair(A, a, a) - a[-1]) % m,)


@dataclass(frozen=True)
class GammaMap:
    """gamma_a = [[1, block], [0, 1]] acting on row vectors from the right."""

    block: tuple[int, ...]
    modulus: int

    @property
    def n(self) -> int:
        return len(self.block) + 1

    def matrix(self) -> Matrix:
        k = len(self.block)
        rows = [tuple(int(i == j) for j in range(k)) + (self.block[i],) for i in range(k)]
        rows.append((0,) * k + (1,))
        return tuple(rows)

    def apply(self, x: Element) -> Element:
        extra = sum(xi * bi for xi, bi in zip(x, self.block))
        return x[:-1] + ((x[-1] + extra) % self.modulus,)

    def inverse(self) -> GammaMap:
        return GammaMap(tuple(-b % self.modulus for b in self.block), self.modulus)

    def __matmul__(self, other: GammaMap) -> GammaMap:
        # unitriangular with a single off-diagonal column: blocks add
        return GammaMap(tuple((x + y) % self.modulus for x, y in zip(self.block, other.block)),
                        self.modulus)


def gamma(A: BraceAlgebra, a: Element) -> GammaMap:
    k, th, m = A.n - 1, A.theta, A.modulus
    # column sum_i a_i Theta_i: entry r is sum_i Theta[r][i] a_i
    block = tuple(sum(th[r][i] * a[i] for i in range(k)) % m for r in range(k))
    return GammaMap(block, m)


def tau(A: BraceAlgebra, b: Element, x: Element) -> Element:
    return add(A, gamma(A, b).apply(x), b)


def tau_inverse(A: BraceAlgebra, b: Element, y: Element) -> Element:
    return gamma(A, b).inverse().apply(add(A, y, neg(A, b)))


def annihilator(A: BraceAlgebra) -> tuple[int, list[Element]]:
    """Generators of Ann(M).  The last one is always e_n."""
    e_n = A.basis(A.n)
    if isinstance(A.mode, TorsionFree):
        return 1, [e_n]
    inv, wit = jordan_split(A.gram())
    p, k, m = A.ctx.p, A.ctx.N, A.modulus
    scales = [b.scale for b in inv.blocks for _ in range(b.rank)]
    scales += [k] * inv.radical_rank_at_precision
    gens = []
    for row, s in zip(wit.transform, scales):
        if s == 0:
            continue
        f = p ** (k - s) if s < k else 1
        gens.append(tuple(f * x % m for x in row) + (0,))
    gens.append(e_n)
    return len(gens), gens


def isomorphic(A1: BraceAlgebra, A2: BraceAlgebra) -> CongruenceWitness | None:
    """(eps, A) with A Theta_1 A^t = eps Theta_2 when the algebras are isomorphic."""
    for A in (A1, A2):
        if not isinstance(A.mode, TorsionFree):
            raise ValueError("isomorphism is decided for torsion-free algebras only")
    if A1.ctx != A2.ctx or A1.n != A2.n:
        raise ValueError("algebras must share p, precision and rank")
    return congruence_witness(A1.gram(), A2.gram())


def count_unimodular_classes(n: int, d: int) -> int:
    if not n > d >= 1:
        raise ValueError("need n > d >= 1")
    return 2 if (n - d) % 2 == 0 else 1


# -- axiom verification --------------------------------------------------------

@dataclass(frozen=True)
class Exhaustive:
    k: int | None = None

    def to_json(self):
        return {"kind": "exhaustive", "k": self.k}


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0

    def to_json(self):
        return {"kind": "sampled", "count": self.count, "seed": self.seed}


AXIOMS = (
    "brace_left",
    "brace_right",
    "commutative",
    "associative",
    "three_nilpotent",
    "commutator_identity",
    "circle_group",
)


@dataclass
class VerificationReport:
    scope: dict
    seed: int | None
    triples: int = 0
    results: dict[str, bool] = field(default_factory=lambda: dict.fromkeys(AXIOMS, True))
    counterexamples: dict[str, list] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.results.values())

    def fail(self, axiom: str, witness) -> None:
        self.results[axiom] = False
        bucket = self.counterexamples.setdefault(axiom, [])
        if len(bucket) < 5:
            bucket.append([list(w) for w in witness])

    def to_json(self) -> dict:
        return {
            "scope": self.scope,
            "seed": self.seed,
            "triples": self.triples,
            "results": self.results,
            "all_pass": self.all_pass,
            "counterexamples": self.counterexamples,
        }


class _Direct:
    """Operations evaluated straight from the algebra on coordinate tuples."""

    def __init__(self, A: BraceAlgebra):
        self.A = A
        self.zero = A.zero

    def add(self, a, b):
        return add(self.A, a, b)

    def neg(self, a):
        return neg(self.A, a)

    def dot(self, a, b):
        return dot(self.A, a, b)

    def circle(self, a, b):
        return circle(self.A, a, b)

    def inverse(self, a):
        return circle_inverse(self.A, a)

    def tau(self, b, x):
        return tau(self.A, b, x)

    def tau_inverse(self, b, y):
        return tau_inverse(self.A, b, y)

    def show(self, a):
        return a


class _Tabulated:
    """The same operations precomputed once as index tables over a finite set.

    The set (Z/p^k)^n is closed under every operation only when k equals the
    algebra's precision; otherwise results are looked up by value in a dict
    keyed on coordinates, which still evaluates each operation exactly once.
    """

    def __init__(self, A: BraceAlgebra, elems: list[Element]):
        self.A = A
        self.elems = elems
        idx = {e: i for i, e in enumerate(elems)}
        self._intern = lambda e: idx.get(e, e)
        self.zero = self._intern(A.zero)
        r = range(len(elems))
        self._add = [[self._intern(add(A, elems[i], elems[j])) for j in r] for i in r]
        self._dot = [[self._intern(dot(A, elems[i], elems[j])) for j in r] for i in r]
        self._circ = [[self._intern(circle(A, elems[i], elems[j])) for j in r] for i in r]
        self._tau = [[self._intern(tau(A, elems[b], elems[x])) for x in r] for b in r]
        self._tau_inv = [[self._intern(tau_inverse(A, elems[b], elems[y])) for y in r] for b in r]

    def _lookup(self, table, fn, a, b):
        if isinstance(a, int) and isinstance(b, int):
            return table[a][b]
        return self._intern(fn(self.A, self.show(a), self.show(b)))

    def show(self, a):
        return self.elems[a] if isinstance(a, int) else a

    def add(self, a, b):
        return self._lookup(self._add, add, a, b)

    def neg(self, a):
        return self._intern(neg(self.A, self.show(a)))

    def dot(self, a, b):
        return self._lookup(self._dot, dot, a, b)

    def circle(self, a, b):
        return self._lookup(self._circ, circle, a, b)

    def inverse(self, a):
        return self._intern(circle_inverse(self.A, self.show(a)))

    def tau(self, b, x):
        return self._lookup(self._tau, tau, b, x)

    def tau_inverse(self, b, y):
        return self._lookup(self._tau_inv, tau_inverse, b, y)


def _check_single(ops, x, rep: VerificationReport) -> None:
    if ops.circle(x, ops.inverse(x)) != ops.zero or ops.circle(x, ops.zero) != x:
        rep.fail("circle_group", (ops.show(x),))


def _check_pair(ops, x, y, rep: VerificationReport) -> None:
    if ops.dot(x, y) != ops.dot(y, x):
        rep.fail("commutative", (ops.show(x), ops.show(y)))
    if ops.circle(x, y) != ops.circle(y, x):
        rep.fail("circle_group", (ops.show(x), ops.show(y)))


def _check_triple(ops, x, y, z, neg_y, rep: VerificationReport) -> None:
    o, s = ops.circle, ops.add
    if s(o(x, s(y, z)), x) != s(o(x, y), o(x, z)):
        rep.fail("brace_left", (ops.show(x), ops.show(y), ops.show(z)))
    if s(o(s(x, y), z), z) != s(o(x, z), o(y, z)):
        rep.fail("brace_right", (ops.show(x), ops.show(y), ops.show(z)))
    xy = ops.dot(x, y)
    xyz = ops.dot(xy, z)
    if xyz != ops.dot(x, ops.dot(y, z)):
        rep.fail("associative", (ops.show(x), ops.show(y), ops.show(z)))
    if xyz != ops.zero:
        rep.fail("three_nilpotent", (ops.show(x), ops.show(y), ops.show(z)))
    if o(o(x, y), z) != o(x, o(y, z)):
        rep.fail("circle_group", (ops.show(x), ops.show(y), ops.show(z)))
    # x sigma_y^-1 tau_z^-1 sigma_y tau_z  ==  x sigma_{y.z}
    w = ops.tau(z, s(ops.tau_inverse(z, s(x, neg_y)), y))
    if w != s(x, ops.dot(y, z)):
        rep.fail("commutator_identity", (ops.show(x), ops.show(y), ops.show(z)))


def verify_brace(A: BraceAlgebra, scope: Exhaustive | Sampled,
                 budget: int = DEFAULT_TRIPLE_BUDGET) -> VerificationReport:
    """Check the brace laws, the ring axioms of ., 3-nilpotency, the commutator
    identity [sigma_a, tau_b] = sigma_{a.b}, and that (M, o) is an abelian group."""
    if isinstance(scope, Exhaustive):
        k = A.ctx.N if scope.k is None else scope.k
        size = (A.ctx.p ** k) ** A.n
        if size ** 3 > budget:
            raise BudgetExceeded(f"{size}^3 triples exceed the budget {budget}")
        elems = list(itertools.product(range(A.ctx.p ** k), repeat=A.n))
        ops = _Tabulated(A, elems)
        rep = VerificationReport(Exhaustive(k).to_json(), None)
        pts = range(size)
        for x in pts:
            _check_single(ops, x, rep)
            for y in pts:
                _check_pair(ops, x, y, rep)
        for y in pts:
            neg_y = ops.neg(y)
            for x in pts:
                for z in pts:
                    _check_triple(ops, x, y, z, neg_y, rep)
        rep.triples = size ** 3
        return rep

    rng = random.Random(scope.seed)
    ops = _Direct(A)
    rep = VerificationReport(scope.to_json(), scope.seed)
    draw = lambda: tuple(rng.randrange(A.modulus) for _ in range(A.n))  # noqa: E731
    for _ in range(scope.count):
        x, y, z = draw(), draw(), draw()
        _check_single(ops, x, rep)
        _check_pair(ops, x, y, rep)
        _check_triple(ops, x, y, z, ops.neg(y), rep)
    rep.triples = scope.count
    return rep
