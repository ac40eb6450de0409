"""Ideals of A = F_q[T], residue rings A/n, places, and P^1(A/n)."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Union

from .arith import Fq, Poly, RatFn, monic_polys, poly_gcd, poly_xgcd, polys_of_degree_less
from .errors import PreconditionError


def is_irreducible(f: Poly) -> bool:
    """Rabin-style test: f of degree n is irreducible iff gcd(T^(q^i) - T, f) = 1 for i <= n/2."""
    if f.deg < 1:
        raise PreconditionError("irreducibility is only defined for nonconstant polynomials")
    n, F = f.deg, f.F
    if n == 1:
        return True
    f = f.monic()
    T = Poly.T(F)
    x = T
    for _ in range(1, n // 2 + 1):
        x = _powmod(x, F.q, f)
        if not poly_gcd(x - T, f).is_one():
            return False
    return True


def _powmod(b: Poly, e: int, m: Poly) -> Poly:
    r = Poly.one(b.F)
    b = b % m
    while e:
        if e & 1:
            r = (r * b) % m
        b = (b * b) % m
        e >>= 1
    return r


def is_irreducible_trial(f: Poly) -> bool:
    """Reference test by trial division with all monic polynomials of degree <= deg f / 2."""
    if f.deg < 1:
        raise PreconditionError("irreducibility is only defined for nonconstant polynomials")
    for d in range(1, f.deg // 2 + 1):
        for g in monic_polys(f.F, d):
            if not (f % g):
                return False
    return True


@functools.lru_cache(maxsize=None)
def primes_of_degree(q: int, d: int) -> tuple[Poly, ...]:
    from .arith import field

    return tuple(g for g in monic_polys(field(q), d) if is_irreducible(g))


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factorization by trial division (unit dropped)."""
    if not f:
        raise PreconditionError("cannot factor zero")
    out: list[tuple[Poly, int]] = []
    f = f.monic()
    d = 1
    while f.deg >= 2 * d:
        for p in primes_of_degree(f.F.q, d):
            e = 0
            while True:
                qt, r = divmod(f, p)
                if r:
                    break
                f, e = qt, e + 1
            if e:
                out.append((p, e))
        d += 1
    if f.deg >= 1:
        out.append((f, 1))
    out.sort(key=lambda t: (t[0].deg, t[0].key))
    return out


class IdealA:
    """Nonzero ideal of A, stored by its monic generator."""

    __slots__ = ("gen", "_prime")

    def __init__(self, gen: Poly):
        if not gen:
            raise PreconditionError("the zero ideal is not supported")
        self.gen = gen.monic()
        self._prime = None

    @property
    def F(self) -> Fq:
        return self.gen.F

    @property
    def deg(self) -> int:
        return self.gen.deg

    @property
    def is_prime(self) -> bool:
        if self._prime is None:
            self._prime = self.gen.deg >= 1 and is_irreducible(self.gen)
        return self._prime

    def is_unit(self) -> bool:
        return self.gen.deg == 0

    def norm(self) -> int:
        return self.F.q**self.gen.deg

    def contains(self, a: Poly) -> bool:
        return not (a % self.gen)

    def divides(self, other: "IdealA") -> bool:
        """self | other, i.e. other is contained in self."""
        return not (other.gen % self.gen)

    def __eq__(self, other) -> bool:
        return isinstance(other, IdealA) and self.gen == other.gen

    def __hash__(self) -> int:
        return hash(("ideal", self.gen))

    def __repr__(self) -> str:
        return f"IdealA({self.gen})"

    def __str__(self) -> str:
        return f"({self.gen})"


class _Infinity:
    """The place at infinity of F_q(T)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INF"


INF = _Infinity()
Place = Union[IdealA, _Infinity]


def _poly_val(a: Poly, p: Poly) -> int:
    v = 0
    while True:
        qt, r = divmod(a, p)
        if r:
            return v
        a, v = qt, v + 1


def valuation(x, place: Place) -> int:
    """Normalized valuation of a nonzero Poly or RatFn at a prime ideal or at INF."""
    if isinstance(x, Poly):
        x = RatFn(x, reduced=True)
    if not x:
        raise PreconditionError("valuation of zero")
    if place is INF:
        return x.den.deg - x.num.deg
    if not place.is_prime:
        raise PreconditionError(f"{place} is not a prime ideal")
    p = place.gen
    return _poly_val(x.num, p) - _poly_val(x.den, p)


@dataclass(frozen=True)
class ResidueElem:
    """Element of A/n, stored by its reduced representative."""

    modulus: IdealA
    rep: Poly

    def __post_init__(self):
        r = self.rep % self.modulus.gen
        if r != self.rep:
            object.__setattr__(self, "rep", r)

    def __add__(self, o: "ResidueElem") -> "ResidueElem":
        return ResidueElem(self.modulus, self.rep + o.rep)

    def __sub__(self, o: "ResidueElem") -> "ResidueElem":
        return ResidueElem(self.modulus, self.rep - o.rep)

    def __neg__(self) -> "ResidueElem":
        return ResidueElem(self.modulus, -self.rep)

    def __mul__(self, o: "ResidueElem") -> "ResidueElem":
        return ResidueElem(self.modulus, self.rep * o.rep)

    def is_unit(self) -> bool:
        return poly_gcd(self.rep, self.modulus.gen).is_one()

    def inverse(self) -> "ResidueElem":
        g, s, _ = poly_xgcd(self.rep, self.modulus.gen)
        if not g.is_one():
            raise ZeroDivisionError(f"{self.rep} is not invertible mod {self.modulus.gen}")
        return ResidueElem(self.modulus, s)

    def __bool__(self) -> bool:
        return bool(self.rep)


def residue_inverse(a: Poly, n: Poly) -> Poly | None:
    """Inverse of a mod n, or None if a is not a unit."""
    g, s, _ = poly_xgcd(a % n, n)
    if not g.is_one():
        return None
    return s % n


class ProjPoint:
    """Normalized point (c:d) of P^1(A/n).

    Points compare by (c.key, d.key); this is the fixed total order used
    for orbit representatives.
    """

    __slots__ = ("c", "d", "sort_key")

    def __init__(self, c: Poly, d: Poly):
        self.c = c
        self.d = d
        self.sort_key = (c.key, d.key)

    def __hash__(self) -> int:
        return hash(self.sort_key)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjPoint) and self.sort_key == other.sort_key

    def __lt__(self, other: "ProjPoint") -> bool:
        return self.sort_key < other.sort_key

    def __le__(self, other: "ProjPoint") -> bool:
        return self.sort_key <= other.sort_key

    def __repr__(self) -> str:
        return f"({self.c}:{self.d})"

    __str__ = __repr__


def normalize_point(c: Poly, d: Poly, n: Poly) -> ProjPoint:
    """Canonical representative of the class of (c, d) in P^1(A/n).

    Scale so that c = 1 if c is a unit, else d = 1 if d is a unit, else take the
    least (c, d) over all unit multiples.  Raises if (c, d) is not unimodular.
    """
    c, d = c % n, d % n
    ci = residue_inverse(c, n) if c else None
    if ci is not None:
        return ProjPoint(Poly.one(n.F), (d * ci) % n)
    di = residue_inverse(d, n) if d else None
    if di is not None:
        return ProjPoint((c * di) % n, Poly.one(n.F))
    if not poly_gcd(poly_gcd(c, d), n).is_one():
        raise PreconditionError(f"({c}:{d}) is not a point of P^1(A/({n}))")
    best = None
    for u in residue_units(n):
        cand = ProjPoint((c * u) % n, (d * u) % n)
        if best is None or cand < best:
            best = cand
    return best


@functools.lru_cache(maxsize=None)
def residue_units(n: Poly) -> tuple[Poly, ...]:
    return tuple(u for u in polys_of_degree_less(n.F, n.deg) if u and poly_gcd(u, n).is_one())


@functools.lru_cache(maxsize=None)
def _proj_points_cached(n: Poly) -> tuple[ProjPoint, ...]:
    F = n.F
    if is_irreducible(n):
        pts = [ProjPoint(Poly.zero(F), Poly.one(F))]
        pts += [ProjPoint(Poly.one(F), x) for x in polys_of_degree_less(F, n.deg)]
        return tuple(sorted(pts))
    seen = set()
    residues = list(polys_of_degree_less(F, n.deg))
    for c in residues:
        for d in residues:
            if poly_gcd(poly_gcd(c, d), n).is_one():
                seen.add(normalize_point(c, d, n))
    return tuple(sorted(seen))


def proj_points(n: IdealA) -> list[ProjPoint]:
    """All points of P^1(A/n), sorted."""
    if n.deg < 1:
        raise PreconditionError("proj_points needs a nonzero proper ideal")
    return list(_proj_points_cached(n.gen))


def proj_line_size(n: IdealA) -> int:
    """|P^1(A/n)| = N(n) * prod over primes p | n of (1 + 1/N(p))."""
    size = n.norm()
    for p, _ in factor(n.gen):
        qd = n.F.q**p.deg
        size = size // qd * (qd + 1)
    return size


def iter_ideals_of_degree(F: Fq, d: int) -> Iterator[IdealA]:
    for g in monic_polys(F, d):
        yield IdealA(g)
