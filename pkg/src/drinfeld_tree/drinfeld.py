"""Twisted polynomials over F_q(T) and rank-2 Drinfeld modules.

A twisted polynomial sum_i c_i tau^i acts on F by x -> sum_i c_i x^(q^i) and
multiplies under the rule tau * c = c^q * tau.  A rank-2 module is fixed by
phi(T) = T + g tau + Delta tau^2.

Torsion is found by a certified search.  For an additive polynomial
P(t) = T t + c_1 t^q + ... + c_r t^(q^r) and a place v, if x has a pole of
order m at v and

    v(c_r) - q^r m < v(c_i) - q^i m   for every i < r with c_i != 0 (c_0 = T)
    v(c_r) - q^r m < -m,

then the top term dominates, P(x) has a pole of order q^r m - v(c_r) > m and
the orbit escapes.  Both inequalities are preserved as m grows, so the least
such m (call it m0(v)) bounds the pole order of every preperiodic point at v
by m0(v) - 1.  At places where all c_i are integral and c_r is a unit, m0 = 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import Fq, Poly, RatFn, monic_polys, polys_of_degree_less
from .errors import InvariantError, PreconditionError
from .ideals import INF, IdealA, Place, factor, residue_inverse, valuation


class SkewPoly:
    """Element of F{tau}: coefficients RatFn, index = tau-degree."""

    __slots__ = ("F", "c")

    def __init__(self, F: Fq, coeffs: Sequence):
        c = [RatFn.of(x, F) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.F = F
        self.c = tuple(c)

    @classmethod
    def scalar(cls, x: RatFn) -> "SkewPoly":
        return cls(x.F, [x])

    @classmethod
    def tau(cls, F: Fq) -> "SkewPoly":
        return cls(F, [0, 1])

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewPoly) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        terms = []
        for i, a in enumerate(self.c):
            if a:
                mono = "" if i == 0 else ("tau" if i == 1 else f"tau^{i}")
                terms.append(f"({a})" + (f"*{mono}" if mono else ""))
        return " + ".join(terms) or "0"

    def __getitem__(self, i: int) -> RatFn:
        if 0 <= i < len(self.c):
            return self.c[i]
        return RatFn.of(0, self.F)

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        n = max(len(self.c), len(other.c))
        return SkewPoly(self.F, [self[i] + other[i] for i in range(n)])

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.F, [-a for a in self.c])

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __mul__(self, other) -> "SkewPoly":
        if not isinstance(other, SkewPoly):
            other = SkewPoly.scalar(RatFn.of(other, self.F))
        return skew_mul(self, other)

    def __call__(self, x: RatFn) -> RatFn:
        """Evaluate the additive polynomial sum c_i x^(q^i)."""
        out = RatFn.of(0, self.F)
        xp = x
        for i, a in enumerate(self.c):
            if i:
                xp = xp.frobenius()
            if a:
                out = out + a * xp
        return out


def skew_mul(a: SkewPoly, b: SkewPoly) -> SkewPoly:
    """(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(q^i) tau^(i+j)."""
    if not a.c or not b.c:
        return SkewPoly(a.F, [])
    out = [RatFn.of(0, a.F)] * (len(a.c) + len(b.c) - 1)
    for i, ai in enumerate(a.c):
        if not ai:
            continue
        for j, bj in enumerate(b.c):
            if bj:
                out[i + j] = out[i + j] + ai * bj.frobenius(i)
    return SkewPoly(a.F, out)


@dataclass(frozen=True)
class DrinfeldModule:
    """Rank-2 module phi(T) = T + g tau + delta tau^2 over F_q(T)."""

    g: RatFn
    delta: RatFn

    def __post_init__(self):
        if not self.delta:
            raise PreconditionError("Delta must be nonzero for a rank-2 module")

    @classmethod
    def of(cls, g, delta, q: int = 2) -> "DrinfeldModule":
        from .arith import field

        F = field(q)
        return cls(RatFn.of(g, F), RatFn.of(delta, F))

    @property
    def F(self) -> Fq:
        return self.g.F

    @property
    def q(self) -> int:
        return self.F.q

    def phi_T(self) -> SkewPoly:
        return SkewPoly(self.F, [Poly.T(self.F), self.g, self.delta])

    def coefficients(self) -> list[RatFn]:
        """[T, g, delta], the coefficients of the additive polynomial phi(T)."""
        return [RatFn.of(Poly.T(self.F)), self.g, self.delta]

    def step(self, x: RatFn) -> RatFn:
        """phi(T)(x) = T x + g x^q + delta x^(q^2)."""
        xq = x.frobenius()
        return RatFn.of(Poly.T(self.F)) * x + self.g * xq + self.delta * xq.frobenius()


def drinfeld_eval(phi: DrinfeldModule, a: Poly) -> SkewPoly:
    """phi(a) by Horner's rule in F{tau}."""
    F = phi.F
    pt = phi.phi_T()
    acc = SkewPoly(F, [])
    for coef in reversed(a.c):
        acc = skew_mul(acc, pt) + SkewPoly(F, [Poly.const(F, coef)])
    return acc


def apply_poly(phi: DrinfeldModule, a: Poly, x: RatFn) -> RatFn:
    """phi(a)(x) without forming phi(a): sum_k a_k phi(T)^k (x)."""
    out = RatFn.of(0, phi.F)
    y = x
    for k, coef in enumerate(a.c):
        if k:
            y = phi.step(y)
        if coef:
            out = out + RatFn.of(Poly.const(phi.F, coef)) * y
    return out


def j_invariant(phi: DrinfeldModule) -> RatFn:
    """g^(q+1) / Delta."""
    return phi.g ** (phi.q + 1) / phi.delta


def potential_good_reduction_at(phi: DrinfeldModule, v: IdealA) -> bool:
    if not v.is_prime:
        raise PreconditionError(f"{v} is not prime")
    j = j_invariant(phi)
    return (not j) or valuation(j, v) >= 0


# ---------------------------------------------------------------- escape bounds


def _val_T(place: Place, F: Fq) -> int:
    if place is INF:
        return -1
    return 1 if place.gen == Poly.T(F) else 0


def escape_order(coeffs: Sequence[RatFn], place: Place) -> int:
    """Least m0 >= 1 such that every pole of order >= m0 at `place` escapes.

    coeffs = [c_0, ..., c_r] with c_0 = T and c_r != 0; the additive polynomial is
    sum c_i t^(q^i).
    """
    F = coeffs[0].F
    q = F.q
    r = len(coeffs) - 1
    vr = valuation(coeffs[r], place)
    lows = []
    for i in range(r):
        c = coeffs[i]
        if c:
            lows.append((valuation(c, place), q**i))
    # smallest m >= 1 with vr - q^r m < v_i - q^i m for all i, and vr - q^r m < -m
    m = 1
    while True:
        top = vr - q**r * m
        if top < -m and all(top < vi - qi * m for vi, qi in lows):
            return m
        m += 1


def bad_places(coeffs: Sequence[RatFn]) -> list[IdealA]:
    """Finite primes where some c_i (i >= 1) is non-integral or the top coefficient is not a unit."""
    primes = set()
    for c in coeffs[1:]:
        if c:
            for part in (c.num, c.den):
                if part.deg >= 1:
                    primes.update(p for p, _ in factor(part))
    return sorted((IdealA(p) for p in primes), key=lambda I: I.gen.key)


@dataclass
class EscapeBox:
    """Certified bounds: preperiodic x has pole order <= pole_bound[p] at each bad p,
    is integral elsewhere, and deg x <= deg_bound."""

    coeffs: list
    pole_bound: dict
    deg_bound: int

    @classmethod
    def for_coeffs(cls, coeffs: Sequence[RatFn]) -> "EscapeBox":
        pb = {p: escape_order(coeffs, p) - 1 for p in bad_places(coeffs)}
        return cls(list(coeffs), pb, escape_order(coeffs, INF) - 1)

    def escapes(self, x: RatFn) -> bool:
        """True if x is certified to have an infinite forward orbit."""
        if not x:
            return False
        if x.num.deg - x.den.deg > self.deg_bound:
            return True
        den = x.den
        for p, bound in self.pole_bound.items():
            e = 0
            while den.deg >= p.deg:
                qt, r = divmod(den, p.gen)
                if r:
                    break
                den, e = qt, e + 1
            if e > bound:
                return True
        # any remaining denominator is a pole at a good prime
        return den.deg >= 1


def _additive_step(coeffs: Sequence[RatFn], x: RatFn) -> RatFn:
    out = RatFn.of(0, x.F)
    xp = x
    for i, c in enumerate(coeffs):
        if i:
            xp = xp.frobenius()
        if c:
            out = out + c * xp
    return out


class BudgetExceeded:
    """Sentinel result: the iteration budget ran out before a verdict."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "BUDGET_EXCEEDED"

    def __bool__(self) -> bool:
        raise TypeError("BUDGET_EXCEEDED has no truth value; compare with `is`")


BUDGET_EXCEEDED = BudgetExceeded()


def _orbit_verdict(coeffs, box: EscapeBox, x: RatFn, max_iter: int):
    seen = {x}
    for _ in range(max_iter):
        if box.escapes(x):
            return False
        x = _additive_step(coeffs, x)
        if x in seen:
            return True
        seen.add(x)
    return BUDGET_EXCEEDED


def is_preperiodic(phi: DrinfeldModule, x: RatFn, max_iter: int = 64):
    """True if the orbit of x under phi(T) is finite, False if it provably escapes,
    BUDGET_EXCEEDED if neither is settled within max_iter steps."""
    if max_iter < 1:
        raise PreconditionError("max_iter must be >= 1")
    coeffs = phi.coefficients()
    return _orbit_verdict(coeffs, EscapeBox.for_coeffs(coeffs), RatFn.of(x, phi.F), max_iter)


# ---------------------------------------------------------------- torsion


@dataclass
class TorsionModule:
    """(phi F)_tors = A/m + A/n with m | n."""

    m: IdealA
    n: IdealA
    generators: list
    points: list
    budget_exceeded: bool = False
    required_deg_bound: int = 0
    required_denom_bound: int = 0
    notes: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.points)

    @property
    def is_trivial(self) -> bool:
        return len(self.points) == 1


def default_deg_bound(phi: DrinfeldModule) -> int:
    d = phi.delta
    return 2 * 1 + 3 * max(d.num.deg, d.den.deg)


def _preperiodic_points(coeffs, deg_bound: int | None, denom_bound: int | None,
                        max_iter: int, candidate_cap: int = 1 << 20):
    """All preperiodic points of the additive polynomial, plus budget info."""
    F = coeffs[0].F
    box = EscapeBox.for_coeffs(coeffs)
    req_deg = box.deg_bound
    req_den = max(box.pole_bound.values(), default=0)
    exceeded = False
    use_deg = req_deg
    pole = dict(box.pole_bound)
    if deg_bound is not None and deg_bound < req_deg:
        use_deg, exceeded = deg_bound, True
    if denom_bound is not None and denom_bound < req_den:
        pole = {p: min(b, denom_bound) for p, b in pole.items()}
        exceeded = True
    primes = list(pole)
    dens = []
    for exps in itertools.product(*(range(pole[p] + 1) for p in primes)):
        w = Poly.one(F)
        for p, e in zip(primes, exps):
            w = w * p.gen**e
        dens.append(w)
    found = set()
    count = 0
    for w in dens:
        top = use_deg + w.deg
        if top < 0:
            continue
        count += F.q ** (top + 1)
        if count > candidate_cap:
            exceeded = True
            break
        for u in polys_of_degree_less(F, top + 1):
            x = RatFn(u, w)
            if x in found:
                continue
            verdict = _orbit_verdict(coeffs, box, x, max_iter)
            if verdict is BUDGET_EXCEEDED:
                exceeded = True
            elif verdict:
                found.add(x)
    found.add(RatFn.of(0, F))
    return sorted(found, key=lambda x: (x.den.key, x.num.key)), exceeded, req_deg, req_den


def _annihilator(phi_step, x: RatFn, F: Fq, max_deg: int) -> Poly | None:
    """Monic f of least degree with phi(f)(x) = 0, searched up to max_deg."""
    orbit = [x]
    for _ in range(max_deg):
        orbit.append(phi_step(orbit[-1]))
    zero = RatFn.of(0, F)
    for d in range(0, max_deg + 1):
        for f in monic_polys(F, d):
            acc = zero
            for k, coef in enumerate(f.c):
                if coef:
                    acc = acc + RatFn.of(Poly.const(F, coef)) * orbit[k]
            if not acc:
                return f
    return None


def _span(phi_step, x: RatFn, F: Fq, ann: Poly) -> set:
    """The cyclic submodule A x as a set (all phi(h)(x) with deg h < deg ann)."""
    orbit = [x]
    for _ in range(max(ann.deg - 1, 0)):
        orbit.append(phi_step(orbit[-1]))
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=ann.deg):
        acc = RatFn.of(0, F)
        for k, c in enumerate(coeffs):
            if c:
                acc = acc + RatFn.of(Poly.const(F, c)) * orbit[k]
        out.add(acc)
    return out


def invariant_factors(points: Sequence[RatFn], phi_step, F: Fq):
    """Brute-force decomposition of a finite phi-stable F_q-space as A/m + A/n.

    Returns (m, n, generators) with m | n; raises if more than two factors are needed.
    """
    pts = list(points)
    size = len(pts)
    dim = round(_log(size, F.q))
    one = Poly.one(F)
    if size == 1:
        return one, one, []
    anns = {x: _annihilator(phi_step, x, F, dim) for x in pts}
    # exponent = lcm of annihilators; attained by some element over a PID
    best = max(pts, key=lambda x: (anns[x].deg, -x.den.key, -x.num.key) if anns[x] is not None else (-1, 0, 0))
    n = anns[best]
    cyc = _span(phi_step, best, F, n)
    if len(cyc) == size:
        return one, n, [best]
    m_deg = dim - n.deg
    for y in pts:
        a = anns[y]
        if a is None or a.deg != m_deg:
            continue
        cy = _span(phi_step, y, F, a)
        if len(cy & cyc) == 1 and len(cy) * len(cyc) == size:
            if n % a:
                continue
            return a, n, [best, y]
    raise InvariantError("torsion-two-factors", "torsion module is not a sum of two cyclic modules")


def _log(n: int, b: int) -> float:
    k = 0
    while n > 1:
        n //= b
        k += 1
    return k


def torsion_module(phi: DrinfeldModule, deg_bound: int | None = None, denom_bound: int | None = None,
                   max_iter: int = 64) -> TorsionModule:
    """The torsion submodule of F under phi, by certified bounded search."""
    if deg_bound is None:
        deg_bound = default_deg_bound(phi)
    if denom_bound is None:
        denom_bound = 3
    if deg_bound < 0 or denom_bound < 0:
        raise PreconditionError("bounds must be nonnegative")
    coeffs = phi.coefficients()
    pts, exceeded, req_deg, req_den = _preperiodic_points(coeffs, deg_bound, denom_bound, max_iter)
    m, n, gens = invariant_factors(pts, phi.step, phi.F)
    notes = []
    if exceeded:
        notes.append(f"search budget binds: certified bounds need deg <= {req_deg}, pole order <= {req_den}")
    return TorsionModule(IdealA(m), IdealA(n), gens, pts, exceeded, req_deg, req_den, notes)


def carlitz_torsion(q: int = 2) -> list[RatFn]:
    """Torsion points of the rank-1 module phi(T) = T + tau (internal cross-check)."""
    from .arith import field

    F = field(q)
    coeffs = [RatFn.of(Poly.T(F)), RatFn.of(1, F)]
    pts, exceeded, _, _ = _preperiodic_points(coeffs, None, None, 64)
    if exceeded:
        raise InvariantError("carlitz-search", "budget exceeded on the Carlitz module")
    return pts


# ---------------------------------------------------------------- reduction at p


def _reduce_mod(x: RatFn, m: Poly) -> Poly:
    inv = residue_inverse(x.den, m)
    if inv is None:
        raise PreconditionError(f"{x} is not integral at the prime dividing {m}")
    return (x.num * inv) % m


def _integral_at(x: RatFn, p: IdealA) -> bool:
    return (not x) or valuation(x, p) >= 0


def phi_f_mod(phi: DrinfeldModule, p: IdealA, power: int = 1) -> list[Poly]:
    """Coefficients of phi(f) reduced mod p^power, f the monic generator of p."""
    F = phi.F
    m = p.gen**power
    T = Poly.T(F) % m
    g = _reduce_mod(phi.g, m) if phi.g else Poly.zero(F)
    dl = _reduce_mod(phi.delta, m)

    def frob(b: Poly, i: int) -> Poly:
        for _ in range(i):
            b = (b**F.q) % m
        return b

    def mul(a: list, b: list) -> list:
        if not a or not b:
            return []
        out = [Poly.zero(F)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = (out[i + j] + ai * frob(bj, i)) % m
        return out

    pt = [T, g, dl]
    acc: list = []
    for coef in reversed(p.gen.c):
        acc = mul(acc, pt)
        if not acc:
            acc = [Poly.zero(F)]
        acc[0] = (acc[0] + Poly.const(F, coef)) % m
    return acc


class ReductionType:
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"
    BAD = "bad_or_nonintegral"


def reduction_type(phi: DrinfeldModule, p: IdealA) -> str:
    """Ordinary / supersingular from the lowest nonzero tau-index of phi(f) mod p."""
    if not p.is_prime:
        raise PreconditionError(f"{p} is not a prime ideal")
    if not (_integral_at(phi.g, p) and _integral_at(phi.delta, p)) or valuation(phi.delta, p) != 0:
        return ReductionType.BAD
    coeffs = phi_f_mod(phi, p)
    idx = lowest_nonzero_index(coeffs)
    d = p.deg
    if idx == d:
        return ReductionType.ORDINARY
    if idx == 2 * d:
        return ReductionType.SUPERSINGULAR
    raise InvariantError("lowest-index-d-or-2d", f"lowest nonzero index {idx} for deg p = {d}")


def lowest_nonzero_index(coeffs: Sequence[Poly]) -> int:
    return next(i for i, c in enumerate(coeffs) if i > 0 and c)


@dataclass(frozen=True)
class NewtonPolygon:
    """Root valuations of g_f(x) = sum a_k x^(q^k - 1) with multiplicities, increasing.

    `points` are the vertices (q^k - 1, min(v(a_k), cap)) that were used.
    """

    slopes: tuple
    points: tuple

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.slopes)

    def weighted_sum(self) -> Fraction:
        return sum((s * m for s, m in self.slopes), Fraction(0))


def lower_hull(points: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(points)
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_slopes(phi: DrinfeldModule, p: IdealA, cap: int = 2) -> NewtonPolygon:
    """Newton polygon of g_f at p, reported as root valuations.

    Valuations of the coefficients are computed exactly up to `cap`
    (coefficients are reduced mod p^cap); since v(a_0) = 1 and the top
    coefficient is a unit, points with v >= 1 never lie on the lower hull.
    """
    if not p.is_prime:
        raise PreconditionError(f"{p} is not a prime ideal")
    if not (_integral_at(phi.g, p) and _integral_at(phi.delta, p)) or valuation(phi.delta, p) != 0:
        raise PreconditionError("newton_slopes needs phi integral at p with p(Delta) = 0")
    cap = max(cap, 2)
    coeffs = phi_f_mod(phi, p, cap)
    q = phi.q
    pts = []
    for k, a in enumerate(coeffs):
        if a:
            v = 0
            while v < cap and not (a % p.gen**(v + 1)):
                v += 1
            pts.append((q**k - 1, v))
    if pts[0] != (0, 1):
        raise InvariantError("a0-valuation-one", f"first point {pts[0]}")
    hull = lower_hull(pts)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y1 - y2, x2 - x1), x2 - x1))
    slopes.sort()
    return NewtonPolygon(tuple(slopes), tuple(pts))
