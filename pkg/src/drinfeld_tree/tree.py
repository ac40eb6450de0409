"""The Bruhat-Tits tree of PGL_2(F_inf), F_inf = F_q((1/T)).

A vertex is stored as (k, P) with P in A and stands for the class of

    (pi^k, P * T^(1-k); 0, 1),     pi = 1/T,

modulo GL_2(O_inf) Z(F_inf) on the right.  The entry u = P T^(1-k) is a finite
Laurent sum in pi whose exponents are all < k, so (k, P) is exactly the
(k, u) normal form with u running over a transversal of F_inf / pi^k O_inf.
Every element of F has a finite expansion of this kind, so the whole module
works with polynomial matrices and never truncates a series.

Edges are ordered pairs of adjacent vertices.  For a matrix g the edge of g
runs from g.v_0 to g.v_1 (Iwahori subgroup with lower-left entry in pi O_inf).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .arith import Fq, Poly, RatFn, poly_gcd
from .errors import PreconditionError


class Mat2:
    """2x2 matrix over A or F (entries all Poly or all RatFn)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, F: Fq) -> "Mat2":
        one, zero = Poly.one(F), Poly.zero(F)
        return cls(one, zero, zero, one)

    @classmethod
    def of(cls, F: Fq, a, b, c, d) -> "Mat2":
        """Build a matrix over A from ints/Polys."""

        def cv(x):
            return x if isinstance(x, Poly) else Poly.const(F, F.from_int(x))

        return cls(cv(a), cv(b), cv(c), cv(d))

    @property
    def F(self) -> Fq:
        return self.a.F

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def is_poly(self) -> bool:
        return all(isinstance(x, Poly) for x in self.entries())

    def inverse_gl2a(self) -> "Mat2":
        """Inverse of an element of GL_2(A) (determinant a nonzero constant)."""
        dt = self.det()
        if dt.deg != 0:
            raise PreconditionError("matrix is not in GL_2(A)")
        u = self.F.inv(dt.lc)
        return Mat2(*(x.scale(u) for x in self.adjugate().entries()))

    def scale(self, u: int) -> "Mat2":
        return Mat2(*(x.scale(u) for x in self.entries()))

    def __eq__(self, o) -> bool:
        return isinstance(o, Mat2) and self.entries() == o.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def __repr__(self) -> str:
        return f"Mat2({self.a}, {self.b}; {self.c}, {self.d})"


def to_poly_matrix(g: Mat2) -> Mat2:
    """Clear denominators of a matrix over F; the scalar does not change its class."""
    if g.is_poly():
        return g
    ents = [RatFn.of(x) if not isinstance(x, RatFn) else x for x in g.entries()]
    den = Poly.one(ents[0].F)
    for x in ents:
        den = den * x.den // poly_gcd(den, x.den)
    return Mat2(*((x.num * (den // x.den)) for x in ents))


@dataclass(frozen=True)
class VertexNF:
    """Vertex (pi^k, P T^(1-k); 0, 1) of the tree."""

    k: int
    P: Poly

    def __repr__(self) -> str:
        return f"V({self.k}, {self.P})"

    def sort_key(self) -> tuple:
        return (self.k, self.P.key)

    def __lt__(self, o: "VertexNF") -> bool:
        return self.sort_key() < o.sort_key()

    def matrix(self) -> Mat2:
        """A polynomial matrix in the class of this vertex."""
        F = self.P.F
        one, zero = Poly.one(F), Poly.zero(F)
        if self.k >= 0:
            return Mat2(one, self.P.shift(1), zero, Poly.monomial(F, self.k))
        return Mat2(Poly.monomial(F, -self.k), self.P.shift(1 - self.k), zero, one)

    def u(self) -> RatFn:
        """The upper-right entry P T^(1-k) as an element of F."""
        F = self.P.F
        if self.k <= 1:
            return RatFn(self.P.shift(1 - self.k), reduced=True)
        return RatFn(self.P, Poly.monomial(F, self.k - 1))


@dataclass(frozen=True)
class EdgeNF:
    origin: VertexNF
    terminus: VertexNF

    def __repr__(self) -> str:
        return f"E({self.origin} -> {self.terminus})"


def v_n(F: Fq, n: int) -> VertexNF:
    """The vertex of diag(T^n, 1); n may be negative."""
    return VertexNF(-n, Poly.zero(F))


def vertex_normal_form(g: Mat2) -> VertexNF:
    """Canonical (k, P) for the class g GL_2(O_inf) Z(F_inf)."""
    g = to_poly_matrix(g)
    a, b, c, d = g.entries()
    det = a * d - b * c
    if not det:
        raise PreconditionError("singular matrix has no vertex")
    # pivot column: bottom entry of largest degree (column 2 on ties)
    if c.deg > d.deg:
        top, bot = a, c
    else:
        top, bot = b, d
    k = 2 * bot.deg - det.deg
    if k >= 1:
        P = top.shift(k - 1) // bot
    else:
        P = top // bot.shift(1 - k)
    return VertexNF(k, P)


def neighbors(v: VertexNF) -> list[VertexNF]:
    """The q+1 neighbours: one towards k-1, q towards k+1."""
    F = v.P.F
    T = Poly.T(F)
    out = [VertexNF(v.k - 1, v.P // T)]
    base = v.P.shift(1)
    for c in F.elements():
        out.append(VertexNF(v.k + 1, base + Poly.const(F, c)))
    return out


def are_adjacent(v: VertexNF, w: VertexNF) -> bool:
    return w in neighbors(v)


def edge_reverse(e: EdgeNF) -> EdgeNF:
    return EdgeNF(e.terminus, e.origin)


def edge_from_matrix(g: Mat2) -> EdgeNF:
    """Edge of the Iwahori coset of g: from g.v_0 to g.v_1."""
    F = g.F if g.is_poly() else RatFn.of(g.a).F
    g = to_poly_matrix(g)
    T = Poly.T(F)
    one, zero = Poly.one(F), Poly.zero(F)
    return EdgeNF(vertex_normal_form(g), vertex_normal_form(g * Mat2(T, zero, zero, one)))


def apply_matrix(g: Mat2, x: Union[VertexNF, EdgeNF]):
    g = to_poly_matrix(g)
    if isinstance(x, VertexNF):
        return vertex_normal_form(g * x.matrix())
    return EdgeNF(apply_matrix(g, x.origin), apply_matrix(g, x.terminus))


def lattice_contains(big: VertexNF, small: VertexNF) -> bool:
    """Adjacency oracle: some scaling of the lattice of `small` sits inside the
    lattice of `big` with index exactly q.

    With M_big, M_small polynomial matrices, that holds iff for some integer s
    the matrix T^s M_big^-1 M_small is integral at infinity with determinant of
    valuation 1.
    """
    Mb, Ms = big.matrix(), small.matrix()
    X = Mb.adjugate() * Ms  # = det(Mb) * Mb^-1 Ms
    dMb = Mb.det()
    # entries of Mb^-1 Ms are X_ij / dMb; valuations at infinity
    vals = [dMb.deg - x.deg for x in X.entries() if x]
    if not vals:
        return False
    det_val = 2 * dMb.deg - X.det().deg  # valuation of det(Mb^-1 Ms)
    # scaling by pi^s adds s to entry valuations and 2s to det valuation
    for s in range(-det_val - 2, -det_val + 3):
        if min(vals) + s >= 0 and det_val + 2 * s == 1:
            return True
    return False


def bfs_ball(center: VertexNF, radius: int) -> dict:
    """Map vertex -> distance for the ball of given radius (tree check helper)."""
    dist = {center: 0}
    frontier = [center]
    for r in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for w in neighbors(v):
                if w not in dist:
                    dist[w] = r
                    nxt.append(w)
        frontier = nxt
    return dist


def iter_path_vertices(F: Fq, lo: int, hi: int) -> Iterator[VertexNF]:
    for n in range(lo, hi + 1):
        yield v_n(F, n)
