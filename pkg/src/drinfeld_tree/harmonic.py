"""Harmonic cochains on Gamma_0(n) \\ T, modular symbols and Hecke operators.

A cochain is stored by its integer value on every built canonical edge
(level l -> l + 1); the reversed edge carries the negated value.  Values are
the tree values, i.e. weighted by |Gamma_f| / z for a path count i(f).  Past
the top built level every half-line is a chain of stable orbits whose
stabilizer grows by a factor q per level, so a harmonic cochain there is
determined by its normalized value i(f) = c(f) z / |Gamma_f|, which is constant.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import Poly, RatFn, poly_gcd, polys_of_degree_less
from .errors import InvariantError, PreconditionError, check
from .ideals import IdealA, ProjPoint, normalize_point
from .intlin import (flatten, hnf, identity, in_lattice, mat_mul, saturate,
                     smith_diagonal, solve_in_lattice, unflatten)
from .quotient import QuotientGraph, classify_edge_label, edge_lift
from .tree import EdgeNF, Mat2, apply_matrix, v_n


# ---------------------------------------------------------------- cochains


class Cochain:
    """Integer harmonic-cochain candidate on a quotient graph."""

    __slots__ = ("graph", "values")

    def __init__(self, graph: QuotientGraph, values: Sequence[int]):
        self.graph = graph
        self.values = tuple(values)
        check(len(self.values) == len(graph.edges), "cochain-length")

    @classmethod
    def zero(cls, graph: QuotientGraph) -> "Cochain":
        return cls(graph, [0] * len(graph.edges))

    def value(self, eid: int, sign: int = 1) -> int:
        return sign * self.values[eid]

    def evaluate(self, level: int, pt: ProjPoint, sign: int) -> int:
        """Value on the directed edge (level, pt) in orientation sign, any level."""
        G = self.graph
        top = G.top_level
        if level < top:
            return sign * self.values[G.edge_id(level, pt)]
        # stable region: same orbit as at top - 1, stabilizer grows by q per level
        base = self.values[G.edge_id(top - 1, pt)]
        return sign * base * G.q ** (level - top + 1)

    def normalized(self, eid: int) -> Fraction:
        e = self.graph.edges[eid]
        return Fraction(self.values[eid] * self.graph.z_order, e.stab_order)

    def tails(self) -> list[dict]:
        out = []
        G = self.graph
        for h in G.half_lines:
            # outward orientation: from h.vertices[i] to h.vertices[i + 1]
            seq = [self.normalized(eid) * (1 if G.edges[eid].origin == h.vertices[i] else -1)
                   for i, eid in enumerate(h.edges)]
            const = seq[-1] if seq else Fraction(0)
            k = len(seq)
            while k > 0 and seq[k - 1] == const:
                k -= 1
            out.append({"exceptional": seq[:k], "constant": const})
        return out

    def finite_values(self) -> dict:
        return {eid: self.values[eid] for eid in self.graph.finite_edges}

    def is_cuspidal(self) -> bool:
        return all(t["constant"] == 0 for t in self.tails())

    def is_zero(self) -> bool:
        return not any(self.values)

    def __add__(self, o: "Cochain") -> "Cochain":
        return Cochain(self.graph, [x + y for x, y in zip(self.values, o.values)])

    def __sub__(self, o: "Cochain") -> "Cochain":
        return Cochain(self.graph, [x - y for x, y in zip(self.values, o.values)])

    def __neg__(self) -> "Cochain":
        return Cochain(self.graph, [-x for x in self.values])

    def __mul__(self, k: int) -> "Cochain":
        return Cochain(self.graph, [k * x for x in self.values])

    __rmul__ = __mul__

    def exact_div(self, k: int) -> "Cochain":
        if any(x % k for x in self.values):
            raise InvariantError("divisible-by-q-1", f"cochain not divisible by {k}")
        return Cochain(self.graph, [x // k for x in self.values])

    def __eq__(self, o) -> bool:
        return isinstance(o, Cochain) and o.graph is self.graph and o.values == self.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"Cochain({dict((i, v) for i, v in enumerate(self.values) if v)})"

    def to_json_obj(self) -> dict:
        def num(x: Fraction):
            return int(x) if x.denominator == 1 else str(x)

        return {
            "finite": {str(k): v for k, v in self.finite_values().items()},
            "tails": [{"exceptional": [num(x) for x in t["exceptional"]], "constant": num(t["constant"])}
                      for t in self.tails()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def is_harmonic(c: Cochain) -> bool:
    """Weighted harmonicity at every built vertex (the top ones include the edge above)."""
    G = c.graph
    for v in G.vertices:
        tot = 0
        for eid, sgn in G.out_edges[v.id]:
            tot += (v.stab_order // G.edges[eid].stab_order) * sgn * c.values[eid]
        if v.top:
            tot += c.evaluate(v.level, v.orbit_rep, 1)
        if tot:
            return False
    return True


def from_path_counts(graph: QuotientGraph, counts: dict) -> Cochain:
    """j_Gamma: path counts i(f) on canonical edges -> tree values |Gamma_f| i / z."""
    vals = [0] * len(graph.edges)
    for eid, i in counts.items():
        vals[eid] = graph.edges[eid].stab_order // graph.z_order * i
    return Cochain(graph, vals)


# ---------------------------------------------------------------- H_1 basis


@dataclass
class H1Basis:
    graph: QuotientGraph
    chords: list  # chord edge id per basis element
    cochains: list

    def __len__(self) -> int:
        return len(self.cochains)

    def coordinates(self, c: Cochain) -> list[int]:
        """Integer coordinates of a cuspidal cochain; verified by reconstruction."""
        G = self.graph
        xs = []
        for eid in self.chords:
            val = Fraction(c.values[eid] * G.z_order, G.edges[eid].stab_order)
            if val.denominator != 1:
                raise InvariantError("h1-integral", f"non-integral coordinate on edge {eid}")
            xs.append(int(val))
        back = Cochain.zero(G)
        for x, b in zip(xs, self.cochains):
            back = back + b * x
        if back != c:
            raise InvariantError("h1-span", "cochain is not in the span of the H1 basis")
        return xs

    def combine(self, xs: Sequence[int]) -> Cochain:
        out = Cochain.zero(self.graph)
        for x, b in zip(xs, self.cochains):
            out = out + b * x
        return out


def h1_basis(graph: QuotientGraph) -> H1Basis:
    """Fundamental cycles of a spanning tree of the finite part, pushed to cochains."""
    return _h1_basis_cached(graph)


@functools.lru_cache(maxsize=64)
def _h1_basis_cached(graph: QuotientGraph) -> H1Basis:
    fv, fe = graph.finite_part()
    fvs = set(fv)
    adj: dict[int, list] = {v: [] for v in fv}
    for eid in fe:
        e = graph.edges[eid]
        adj[e.origin].append((eid, e.terminus, 1))
        adj[e.terminus].append((eid, e.origin, -1))
    # BFS spanning tree from the smallest vertex
    root = min(fv)
    parent: dict[int, tuple] = {root: None}
    order = [root]
    for x in order:
        for eid, y, sgn in sorted(adj[x]):
            if y not in parent:
                parent[y] = (eid, x, sgn)  # edge eid traversed x -> y in direction sgn
                order.append(y)
    check(len(parent) == len(fvs), "finite-part-connected")
    tree_edges = {p[0] for p in parent.values() if p is not None}
    chords = [eid for eid in fe if eid not in tree_edges]

    def path_to_root(x: int) -> list:
        out = []
        while parent[x] is not None:
            eid, px, sgn = parent[x]
            out.append((eid, -sgn))  # walking x -> px reverses the tree direction
            x = px
        return out

    cochains = []
    for ch in chords:
        e = graph.edges[ch]
        counts: dict[int, int] = {ch: 1}
        # cycle: origin --ch--> terminus --tree--> root --tree--> origin
        for eid, s in path_to_root(e.terminus):
            counts[eid] = counts.get(eid, 0) + s
        for eid, s in path_to_root(e.origin):
            counts[eid] = counts.get(eid, 0) - s
        c = from_path_counts(graph, {k: v for k, v in counts.items() if v})
        check(is_harmonic(c), "h1-basis-harmonic", f"chord {ch}")
        check(c.is_cuspidal(), "h1-basis-cuspidal", f"chord {ch}")
        cochains.append(c)
    check(len(chords) == graph.betti, "betti-chords", f"{len(chords)} vs {graph.betti}")
    return H1Basis(graph, chords, cochains)


# ---------------------------------------------------------------- modular symbols


@dataclass(frozen=True)
class CuspPoint:
    """A point num/den of P^1(F), gcd 1, den monic; infinity is (1, 0)."""

    num: Poly
    den: Poly

    @classmethod
    def of(cls, num: Poly, den: Poly) -> "CuspPoint":
        if not num and not den:
            raise PreconditionError("(0:0) is not a point of P^1")
        F = num.F if num else den.F
        if not den:
            return cls(Poly.one(F), Poly.zero(F))
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        u = F.inv(den.lc)
        return cls(num.scale(u), den.scale(u))

    @classmethod
    def infinity(cls, F) -> "CuspPoint":
        return cls(Poly.one(F), Poly.zero(F))

    @property
    def is_infinity(self) -> bool:
        return not self.den

    def __str__(self) -> str:
        from .parse import format_ratfn

        if self.is_infinity:
            return "inf"
        return format_ratfn(RatFn(self.num, self.den, reduced=True))


def parse_cusp(text: str, q: int) -> CuspPoint:
    from .arith import field
    from .parse import parse_ratfn

    F = field(q)
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return CuspPoint.infinity(F)
    x = parse_ratfn(text, q)
    return CuspPoint.of(x.num, x.den)


def _symbol_of_matrix(graph: QuotientGraph, g: Mat2, counts: list, tail_sign: int = 1) -> None:
    """Add the path counts of the arch from g.0 to g.inf (g in GL_2(A))."""
    F = graph.F
    s = Mat2(Poly.zero(F), Poly.one(F), Poly.one(F), Poly.zero(F))
    n = graph.n.gen
    p_plus = _pt(g, n)
    p_minus = _pt(g * s, n)
    for lvl in range(graph.top_level):
        counts[graph.edge_id(lvl, p_plus)] += tail_sign
        counts[graph.edge_id(lvl, p_minus)] -= tail_sign


def _pt(g: Mat2, n: Poly) -> ProjPoint:
    if n.deg == 0:
        return ProjPoint(Poly.zero(n.F), Poly.one(n.F))
    return normalize_point(g.c, g.d, n)


def _convergent_matrices(x: CuspPoint) -> list[Mat2]:
    """g_i = (p_i, p_(i-1); q_i, q_(i-1)) for the continued fraction of x."""
    F = x.num.F
    one, zero = Poly.one(F), Poly.zero(F)
    p_prev, q_prev = one, zero  # p_-1 / q_-1 = infinity
    p_pp, q_pp = zero, one
    u, w = x.num, x.den
    out = []
    while w:
        a, r = divmod(u, w)
        p, qq = a * p_prev + p_pp, a * q_prev + q_pp
        out.append(Mat2(p, p_prev, qq, q_prev))
        p_pp, q_pp, p_prev, q_prev = p_prev, q_prev, p, qq
        u, w = w, r
    return out


def _symbol_counts_from_inf(graph: QuotientGraph, x: CuspPoint) -> list:
    counts = [0] * len(graph.edges)
    for g in _convergent_matrices(x):
        check(g.det().deg == 0, "convergent-det-unit")
        _symbol_of_matrix(graph, g, counts)
    return counts


def modular_symbol(a: CuspPoint, b: CuspPoint, graph: QuotientGraph) -> Cochain:
    """[a, b]: the weighted quotient image of the arch running from a to b."""
    if a == b:
        raise PreconditionError("modular symbol needs distinct endpoints")
    cb = _symbol_counts_from_inf(graph, b)
    ca = _symbol_counts_from_inf(graph, a)
    return from_path_counts(graph, {i: x - y for i, (x, y) in enumerate(zip(cb, ca)) if x != y})


def symbol_zero_infinity(graph: QuotientGraph) -> Cochain:
    F = graph.F
    return modular_symbol(CuspPoint.of(Poly.zero(F), Poly.one(F)), CuspPoint.infinity(F), graph)


def arch_counts_direct(a: CuspPoint, b: CuspPoint, graph: QuotientGraph, window: int) -> dict:
    """Oracle: classify the tree edges of the arch a -> b one by one.

    The arch is g0 applied to the path v_n -> v_(n+1), with g0 = (b, a) as
    columns; only edges with |n| <= window are visited.
    """
    F = graph.F
    g0 = Mat2(b.num, a.num, b.den, a.den)
    counts: dict[int, int] = {}
    for k in range(-window, window):
        e = EdgeNF(apply_matrix(g0, v_n(F, k)), apply_matrix(g0, v_n(F, k + 1)))
        lvl, pt, sgn = classify_edge_label(e, graph.n.gen)
        if lvl >= graph.top_level:
            continue
        eid = graph.edge_id(lvl, pt)
        counts[eid] = counts.get(eid, 0) + sgn
    return counts


# ---------------------------------------------------------------- Hecke operators


def hecke_coset_reps(qq: IdealA, n: IdealA) -> list[Mat2]:
    if qq.deg <= 0:
        raise PreconditionError("Hecke operator needs a proper prime ideal")
    if not qq.is_prime:
        raise PreconditionError(f"{qq.gen} is not prime")
    if n.deg > 0 and not (n.gen % qq.gen):
        raise PreconditionError(f"{qq.gen} divides the level {n.gen}")
    F = qq.F
    r = qq.gen
    one, zero = Poly.one(F), Poly.zero(F)
    reps = [Mat2(r, zero, zero, one)]
    for b in polys_of_degree_less(F, r.deg):
        reps.append(Mat2(one, b, zero, r))
    return reps


def in_hecke_set(h: Mat2, qq: IdealA, n: IdealA) -> bool:
    """Membership in H(q, n): det generates q, c in n, (d) + n = A."""
    det = h.det()
    if det.deg != qq.deg or (det % qq.gen):
        return False
    if n.deg > 0 and (h.c % n.gen):
        return False
    return n.deg <= 0 or poly_gcd(h.d, n.gen).is_one()


@functools.lru_cache(maxsize=None)
def _hecke_targets(graph: QuotientGraph, qgen: Poly) -> tuple:
    """For each built edge: the labels (level, point, sign) of h . lift(edge)."""
    reps = hecke_coset_reps(IdealA(qgen), graph.n)
    n = graph.n.gen
    out = []
    for eid in range(len(graph.edges)):
        e = edge_lift(graph, eid)
        out.append(tuple(classify_edge_label(apply_matrix(h, e), n) for h in reps))
    return tuple(out)


def hecke_apply(qq: IdealA, c: Cochain) -> Cochain:
    G = c.graph
    targets = _hecke_targets(G, qq.gen)
    vals = [sum(c.evaluate(lvl, pt, sgn) for lvl, pt, sgn in targets[eid]) for eid in range(len(G.edges))]
    return Cochain(G, vals)


@dataclass
class HeckeMatrix:
    prime: IdealA
    matrix: list  # column j holds the coordinates of T(basis_j)

    def to_csv(self) -> str:
        return "".join(",".join(str(x) for x in row) + "\n" for row in self.matrix)


def hecke_matrix(qq: IdealA, graph: QuotientGraph) -> HeckeMatrix:
    return HeckeMatrix(qq, [list(r) for r in _hecke_matrix_cached(graph, qq.gen)])


@functools.lru_cache(maxsize=None)
def _hecke_matrix_cached(graph: QuotientGraph, qgen: Poly) -> tuple:
    qq = IdealA(qgen)
    B = h1_basis(graph)
    if len(B) == 0:
        raise PreconditionError("the quotient graph has first Betti number 0")
    cols = []
    for b in B.cochains:
        img = hecke_apply(qq, b)
        check(is_harmonic(img), "hecke-harmonic")
        check(img.is_cuspidal(), "hecke-cuspidal")
        cols.append(B.coordinates(img))
    return tuple(tuple(r) for r in zip(*cols))


def winding_image(qq: IdealA, graph: QuotientGraph) -> Cochain:
    """(T_q - q^deg q - 1)[0, inf] / (q - 1)."""
    s = symbol_zero_infinity(graph)
    eta = hecke_apply(qq, s) - s * (graph.q ** qq.deg + 1)
    w = eta.exact_div(graph.q - 1)
    check(w.is_cuspidal(), "winding-cuspidal")
    return w


def cusp_symbol_sum(qq: IdealA, graph: QuotientGraph) -> Cochain:
    """Sum of [0, a/r] over nonzero a of degree < deg r."""
    F = graph.F
    zero = CuspPoint.of(Poly.zero(F), Poly.one(F))
    out = Cochain.zero(graph)
    for a in polys_of_degree_less(F, qq.deg):
        if a:
            out = out + modular_symbol(zero, CuspPoint.of(a, qq.gen), graph)
    return out


def primes_coprime(graph: QuotientGraph, max_deg: int) -> list[IdealA]:
    from .ideals import primes_of_degree

    out = []
    for d in range(1, max_deg + 1):
        for p in primes_of_degree(graph.q, d):
            if graph.n.deg <= 0 or (graph.n.gen % p):
                out.append(IdealA(p))
    return out


# ---------------------------------------------------------------- Ramanujan bound


def ramanujan_bound_holds(M: Sequence[Sequence[int]], q: int, d: int) -> bool:
    """All eigenvalues real with |theta| <= 2 q^(d/2), certified by Sturm counting.

    With P the characteristic polynomial, S(z) = P(sqrt z) P(-sqrt z) has the
    squares of the eigenvalues as roots; the claim is that every root of S is
    real and lies in [0, 4 q^d].
    """
    import sympy

    x, z = sympy.symbols("x z")
    P = sympy.Matrix(M).charpoly(x).as_expr()
    S = sympy.Poly(sympy.expand(P.subs(x, sympy.sqrt(z)) * P.subs(x, -sympy.sqrt(z))), z)
    S = sympy.Poly(sympy.sqf_part(S.as_expr()), z)
    if S.degree() <= 0:
        return True
    return S.count_roots(0, 4 * q**d) == S.degree()


# ---------------------------------------------------------------- Hecke algebra


@dataclass
class HeckeAlgebra:
    level: IdealA
    dim: int
    primes: list
    generators: dict  # prime gen -> matrix
    basis: list  # HNF basis of flattened matrices
    stabilized: bool = True

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrices(self) -> list:
        return [unflatten(b, self.dim) for b in self.basis]


def hecke_algebra(graph: QuotientGraph, degree_bound: int, max_rounds: int = 64) -> HeckeAlgebra:
    primes = primes_coprime(graph, degree_bound)
    B = h1_basis(graph)
    b = len(B)
    if b == 0:
        raise PreconditionError("the quotient graph has first Betti number 0")
    gens = {p.gen: hecke_matrix(p, graph).matrix for p in primes}
    rows = [flatten(identity(b))] + [flatten(m) for m in gens.values()]
    basis = hnf(rows)
    stabilized = False
    for _ in range(max_rounds):
        new = list(basis)
        for v in basis:
            Mv = unflatten(v, b)
            for m in gens.values():
                new.append(flatten(mat_mul(Mv, m)))
        nb = hnf(new)
        if nb == basis:
            stabilized = True
            break
        basis = nb
    return HeckeAlgebra(graph.n, b, primes, gens, basis, stabilized)


@dataclass
class EisensteinReport:
    index: int | None  # None means infinite
    cyclic: bool
    algebra_rank: int
    ideal_rank: int
    invariant_factors: list
    stable: bool | None = None
    degree_bound: int = 0
    notes: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "index": self.index if self.index is not None else "infinite",
            "cyclic": self.cyclic,
            "algebra_rank": self.algebra_rank,
            "ideal_rank": self.ideal_rank,
            "invariant_factors": self.invariant_factors,
            "stable_under_bound_plus_one": self.stable,
            "degree_bound": self.degree_bound,
            "notes": self.notes,
        }


def _eisenstein_core(graph: QuotientGraph, degree_bound: int) -> EisensteinReport:
    alg = hecke_algebra(graph, degree_bound)
    b = alg.dim
    q = graph.q
    ideal_rows = []
    for pg, m in alg.generators.items():
        eta = [[m[i][j] - (q ** pg.deg + 1 if i == j else 0) for j in range(b)] for i in range(b)]
        for v in alg.basis:
            ideal_rows.append(flatten(mat_mul(unflatten(v, b), eta)))
    ideal = hnf(ideal_rows)
    coords = []
    for r in ideal:
        c = solve_in_lattice(r, alg.basis)
        check(c is not None, "eisenstein-ideal-in-algebra")
        coords.append(c)
    diag = smith_diagonal(coords) if coords else []
    full = len(diag) == alg.rank
    index = 1
    for d in diag:
        index *= d
    cyclic = hnf(ideal + [flatten(identity(b))]) == alg.basis
    notes = [] if alg.stabilized else ["algebra basis did not stabilize"]
    return EisensteinReport(index if full else None, cyclic, alg.rank, len(ideal), diag,
                            degree_bound=degree_bound, notes=notes)


def eisenstein_index(graph: QuotientGraph, degree_bound: int | None = None,
                     check_stability: bool = True) -> EisensteinReport:
    if degree_bound is None:
        degree_bound = graph.n.deg + 1
    if degree_bound < 1:
        raise PreconditionError("degree bound must be positive")
    rep = _eisenstein_core(graph, degree_bound)
    if check_stability:
        nxt = _eisenstein_core(graph, degree_bound + 1)
        rep.stable = (nxt.index == rep.index and nxt.algebra_rank == rep.algebra_rank
                      and nxt.cyclic == rep.cyclic)
    return rep


# ---------------------------------------------------------------- Lambda lattice


@dataclass
class LambdaLattice:
    basis: list  # HNF rows in H1 coordinates
    primes: list
    stabilized: bool

    @property
    def rank(self) -> int:
        return len(self.basis)


def lambda_lattice(graph: QuotientGraph, primes: Sequence[IdealA], algebra_bound: int | None = None) -> LambdaLattice:
    """Saturated span of the winding images and their Hecke translates."""
    if not primes:
        raise PreconditionError("empty prime list")
    B = h1_basis(graph)
    if len(B) == 0:
        raise PreconditionError("the quotient graph has first Betti number 0")
    alg = hecke_algebra(graph, algebra_bound or max(p.deg for p in primes))
    vecs = []
    for p in primes:
        w = B.coordinates(winding_image(p, graph))
        for M in alg.matrices():
            vecs.append([sum(M[i][j] * w[j] for j in range(len(w))) for i in range(len(w))])
    sat = saturate(vecs)
    return LambdaLattice(sat, list(primes), alg.stabilized)


def lattice_invariant(basis: Sequence[Sequence[int]], M: Sequence[Sequence[int]]) -> bool:
    """Is the row lattice (coordinate vectors) stable under x -> M x?"""
    for v in basis:
        img = [sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
        if not in_lattice(img, basis):
            return False
    return True


# ---------------------------------------------------------------- formal immersion witness


def formal_immersion_witness(graph: QuotientGraph) -> bool:
    """[0, 1/T] mod 2 vanishes on exactly one directed edge with origin u_(-1)."""
    if graph.q != 2 or not graph.n.is_prime or graph.n.deg < 3:
        raise PreconditionError("witness needs q = 2 and a prime level of degree >= 3")
    F = graph.F
    c = modular_symbol(CuspPoint.of(Poly.zero(F), Poly.one(F)),
                       CuspPoint.of(Poly.one(F), Poly.T(F)), graph)
    u = graph.tagged("u-1")
    even = [eid for eid, sgn in graph.out_edges[u] if c.value(eid, sgn) % 2 == 0]
    return len(even) == 1
