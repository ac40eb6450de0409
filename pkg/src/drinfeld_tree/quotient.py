"""Quotient graphs Gamma_0(n) \\ T.

Vertices of the tree have the fundamental domain v_0, v_1, ... for GL_2(A);
G_l is the stabilizer of v_l in GL_2(A).  A vertex gamma.v_l of the tree is
Gamma_0(n)-equivalent to gamma'.v_l exactly when the bottom rows of gamma and
gamma' give points of P^1(A/n) in the same right G_l-orbit.  So the quotient
has one vertex per (level l, G_l-orbit) and one edge between levels l and l+1
per orbit of G_l intersected with G_(l+1): B(F_q) for l = 0 and G_l for l >= 1.

All levels at or above S = max(1, deg n - 1) have identical orbit partitions,
so the graph is determined by a finite window of levels; each stable orbit is a
cusp and spans one half-line.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Sequence

from .arith import Fq, Poly, poly_xgcd, polys_of_degree_less
from .errors import InvariantError, PreconditionError, check
from .ideals import IdealA, ProjPoint, normalize_point, proj_points
from .tree import EdgeNF, Mat2, VertexNF, apply_matrix, v_n


# ---------------------------------------------------------------- GL_2(A) reduction


@dataclass(frozen=True)
class GammaCoset:
    level: int
    point: ProjPoint


def gl2a_reduce_matrix(v: VertexNF) -> tuple[int, Mat2]:
    """(l, gamma) with gamma in GL_2(A) and gamma . v_l = v."""
    F = v.P.F
    one, zero = Poly.one(F), Poly.zero(F)
    a, b, c, d = one, zero, zero, one
    k, P = v.k, v.P
    while True:
        if k <= 0:
            # (T^-k, P T^(1-k); 0, 1) = (1, P T^(1-k); 0, 1) diag(T^-k, 1)
            X = P.shift(1 - k)
            return -k, Mat2(a, a * X + b, c, c * X + d)
        Q, R = divmod(P, Poly.monomial(F, k - 1))
        # gamma <- gamma (1, Q; 0, 1) (0, 1; 1, 0)
        a, b, c, d = a * Q + b, a, c * Q + d, c
        if not R:
            return k, Mat2(a, b, c, d)
        # s (1,-Q;0,1) v is the class of (0, T^k; 1, R T); its k strictly drops
        top, bot = Poly.monomial(F, k), R.shift(1)
        k = 2 * bot.deg - k
        P = top.shift(k - 1) // bot if k >= 1 else top // bot.shift(1 - k)


def point_of(gamma: Mat2, n: Poly) -> ProjPoint:
    return normalize_point(gamma.c, gamma.d, n)


def gl2a_reduce(v: VertexNF, n: IdealA) -> tuple[int, Mat2, GammaCoset]:
    level, gamma = gl2a_reduce_matrix(v)
    return level, gamma, GammaCoset(level, _point(gamma, n.gen))


def _point(gamma: Mat2, n: Poly) -> ProjPoint:
    if n.deg == 0:
        return ProjPoint(Poly.zero(n.F), Poly.one(n.F))
    return normalize_point(gamma.c, gamma.d, n)


def lift_point(pt: ProjPoint, n: Poly) -> Mat2:
    """gamma in GL_2(A) (det 1) whose bottom row reduces to pt."""
    F = n.F
    c, d = pt.c, pt.d
    if n.deg == 0:
        return Mat2.identity(F)
    for t in polys_of_degree_less(F, n.deg + 2):
        d2 = d + t * n
        g, x, y = poly_xgcd(c, d2)
        if g.is_one():
            # x c + y d2 = 1  ->  (y, -x; c, d2) has det y d2 + x c = 1
            return Mat2(y, -x, c, d2)
        if not c and d2.deg == 0 and d2:
            return Mat2(Poly.const(F, F.inv(d2.lc)), Poly.zero(F), Poly.zero(F), d2)
    raise InvariantError("lift-point", f"no coprime lift of {pt} mod {n}")


# ---------------------------------------------------------------- group actions on P^1(A/n)


def group_order(q: int, level: int) -> int:
    if level == 0:
        return (q * q - 1) * (q * q - q)
    return (q - 1) ** 2 * q ** (level + 1)


def edge_group_order(q: int, level: int) -> int:
    """|G_l intersected with G_(l+1)|."""
    if level == 0:
        return (q - 1) ** 2 * q
    return group_order(q, level)


def vertex_group_generators(F: Fq, level: int) -> list[Mat2]:
    """Generators of G_l."""
    one, zero = Poly.one(F), Poly.zero(F)
    z = Poly.const(F, F.gen)
    gens = [Mat2(z, zero, zero, one)]
    if level == 0:
        gens += [Mat2(one, one, zero, one), Mat2(zero, one, one, zero)]
        return gens
    gens.append(Mat2(one, zero, zero, z))
    for i in range(level + 1):
        gens.append(Mat2(one, Poly.monomial(F, i), zero, one))
    return gens


def edge_group_generators(F: Fq, level: int) -> list[Mat2]:
    """Generators of G_l intersected with G_(l+1)."""
    if level >= 1:
        return vertex_group_generators(F, level)
    one, zero = Poly.one(F), Poly.zero(F)
    z = Poly.const(F, F.gen)
    return [Mat2(z, zero, zero, one), Mat2(one, zero, zero, z), Mat2(one, one, zero, one)]


def enumerate_group(gens: Sequence[Mat2]) -> set:
    """Closure of a finite set of matrices in GL_2(A) (test oracle)."""
    F = gens[0].F
    seen = {Mat2.identity(F)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                x = g * h
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return seen


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class CosetSpace:
    """P^1(A/n) with indexed points; n = (1) gives the one-point space."""

    def __init__(self, n: IdealA):
        self.n = n
        self.F = n.F
        if n.deg == 0:
            self.points = [ProjPoint(Poly.zero(self.F), Poly.one(self.F))]
        else:
            self.points = proj_points(n)
        self.index = {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def act(self, i: int, g: Mat2) -> int:
        """Right action (c:d) . g."""
        if self.n.deg == 0:
            return 0
        p = self.points[i]
        c = p.c * g.a + p.d * g.c
        d = p.c * g.b + p.d * g.d
        return self.index[normalize_point(c, d, self.n.gen)]

    def locate(self, pt: ProjPoint) -> int:
        return self.index[pt]

    def orbits(self, gens: Sequence[Mat2]) -> list[list[int]]:
        dsu = _DSU(len(self.points))
        for g in gens:
            for i in range(len(self.points)):
                dsu.union(i, self.act(i, g))
        groups: dict[int, list[int]] = {}
        for i in range(len(self.points)):
            groups.setdefault(dsu.find(i), []).append(i)
        # point order is sorted, so the least index is the canonical minimum
        return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def orbit_partition(level: int, n: IdealA) -> list[list[ProjPoint]]:
    cs = CosetSpace(n)
    return [[cs.points[i] for i in orb] for orb in cs.orbits(vertex_group_generators(n.F, level))]


def stable_level(n: IdealA) -> int:
    return max(1, n.deg - 1)


# ---------------------------------------------------------------- graph


@dataclass
class QVertex:
    id: int
    level: int
    orbit_rep: ProjPoint
    orbit_size: int
    stab_order: int
    tags: list = field(default_factory=list)
    is_cuspidal: bool = False
    top: bool = False  # top built level: one more edge continues upward


@dataclass
class QEdge:
    id: int
    level: int  # joins level and level + 1
    orbit_rep: ProjPoint
    orbit_size: int
    stab_order: int
    origin: int
    terminus: int
    is_cuspidal: bool = False


@dataclass
class HalfLine:
    cusp_rep: ProjPoint
    junction: int
    vertices: list  # junction first, then cuspidal vertices upwards
    edges: list  # canonical edge ids, outward order


class QuotientGraph:
    """Finite window of Gamma_0(n) \\ T with half-line descriptors.

    Directed edges are (id, sign) pairs: sign +1 is the canonical orientation
    from level l to level l + 1.
    """

    def __init__(self, n: IdealA, extra_depth: int = 2):
        self.n = n
        self.F = n.F
        self.q = n.F.q
        self.z_order = self.q - 1
        self.extra_depth = extra_depth
        self.space = CosetSpace(n)
        self.stable = stable_level(n) if n.deg > 0 else 1
        self.top_level = self.stable + 2 + extra_depth
        self._build()
        self._find_half_lines()
        self._tag()

    # construction
    def _build(self) -> None:
        F, cs = self.F, self.space
        self.vertices: list[QVertex] = []
        self.edges: list[QEdge] = []
        self.vertex_at: dict[tuple[int, int], int] = {}  # (level, point index) -> vertex id
        self.edge_at: dict[tuple[int, int], int] = {}
        self.vertex_orbits: list[list[list[int]]] = []
        self.edge_orbits: list[list[list[int]]] = []
        for lvl in range(self.top_level + 1):
            orbs = cs.orbits(vertex_group_generators(F, lvl))
            self.vertex_orbits.append(orbs)
            order = group_order(self.q, lvl)
            for orb in orbs:
                check(order % len(orb) == 0, "orbit-stabilizer", f"level {lvl}, orbit size {len(orb)}")
                vid = len(self.vertices)
                self.vertices.append(QVertex(vid, lvl, cs.points[orb[0]], len(orb), order // len(orb),
                                             top=(lvl == self.top_level)))
                for i in orb:
                    self.vertex_at[(lvl, i)] = vid
            check(sum(len(o) for o in orbs) == len(cs), "orbit-sizes-sum", f"level {lvl}")
        for lvl in range(self.top_level):
            orbs = cs.orbits(edge_group_generators(F, lvl))
            self.edge_orbits.append(orbs)
            order = edge_group_order(self.q, lvl)
            for orb in orbs:
                eid = len(self.edges)
                o = self.vertex_at[(lvl, orb[0])]
                t = self.vertex_at[(lvl + 1, orb[0])]
                check(all(self.vertex_at[(lvl, i)] == o and self.vertex_at[(lvl + 1, i)] == t for i in orb),
                      "edge-incidence", f"level {lvl}")
                self.edges.append(QEdge(eid, lvl, cs.points[orb[0]], len(orb), order // len(orb), o, t))
                for i in orb:
                    self.edge_at[(lvl, i)] = eid
        self.out_edges: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for e in self.edges:
            self.out_edges[e.origin].append((e.id, 1))
            self.out_edges[e.terminus].append((e.id, -1))
        for e in self.edges:
            check(self.vertices[e.origin].stab_order % e.stab_order == 0
                  and self.vertices[e.terminus].stab_order % e.stab_order == 0,
                  "edge-stab-divides", f"edge {e.id}")

    def degree(self, vid: int) -> int:
        """Number of directed quotient edges with origin vid (continuing edge counted at the top)."""
        return len(self.out_edges[vid]) + (1 if self.vertices[vid].top else 0)

    def neighbor_ids(self, vid: int) -> list[int]:
        out = []
        for eid, sgn in self.out_edges[vid]:
            e = self.edges[eid]
            out.append(e.terminus if sgn == 1 else e.origin)
        return out

    def weighted_degree(self, vid: int) -> int:
        """Sum over edges at vid of |Gamma_x| / |Gamma_f|; must equal q + 1."""
        v = self.vertices[vid]
        tot = 0
        for eid, _ in self.out_edges[vid]:
            tot += v.stab_order // self.edges[eid].stab_order
        if v.top:
            # the edge group above a stable level is G_l itself
            tot += 1
        return tot

    def _find_half_lines(self) -> None:
        """Walk down from each top vertex through degree-2 vertices.

        The walk stops at the first vertex of degree != 2.  When the quotient is
        a bare line (n = (T) for instance) it also stops where continuing would
        climb straight into another cusp, so the two rays split at the bottom.
        """
        self.half_lines: list[HalfLine] = []
        for v in self.vertices:
            if v.level != self.top_level:
                continue
            verts, edges = [v.id], []
            cur = v.id
            while self.degree(cur) == 2:
                step = [(eid, sgn) for eid, sgn in self.out_edges[cur] if eid not in edges]
                if len(step) != 1:
                    break
                eid, sgn = step[0]
                e = self.edges[eid]
                nxt = e.origin if sgn == -1 else e.terminus
                if sgn == 1 and self._climbs_to_top(nxt, cur):
                    break
                edges.append(eid)
                verts.append(nxt)
                cur = nxt
            verts.reverse()
            edges.reverse()
            self.half_lines.append(HalfLine(v.orbit_rep, cur, verts, edges))
        self.half_lines.sort(key=lambda h: h.cusp_rep.sort_key)
        cusp_v, cusp_e = set(), set()
        for h in self.half_lines:
            cusp_v.update(h.vertices[1:])
            cusp_e.update(h.edges)
        for x in self.vertices:
            x.is_cuspidal = x.id in cusp_v
        for e in self.edges:
            e.is_cuspidal = e.id in cusp_e
        self.finite_vertices = [x.id for x in self.vertices if not x.is_cuspidal]
        self.finite_edges = [e.id for e in self.edges if not e.is_cuspidal]

    def _climbs_to_top(self, vid: int, came_from: int) -> bool:
        prev, cur = came_from, vid
        while not self.vertices[cur].top:
            if self.degree(cur) != 2:
                return False
            nxt = [w for w in self.neighbor_ids(cur) if w != prev]
            if len(nxt) != 1 or self.vertices[nxt[0]].level < self.vertices[cur].level:
                return False
            prev, cur = cur, nxt[0]
        return True

    def _tag(self) -> None:
        cs = self.space
        F = self.F
        zero, one = Poly.zero(F), Poly.one(F)
        d = self.n.deg
        for lvl in range(self.top_level + 1):
            i = cs.locate(_norm(zero, one, self.n.gen))
            self.vertices[self.vertex_at[(lvl, i)]].tags.append(f"v{lvl}")
        if d > 0:
            j = cs.locate(_norm(one, zero, self.n.gen))
            for m in range(-1, self.top_level - d + 1):
                if m + d >= 0:
                    self.vertices[self.vertex_at[(m + d, j)]].tags.append(f"u{m}")
        self.w_vertex = None
        if self.q == 2 and self.n.is_prime and d % 2 == 0:
            t = w_element(self.n)
            vid = self.vertex_at[(0, cs.locate(_norm(one, t, self.n.gen)))]
            self.vertices[vid].tags.append("w")
            self.w_vertex = vid

    # lookups
    def tagged(self, tag: str) -> int:
        for v in self.vertices:
            if tag in v.tags:
                return v.id
        raise KeyError(tag)

    def vertex_id(self, level: int, pt: ProjPoint) -> int:
        level = self._clamp(level)
        return self.vertex_at[(level, self.space.locate(pt))]

    def edge_id(self, level: int, pt: ProjPoint) -> int:
        """Edge between level and level+1 containing pt, for level < top_level."""
        return self.edge_at[(level, self.space.locate(pt))]

    def _clamp(self, level: int) -> int:
        return level if level <= self.top_level else self.top_level

    def half_line_of_point(self, pt: ProjPoint) -> int:
        """Index of the half-line (cusp) whose stable orbit contains pt."""
        vid = self.vertex_at[(self.top_level, self.space.locate(pt))]
        for k, h in enumerate(self.half_lines):
            if h.vertices[-1] == vid:
                return k
        raise InvariantError("cusp-lookup", f"no half-line for {pt}")

    # invariants
    @property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def finite_part(self) -> tuple[list[int], list[int]]:
        return self.finite_vertices, self.finite_edges

    # serialization
    def to_json_obj(self) -> dict:
        return {
            "ideal": str(self.n.gen),
            "q": self.q,
            "vertices": [
                {"id": v.id, "level": v.level, "orbit_rep": str(v.orbit_rep), "orbit_size": v.orbit_size,
                 "stab": v.stab_order, "cuspidal": v.is_cuspidal, "tags": list(v.tags), "degree": self.degree(v.id)}
                for v in self.vertices
            ],
            "edges": [
                {"id": e.id, "level": e.level, "orbit_rep": str(e.orbit_rep), "orbit_size": e.orbit_size,
                 "stab": e.stab_order, "origin": e.origin, "terminus": e.terminus, "cuspidal": e.is_cuspidal}
                for e in self.edges
            ],
            "half_lines": [list(h.vertices) for h in self.half_lines],
            "betti": self.betti,
            "top_level": self.top_level,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = [f'graph "G0({self.n.gen})" {{']
        for v in self.vertices:
            style = ', style=dashed' if v.is_cuspidal else ''
            tag = f"\\n{','.join(v.tags)}" if v.tags else ""
            lines.append(f'  n{v.id} [label="L{v.level}:{v.orbit_rep}[stab={v.stab_order}]{tag}"{style}];')
        for e in self.edges:
            style = ' [style=dashed]' if e.is_cuspidal else ''
            lines.append(f"  n{e.origin} -- n{e.terminus}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def graph_from_json(text: str) -> dict:
    """Parse emitted JSON back into plain data (round-trip helper)."""
    return json.loads(text)


def _norm(c: Poly, d: Poly, n: Poly) -> ProjPoint:
    if n.deg == 0:
        return ProjPoint(Poly.zero(n.F), Poly.one(n.F))
    return normalize_point(c, d, n)


def w_element(p: IdealA) -> Poly:
    """Least t of degree < deg p with t^2 + t + 1 = 0 mod p (q = 2, deg p even)."""
    F = p.F
    for t in polys_of_degree_less(F, p.deg):
        if not ((t * t + t + Poly.one(F)) % p.gen):
            return t
    raise PreconditionError(f"no cube root of unity mod {p.gen}")


@functools.lru_cache(maxsize=64)
def _cached_graph(gen: Poly, extra_depth: int) -> QuotientGraph:
    return QuotientGraph(IdealA(gen), extra_depth)


def build_quotient_graph(n: IdealA, extra_depth: int = 2, allow_unit: bool = False) -> QuotientGraph:
    """Gamma_0(n) \\ T; the unit ideal (GL_2(A) itself) only with allow_unit."""
    if n.deg < 0:
        raise PreconditionError("zero ideal")
    if n.deg == 0 and not allow_unit:
        raise PreconditionError("level must be a proper ideal")
    if extra_depth < 0:
        raise PreconditionError("extra_depth must be non-negative")
    return _cached_graph(n.gen, extra_depth)


def gl2a_quotient(F: Fq, extra_depth: int = 8) -> QuotientGraph:
    """The degenerate run: GL_2(A) \\ T, i.e. n = (1)."""
    return build_quotient_graph(IdealA(Poly.one(F)), extra_depth, allow_unit=True)


def stabilizer_order(x, graph: QuotientGraph) -> int:
    """|Gamma_0(n)_x| for a quotient vertex or edge (orbit-stabilizer)."""
    return x.stab_order


# ---------------------------------------------------------------- classification


def classify_vertex(v: VertexNF, graph: QuotientGraph) -> int:
    level, gamma = gl2a_reduce_matrix(v)
    return graph.vertex_id(level, _point(gamma, graph.n.gen))


def _g0_table(F: Fq) -> dict:
    """Neighbour w of v_0 at level 1 -> g in G_0 with g . v_1 = w."""
    one, zero = Poly.one(F), Poly.zero(F)
    tab = {v_n(F, 1): Mat2(one, zero, zero, one)}
    for c in F.elements():
        cc = Poly.const(F, c)
        tab[VertexNF(1, cc)] = Mat2(cc, one, one, zero)
    return tab


def classify_edge_label(e: EdgeNF, n: Poly) -> tuple[int, ProjPoint, int]:
    """(level l, point, sign): e is sign * (the edge l -> l+1 labelled by point)."""
    lo, go = gl2a_reduce_matrix(e.origin)
    lt, gt = gl2a_reduce_matrix(e.terminus)
    if lt == lo + 1:
        g1, high, sign, lvl = go, e.terminus, 1, lo
    elif lo == lt + 1:
        g1, high, sign, lvl = gt, e.origin, -1, lt
    else:
        raise InvariantError("adjacent-levels", f"levels {lo}, {lt} for {e}")
    F = n.F
    if lvl >= 1:
        # the edge group is all of G_l, so the lower endpoint fixes the label
        g = g1
    else:
        w = apply_matrix(g1.inverse_gl2a(), high)
        g = g1 * _g0_table(F)[w]
    return lvl, _point(g, n), sign


def classify_tree_edge(e: EdgeNF, graph: QuotientGraph) -> tuple[int, int]:
    """(edge id, sign); levels above the window fold onto the top stable level."""
    lvl, pt, sign = classify_edge_label(e, graph.n.gen)
    if lvl >= graph.top_level:
        lvl = graph.top_level - 1
    return graph.edge_id(lvl, pt), sign


def edge_lift(graph: QuotientGraph, eid: int) -> EdgeNF:
    """A tree edge mapping to the canonical quotient edge eid."""
    e = graph.edges[eid]
    gamma = lift_point(e.orbit_rep, graph.n.gen)
    F = graph.F
    return EdgeNF(apply_matrix(gamma, v_n(F, e.level)), apply_matrix(gamma, v_n(F, e.level + 1)))


def vertex_lift(graph: QuotientGraph, vid: int) -> VertexNF:
    v = graph.vertices[vid]
    return apply_matrix(lift_point(v.orbit_rep, graph.n.gen), v_n(graph.F, v.level))


def atkin_lehner_matrix(p: IdealA) -> Mat2:
    F = p.F
    return Mat2(Poly.zero(F), Poly.one(F), p.gen, Poly.zero(F))


@dataclass
class AtkinLehner:
    vertex_map: dict
    edge_map: dict  # eid -> (eid', sign)


def atkin_lehner(graph: QuotientGraph) -> AtkinLehner:
    """Involution induced by w_p = (0, 1; f, 0) on the window below the top level."""
    if not graph.n.is_prime:
        raise PreconditionError("Atkin-Lehner map is implemented for prime level only")
    w = atkin_lehner_matrix(graph.n)
    d = graph.n.deg
    vmap, emap = {}, {}
    # w shifts levels by up to deg p; only map what stays inside the window
    for v in graph.vertices:
        if v.level + d > graph.top_level:
            continue
        img = apply_matrix(w, vertex_lift(graph, v.id))
        vmap[v.id] = classify_vertex(img, graph)
    for e in graph.edges:
        if e.level + 1 + d > graph.top_level:
            continue
        img = apply_matrix(w, edge_lift(graph, e.id))
        emap[e.id] = classify_tree_edge(img, graph)
    return AtkinLehner(vmap, emap)


def u_edge(graph: QuotientGraph, n_idx: int) -> EdgeNF:
    """The tree edge e_n from u_(n-1) to u_n, u_m = (0,1;1,0) . v_(m + deg p)."""
    F = graph.F
    d = graph.n.deg
    s = Mat2(Poly.zero(F), Poly.one(F), Poly.one(F), Poly.zero(F))
    return EdgeNF(apply_matrix(s, v_n(F, n_idx - 1 + d)), apply_matrix(s, v_n(F, n_idx + d)))
