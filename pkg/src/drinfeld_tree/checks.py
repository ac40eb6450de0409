"""Executable versions of the combinatorial facts the package is built around.

Each `criterion_*` returns a list of CheckResult; `run_suite("paper")` runs
all of them plus a handful of single-example checks.  Everything here is exact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .arith import Poly, RatFn, field, polys_of_degree_less
from .drinfeld import (DrinfeldModule, ReductionType, carlitz_torsion, is_preperiodic, j_invariant,
                       lowest_nonzero_index, newton_slopes, phi_f_mod, reduction_type, skew_mul,
                       SkewPoly, torsion_module)
from .harmonic import (eisenstein_index, formal_immersion_witness, hecke_apply, hecke_matrix,
                       cusp_symbol_sum, primes_coprime, ramanujan_bound_holds, symbol_zero_infinity,
                       winding_image)
from .ideals import IdealA, primes_of_degree, proj_points, valuation
from .intlin import mat_mul
from .parse import parse_poly
from .quotient import (atkin_lehner, build_quotient_graph, classify_tree_edge, gl2a_quotient, u_edge)
from .tree import Mat2, apply_matrix, v_n

STRUCTURE_PRIMES = ("T^3+T+1", "T^3+T^2+1", "T^4+T^3+1", "T^5+T^2+1")
IDENTITY_PRIMES = ("T^3+T+1", "T^3+T^2+1", "T^4+T^3+1")
IDENTITY_Q = ("T", "T+1", "T^2+T+1")

# Regression value for [T(p) : E(p)] at p = T^3+T+1, q = 2, degree bound 4.
FROZEN_EISENSTEIN_INDEX = 7


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def _ideal(lit: str, q: int = 2) -> IdealA:
    return IdealA(parse_poly(lit, q))


def _graph(lit: str, q: int = 2):
    return build_quotient_graph(_ideal(lit, q))


# ---------------------------------------------------------------- criteria


def criterion_1() -> list[CheckResult]:
    """Half-lines, u/v degrees, the w vertex, trivial non-cuspidal edge stabilizers."""
    out = []
    for lit in STRUCTURE_PRIMES:
        G = _graph(lit)
        z = G.z_order
        d = G.n.deg
        out.append(CheckResult(f"{lit}: two half-lines", len(G.half_lines) == 2, f"{len(G.half_lines)}"))
        uv = [v for v in G.vertices if any(t[0] in "uv" and t != "u-1" for t in v.tags)]
        bad = [v.tags for v in uv if G.degree(v.id) != 2]
        out.append(CheckResult(f"{lit}: u_m, v_m (m >= 0) have degree 2", not bad and len(uv) > 0, str(bad)))
        deg1 = [v.id for v in G.vertices if G.degree(v.id) == 1]
        nontriv = [v.id for v in G.vertices if not v.is_cuspidal and v.stab_order != z]
        if d % 2 == 0:
            ok = len(deg1) == 1 and deg1 == [G.w_vertex]
            detail = f"degree-1 vertices {deg1}, w = {G.w_vertex}"
            if ok:
                w = deg1[0]
                al = atkin_lehner(G)
                nb = G.neighbor_ids(w)
                ok = (al.vertex_map.get(w) == w and len(nb) == 1 and G.vertices[nb[0]].stab_order == z
                      and nontriv == [w])
                detail += f", AL(w) = {al.vertex_map.get(w)}, neighbour stab {G.vertices[nb[0]].stab_order}"
            out.append(CheckResult(f"{lit}: unique degree-1 vertex w, AL-fixed, neighbour trivial", ok, detail))
        else:
            out.append(CheckResult(f"{lit}: no degree-1 vertex and no special finite vertex",
                                   not deg1 and not nontriv, f"deg1 {deg1}, nontrivial {nontriv}"))
        bad_e = [e.id for e in G.edges if not e.is_cuspidal and e.stab_order != z]
        out.append(CheckResult(f"{lit}: non-cuspidal edges have trivial stabilizer", not bad_e, str(bad_e)))
    return out


def criterion_2() -> list[CheckResult]:
    out = []
    for lit, want in (("T^4+T^2+1", 2), ("T^3+T+1", 2), ("T", 0)):
        b = _graph(lit).betti
        out.append(CheckResult(f"b1({lit}) = {want}", b == want, f"got {b}"))
    return out


def criterion_3() -> list[CheckResult]:
    out = []
    for d in (2, 3, 4, 5):
        counts = {len(proj_points(IdealA(p))) for p in primes_of_degree(2, d)}
        out.append(CheckResult(f"|P^1(A/p)| = 2^{d}+1 for all primes of degree {d}", counts == {2**d + 1},
                               f"{sorted(counts)}"))
    return out


def criterion_4() -> list[CheckResult]:
    out = []
    for plit in IDENTITY_PRIMES:
        G = _graph(plit)
        s = symbol_zero_infinity(G)
        for qlit in IDENTITY_Q:
            Q = _ideal(qlit)
            lhs = s * (1 + G.q ** Q.deg) - hecke_apply(Q, s)
            rhs = cusp_symbol_sum(Q, G)
            out.append(CheckResult(f"(1+q^d-T_q)[0,inf] = sum [0,a/r]: p={plit}, q={qlit}", lhs == rhs))
    return out


def criterion_5() -> list[CheckResult]:
    out = []
    for lit in STRUCTURE_PRIMES:
        G = _graph(lit)
        nz = [str(Q.gen) for Q in primes_coprime(G, 2) if not winding_image(Q, G).is_zero()]
        out.append(CheckResult(f"{lit}: some winding image with deg q <= 2 is nonzero", bool(nz), f"nonzero for {nz}"))
    return out


def criterion_6() -> list[CheckResult]:
    return [CheckResult(f"{lit}: [0,1/T] mod 2 vanishes on exactly one edge out of u_-1",
                        formal_immersion_witness(_graph(lit))) for lit in STRUCTURE_PRIMES]


def criterion_7(max_deg: int = 3) -> list[CheckResult]:
    out = []
    for lit in STRUCTURE_PRIMES:
        G = _graph(lit)
        primes = primes_coprime(G, max_deg)
        Ms = {p.gen: hecke_matrix(p, G).matrix for p in primes}
        keys = list(Ms)
        bad = [(str(a), str(b)) for i, a in enumerate(keys) for b in keys[i + 1:]
               if mat_mul(Ms[a], Ms[b]) != mat_mul(Ms[b], Ms[a])]
        out.append(CheckResult(f"{lit}: Hecke operators of degree <= {max_deg} commute", not bad, str(bad)))
        bad_r = [str(p.gen) for p in primes if not ramanujan_bound_holds(Ms[p.gen], G.q, p.deg)]
        out.append(CheckResult(f"{lit}: |theta| <= 2 q^(deg q/2) for all eigenvalues", not bad_r, str(bad_r)))
    return out


def criterion_8() -> list[CheckResult]:
    G = _graph("T^3+T+1")
    rep = eisenstein_index(G, 4)
    return [
        CheckResult("T(p)/E(p) cyclic generated by 1", rep.cyclic),
        CheckResult("Eisenstein index finite", rep.index is not None, f"index {rep.index}"),
        CheckResult("Eisenstein index stable for degree bound 4 -> 5", bool(rep.stable)),
        CheckResult("Eisenstein index equals frozen value", rep.index == FROZEN_EISENSTEIN_INDEX,
                    f"{rep.index} vs {FROZEN_EISENSTEIN_INDEX}"),
    ]


def rank2_family(max_deg: int = 2, q: int = 2) -> list[DrinfeldModule]:
    """All (g, Delta) with polynomial entries of degree <= max_deg, Delta != 0."""
    F = field(q)
    out = []
    for g in polys_of_degree_less(F, max_deg + 1):
        for dl in polys_of_degree_less(F, max_deg + 1):
            if dl:
                out.append(DrinfeldModule(RatFn(g), RatFn(dl)))
    return out


def preperiodic_probe(q: int = 2) -> list[RatFn]:
    """Small test set u/w for the preperiodic cross-check."""
    F = field(q)
    dens = [Poly.one(F), Poly.T(F), Poly.T(F) + 1]
    return [RatFn(u, w) for w in dens for u in polys_of_degree_less(F, 4)]


def criterion_9() -> list[CheckResult]:
    carl = carlitz_torsion(2)
    out = [CheckResult("Carlitz torsion has cardinality 4", len(carl) == 4, f"{len(carl)}")]
    fam = rank2_family(2)
    small = [phi for phi in fam if phi.g.num.deg <= 1 and phi.delta.num.deg <= 1]
    bad_bound, bad_pre, budget = [], [], []
    probe = preperiodic_probe()
    for phi in fam:
        tm = torsion_module(phi)
        if tm.budget_exceeded:
            budget.append(str(phi))
        if tm.m.deg + tm.n.deg > 2:
            bad_bound.append(str(phi))
        tors = set(tm.points)
        for x in set(probe) | tors:
            if bool(is_preperiodic(phi, x)) != (x in tors):
                bad_pre.append((str(phi), str(x)))
    out.append(CheckResult(f"{len(fam)} rank-2 modules enumerated (>= 20; includes all {len(small)} of degree <= 1)",
                           len(fam) >= 20 and len(small) == 12))
    out.append(CheckResult("deg m + deg n <= 2 for every module", not bad_bound and not budget,
                           f"violations {bad_bound}, budget {budget}"))
    out.append(CheckResult("torsion points = preperiodic points (probe set plus torsion)", not bad_pre,
                           str(bad_pre[:5])))
    return out


def reduction_family() -> list[tuple[DrinfeldModule, IdealA]]:
    pairs = []
    for phi in rank2_family(1):
        for d in (1, 2, 3):
            for p in primes_of_degree(2, d):
                P = IdealA(p)
                if valuation(phi.delta, P) == 0:
                    pairs.append((phi, P))
    return pairs


def criterion_10() -> list[CheckResult]:
    bad_idx, bad_np = [], []
    pairs = reduction_family()
    for phi, P in pairs:
        d, q = P.deg, phi.q
        idx = lowest_nonzero_index(phi_f_mod(phi, P))
        if idx not in (d, 2 * d):
            bad_idx.append((str(phi), str(P)))
            continue
        kind = reduction_type(phi, P)
        npoly = newton_slopes(phi, P)
        if kind == ReductionType.ORDINARY:
            want = ((Fraction(0), q ** (2 * d) - q**d), (Fraction(1, q**d - 1), q**d - 1))
        else:
            want = ((Fraction(1, q ** (2 * d) - 1), q ** (2 * d) - 1),)
        if npoly.slopes != want:
            bad_np.append((str(phi), str(P), npoly.slopes))
    return [
        CheckResult(f"lowest reduced index in {{d, 2d}} ({len(pairs)} pairs)", not bad_idx, str(bad_idx[:5])),
        CheckResult("Newton slopes match the ordinary / supersingular split", not bad_np, str(bad_np[:3])),
    ]


def criterion_11(depth: int = 10) -> list[CheckResult]:
    G = gl2a_quotient(field(2), depth)
    per_level = [sum(1 for v in G.vertices if v.level == lvl) for lvl in range(depth + 1)]
    degs = [G.degree(G.vertex_at[(lvl, 0)]) for lvl in range(depth + 1)]
    return [
        CheckResult("GL2(A)\\T has one vertex per level", per_level == [1] * (depth + 1), str(per_level)),
        CheckResult(f"degree sequence 1,2,2,... to depth {depth}", degs == [1] + [2] * depth, str(degs)),
    ]


CRITERIA: dict[int, Callable[[], list[CheckResult]]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}


# ---------------------------------------------------------------- single examples


def example_checks() -> list[CheckResult]:
    F = field(2)
    T = Poly.T(F)
    out = []
    tau = SkewPoly.tau(F)
    prod = skew_mul(tau, SkewPoly.scalar(RatFn(T)))
    out.append(CheckResult("tau * T = T^2 tau", prod == SkewPoly(F, [RatFn(Poly.zero(F)), RatFn(T * T)])))

    g0, d0 = RatFn(T + 1), RatFn(T)
    k = RatFn(T * T + 1)
    phi, phik = DrinfeldModule(g0, d0), DrinfeldModule(k * g0, k * k * k * d0)
    out.append(CheckResult("j invariant unchanged by (g, Delta) -> (k g, k^3 Delta)", j_invariant(phi) == j_invariant(phik)))

    p = _ideal("T^3+T+1")
    w = Mat2(Poly.zero(F), Poly.one(F), p.gen, Poly.zero(F))
    s = Mat2(Poly.zero(F), Poly.one(F), Poly.one(F), Poly.zero(F))
    ok = all(apply_matrix(w, v_n(F, n)) == apply_matrix(s, v_n(F, n + p.deg)) for n in range(0, 6))
    out.append(CheckResult("w_p . v_n = (0,1;1,0) . v_(n + deg p)", ok))

    G = _graph("T^3+T+1")
    al = atkin_lehner(G)
    out.append(CheckResult("Atkin-Lehner sends v_0 to u_0", al.vertex_map[G.tagged("v0")] == G.tagged("u0")))
    eid, sgn = classify_tree_edge(u_edge(G, 0), G)
    e = G.edges[eid]
    o, t = (e.origin, e.terminus) if sgn == 1 else (e.terminus, e.origin)
    out.append(CheckResult("e_0 runs from u_-1 to u_0 in the quotient", (o, t) == (G.tagged("u-1"), G.tagged("u0"))))
    for lit in ("T^4+T^3+1",):
        H = _graph(lit)
        out.append(CheckResult(f"{lit}: w has stabilizer of order divisible by 3",
                               H.vertices[H.w_vertex].stab_order % 3 == 0))
    s0 = symbol_zero_infinity(G)
    for qlit in ("T", "T+1"):
        Q = _ideal(qlit)
        c = s0 * (1 + 2**Q.deg) - hecke_apply(Q, s0)
        out.append(CheckResult(f"(1+q^d-T_q)[0,inf] cuspidal and divisible by q-1, q={qlit}",
                               c.is_cuspidal() and all(x % (G.q - 1) == 0 for x in c.values)))
    wq = winding_image(_ideal("T"), G)
    out.append(CheckResult("winding image for q=(T) equals -[0,1/T]",
                           wq == -cusp_symbol_sum(_ideal("T"), G) and wq.is_cuspidal()))
    for lit in ("T^3+T+1", "T^4+T^3+1"):
        rows = [reduction_type(DrinfeldModule(RatFn(g), RatFn(Poly.one(F))), _ideal(lit))
                for g in polys_of_degree_less(F, 2)]
        out.append(CheckResult(f"reduction types at {lit} are ordinary or supersingular",
                               all(r in (ReductionType.ORDINARY, ReductionType.SUPERSINGULAR) for r in rows)))
    return out


def run_suite(name: str = "paper", criteria=None) -> list[tuple[str, list[CheckResult], float]]:
    if name != "paper":
        raise ValueError(f"unknown suite {name!r}")
    out = []
    for k in criteria or sorted(CRITERIA):
        t = time.perf_counter()
        res = CRITERIA[k]()
        out.append((f"criterion {k}", res, time.perf_counter() - t))
    t = time.perf_counter()
    out.append(("examples", example_checks(), time.perf_counter() - t))
    return out
