import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import F2, ideal, polys
from drinfeld_tree.arith import Poly, polys_of_degree_less
from drinfeld_tree.errors import PreconditionError
from drinfeld_tree.harmonic import (Cochain, CuspPoint, arch_counts_direct, eisenstein_index,
                                    formal_immersion_witness, from_path_counts, h1_basis, hecke_algebra,
                                    hecke_apply, hecke_coset_reps, hecke_matrix, in_hecke_set, is_harmonic,
                                    lambda_lattice, lattice_invariant, cusp_symbol_sum, modular_symbol, parse_cusp,
                                    primes_coprime, ramanujan_bound_holds, symbol_zero_infinity, winding_image)
from drinfeld_tree.intlin import hnf, in_lattice, kernel, mat_mul, rank, saturate, smith_diagonal, solve_in_lattice
from drinfeld_tree.quotient import build_quotient_graph
from drinfeld_tree.tree import Mat2

T = Poly.T(F2)
ONE, ZERO = Poly.one(F2), Poly.zero(F2)
P3 = ideal("T^3+T+1")
PRIMES = ["T^3+T+1", "T^3+T^2+1", "T^4+T^3+1"]


def G(lit="T^3+T+1"):
    return build_quotient_graph(ideal(lit))


def cusp(num, den=ONE):
    return CuspPoint.of(num, den)


INF = CuspPoint.infinity(F2)


# ---------------------------------------------------------------- cochains and H_1


def test_h1_basis_examples():
    g = G()
    B = h1_basis(g)
    assert len(B) == 2
    fe = set(g.finite_edges)
    assert len(fe) == 5
    for c in B.cochains:
        assert is_harmonic(c) and c.is_cuspidal()
        assert {i for i, v in enumerate(c.values) if v} <= fe
    assert len(h1_basis(G("T"))) == 0
    assert len(h1_basis(G("T^4+T^2+1"))) == 2


def test_harmonicity_examples():
    g = G()
    assert is_harmonic(Cochain.zero(g))
    assert not is_harmonic(Cochain(g, [1] * len(g.edges)))


@given(xs=st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_h1_coordinates_round_trip(xs):
    B = h1_basis(G())
    c = B.combine(xs)
    assert B.coordinates(c) == xs
    assert is_harmonic(c)
    assert c.value(0, -1) == -c.value(0, 1)


def test_cochain_json_shape():
    g = G()
    obj = symbol_zero_infinity(g).to_json_obj()
    assert set(obj) == {"finite", "tails"}
    assert len(obj["tails"]) == 2
    assert all(set(t) == {"exceptional", "constant"} for t in obj["tails"])


# ---------------------------------------------------------------- modular symbols


def test_zero_infinity_tails():
    g = G()
    s = symbol_zero_infinity(g)
    assert is_harmonic(s)
    assert sorted(t["constant"] for t in s.tails()) == [-1, 1]


def test_symbol_invariance_example():
    g = G()
    gamma = Mat2(T * T + ONE, ONE, P3.gen, T)
    assert gamma.det() == ONE and not (gamma.c % P3.gen)
    # gamma.0 = b/d, gamma.inf = a/c
    assert modular_symbol(cusp(gamma.b, gamma.d), cusp(gamma.a, gamma.c), g) == symbol_zero_infinity(g)


cusps = st.tuples(polys(2, 3), polys(2, 3, nonzero=True)).map(lambda t: cusp(*t))
gamma_words = st.lists(st.tuples(st.booleans(), polys(2, 1)), min_size=1, max_size=4)


def _gamma(words, n):
    g = Mat2.identity(F2)
    for upper, a in words:
        g = g * (Mat2(ONE, a, ZERO, ONE) if upper else Mat2(ONE, ZERO, a * n, ONE))
    return g


def _act(g, x):
    if x.is_infinity:
        return cusp(g.a, g.c) if g.c else INF
    num, den = g.a * x.num + g.b * x.den, g.c * x.num + g.d * x.den
    return cusp(num, den) if den else INF


@given(a=cusps, b=cusps, w=gamma_words)
def test_symbol_properties(a, b, w):
    g = G()
    if a == b:
        with pytest.raises(PreconditionError):
            modular_symbol(a, b, g)
        return
    s = modular_symbol(a, b, g)
    assert is_harmonic(s)
    assert modular_symbol(b, a, g) == -s
    gm = _gamma(w, P3.gen)
    assert modular_symbol(_act(gm, a), _act(gm, b), g) == s
    # cocycle relation through infinity
    if not a.is_infinity and not b.is_infinity:
        assert modular_symbol(a, INF, g) + modular_symbol(INF, b, g) == s


@pytest.mark.parametrize("a,b", [(cusp(ZERO), INF), (cusp(ONE, T), cusp(ZERO)), (cusp(T, T * T + ONE), INF),
                                 (cusp(ONE, T + ONE), cusp(T, T * T + T + ONE))])
def test_symbol_matches_direct_arch(a, b):
    g = G()
    s = modular_symbol(a, b, g)
    direct = from_path_counts(g, arch_counts_direct(a, b, g, window=40))
    for eid in g.finite_edges:
        assert s.values[eid] == direct.values[eid]


def test_parse_cusp():
    assert parse_cusp("inf", 2).is_infinity
    assert parse_cusp("1/T", 2) == cusp(ONE, T)
    assert str(parse_cusp("T/(T^2+1)", 2)) == str(cusp(T, T * T + ONE))


# ---------------------------------------------------------------- Hecke


def _brute_cosets(qq, n, max_deg):
    """Left Gamma_0(n)-cosets in H(q, n) met by matrices with entries of degree <= max_deg."""
    F = qq.F
    ent = list(polys_of_degree_less(F, max_deg + 1))
    reps = []

    def same(h1, h2):
        X = h1 * h2.adjugate()
        dt = h2.det()
        if any(x % dt for x in X.entries()):
            return False
        return not ((X.c // dt) % n.gen)

    for a, b, c, d in itertools.product(ent, repeat=4):
        h = Mat2(a, b, c, d)
        if in_hecke_set(h, qq, n) and not any(same(h, r) for r in reps):
            reps.append(h)
    return reps, same


@pytest.mark.parametrize("qlit,count", [("T", 3), ("T+1", 3), ("T^2+T+1", 5)])
def test_hecke_reps_vs_brute_force(qlit, count):
    qq = ideal(qlit)
    reps = hecke_coset_reps(qq, P3)
    assert len(reps) == count == 2 ** qq.deg + 1
    assert all(in_hecke_set(h, qq, P3) for h in reps)
    brute, same = _brute_cosets(qq, P3, qq.deg)
    assert len(brute) == count
    for h in brute:
        assert sum(same(h, r) for r in reps) == 1


def test_hecke_reps_example():
    reps = hecke_coset_reps(ideal("T"), P3)
    assert set(reps) == {Mat2(T, ZERO, ZERO, ONE), Mat2(ONE, ZERO, ZERO, T), Mat2(ONE, ONE, ZERO, T)}
    with pytest.raises(PreconditionError):
        hecke_coset_reps(P3, P3)
    with pytest.raises(PreconditionError):
        hecke_coset_reps(ideal("1"), P3)


def test_hecke_apply_examples():
    g = G()
    qq = ideal("T")
    assert hecke_apply(qq, Cochain.zero(g)).is_zero()
    B = h1_basis(g)
    for b in B.cochains:
        img = hecke_apply(qq, b)
        assert is_harmonic(img) and img.is_cuspidal()
        B.coordinates(img)  # raises unless the image is an integral combination


@pytest.mark.parametrize("plit", PRIMES)
@pytest.mark.parametrize("qlit", ["T", "T+1", "T^2+T+1"])
def test_hecke_symbol_identity(plit, qlit):
    g, qq = G(plit), ideal(qlit)
    s = symbol_zero_infinity(g)
    lhs = s * (1 + 2 ** qq.deg) - hecke_apply(qq, s)
    assert lhs == cusp_symbol_sum(qq, g)
    assert lhs.is_cuspidal()
    lhs.exact_div(1)


def test_winding_example():
    g = G()
    w = winding_image(ideal("T"), g)
    assert w == -modular_symbol(cusp(ZERO), cusp(ONE, T), g)
    assert w.is_cuspidal()


@pytest.mark.parametrize("plit", PRIMES + ["T^5+T^2+1"])
def test_winding_nonzero(plit):
    g = G(plit)
    assert any(not winding_image(qq, g).is_zero() for qq in primes_coprime(g, 2))


@pytest.mark.parametrize("plit", PRIMES)
def test_hecke_commute_and_ramanujan(plit):
    g = G(plit)
    mats = {qq.gen: (qq.deg, hecke_matrix(qq, g).matrix) for qq in primes_coprime(g, 3)}
    for (d1, A), (d2, B) in itertools.combinations(mats.values(), 2):
        assert mat_mul(A, B) == mat_mul(B, A)
    for d, M in mats.values():
        assert ramanujan_bound_holds(M, 2, d)
        ev = np.linalg.eigvals(np.array(M, dtype=float))
        assert np.all(np.abs(ev.imag) < 1e-8)
        assert np.all(np.abs(ev.real) <= 2 * 2 ** (d / 2) + 1e-8)


def test_ramanujan_rejects_large_eigenvalue():
    assert not ramanujan_bound_holds([[3, 0], [0, 1]], 2, 1)
    assert ramanujan_bound_holds([[2, 0], [0, -2]], 2, 1)
    assert not ramanujan_bound_holds([[0, -1], [1, 0]], 2, 1)  # eigenvalues +-i


def test_hecke_matrix_csv():
    M = hecke_matrix(ideal("T"), G())
    rows = [list(map(int, r.split(","))) for r in M.to_csv().splitlines()]
    assert rows == M.matrix


# ---------------------------------------------------------------- algebra, Eisenstein, Lambda


def test_hecke_algebra_rank():
    g = G()
    alg = hecke_algebra(g, 3)
    assert alg.stabilized
    assert 1 <= alg.rank <= len(h1_basis(g)) ** 2
    assert alg.rank <= len(h1_basis(g))


def test_eisenstein_deg3():
    rep = eisenstein_index(G(), 4)
    assert rep.index == 7 and rep.cyclic and rep.stable


def test_eisenstein_default_bound_matches():
    for lit in ("T^3+T+1", "T^3+T^2+1"):
        rep = eisenstein_index(G(lit))
        assert rep.index == 7 and rep.cyclic


def test_eisenstein_deg4():
    rep = eisenstein_index(G("T^4+T^3+1"))
    assert rep.index == 5 and rep.cyclic and rep.stable


def test_lambda_lattice():
    g = G()
    lam = lambda_lattice(g, primes_coprime(g, 2))
    assert lam.rank >= 1
    assert saturate(lam.basis) == lam.basis
    for qq in primes_coprime(g, 3):
        assert lattice_invariant(lam.basis, hecke_matrix(qq, g).matrix)
    small = lambda_lattice(g, primes_coprime(g, 1))
    assert all(in_lattice(v, lam.basis) for v in small.basis)
    with pytest.raises(PreconditionError):
        lambda_lattice(g, [])


@pytest.mark.parametrize("plit", PRIMES + ["T^5+T^2+1"])
def test_formal_immersion_witness(plit):
    assert formal_immersion_witness(G(plit))


def test_witness_preconditions():
    with pytest.raises(PreconditionError):
        formal_immersion_witness(G("T^2+T+1"))
    with pytest.raises(PreconditionError):
        formal_immersion_witness(G("T^4+T^2+1"))


# ---------------------------------------------------------------- integer linear algebra


int_mats = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(M=int_mats)
def test_smith_vs_sympy(M):
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    expected = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
    assert smith_diagonal(M) == expected


@given(M=int_mats)
def test_hnf_kernel_saturate(M):
    H = hnf(M)
    assert len(H) == sympy.Matrix(M).rank()
    for row in M:
        assert in_lattice(row, H)
    for row in H:
        assert solve_in_lattice(row, M) is not None
    K = kernel(M)
    assert len(K) == len(M[0]) - rank(M)
    for k in K:
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in M)
    S = saturate(M)
    assert saturate(S) == S
    assert all(in_lattice(row, S) for row in H)
