import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import F2, ideal, polys
from drinfeld_tree.arith import Poly, RatFn, field, poly_divrem, poly_gcd, poly_xgcd, polys_of_degree_less
from drinfeld_tree.errors import PreconditionError
from drinfeld_tree.ideals import (INF, factor, is_irreducible, is_irreducible_trial, normalize_point,
                                  primes_of_degree, proj_line_size, proj_points, residue_units, valuation)
from drinfeld_tree.parse import ParseError, format_poly, format_ratfn, parse_poly, parse_ratfn

T = Poly.T(F2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_field_axioms_exhaustive(q):
    F = field(q)
    E = list(F.elements())
    for a in E:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in E:
            assert F.add(a, b) == F.add(b, a) and F.mul(a, b) == F.mul(b, a)
            if q <= 9:
                for c in E:
                    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    # the multiplicative group is cyclic, generated by gen
    assert len({F.pow(F.gen, k) for k in range(q - 1)}) == q - 1


def test_rejects_non_prime_power():
    with pytest.raises(ValueError):
        field(6)


def test_divrem_examples():
    a = parse_poly("T^3+T+1")
    assert poly_divrem(a, T) == (parse_poly("T^2+1"), Poly.one(F2))
    b = parse_poly("T^2+T+1")
    assert poly_divrem(b, b) == (Poly.one(F2), Poly.zero(F2))
    quo, rem = poly_divrem(parse_poly("T^4+T^2+1"), b)
    assert (quo, rem) == (b, Poly.zero(F2))
    assert quo * b + rem == parse_poly("T^4+T^2+1")
    with pytest.raises(ZeroDivisionError):
        poly_divrem(a, Poly.zero(F2))


@pytest.mark.parametrize("q", [2, 3, 4])
@given(data=st.data())
def test_divrem_and_gcd_properties(q, data):
    a = data.draw(polys(q, 5))
    b = data.draw(polys(q, 3, nonzero=True))
    quo, rem = divmod(a, b)
    assert quo * b + rem == a and rem.deg < b.deg
    g, s, t = poly_xgcd(a, b)
    assert g == s * a + t * b and g.is_monic()
    assert not (a % g) and not (b % g)
    assert g == poly_gcd(a, b)


@given(a=polys(2, 4, nonzero=True), b=polys(2, 4, nonzero=True), c=polys(2, 3))
def test_ring_axioms_f2(a, b, c):
    assert (a * b).deg == a.deg + b.deg
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


def test_irreducibility_examples():
    assert is_irreducible(parse_poly("T^3+T+1"))
    assert not is_irreducible(parse_poly("T^2+1"))
    assert is_irreducible(parse_poly("T^2+T+1"))
    with pytest.raises(PreconditionError):
        is_irreducible(Poly.one(F2))


@pytest.mark.parametrize("q,maxd", [(2, 7), (3, 4), (4, 3)])
def test_irreducible_matches_trial_division(q, maxd):
    F = field(q)
    for d in range(1, maxd + 1):
        for key in range(q**d, min(q ** (d + 1), q**d + 300)):
            f = Poly.from_key(F, key)
            if f.is_monic():
                assert is_irreducible(f) == is_irreducible_trial(f), f


def test_prime_counts():
    # number of monic irreducibles of degree d over F_2: 2, 1, 2, 3, 6, 9
    assert [len(primes_of_degree(2, d)) for d in range(1, 7)] == [2, 1, 2, 3, 6, 9]


def test_factor_char2_square():
    assert factor(parse_poly("T^4+T^2+1")) == [(parse_poly("T^2+T+1"), 2)]


def test_valuation_examples():
    assert valuation(RatFn(parse_poly("T^2+T")), INF) == -2
    assert valuation(RatFn(Poly.one(F2), T), ideal("T")) == -1
    p = parse_poly("T^3+T+1")
    assert valuation(RatFn(p * p), ideal("T^3+T+1")) == 2
    with pytest.raises(PreconditionError):
        valuation(RatFn(Poly.zero(F2)), INF)


@given(a=polys(2, 5, nonzero=True), b=polys(2, 5, nonzero=True), c=polys(2, 4, nonzero=True))
def test_valuation_additive_and_product_formula(a, b, c):
    x, y = RatFn(a, b), RatFn(c)
    places = [IdealAFromPoly(p) for p in {f for f, _ in factor(a * b * c)}] + [ideal("T"), ideal("T^2+T+1")]
    for v in places + [INF]:
        assert valuation(x * y, v) == valuation(x, v) + valuation(y, v)
    # product formula: sum over finite primes of deg(p) v_p(x) + v_inf(x) = 0
    tot = valuation(x, INF)
    for f, _ in factor(a * b):
        tot += f.deg * valuation(x, IdealAFromPoly(f))
    assert tot == 0


def IdealAFromPoly(f):
    from drinfeld_tree.ideals import IdealA

    return IdealA(f)


def test_proj_points_examples():
    assert len(proj_points(ideal("T^3+T+1"))) == 9
    pts = proj_points(ideal("T"))
    assert {str(p) for p in pts} == {"(0:1)", "(1:0)", "(1:1)"}
    assert len(proj_points(ideal("T^2+T+1"))) == 5
    with pytest.raises(PreconditionError):
        proj_points(ideal("1"))


def _brute_classes(n):
    """P^1(A/n) by brute force: unimodular pairs modulo unit scalars."""
    F = n.F
    res = list(polys_of_degree_less(F, n.deg))
    units = [u for u in res if poly_gcd(u, n.gen).is_one()]
    seen, classes = set(), 0
    for c, d in itertools.product(res, res):
        if not poly_gcd(poly_gcd(c, d), n.gen).is_one() or (c.key, d.key) in seen:
            continue
        classes += 1
        for u in units:
            seen.add(((u * c % n.gen).key, (u * d % n.gen).key))
    return classes


@pytest.mark.parametrize("lit", ["T", "T^2", "T^2+T+1", "T^3+T+1", "T^4+T^2+1", "T^3", "T^2+T", "T^4+T^3+1"])
def test_proj_points_against_brute_force(lit):
    n = ideal(lit)
    pts = proj_points(n)
    assert len(pts) == len(set(pts)) == _brute_classes(n) == proj_line_size(n)


@pytest.mark.parametrize("lit", ["T^2", "T^2+T+1", "T^3+T+1", "T^4+T^2+1", "T^3+T", "T^4+T^3+1", "T^4"])
def test_normalization_idempotent_and_scalar_invariant(lit):
    n = ideal(lit)
    units = residue_units(n.gen)
    for p in proj_points(n):
        assert normalize_point(p.c, p.d, n.gen) == p
        for u in units:
            assert normalize_point(u * p.c, u * p.d, n.gen) == p


@pytest.mark.parametrize("q", [2, 3, 4, 9])
@given(data=st.data())
def test_parse_format_roundtrip(q, data):
    a = data.draw(polys(q, 5))
    assert parse_poly(format_poly(a), q) == a
    b = data.draw(polys(q, 3, nonzero=True))
    x = RatFn(a, b)
    assert parse_ratfn(format_ratfn(x), q) == x


@pytest.mark.parametrize("text", ["T^3+", "T^^2", "", "2*", "T/(T-T)", "x+1"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_ratfn(text, 2)


def test_parse_grammar_forms():
    assert parse_poly("T**3 + T + 1") == parse_poly("T^3+T+1")
    assert parse_poly("(T+1)(T+1)") == parse_poly("T^2+1")
    assert parse_ratfn("T^-1") == RatFn(Poly.one(F2), T)
    F4 = field(4)
    a = parse_poly("a*T + a^2", 4)
    assert a.c == (F4.pow(F4.gen, 2), F4.gen)
    assert parse_poly("2*T+1", 3).c == (1, 2)
