from hypothesis import given, strategies as st

from conftest import F2, polys
from drinfeld_tree.arith import Poly, RatFn, field
from drinfeld_tree.tree import (EdgeNF, Mat2, VertexNF, apply_matrix, are_adjacent, bfs_ball, edge_from_matrix,
                                edge_reverse, lattice_contains, neighbors, v_n, vertex_normal_form)

T = Poly.T(F2)
ONE, ZERO = Poly.one(F2), Poly.zero(F2)


def elementary(upper: bool, a: Poly) -> Mat2:
    return Mat2(ONE, a, ZERO, ONE) if upper else Mat2(ONE, ZERO, a, ONE)


gl2a = st.lists(st.tuples(st.booleans(), polys(2, 3)), min_size=1, max_size=5).map(
    lambda xs: _prod([elementary(u, a) for u, a in xs]))


def _prod(ms):
    out = Mat2.identity(F2)
    for m in ms:
        out = out * m
    return out


vertices = st.tuples(st.integers(-4, 5), polys(2, 4)).map(lambda t: vertex_normal_form(VertexNF(t[0], t[1]).matrix()))


def test_v_n_normal_form():
    for n in range(-4, 5):
        g = Mat2(T ** n, ZERO, ZERO, ONE) if n >= 0 else Mat2(ONE, ZERO, ZERO, T ** (-n))
        assert vertex_normal_form(g) == v_n(F2, n)


def test_normal_form_examples():
    # u = T^2 sits in the class with k = 0 and P = T
    assert vertex_normal_form(Mat2(ONE, T * T, ZERO, ONE)) == VertexNF(0, T)
    assert vertex_normal_form(Mat2(ONE, ONE, ZERO, ONE)) == v_n(F2, 0)
    assert vertex_normal_form(Mat2(ZERO, ONE, ONE, ZERO)) == v_n(F2, 0)
    # (T, 0; 0, 1) ~ (1, 0; 0, 1/T)
    assert vertex_normal_form(Mat2(T, ZERO, ZERO, ONE)) == VertexNF(-1, ZERO)


@given(v=vertices, x=polys(2, 3))
def test_normal_form_transversal(v, x):
    M = v.matrix()
    # right multiplication by GL_2(O_inf) elements and by scalars leaves the class fixed
    w = Mat2(ONE, ZERO, ONE, ONE)
    s = Mat2(ZERO, ONE, ONE, ZERO)
    assert vertex_normal_form(M * w) == v
    assert vertex_normal_form(M * s) == v
    if x:
        # (T^d, x; 0, T^d) is a scalar times an element of GL_2(O_inf) when deg x <= d
        d = x.deg
        k = Mat2(T ** d, x, ZERO, T ** d)
        assert vertex_normal_form(M * k) == v
    sc = Mat2(T, ZERO, ZERO, T)
    assert vertex_normal_form(M * sc) == v
    assert vertex_normal_form(M) == v


@given(v=vertices)
def test_neighbors(v):
    ns = neighbors(v)
    assert len(set(ns)) == 3
    for w in ns:
        assert v in neighbors(w)
        assert lattice_contains(v, w) or lattice_contains(w, v)
    assert not are_adjacent(v, v)


def test_lattice_oracle_on_ball():
    ball = bfs_ball(v_n(F2, 0), 3)
    vs = list(ball)
    for a in vs:
        for b in vs:
            adjacent = b in neighbors(a)
            oracle = lattice_contains(a, b) or lattice_contains(b, a)
            assert adjacent == oracle, (a, b)


def test_ball_sizes():
    for q in (2, 3):
        F = field(q)
        for r in range(5):
            assert len(bfs_ball(v_n(F, 0), r)) == 1 + (q + 1) * (q**r - 1) // (q - 1)


def test_ball_is_tree():
    ball = bfs_ball(v_n(F2, 0), 4)
    edges = {frozenset((a, b)) for a in ball for b in neighbors(a) if b in ball}
    assert len(edges) == len(ball) - 1


@given(g=gl2a, h=gl2a, v=vertices)
def test_action(g, h, v):
    assert apply_matrix(g * h, v) == apply_matrix(g, apply_matrix(h, v))
    assert apply_matrix(Mat2.identity(F2), v) == v
    gv = apply_matrix(g, v)
    assert set(neighbors(gv)) == {apply_matrix(g, w) for w in neighbors(v)}
    assert apply_matrix(g.inverse_gl2a(), gv) == v


@given(g=gl2a)
def test_edges(g):
    e = edge_from_matrix(g)
    assert are_adjacent(e.origin, e.terminus)
    assert edge_reverse(edge_reverse(e)) == e
    assert apply_matrix(g, EdgeNF(v_n(F2, 0), v_n(F2, 1))) == e


def test_vertex_u():
    v = VertexNF(3, T + ONE)
    assert v.u() == RatFn(T + ONE, T * T)
    assert VertexNF(-1, T).u() == RatFn(T ** 3)
