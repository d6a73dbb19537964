"""Tree labels, coset reduction, witnesses, and subgroup membership."""

import random

import pytest

from treehecke import (BallIndex, ELabel, Mat2, VLabel, i1_generators,
                       membership, random_pro_p_element, reduce_edge,
                       reduce_prop, reduce_vertex)
from treehecke.localring import FElem, params_create
from treehecke.tree import (edge_rep, mat_alpha, mat_beta, mat_diag, mat_l,
                            mat_ns, mat_u, mat_w, vertex_rep)
from treehecke.errors import OutOfBall, SingularMatrix


def _P(p=2, e=1, f=1, prec=7):
    return params_create(p, e, f, prec)


def test_ball_counts_small():
    for p, e, f in [(2, 1, 1), (3, 1, 1), (2, 1, 2)]:
        P = _P(p, e, f)
        q = P.q
        for radius in (0, 1, 2, 3):
            ball = BallIndex(P, radius)
            nverts = 1 + sum((q + 1) * q ** (d - 1)
                             for d in range(1, radius + 2))
            assert len(ball.vertices) == nverts
            inside = 1 + sum((q + 1) * q ** (d - 1)
                             for d in range(1, radius + 1))
            want_edges = 2 if radius == 0 else 2 * (inside - 1)
            assert len(ball.edges) == want_edges
            assert len(set(ball.edges)) == len(ball.edges)
            assert [ball.edge_pos[el] for el in ball.edges] == \
                list(range(len(ball.edges)))


def test_matrix_algebra():
    P = _P(3, 1, 1)
    rng = random.Random(421)
    for _ in range(20):
        g = random_pro_p_element(P, rng)
        h = random_pro_p_element(P, rng)
        assert g.mul(h).mul(h.inv()).eq(g)
        prod = g.mul(h)
        assert prod.det().eq(g.det().mul(h.det()))
    with pytest.raises(SingularMatrix):
        Mat2(P, FElem.one(P), FElem.one(P),
             FElem.one(P), FElem.one(P)).inv()


def test_membership_predicates():
    P = _P(2, 1, 2)
    one, zero = FElem.one(P), FElem.zero(P)
    ident = Mat2(P, one, zero, zero, one)
    assert all(membership(ident, g) for g in
               ("K", "I", "I1", "Z", "KZ", "IZ", "I1Z"))
    u = mat_u(P, FElem.teichmueller(P, 2))
    assert membership(u, "I1") and membership(u, "I") and membership(u, "K")
    ns = mat_ns(P)
    assert membership(ns, "K") and not membership(ns, "I")
    t = mat_diag(P, FElem.teichmueller(P, 2), one)
    assert membership(t, "I") and not membership(t, "I1")
    z = ident.pi_scale(1)
    assert membership(z, "Z") and membership(z, "I1Z")
    assert not membership(mat_beta(P), "KZ")
    lo = mat_l(P, FElem.pi_power(P, 1))
    assert membership(lo, "I1") and not membership(mat_l(P, one), "I")


def test_reduction_roundtrip_and_witnesses():
    P = _P(2, 1, 2)
    ball = BallIndex(P, 3)
    rng = random.Random(422)
    tested = 0
    for _ in range(60):
        lab = ball.edges[rng.randrange(len(ball.edges))]
        g = edge_rep(P, lab).mul(random_pro_p_element(P, rng))
        if rng.randrange(2):
            g = g.pi_scale(rng.randrange(-1, 2))
        got, wit = reduce_edge(ball, g)
        assert got == lab
        # witness factorization: g = rep * w * pi^k up to the recorded data
        assert membership(wit.mat, "IZ")
        lv, wv = reduce_vertex(P, g)
        assert membership(wv.mat, "KZ")
        lp, wp = reduce_prop(ball, g)
        assert membership(wp.mat, "I1Z")
        assert lp.edge == lab
        tested += 1
    assert tested == 60


def test_prop_fiber_splits_edge_cosets():
    P = _P(2, 1, 2)
    K = P.field
    ball = BallIndex(P, 2)
    lab = ELabel(0, 1, (1,))
    seen = set()
    for a in range(1, P.q):
        g = edge_rep(P, lab).mul(mat_diag(P, FElem.one(P),
                                          FElem.teichmueller(P, a)))
        lp, _ = reduce_prop(ball, g)
        assert lp.edge == lab
        seen.add(lp.fiber)
    assert len(seen) == P.q - 1


def test_out_of_ball():
    P = _P(2, 1, 1)
    ball = BallIndex(P, 2)
    deep = mat_alpha(P)
    g = deep
    for _ in range(4):
        g = g.mul(deep)
    with pytest.raises(OutOfBall):
        reduce_edge(ball, g)


def test_edge_endpoints():
    P = _P(3, 1, 1)
    ball = BallIndex(P, 2)
    root = ball.vertex_pos[VLabel(0, 0, ())]
    for i, el in enumerate(ball.edges):
        s, t = ball.edge_src[i], ball.edge_tgt[i]
        sv, tv = ball.vertices[s], ball.vertices[t]
        assert ball.pair2edge[(sv, tv)] == i
        assert abs(sv.dist - tv.dist) == 1
        assert max(sv.dist, tv.dist) <= max(el.radius, 1)
    id_pos = ball.edge_pos[ELabel(0, 0, ())]
    assert ball.edge_src[id_pos] == root


def test_i1_generators():
    for p, e, f in [(2, 1, 2), (5, 2, 1)]:
        P = _P(p, e, f, prec=8)
        gens = i1_generators(P, 4)
        assert len(gens) == 4 * 4 * f
        assert len({name for name, _ in gens}) == len(gens)
        for _, g in gens:
            assert membership(g, "I1")
    P = _P(2, 1, 2)
    rng = random.Random(423)
    for _ in range(20):
        assert membership(random_pro_p_element(P, rng), "I1")


def test_vertex_rep_roundtrip():
    P = _P(2, 1, 2)
    ball = BallIndex(P, 2)
    for v in ball.vertices:
        lab, _ = reduce_vertex(P, vertex_rep(P, v))
        assert lab == v
