"""Formal sums, translation actions, Hecke-type operators, level maps."""

import random

import pytest

from treehecke import (CharacterMismatch, ELabel, FormalSum, HChar, PropLabel,
                       VLabel, Workspace, act_left, embed_char_component,
                       end_echi, end_tbeta, end_tns, family_beta_s, family_s,
                       family_t, op_spherical, op_t10, op_t12, op_tm10,
                       project_to_iz, right_tbeta, right_tns, support_radius,
                       transfer)
from treehecke.errors import BadIndex
from treehecke.localring import FElem
from treehecke.tree import mat_diag_teich, mat_id, random_pro_p_element

ID_EDGE = ELabel(0, 0, ())
BETA_EDGE = ELabel(2, 1, ())


def _random_edge_sum(ws, rng, nterms=4, max_radius=1):
    v = ws.zero("edge")
    pool = [el for el in ws.ball.edges if el.radius <= max_radius]
    for _ in range(nterms):
        v.add_term(pool[rng.randrange(len(pool))], rng.randrange(1, ws.q))
    return v


def test_formal_sum_algebra(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    K = ws.K
    rng = random.Random(81)
    x = _random_edge_sum(ws, rng)
    y = _random_edge_sum(ws, rng)
    assert x.add(y) == y.add(x)
    assert x.add(x.neg()).is_zero()
    assert x.sub(y).add(y) == x
    assert x.scale(0).is_zero()
    two = K.add(1, 1)
    assert x.add(x) == x.scale(two)
    labels = [lab for lab, _ in x.terms()]
    assert labels == sorted(labels)
    z = ws.zero("edge")
    z.add_term(ID_EDGE, 3)
    z.add_term(ID_EDGE, K.neg(3))
    assert z.is_zero() and ID_EDGE not in z.c
    with pytest.raises(BadIndex):
        x.add(ws.zero("vert"))


def test_act_left_group_law(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    P = ws.P
    rng = random.Random(82)
    ident = mat_id(P)
    for _ in range(6):
        v = _random_edge_sum(ws, rng)
        g = random_pro_p_element(P, rng)
        h = random_pro_p_element(P, rng).mul(mat_diag_teich(P, 2, 1))
        assert act_left(ws, ident, v) == v
        assert act_left(ws, g.mul(h), v) == act_left(ws, g, act_left(ws, h, v))
        # central elements act trivially on every labelled space
        assert act_left(ws, ident.pi_scale(1), v) == v
    d = ws.delta_prop(PropLabel(ID_EDGE, 1), 1)
    g = random_pro_p_element(P, rng)
    h = random_pro_p_element(P, rng)
    assert act_left(ws, g.mul(h), d) == act_left(ws, g, act_left(ws, h, d))
    dv = ws.delta_vert(VLabel(0, 0, ()))
    assert act_left(ws, random_pro_p_element(P, rng), dv) == dv


def test_prop_center_twists_by_tag(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    K = ws.K
    d = ws.delta_prop(PropLabel(ID_EDGE, 1), 1)
    z = mat_diag_teich(ws.P, 2, 2)
    got = act_left(ws, z, d)
    assert got == d.scale(K.pow(2, 1))
    d0 = ws.delta_prop(PropLabel(ID_EDGE, 1), 0)
    assert act_left(ws, z, d0) == d0


def test_operators_commute_with_left_action(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    rng = random.Random(83)
    for op in (op_t10, op_t12, op_tm10):
        for _ in range(4):
            v = _random_edge_sum(ws, rng)
            g = random_pro_p_element(ws.P, rng)
            assert op(ws, act_left(ws, g, v)) == act_left(ws, g, op(ws, v))


def test_transfer_kills_t12_image(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    rng = random.Random(84)
    for _ in range(6):
        v = _random_edge_sum(ws, rng)
        assert transfer(ws, op_t12(ws, v)).is_zero()
    assert not transfer(ws, ws.delta_edge(ID_EDGE)).is_zero()


def test_spherical_neighbour_count(ws_factory):
    ws = ws_factory(3, 1, 1, 2)
    dv = ws.delta_vert(VLabel(0, 0, ()))
    nb = op_spherical(ws, dv)
    assert len(nb.c) == ws.q + 1
    assert all(lab.dist == 1 for lab in nb.c)


def test_family_support_shapes(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    q = ws.q
    for n in (1, 2):
        for k in (0, 1, q - 2):
            want = q ** n if k == 0 else (q - 1) * q ** (n - 1)
            fs = family_s(ws, n, k)
            assert len(fs.c) == want and support_radius(ws, fs) == n
            assert all(l.family == 0 and l.n == n for l in fs.c)
            ft = family_t(ws, n, k)
            assert len(ft.c) == want and support_radius(ws, ft) == n
    fb = family_beta_s(ws, 1, 1)
    assert all(l.family == 2 and l.n == 2 for l in fb.c)
    assert support_radius(ws, fb) == 2
    assert len(fb.c) == q - 1


def test_beta_family_is_left_translate(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    from treehecke.tree import mat_beta

    for k in (0, 1, 2):
        got = act_left(ws, mat_beta(ws.P), family_s(ws, 1, k))
        assert got == family_beta_s(ws, 1, k)


def test_project_embed_retraction(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    K = ws.K
    rng = random.Random(85)
    for chi in [HChar(K, 0, 0), HChar(K, 1, 0), HChar(K, 1, 2)]:
        r_prop = (chi.r + chi.s) % (K.q - 1)
        d = ws.zero(("prop", r_prop))
        for _ in range(3):
            el = ws.ball.edges[rng.randrange(len(ws.ball.edges))]
            if el.radius > 1:
                continue
            d.add_term(PropLabel(el, rng.randrange(1, ws.q)),
                       rng.randrange(1, ws.q))
        w = project_to_iz(ws, chi, d)
        assert project_to_iz(ws, chi, embed_char_component(ws, chi, w)) == w
    with pytest.raises(CharacterMismatch):
        project_to_iz(ws, HChar(K, 1, 0),
                      ws.delta_prop(PropLabel(ID_EDGE, 1), 0))
    with pytest.raises(CharacterMismatch):
        embed_char_component(ws, HChar(K, 1, 0),
                             project_to_iz(ws, HChar(K, 0, 0),
                                           ws.delta_prop(PropLabel(ID_EDGE, 1), 0)))


def test_end_ops_are_endomorphisms(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    K = ws.K
    rng = random.Random(86)
    chi = HChar(K, 1, 0)
    ops = [end_tbeta, end_tns, lambda w, v: end_echi(w, chi, v)]
    for op in ops:
        for _ in range(4):
            d = ws.zero(("prop", 1))
            d.add_term(PropLabel(ID_EDGE, rng.randrange(1, ws.q)),
                       rng.randrange(1, ws.q))
            d.add_term(PropLabel(ELabel(0, 1, (rng.randrange(ws.q),)),
                                 rng.randrange(1, ws.q)),
                       rng.randrange(1, ws.q))
            g = random_pro_p_element(ws.P, rng)
            assert op(ws, act_left(ws, g, d)) == act_left(ws, g, op(ws, d))


def test_right_matches_end_on_identity_coset(ws_factory):
    ws = ws_factory(2, 1, 2, 2)
    for r in (0, 1):
        d = ws.delta_prop(PropLabel(ID_EDGE, 1), r)
        assert right_tbeta(ws, d) == end_tbeta(ws, d)
        assert right_tns(ws, d) == end_tns(ws, d)
