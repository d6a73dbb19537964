"""Compactly induced modules as finitely supported formal sums over canonical
coset labels, with the left translation action and the Hecke operators.

Spaces, selected by FormalSum.tag:

    "vert"            induction from KZ, trivial coefficient
    "edge"            induction from IZ, trivial character
    ("edge", r, s)    induction from IZ, character diag -> a^r d^s on the
                      residue torus (trivial on pi)
    ("prop", r)       induction from I(1)Z, central character [nu] -> nu^r

Convention: translating a canonical representative, g * rep = rep' * h with
h in the inducing subgroup, gives  g . [rep] = chi(h) [rep'],
so coefficients pick up the character value of the witness.

Operator conventions on the trivial-character edge space (pi = 1 acts
trivially, central scalars too):

    T10  [g] = [g B]                       B = (0,1; pi,0)
    T12  [g] = sum_lam [g (1,0; pi lam, pi)]
    Tm10 [g] = sum_lam [g (pi,lam; 0,1)]           (equals T10 T12 T10)
    T    [v] = sum_lam [v (pi,lam; 0,1)] + [v A]   (vertex adjacency)

Pro-p level right Hecke action on I(1)-invariant vectors (H = residue torus
pairs, |H| = (q-1)^2 = 1 in characteristic p):

    v . TB   = B^{-1} v
    v . Tns  = sum_lam u(lam) ns^{-1} v            ns = (0,-1; 1,0)
    v . e_chi = sum_h chi(h) h^{-1} v
"""

from __future__ import annotations

from .errors import BadIndex, CharacterMismatch, FieldMismatch
from .gf import FqField, HChar
from .localring import FElem, LocalParams, params_create
from .tree import (
    BallIndex,
    ELabel,
    Mat2,
    PropLabel,
    VLabel,
    edge_rep,
    mat_alpha,
    mat_beta,
    mat_diag_teich,
    mat_ns,
    mat_u,
    prop_rep,
    reduce_edge,
    reduce_prop,
    reduce_vertex,
    vertex_rep,
)


class FormalSum:
    """Finitely supported map labels -> F_q; zero coefficients are dropped."""

    __slots__ = ("K", "tag", "c")

    def __init__(self, K: FqField, tag, coeffs=None):
        self.K = K
        self.tag = tag
        self.c = {}
        if coeffs:
            for k, v in coeffs.items():
                if v:
                    self.c[k] = v

    def copy(self) -> "FormalSum":
        out = FormalSum(self.K, self.tag)
        out.c = dict(self.c)
        return out

    def _compat(self, other: "FormalSum"):
        if self.tag != other.tag:
            raise BadIndex(f"mixing spaces {self.tag} and {other.tag}")
        if (self.K.p, self.K.f) != (other.K.p, other.K.f):
            raise FieldMismatch("formal sums over different fields")

    def add_term(self, label, code: int):
        if not code:
            return
        v = self.K.add(self.c.get(label, 0), code)
        if v:
            self.c[label] = v
        else:
            del self.c[label]

    def add(self, other: "FormalSum") -> "FormalSum":
        self._compat(other)
        out = self.copy()
        for k, v in other.c.items():
            out.add_term(k, v)
        return out

    def sub(self, other: "FormalSum") -> "FormalSum":
        return self.add(other.scale(self.K.neg(1)))

    def scale(self, code: int) -> "FormalSum":
        out = FormalSum(self.K, self.tag)
        if code:
            for k, v in self.c.items():
                out.c[k] = self.K.mul(code, v)
        return out

    def neg(self) -> "FormalSum":
        return self.scale(self.K.neg(1))

    def is_zero(self) -> bool:
        return not self.c

    def terms(self):
        return sorted(self.c.items())

    def __eq__(self, other):
        return (
            isinstance(other, FormalSum)
            and self.tag == other.tag
            and self.c == other.c
        )

    def __hash__(self):  # pragma: no cover - sums are not dict keys
        return hash((self.tag, tuple(self.terms())))

    def __repr__(self):
        if not self.c:
            return f"FormalSum({self.tag}, 0)"
        parts = [f"{v}*{format_label(k)}" for k, v in self.terms()]
        return f"FormalSum({self.tag}, " + " + ".join(parts) + ")"


def format_label(label) -> str:
    if isinstance(label, VLabel):
        lam = "".join(str(d) for d in label.digits) or "-"
        return f"V[i={label.side} n={label.n} lam={lam}]"
    if isinstance(label, ELabel):
        lam = "".join(str(d) for d in label.digits) or "-"
        return f"E[fam={label.family} n={label.n} lam={lam}]"
    if isinstance(label, PropLabel):
        return format_label(label.edge)[:-1] + f" fib={label.fiber}]"
    return str(label)


class Workspace:
    """A field/ring context plus an enumerated ball; every operator below
    works inside this ball and raises OutOfBall past it."""

    def __init__(self, p: int, e: int, f: int, radius: int,
                 prec: int | None = None, checked: bool = True):
        if prec is None:
            prec = radius + 4
        self.P: LocalParams = params_create(p, e, f, prec)
        self.K: FqField = self.P.field
        self.radius = radius
        self.checked = checked
        self.ball: BallIndex = BallIndex(self.P, radius, checked)
        self.cache: dict = {}

    @property
    def q(self) -> int:
        return self.P.q

    # -- deltas -------------------------------------------------------------
    def delta_edge(self, label: ELabel, tag="edge") -> FormalSum:
        return FormalSum(self.K, tag, {label: 1})

    def delta_vert(self, label: VLabel) -> FormalSum:
        return FormalSum(self.K, "vert", {label: 1})

    def delta_prop(self, label: PropLabel, r: int) -> FormalSum:
        return FormalSum(self.K, ("prop", r), {label: 1})

    def zero(self, tag) -> FormalSum:
        return FormalSum(self.K, tag)

    def unit_range(self):
        return range(1, self.q)

    def residue_teich(self, code: int) -> FElem:
        return FElem.teichmueller(self.P, code)


def _label_rep(ws: Workspace, tag, label) -> Mat2:
    if tag == "vert":
        return vertex_rep(ws.P, label)
    if tag == "edge" or (isinstance(tag, tuple) and tag[0] == "edge"):
        return edge_rep(ws.P, label)
    if isinstance(tag, tuple) and tag[0] == "prop":
        return prop_rep(ws.P, label)
    raise BadIndex(f"unknown tag {tag}")


def _reduce_term(ws: Workspace, tag, m: Mat2):
    """Reduce matrix to (label, character multiplier) for the given space."""
    K = ws.K
    if tag == "vert":
        lab, _ = reduce_vertex(ws.P, m, ws.checked)
        return lab, 1
    if tag == "edge":
        lab, _ = reduce_edge(ws.ball, m, ws.checked)
        return lab, 1
    if isinstance(tag, tuple) and tag[0] == "edge":
        r, s = tag[1], tag[2]
        lab, wit = reduce_edge(ws.ball, m, ws.checked)
        g0 = wit.mat.pi_scale(-wit.k)
        mult = K.mul(K.pow(g0.a.residue(), r), K.pow(g0.d.residue(), s))
        return lab, mult
    if isinstance(tag, tuple) and tag[0] == "prop":
        r = tag[1]
        lab, wit = reduce_prop(ws.ball, m, ws.checked)
        return lab, K.pow(wit.nu, r)
    raise BadIndex(f"unknown tag {tag}")


def act_left(ws: Workspace, g: Mat2, v: FormalSum) -> FormalSum:
    out = ws.zero(v.tag)
    for label, code in v.c.items():
        m = g.mul(_label_rep(ws, v.tag, label))
        lab, mult = _reduce_term(ws, v.tag, m)
        out.add_term(lab, ws.K.mul(code, mult))
    return out


def _act_right_matrix(ws: Workspace, v: FormalSum, m: Mat2) -> FormalSum:
    out = ws.zero(v.tag)
    for label, code in v.c.items():
        mm = _label_rep(ws, v.tag, label).mul(m)
        lab, mult = _reduce_term(ws, v.tag, mm)
        out.add_term(lab, ws.K.mul(code, mult))
    return out


# -- Iwahori-level operators on the edge space ---------------------------------


def _edge_only(v: FormalSum):
    if not (v.tag == "edge" or (isinstance(v.tag, tuple) and v.tag[0] == "edge")):
        raise BadIndex(f"operator needs an edge-space sum, got {v.tag}")


def op_t10(ws: Workspace, v: FormalSum) -> FormalSum:
    _edge_only(v)
    return _act_right_matrix(ws, v, mat_beta(ws.P))


def op_t12(ws: Workspace, v: FormalSum) -> FormalSum:
    _edge_only(v)
    P = ws.P
    out = ws.zero(v.tag)
    for lam in range(ws.q):
        x = FElem.teichmueller(P, lam).pi_mul(1) if lam else FElem.zero(P)
        m = Mat2(P, FElem.one(P), FElem.zero(P), x, FElem.pi_power(P, 1))
        out = out.add(_act_right_matrix(ws, v, m))
    return out


def op_tm10(ws: Workspace, v: FormalSum) -> FormalSum:
    _edge_only(v)
    P = ws.P
    out = ws.zero(v.tag)
    for lam in range(ws.q):
        x = FElem.teichmueller(P, lam) if lam else FElem.zero(P)
        m = Mat2(P, FElem.pi_power(P, 1), x, FElem.zero(P), FElem.one(P))
        out = out.add(_act_right_matrix(ws, v, m))
    return out


def op_spherical(ws: Workspace, v: FormalSum) -> FormalSum:
    """Vertex adjacency: sum over the q+1 neighbours."""
    if v.tag != "vert":
        raise BadIndex("spherical operator acts on the vertex space")
    P = ws.P
    out = ws.zero("vert")
    mats = [mat_alpha(P)]
    for lam in range(ws.q):
        x = FElem.teichmueller(P, lam) if lam else FElem.zero(P)
        mats.append(Mat2(P, FElem.pi_power(P, 1), x, FElem.zero(P), FElem.one(P)))
    for m in mats:
        out = out.add(_act_right_matrix(ws, v, m))
    return out


def transfer(ws: Workspace, v: FormalSum) -> FormalSum:
    """Edge space -> vertex space, [g]_IZ -> [g]_KZ (source vertex)."""
    _edge_only(v)
    out = ws.zero("vert")
    for label, code in v.c.items():
        src = ws.ball.vertices[ws.ball.edge_src[ws.ball.edge_pos[label]]]
        out.add_term(src, code)
    return out


# -- pro-p level: right Hecke action on I(1)-invariants -------------------------


def right_tbeta(ws: Workspace, v: FormalSum) -> FormalSum:
    return act_left(ws, mat_beta(ws.P).inv(), v)


def right_tns(ws: Workspace, v: FormalSum) -> FormalSum:
    P = ws.P
    nsi = mat_ns(P).inv()
    out = ws.zero(v.tag)
    for lam in range(ws.q):
        x = FElem.teichmueller(P, lam) if lam else FElem.zero(P)
        out = out.add(act_left(ws, mat_u(P, x).mul(nsi), v))
    return out


def right_echi(ws: Workspace, chi: HChar, v: FormalSum) -> FormalSum:
    K = ws.K
    if (chi.field.p, chi.field.f) != (K.p, K.f):
        raise CharacterMismatch("character over a different residue field")
    out = ws.zero(v.tag)
    for a in ws.unit_range():
        for d in ws.unit_range():
            h_inv = mat_diag_teich(ws.P, K.inv(a), K.inv(d))
            out = out.add(act_left(ws, h_inv, v).scale(chi.eval(a, d)))
    return out


# -- pro-p level: endomorphism action (right translation of representatives) ----
# On I(1)-invariant sums these agree with the right_* operators above; on a
# single coset delta they are the honest module endomorphisms, so they commute
# with every left translation.


def end_tbeta(ws: Workspace, v: FormalSum) -> FormalSum:
    return _act_right_matrix(ws, v, mat_beta(ws.P))


def end_tns(ws: Workspace, v: FormalSum) -> FormalSum:
    # double coset of n_s splits as the disjoint union of u([lam]) n_s cells
    P = ws.P
    ns = mat_ns(P)
    out = ws.zero(v.tag)
    for lam in range(ws.q):
        x = FElem.teichmueller(P, lam) if lam else FElem.zero(P)
        out = out.add(_act_right_matrix(ws, v, mat_u(P, x).mul(ns)))
    return out


def end_torus(ws: Workspace, a: int, d: int, v: FormalSum) -> FormalSum:
    """Right translation by diag([a], [d])^(-1), the cell underlying end_echi."""
    K = ws.K
    return _act_right_matrix(ws, v, mat_diag_teich(ws.P, K.inv(a), K.inv(d)))


def end_echi(ws: Workspace, chi: HChar, v: FormalSum) -> FormalSum:
    K = ws.K
    if (chi.field.p, chi.field.f) != (K.p, K.f):
        raise CharacterMismatch("character over a different residue field")
    out = ws.zero(v.tag)
    for a in ws.unit_range():
        for d in ws.unit_range():
            out = out.add(end_torus(ws, a, d, v).scale(chi.eval(a, d)))
    return out


# -- distinguished vectors ------------------------------------------------------


def family_s(ws: Workspace, n: int, k: int, tag="edge") -> FormalSum:
    """s_n^k = sum over n-digit offsets mu of (top digit)^k [s0(n, mu)];
    k = 0 uses the convention 0^0 = 1."""
    if n < 1:
        raise BadIndex("family starts at n = 1")
    out = ws.zero(tag)
    K = ws.K
    for label in _fam_labels(ws, 0, n):
        top = label.digits[n - 1]
        out.add_term(label, K.pow(top, k))
    return out


def family_beta_s(ws: Workspace, n: int, k: int, tag="edge") -> FormalSum:
    """The left translate beta . s_n^k.  Since B s0(n, mu) = s1(n, mu) w
    exactly, the terms are the canonical family-2 labels at level n+1."""
    if n < 1:
        raise BadIndex("family starts at n = 1")
    out = ws.zero(tag)
    K = ws.K
    for label in _fam_labels(ws, 0, n):
        top = label.digits[n - 1]
        out.add_term(ELabel(2, n + 1, label.digits), K.pow(top, k))
    return out


def family_t(ws: Workspace, n: int, k: int, tag="edge") -> FormalSum:
    """t_n^k = sum over mu in I_n of (top digit)^k
    [s0(n-1, mu mod pi^(n-1)) u([top digit]) w]."""
    if n < 1:
        raise BadIndex("family starts at n = 1")
    P, K = ws.P, ws.K
    from .tree import mat_w  # local import to keep module top uncluttered

    w = mat_w(P)
    out = ws.zero(tag)
    for label in _fam_labels(ws, 0, n):
        top = label.digits[n - 1]
        base = vertex_rep(P, VLabel(0, n - 1, label.digits[: n - 1]))
        x = FElem.teichmueller(P, top) if top else FElem.zero(P)
        m = base.mul(mat_u(P, x)).mul(w)
        lab, mult = _reduce_term(ws, tag, m)
        out.add_term(lab, K.mul(K.pow(top, k), mult))
    return out


def _fam_labels(ws: Workspace, family: int, n: int):
    from itertools import product

    q = ws.q
    ndig = n if family in (0, 1) else n - 1
    for digs in product(range(q), repeat=ndig):
        yield ELabel(family, n, tuple(reversed(digs)))


def support_radius(ws: Workspace, v: FormalSum):
    """Largest label radius in the support (None for 0)."""
    if not v.c:
        return None
    if v.tag == "vert":
        return max(l.dist for l in v.c)
    if isinstance(v.tag, tuple) and v.tag[0] == "prop":
        return max(l.edge.radius for l in v.c)
    return max(l.radius for l in v.c)


# -- comparison maps between levels ---------------------------------------------


def project_to_iz(ws: Workspace, chi: HChar, v: FormalSum) -> FormalSum:
    """I(1)Z-level sum -> IZ-level chi-twisted sum,
    [g rep, 1] -> chi~(fiber part) [g rep];  requires matching central
    character (chi(z, z) on the torus = nu^(r+s) must equal nu^r_prop)."""
    if not (isinstance(v.tag, tuple) and v.tag[0] == "prop"):
        raise BadIndex("projection starts from the pro-p space")
    r_prop = v.tag[1]
    K = ws.K
    if (chi.r + chi.s) % (K.q - 1) != r_prop % (K.q - 1):
        raise CharacterMismatch("central characters disagree")
    out = ws.zero(("edge", chi.r, chi.s))
    for label, code in v.c.items():
        mult = K.pow(label.fiber, chi.s)
        out.add_term(label.edge, K.mul(code, mult))
    return out


def embed_char_component(ws: Workspace, chi: HChar, v: FormalSum) -> FormalSum:
    """IZ-level chi-twisted sum -> I(1)Z-level sum along
    [g] -> - sum over units lam of lam^(-s) [g diag(1, [lam])]."""
    if not (isinstance(v.tag, tuple) and v.tag[0] == "edge"):
        raise BadIndex("embedding starts from a chi-twisted edge space")
    if (v.tag[1], v.tag[2]) != (chi.r % (ws.q - 1), chi.s % (ws.q - 1)):
        raise CharacterMismatch("sum is twisted by a different character")
    K = ws.K
    r_prop = (chi.r + chi.s) % (K.q - 1)
    out = ws.zero(("prop", r_prop))
    for label, code in v.c.items():
        for lam in ws.unit_range():
            w = K.neg(K.mul(code, K.pow(K.inv(lam), chi.s)))
            out.add_term(PropLabel(label, lam), w)
    return out
