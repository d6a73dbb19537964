"""Cosets of GL_2(F) on the Bruhat-Tits tree: canonical labels and reductions.

Vertices are KZ-cosets.  The canonical transversal has two sides: side 0 are
the upper-triangular representatives s0(n, lam) = (pi^n, lam; 0, 1) with lam
an n-digit Teichmueller vector (distance n from the root), side 1 the
lower-triangular s1(n, lam) = (1, 0; pi*lam, pi^(n+1)) (distance n+1).

Oriented edges are IZ-cosets; [g] has source vertex gKZ and target gAKZ
(A = diag(1, pi)), and the map to ordered adjacent vertex pairs is a
bijection, which is how arbitrary matrices are reduced: reduce both vertices
and look the pair up among the canonical edge labels of the enumerated ball.
Four canonical families:

    fam 0:  s0(n, lam)            n >= 0   (toward the root on side 0;
                                            n = 0 is the root edge [id])
    fam 1:  s0(n, lam) * B        n >= 1   (away from the root, side 0)
    fam 2:  s1(n-1, lam) * w      n >= 1   (toward the root on side 1;
                                            n = 1 is the reversed root edge [B])
    fam 3:  s1(n-1, lam) * w * B  n >= 2   (away from the root, side 1)

with B = (0, 1; pi, 0) = A*w.  An edge's ball radius is the larger endpoint
distance, except the two orientations of the root edge which get radius 0;
with that convention the radius-N edge set is exactly the four families above
with indices <= N.

Pro-p level: I(1)Z-cosets refine edges by a residue-torus fiber; reduce_prop
splits the IZ witness into a central part pi^k * [nu] * (1 + pi*...), the
fiber diag(1, [lam]) and an I(1) remainder.

Every reduction returns a witness matrix that checked mode verifies by the
membership predicates.
"""

from __future__ import annotations

from itertools import product
from typing import NamedTuple

from .errors import (
    BadIndex,
    OutOfBall,
    PrecisionExhausted,
    SingularMatrix,
)
from .localring import FElem, LocalParams, from_digits, teich, truncate_digits


class Mat2:
    __slots__ = ("P", "a", "b", "c", "d", "_det")

    def __init__(self, P: LocalParams, a: FElem, b: FElem, c: FElem, d: FElem):
        self.P = P
        self.a, self.b, self.c, self.d = a, b, c, d
        self._det = None

    @staticmethod
    def from_ints(P, a, b, c, d) -> "Mat2":
        return Mat2(P, *(FElem.from_int(P, x) for x in (a, b, c, d)))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def mul(self, o: "Mat2") -> "Mat2":
        a = self.a.mul(o.a).add(self.b.mul(o.c))
        b = self.a.mul(o.b).add(self.b.mul(o.d))
        c = self.c.mul(o.a).add(self.d.mul(o.c))
        d = self.c.mul(o.b).add(self.d.mul(o.d))
        return Mat2(self.P, a, b, c, d)

    def det(self) -> FElem:
        if self._det is None:
            self._det = self.a.mul(self.d).sub(self.b.mul(self.c))
        return self._det

    def inv(self) -> "Mat2":
        dt = self.det()
        if dt.is_zero():
            raise SingularMatrix("determinant zero at tracked precision")
        di = dt.inv()
        return Mat2(
            self.P,
            self.d.mul(di), self.b.neg().mul(di),
            self.c.neg().mul(di), self.a.mul(di),
        )

    def pi_scale(self, j: int) -> "Mat2":
        """Central multiplication by pi^j."""
        return Mat2(self.P, *(x.pi_mul(j) for x in self.entries()))

    def eq(self, o: "Mat2") -> bool:
        return all(x.eq(y) for x, y in zip(self.entries(), o.entries()))

    def __repr__(self):
        return f"Mat2({self.a}, {self.b}; {self.c}, {self.d})"


# -- standard elements -------------------------------------------------------


def mat_alpha(P) -> Mat2:
    return Mat2(P, FElem.one(P), FElem.zero(P), FElem.zero(P), FElem.pi_power(P, 1))


def mat_beta(P) -> Mat2:
    return Mat2(P, FElem.zero(P), FElem.one(P), FElem.pi_power(P, 1), FElem.zero(P))


def mat_w(P) -> Mat2:
    return Mat2(P, FElem.zero(P), FElem.one(P), FElem.one(P), FElem.zero(P))


def mat_ns(P) -> Mat2:
    """(0, -1; 1, 0)."""
    return Mat2(P, FElem.zero(P), FElem.one(P).neg(), FElem.one(P), FElem.zero(P))


def mat_id(P) -> Mat2:
    return Mat2(P, FElem.one(P), FElem.zero(P), FElem.zero(P), FElem.one(P))


def mat_u(P, x: FElem) -> Mat2:
    """Upper unipotent (1, x; 0, 1)."""
    return Mat2(P, FElem.one(P), x, FElem.zero(P), FElem.one(P))


def mat_l(P, x: FElem) -> Mat2:
    """Lower unipotent (1, 0; x, 1)."""
    return Mat2(P, FElem.one(P), FElem.zero(P), x, FElem.one(P))


def mat_diag(P, x: FElem, y: FElem) -> Mat2:
    return Mat2(P, x, FElem.zero(P), FElem.zero(P), y)


def mat_diag_teich(P, u_code: int, v_code: int) -> Mat2:
    return mat_diag(P, FElem.teichmueller(P, u_code), FElem.teichmueller(P, v_code))


# -- membership predicates ----------------------------------------------------


def _integral(x: FElem) -> bool:
    v = x.val()
    return v is None or v >= 0


def _val_ge(x: FElem, k: int) -> bool:
    v = x.val()
    return v is None or v >= k


def membership(g: Mat2, S: str) -> bool:
    """Exact-at-tracked-precision membership in one of the standard groups."""
    if S == "K":
        dv = g.det().val()
        return all(_integral(x) for x in g.entries()) and dv == 0
    if S == "I":
        return membership(g, "K") and _val_ge(g.c, 1)
    if S == "I1":
        P = g.P
        one = FElem.one(P)
        return (
            membership(g, "I")
            and _val_ge(g.a.sub(one), 1)
            and _val_ge(g.d.sub(one), 1)
        )
    if S == "Z":
        return g.b.is_zero() and g.c.is_zero() and g.a.sub(g.d).is_zero() and not g.a.is_zero()
    if S == "KZ":
        vals = [x.val() for x in g.entries() if x.val() is not None]
        if not vals:
            return False
        m = min(vals)
        return membership(g.pi_scale(-m), "K")
    if S in ("IZ", "I1Z"):
        k = g.a.val()
        if k is None:
            return False
        g0 = g.pi_scale(-k)
        if not membership(g0, "I"):
            return False
        if S == "IZ":
            return True
        return g0.a.residue() == g0.d.residue()
    raise BadIndex(f"unknown group {S!r}")


# -- canonical labels ---------------------------------------------------------


class VLabel(NamedTuple):
    side: int
    n: int
    digits: tuple

    @property
    def dist(self) -> int:
        return self.n + self.side


class ELabel(NamedTuple):
    family: int
    n: int
    digits: tuple

    @property
    def radius(self) -> int:
        if self.family == 0 and self.n == 0:
            return 0
        if self.family == 2 and self.n == 1:
            return 0
        return self.n


class PropLabel(NamedTuple):
    edge: ELabel
    fiber: int  # nonzero residue code: the diag(1, [fiber]) coset coordinate


class Witness(NamedTuple):
    mat: Mat2
    group: str
    k: int  # central pi-exponent stripped
    nu: int  # central Teichmueller unit residue (1 when untracked)


def _digit_felem(P, digits) -> FElem:
    return FElem.from_ring(P, from_digits(P, digits))


def vertex_rep(P: LocalParams, v: VLabel) -> Mat2:
    if len(v.digits) != v.n:
        raise BadIndex("digit vector length disagrees with level")
    lam = _digit_felem(P, v.digits)
    if v.side == 0:
        return Mat2(P, FElem.pi_power(P, v.n), lam, FElem.zero(P), FElem.one(P))
    return Mat2(P, FElem.one(P), FElem.zero(P), lam.pi_mul(1), FElem.pi_power(P, v.n + 1))


def edge_rep(P: LocalParams, el: ELabel) -> Mat2:
    fam, n, digits = el
    if fam == 0:
        return vertex_rep(P, VLabel(0, n, digits))
    if fam == 1:
        if n < 1:
            raise BadIndex("family 1 starts at n = 1")
        return vertex_rep(P, VLabel(0, n, digits)).mul(mat_beta(P))
    if fam == 2:
        if n < 1:
            raise BadIndex("family 2 starts at n = 1")
        return vertex_rep(P, VLabel(1, n - 1, digits)).mul(mat_w(P))
    if fam == 3:
        if n < 2:
            raise BadIndex("family 3 starts at n = 2")
        return vertex_rep(P, VLabel(1, n - 1, digits)).mul(mat_w(P)).mul(mat_beta(P))
    raise BadIndex(f"unknown family {fam}")


def prop_rep(P: LocalParams, pl: PropLabel) -> Mat2:
    return edge_rep(P, pl.edge).mul(mat_diag_teich(P, 1, pl.fiber))


# -- vertex reduction ---------------------------------------------------------


def reduce_vertex(P: LocalParams, g: Mat2, checked: bool = True):
    """Canonical KZ-coset label of g, with the witness rep^(-1) * g in KZ.

    Deterministic column Hermite form: strip the central pi-power, pivot the
    bottom row at its min-valuation entry (ties keep the (2,2) entry), clear,
    normalize both pivots to pi-powers, reduce the corner entry modulo the
    first pivot, strip the center again, then read the label off
    (pi^a, mu; 0, pi^b):  b = 0 gives side 0 level a offset mu; otherwise
    side 1 level a+b-1 with offset trunc(pi^(b-1) mu^(-1)) (0 when mu = 0,
    which forces a = 0).
    """
    vals = [x.val() for x in g.entries()]
    vals = [v for v in vals if v is not None]
    if not vals:
        raise SingularMatrix("zero matrix")
    m = min(vals)
    a, b, c, d = g.pi_scale(-m).entries()
    vc, vd = c.val(), d.val()
    if vd is None or (vc is not None and vc < vd):
        a, b = b, a
        c, d = d, c
        vc, vd = vd, vc
    if vd is None:
        raise SingularMatrix("determinant zero at tracked precision")
    if vc is not None:
        t = c.div(d)
        a = a.sub(t.mul(b))
    # now (a, b; 0, d)
    ja, ua = a.unit_scale_to_pi_power()
    kd, ud = d.unit_scale_to_pi_power()
    b = b.div(ud)
    bdig = tuple(b.digit(i) for i in range(ja))
    vb = next((i for i, x in enumerate(bdig) if x), None)
    m2 = min(ja, kd) if vb is None else min(ja, kd, vb)
    ja, kd = ja - m2, kd - m2
    bdig = bdig[m2:]
    if kd == 0:
        label = VLabel(0, ja, bdig)
    elif all(x == 0 for x in bdig):
        if ja != 0:
            raise BadIndex("normalization failed")  # unreachable
        label = VLabel(1, kd - 1, (0,) * (kd - 1))
    else:
        n = ja + kd - 1
        mu = _digit_felem(P, bdig)
        lam = FElem.pi_power(P, kd - 1).mul(mu.inv())
        label = VLabel(1, n, tuple(lam.digit(i) for i in range(n)))
    wit_mat = vertex_rep(P, label).inv().mul(g)
    if checked and not membership(wit_mat, "KZ"):
        raise BadIndex(f"vertex witness not in KZ for label {label}")
    return label, Witness(wit_mat, "KZ", 0, 1)


# -- ball enumeration ---------------------------------------------------------


FAMILY_RANGE_START = (0, 1, 1, 2)  # first n of each edge family


def _all_digit_vectors(q, n):
    return [tuple(reversed(v)) for v in product(range(q), repeat=n)] if n else [()]


class BallIndex:
    """Canonical edge labels of radius <= N, vertex labels of distance
    <= N+1, and the vertex-pair lookup used by edge reduction."""

    def __init__(self, P: LocalParams, radius: int, checked: bool = True):
        if radius < 0:
            raise BadIndex("radius must be >= 0")
        self.P = P
        self.radius = radius
        q = P.q

        self.vertices: list[VLabel] = [VLabel(0, 0, ())]
        for dist in range(1, radius + 2):
            for digs in _all_digit_vectors(q, dist):
                self.vertices.append(VLabel(0, dist, digs))
            for digs in _all_digit_vectors(q, dist - 1):
                self.vertices.append(VLabel(1, dist - 1, digs))
        self.vertex_pos = {v: i for i, v in enumerate(self.vertices)}

        labels: list[ELabel] = [ELabel(0, 0, ()), ELabel(2, 1, ())]
        for n in range(1, radius + 1):
            for digs in _all_digit_vectors(q, n):
                labels.append(ELabel(0, n, digs))
                labels.append(ELabel(1, n, digs))
            if n >= 2:
                for digs in _all_digit_vectors(q, n - 1):
                    labels.append(ELabel(2, n, digs))
                    labels.append(ELabel(3, n, digs))
        labels.sort(key=lambda el: (el.radius, el.family, el.n, el.digits))
        self.edges = labels
        self.edge_pos = {el: i for i, el in enumerate(labels)}
        self.edge_reps: list[Mat2] = []
        self.edge_src: list[int] = []
        self.edge_tgt: list[int] = []
        self.pair2edge: dict = {}
        alpha = mat_alpha(P)
        for i, el in enumerate(labels):
            rep = edge_rep(P, el)
            src, _ = reduce_vertex(P, rep, checked)
            tgt, _ = reduce_vertex(P, rep.mul(alpha), checked)
            if checked:
                if max(src.dist, tgt.dist) > max(el.radius, 1):
                    raise BadIndex(f"edge {el} endpoints outside claimed radius")
                if abs(src.dist - tgt.dist) != 1:
                    raise BadIndex(f"edge {el} endpoints not adjacent")
            key = (src, tgt)
            if key in self.pair2edge:
                raise BadIndex(f"duplicate vertex pair for {el}")
            self.pair2edge[key] = i
            self.edge_reps.append(rep)
            self.edge_src.append(self.vertex_pos[src])
            self.edge_tgt.append(self.vertex_pos[tgt])

    def edge_radius(self, i: int) -> int:
        return self.edges[i].radius


def enumerate_ball(P: LocalParams, radius: int, checked: bool = True) -> BallIndex:
    return BallIndex(P, radius, checked)


# -- edge and pro-p reduction --------------------------------------------------


def reduce_edge(ball: BallIndex, g: Mat2, checked: bool = True):
    P = ball.P
    src, _ = reduce_vertex(P, g, checked)
    tgt, _ = reduce_vertex(P, g.mul(mat_alpha(P)), checked)
    idx = ball.pair2edge.get((src, tgt))
    if idx is None:
        raise OutOfBall(f"edge pair {(src, tgt)} outside radius {ball.radius}")
    wit_mat = ball.edge_reps[idx].inv().mul(g)
    if checked and not membership(wit_mat, "IZ"):
        raise BadIndex(f"edge witness not in IZ for {ball.edges[idx]}")
    k = wit_mat.a.val()
    g0 = wit_mat.pi_scale(-k)
    nu = g0.a.residue()
    return ball.edges[idx], Witness(wit_mat, "IZ", k, nu)


def reduce_prop(ball: BallIndex, g: Mat2, checked: bool = True):
    """I(1)Z-coset label (edge, fiber) plus the central Teichmueller unit nu
    of the stripped Z-part; the final witness lies in I(1)Z with trivial
    fiber."""
    P = ball.P
    el, wit = reduce_edge(ball, g, checked)
    g0 = wit.mat.pi_scale(-wit.k)
    K = P.field
    nu = g0.a.residue()
    fiber = K.div(g0.d.residue(), nu)
    label = PropLabel(el, fiber)
    wit_mat = prop_rep(P, label).inv().mul(g)
    if checked and not membership(wit_mat, "I1Z"):
        raise BadIndex(f"pro-p witness not in I(1)Z for {label}")
    return label, Witness(wit_mat, "I1Z", wit.k, nu)


# -- pro-p Iwahori generators ---------------------------------------------------


def i1_generators(P: LocalParams, M: int):
    """Topological generators of the pro-p Iwahori modulo level M: the four
    elementary families with one Teichmueller digit from an F_p-basis of F_q
    at each depth j < M.  Count 4*M*f.
    """
    gens = []
    basis = [P.field.from_coeffs(tuple(1 if j == i else 0 for j in range(P.f))) for i in range(P.f)]
    one = FElem.one(P)
    for j in range(M):
        for bcode in basis:
            x = FElem.teichmueller(P, bcode).pi_mul(j)
            gens.append((f"u[{bcode}]pi^{j}", mat_u(P, x)))
            y = FElem.teichmueller(P, bcode).pi_mul(j + 1)
            gens.append((f"l[{bcode}]pi^{j + 1}", mat_l(P, y)))
            gens.append((f"d1[{bcode}]pi^{j + 1}", mat_diag(P, one.add(y), one)))
            gens.append((f"d2[{bcode}]pi^{j + 1}", mat_diag(P, one, one.add(y))))
    return gens


def random_pro_p_element(P: LocalParams, rng, depth: int = 3) -> Mat2:
    """A random element of the pro-p Iwahori via the Iwahori factorization
    lower * diagonal * upper with random digit data."""
    q = P.q

    def rand_int(start):
        digs = [0] * start + [rng.randrange(q) for _ in range(depth)]
        return _digit_felem(P, tuple(digs))

    one = FElem.one(P)
    lower = mat_l(P, rand_int(1))
    diag = mat_diag(P, one.add(rand_int(1)), one.add(rand_int(1)))
    upper = mat_u(P, rand_int(0))
    return lower.mul(diag).mul(upper)
