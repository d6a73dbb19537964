"""Named verification checks.

Each check verifies one statement about the universal supersingular module
in the Iwahori-Hecke model: an operator relation, a reduction identity, an
invariance or non-invariance claim, a dimension count, an action-table cell,
or a comparison between the Iwahori and pro-p induced spaces.  A check runs
inside a Workspace for one context (p, e, f, ball radius N) and returns a
CheckOutcome; the harness turns outcomes into report rows.

Expected values carry a provenance word: "stated" means the target value is
asserted by the statement being checked, "derived" means the value was frozen
from this package's own oracle and is re-derived on every run.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BadIndex, CutoffExceeded, OutOfBall
from .gf import HChar, interpolate, power_sum
from .linalg import Echelon, fp_kernel, fp_rank, fq_mat_to_fp, fp_vec_to_fq
from .localring import FElem, carry_Z
from .tree import (ELabel, PropLabel, Mat2, edge_rep, i1_generators, mat_beta,
                   mat_diag, mat_diag_teich, mat_l, mat_u, mat_w, membership,
                   random_pro_p_element, reduce_edge, reduce_prop,
                   reduce_vertex)
from .spaces import (FormalSum, act_left, embed_char_component, end_echi,
                     end_tbeta, end_tns, end_torus, family_beta_s, family_s,
                     family_t, op_spherical, op_t10, op_t12, op_tm10,
                     project_to_iz, right_echi, right_tbeta, right_tns,
                     transfer)
from .oracle import (decide_ideal, decide_im_spherical, edge_vector,
                     equal_in_quotient, hecke_word_normal_form,
                     invariant_space, in_solution_space, is_invariant,
                     span_search, vert_vector, _edges_upto, _im_T_echelon)

ID_EDGE = ELabel(0, 0, ())
BETA_EDGE = ELabel(2, 1, ())

# quotient dimensions of the I(1)-invariants on B(N), frozen from the solver
INVARIANT_DIMS = {
    (2, 1, 2): {1: 2, 2: 4, 3: 8, 4: 12},
    (5, 2, 1): {1: 2, 2: 3, 3: 5, 4: 7},
    (3, 2, 1): {1: 2, 2: 3, 3: 5},
    (2, 2, 1): {1: 2, 2: 2, 3: 3},
}


@dataclass
class CheckOutcome:
    status: str                  # "pass" | "fail" | "inconclusive"
    witness: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CheckSpec:
    id: str
    anchor: str                  # the statement the check monitors
    provenance: str              # "stated" | "derived"
    runner: object
    min_ball: int = 2            # smallest usable ball radius N
    min_q: int = 2               # smallest residue field the statement covers
    only_generic: bool = False   # restrict to q > 3 and ef > 1
    only_contexts: tuple = ()    # restrict to explicit (p, e, f) triples

    def wants(self, p, e, f, N):
        q = p ** f
        if N < self.min_ball or q < self.min_q:
            return False
        if self.only_generic and (q <= 3 or e * f <= 1):
            return False
        if self.only_contexts and (p, e, f) not in self.only_contexts:
            return False
        return True


REGISTRY: dict = {}


def _register(id, anchor, provenance, **kw):
    def deco(fn):
        if id in REGISTRY:
            raise BadIndex(f"duplicate check id {id}")
        REGISTRY[id] = CheckSpec(id, anchor, provenance, fn, **kw)
        return fn
    return deco


def all_checks():
    return [REGISTRY[k] for k in sorted(REGISTRY)]


# -- small helpers -----------------------------------------------------------------


def _teich(P, code):
    return FElem.teichmueller(P, code) if code else FElem.zero(P)


def _label_of(ws, m: Mat2) -> ELabel:
    """The edge label of the coset of m."""
    v = act_left(ws, m, ws.delta_edge(ID_EDGE))
    (label, code), = v.terms()
    if code != 1:
        raise BadIndex("coset representative came back rescaled")
    return label


def _cert_info(cert):
    return {"status": cert.status, "route": cert.route,
            "complete": cert.complete, "detail": cert.detail}


def _fail(name, **extra):
    w = {"counterexample": name}
    w.update(extra)
    return CheckOutcome("fail", w)


def _im_t12_echelon(ws, cutoff):
    """Echelon of the images T12(delta_e), e of radius <= cutoff (the image
    of T12 alone, without the kernel generators)."""
    key = ("imt12", cutoff)
    got = ws.cache.get(key)
    if got is not None:
        return got
    if cutoff + 1 > ws.radius:
        raise CutoffExceeded(f"cutoff {cutoff} needs ball radius >= {cutoff + 1}")
    E = Echelon(ws.K, len(ws.ball.edges))
    gens = []
    for e in _edges_upto(ws, cutoff):
        E.insert(edge_vector(ws, op_t12(ws, ws.delta_edge(e))))
        gens.append(e)
    ws.cache[key] = (E, gens)
    return E, gens


def _t12_member(ws, cfg, v, cutoff):
    """Membership of v in the span of T12-images up to the cutoff.  Returns
    (verdict, combination): verdict "member" carries an explicit combination,
    "clamped" means the configured max_cutoff hid the natural cutoff."""
    use = min(cutoff, cfg.max_cutoff)
    E, gens = _im_t12_echelon(ws, use)
    sol = E.solve(edge_vector(ws, v))
    if sol is None:
        return ("clamped" if use < cutoff else "not_found"), None
    return "member", {gens[i]: c for i, c in sol.items()}


def _digit_tuples(q, n):
    out = [()]
    for _ in range(n):
        out = [t + (d,) for t in out for d in range(q)]
    return out


def _t_like(ws, n, cfun, k):
    """sum over mu in I_n of cfun(head) times a top-digit power, the head
    being [mu]_{n-1}: cfun(head) mu_{n-1}^k [g0(n-1,head) u([mu_{n-1}]) w]."""
    P, K = ws.P, ws.K
    out = ws.zero("edge")
    w = mat_w(P)
    for head in _digit_tuples(K.q, n - 1):
        c = cfun(head)
        if c == 0:
            continue
        base = edge_rep(P, ELabel(0, n - 1, head))
        for top in range(K.q):
            m = base.mul(mat_u(P, _teich(P, top))).mul(w)
            out = out.add(act_left(ws, m, ws.delta_edge(ID_EDGE))
                          .scale(K.mul(c, K.pow(top, k))))
    return out


def _s_like(ws, n, afun, family=0):
    """sum over mu in I_n of afun(mu) [g0(n,mu)] (family 0) or [g0(n,mu) B]
    (family 1); these labels are already canonical."""
    out = ws.zero("edge")
    for mu in _digit_tuples(ws.q, n):
        c = afun(mu)
        if c:
            out.add_term(ELabel(family, n, mu), c)
    return out


def _beta_s_like(ws, n, cfun):
    """sum over mu in I_n of cfun(mu) [B g0(n,mu)]: canonical family-2
    labels at level n + 1."""
    out = ws.zero("edge")
    for mu in _digit_tuples(ws.q, n):
        c = cfun(mu)
        if c:
            out.add_term(ELabel(2, n + 1, mu), c)
    return out


def _neg_pi_unipotent(P, j, lower=False):
    """u(-pi^j), or the lower-triangular transpose."""
    x = FElem.one(P).neg().pi_mul(j)
    return mat_l(P, x) if lower else mat_u(P, x)


def _vertex_parent_groups(ws, dist):
    """Group the vertices at the given distance by their unique neighbour
    at distance dist - 1 (siblings share one parent)."""
    groups = {}
    for v in ws.ball.vertices:
        if v.dist != dist:
            continue
        nb = op_spherical(ws, ws.delta_vert(v))
        parents = [u for u, _ in nb.terms() if u.dist == dist - 1]
        if len(parents) != 1:
            raise BadIndex(f"vertex {v} has {len(parents)} inward neighbours")
        groups.setdefault(parents[0], []).append(v)
    return groups


def _predicted_basis(ws, N):
    """The claimed invariant basis restricted to B(N): [id], [beta], the
    s_n^(p^l) for 2 <= n <= N, and the beta s_m^(p^l) for 2 <= m <= N-1."""
    K = ws.K
    vecs = [("[id]", ws.delta_edge(ID_EDGE)), ("[beta]", ws.delta_edge(BETA_EDGE))]
    for n in range(2, N + 1):
        for l in range(K.f):
            vecs.append((f"s_{n}^(p^{l})", family_s(ws, n, pow(K.p, l))))
    for m in range(2, N):
        for l in range(K.f):
            vecs.append((f"beta_s_{m}^(p^{l})", family_beta_s(ws, m, pow(K.p, l))))
    return vecs


def _quotient_residual(ws, v, gen_dist):
    """Transfer v and reduce against the echelon of spherical images: two
    edge sums are equal in the quotient iff their residuals agree."""
    E, _ = _im_T_echelon(ws, gen_dist)
    res, _ = E.reduce(vert_vector(ws, transfer(ws, v)))
    return res


def _torus_translates(ws, v):
    """act_left(diag([a],[d])^(-1), v) for all unit pairs; the expensive part
    of every idempotent evaluation, shared across characters."""
    K = ws.K
    out = {}
    for a in ws.unit_range():
        for d in ws.unit_range():
            h_inv = mat_diag_teich(ws.P, K.inv(a), K.inv(d))
            out[(a, d)] = act_left(ws, h_inv, v)
    return out


def _torus_translates_right(ws, v):
    """end_torus(a, d, v) for all unit pairs; shares the coset reductions
    across the characters exactly as _torus_translates does on the left."""
    return {(a, d): end_torus(ws, a, d, v)
            for a in ws.unit_range() for d in ws.unit_range()}


def _echi_from(ws, chi, translates, tag):
    out = ws.zero(tag)
    for (a, d), tv in translates.items():
        out = out.add(tv.scale(chi.eval(a, d)))
    return out


# -- infrastructure ----------------------------------------------------------------


@_register("infra_field_axioms",
           anchor="coefficient field arithmetic: F_q axioms and Frobenius "
                  "additivity",
           provenance="derived", min_ball=1)
def check_field_axioms(ws, cfg, rng):
    K = ws.K
    q = K.q
    if q <= 9:
        triples = [(x, y, z) for x in range(q) for y in range(q) for z in range(q)]
    else:
        triples = [(rng.randrange(q), rng.randrange(q), rng.randrange(q))
                   for _ in range(4000)]
    for x, y, z in triples:
        if K.add(x, y) != K.add(y, x) or K.mul(x, y) != K.mul(y, x):
            return _fail("commutativity", x=x, y=y)
        if K.add(K.add(x, y), z) != K.add(x, K.add(y, z)):
            return _fail("add associativity", x=x, y=y, z=z)
        if K.mul(K.mul(x, y), z) != K.mul(x, K.mul(y, z)):
            return _fail("mul associativity", x=x, y=y, z=z)
        if K.mul(x, K.add(y, z)) != K.add(K.mul(x, y), K.mul(x, z)):
            return _fail("distributivity", x=x, y=y, z=z)
        if K.pow(K.add(x, y), K.p) != K.add(K.pow(x, K.p), K.pow(y, K.p)):
            return _fail("Frobenius additivity", x=x, y=y)
    for x in range(q):
        if K.add(x, K.neg(x)) != 0:
            return _fail("additive inverse", x=x)
        if x and K.mul(x, K.inv(x)) != 1:
            return _fail("multiplicative inverse", x=x)
        if K.pow(x, q) != x:
            return _fail("q-power identity", x=x)
    return CheckOutcome("pass", {"triples": len(triples)})


@_register("identity_power_sums",
           anchor="sum over zeta in F_q of zeta^l is 0 unless l >= 1 and "
                  "(q-1) | l, in which case it is q-1 = -1",
           provenance="stated", min_ball=1)
def check_power_sums(ws, cfg, rng):
    K = ws.K
    q = K.q
    top = 3 * (q - 1) + 2
    for l in range(top):
        total = 0
        for z in range(q):
            total = K.add(total, K.pow(z, l))
        want = K.neg(1) if (l >= 1 and l % (q - 1) == 0) else 0
        if total != want:
            return _fail("brute sum vs closed form", l=l, got=total, want=want)
        if power_sum(K, l) != want:
            return _fail("power_sum routine", l=l)
    return CheckOutcome("pass", {"exponents": top})


@_register("infra_codec_roundtrip",
           anchor="digit codec, truncation and Teichmueller lifts in O",
           provenance="derived", min_ball=1)
def check_codec(ws, cfg, rng):
    P, K = ws.P, ws.K
    q = K.q
    ndig = P.cap - 1
    for _ in range(cfg.samples):
        digs = tuple(rng.randrange(q) for _ in range(ndig))
        x = FElem.from_digit_vec(P, digs)
        if x.digits_from_zero(ndig) != digs:
            return _fail("digit roundtrip", digits=list(digs))
        m = rng.randrange(1, ndig)
        t = x.truncate(m)
        if t.digits_from_zero(ndig) != digs[:m] + (0,) * (ndig - m):
            return _fail("truncation", digits=list(digs), m=m)
    for c in range(q):
        t = _teich(P, c)
        if t.residue() != c:
            return _fail("teichmueller residue", code=c)
        acc = FElem.one(P)
        for _ in range(q):
            acc = acc.mul(t)
        if not acc.eq(t):
            return _fail("teichmueller q-th power fixed point", code=c)
    return CheckOutcome("pass", {"samples": cfg.samples, "lifts": q})


@_register("infra_carry_oracle",
           anchor="the carry digit of [x] + [y] is 0 for e > 1 and matches "
                  "the closed form (x^q + y^q - (x+y)^q)/p for e = 1",
           provenance="derived", min_ball=1)
def check_carry(ws, cfg, rng):
    P, K = ws.P, ws.K
    for x in range(K.q):
        for y in range(K.q):
            got = _teich(P, x).add(_teich(P, y)).digit(1)
            want = carry_Z(P, x, y)
            if got != want:
                return _fail("carry digit", x=x, y=y, got=got, want=want)
            if P.e > 1 and want != 0:
                return _fail("nonzero carry in the ramified model", x=x, y=y)
    return CheckOutcome("pass", {"pairs": K.q * K.q})


@_register("infra_ball_counts",
           anchor="the tree is (q+1)-regular: sphere sizes, oriented edge "
                  "shells, and the edge count 2(#vertices - 1) of each ball",
           provenance="derived", min_ball=1)
def check_ball_counts(ws, cfg, rng):
    q = ws.q
    ball = ws.ball
    nv = {}
    for v in ball.vertices:
        nv[v.dist] = nv.get(v.dist, 0) + 1
    for d in range(ball.radius + 2):
        want = 1 if d == 0 else (q + 1) * q ** (d - 1)
        if nv.get(d, 0) != want:
            return _fail("sphere size", dist=d, got=nv.get(d, 0), want=want)
    shells = {}
    for e in ball.edges:
        shells[e.radius] = shells.get(e.radius, 0) + 1
    for r in range(ball.radius + 1):
        # both orientations of every edge touching the center, then of the
        # 2q, 2(q+1)q^(r-1) edges whose nearer endpoint sits at distance r
        want = 2 if r == 0 else (2 * q if r == 1 else 2 * (q + 1) * q ** (r - 1))
        if shells.get(r, 0) != want:
            return _fail("edge shell size", radius=r, got=shells.get(r, 0),
                         want=want)
    for N in range(1, ball.radius + 1):
        inside = sum(c for d, c in nv.items() if d <= N)
        ne = sum(c for r, c in shells.items() if r <= N)
        if ne != 2 * (inside - 1):
            return _fail("edge count", N=N, edges=ne, vertices=inside)
    return CheckOutcome("pass", {"vertices": len(ball.vertices),
                                 "edges": len(ball.edges)})


@_register("infra_witness_soundness",
           anchor="every coset reduction returns a subgroup witness that "
                  "passes the membership predicate",
           provenance="derived", min_ball=1)
def check_witness_soundness(ws, cfg, rng):
    P = ws.P
    tested = 0
    for _ in range(cfg.samples):
        g = random_pro_p_element(P, rng, depth=3)
        for _ in range(rng.randrange(0, max(ws.radius - 1, 1))):
            hop = rng.randrange(3)
            if hop == 0:
                g = g.mul(mat_beta(P))
            elif hop == 1:
                g = g.mul(edge_rep(P, ELabel(0, 1, (rng.randrange(ws.q),))))
            else:
                g = g.mul(mat_w(P))
        if rng.randrange(2):
            g = g.pi_scale(rng.randrange(-1, 2))
        try:
            lv, wv = reduce_vertex(P, g, checked=False)
            le, we = reduce_edge(ws.ball, g, checked=False)
            lp, wp = reduce_prop(ws.ball, g, checked=False)
        except OutOfBall:
            continue
        tested += 1
        for wit, grp in ((wv, "KZ"), (we, "IZ"), (wp, "I1Z")):
            if not membership(wit.mat, grp):
                return _fail("witness outside its group", group=grp)
        if reduce_edge(ws.ball, edge_rep(P, le), checked=False)[0] != le:
            return _fail("edge reduction not idempotent", label=str(le))
        if reduce_vertex(P, g.mul(we.mat.inv()), checked=False)[0] != lv:
            return _fail("edge and vertex reductions disagree", label=str(le))
    if tested < cfg.samples // 2:
        return CheckOutcome("inconclusive",
                            {"tested": tested,
                             "reason": "too many walks left the ball"})
    return CheckOutcome("pass", {"tested": tested})


@_register("infra_route_agreement",
           anchor="the complete transfer criterion and the explicit "
                  "generator-span route agree on ideal membership",
           provenance="derived")
def check_route_agreement(ws, cfg, rng):
    K = ws.K
    cutoff = min(cfg.N, ws.radius - 1, cfg.max_cutoff)
    small = [e for e in ws.ball.edges if e.radius <= 1]
    agree = 0
    members = 0
    for _ in range(cfg.samples):
        v = ws.zero("edge")
        for _ in range(rng.randrange(1, 4)):
            v.add_term(small[rng.randrange(len(small))], rng.randrange(1, K.q))
        if rng.randrange(2):
            v = v.add(op_t12(ws, ws.delta_edge(small[rng.randrange(len(small))])))
        c1 = decide_ideal(ws, v)
        c2 = span_search(ws, v, cutoff)
        if c2.member and not c1.member:
            return _fail("span route found a member the complete route rejects")
        if c2.member:
            acc = ws.zero("edge")
            for (kind, e), c in c2.combination.items():
                d = ws.delta_edge(e)
                img = op_t12(ws, d) if kind == "t12" else \
                    op_t10(ws, d).add(op_tm10(ws, d))
                acc = acc.add(img.scale(c))
            if acc != v:
                return _fail("span certificate does not reconstruct the vector")
            members += 1
        agree += 1
    return CheckOutcome("pass", {"samples": agree, "members": members})


# -- operator relations --------------------------------------------------------------


@_register("relations_iwahori_ops",
           anchor="T10^2 = Id, T12 T10 T12 = -T12, Tm10 = T10 T12 T10",
           provenance="stated")
def check_relations(ws, cfg, rng):
    # two T12 hops deepen support by 2, so stay two radii inside the ball
    doms = _edges_upto(ws, min(2, ws.radius - 2))
    for e in doms:
        d = ws.delta_edge(e)
        if op_t10(ws, op_t10(ws, d)) != d:
            return _fail("T10 involution", label=str(e))
        if op_t12(ws, op_t10(ws, op_t12(ws, d))) != op_t12(ws, d).neg():
            return _fail("T12 T10 T12 = -T12", label=str(e))
        if op_tm10(ws, d) != op_t10(ws, op_t12(ws, op_t10(ws, d))):
            return _fail("Tm10 factorization", label=str(e))
    return CheckOutcome("pass", {"deltas": len(doms)})


@_register("lemma_L1",
           anchor="(T10 + Tm10) T12 = 0 and Ker(T10 + Tm10) = Im T12",
           provenance="stated")
def check_L1(ws, cfg, rng):
    K = ws.K
    cut = min(2, ws.radius - 2)
    doms = _edges_upto(ws, cut)
    for e in doms:
        d = ws.delta_edge(e)
        td = op_t12(ws, d)
        if not op_t10(ws, td).add(op_tm10(ws, td)).is_zero():
            return _fail("(T10 + Tm10) T12 != 0", label=str(e))
        cert = decide_ideal(ws, op_t10(ws, d).add(op_tm10(ws, d)))
        if not cert.member:
            return _fail("kernel generator outside the ideal", label=str(e),
                         certificate=_cert_info(cert))
    cols = [edge_vector(ws, op_t10(ws, ws.delta_edge(e))
                        .add(op_tm10(ws, ws.delta_edge(e)))) for e in doms]
    ker = fp_kernel(K.p, fq_mat_to_fp(K, np.stack(cols, axis=1)))
    nker = ker.shape[1] if ker.size else 0
    t12cut = min(cut + 1, ws.radius - 1)
    for j in range(nker):
        codes = fp_vec_to_fq(K, ker[:, j])
        v = ws.zero("edge")
        for i in np.flatnonzero(codes):
            v.add_term(doms[int(i)], int(codes[int(i)]))
        # the exact preimage identity v = T12(-T10 v) for kernel vectors
        if op_t12(ws, op_t10(ws, v)).neg() != v:
            return _fail("kernel vector without explicit T12 preimage", index=j)
        verdict, _ = _t12_member(ws, cfg, v, t12cut)
        if verdict == "clamped":
            return CheckOutcome("inconclusive",
                                {"reason": f"max_cutoff {cfg.max_cutoff} below "
                                           f"the natural cutoff {t12cut}"})
        if verdict != "member":
            return _fail("kernel vector outside the span of T12 images",
                         index=j)
    return CheckOutcome("pass", {"kernel_dim_fp": nker, "deltas": len(doms)})


# -- polynomial models and reduction ---------------------------------------------------


def _pt_grid(q, nvars):
    pts = [()]
    for _ in range(nvars):
        pts = [t + (x,) for t in pts for x in range(q)]
    return pts


@_register("lemma_every_fun_is_poly",
           anchor="every function F_q^n -> F_q is a polynomial with degree "
                  "<= q-1 in each variable, uniquely",
           provenance="stated", min_ball=1)
def check_every_fun_is_poly(ws, cfg, rng):
    K = ws.K
    q = K.q
    # uniqueness: the 1-variable evaluation matrix is invertible
    V = np.zeros((q, q), dtype=np.int32)
    for x in range(q):
        for i in range(q):
            V[x, i] = K.pow(x, i)
    if fp_rank(K.p, fq_mat_to_fp(K, V)) != q * K.f:
        return _fail("evaluation matrix is singular")
    for nvars in (1, 2):
        for trial in range(3):
            vals = {pt: rng.randrange(q) for pt in _pt_grid(q, nvars)}
            poly = interpolate(K, nvars, vals)
            for i in range(nvars):
                if poly.var_degree(i) > q - 1:
                    return _fail("degree bound violated", nvars=nvars,
                                 var=i, degree=poly.var_degree(i))
            for pt, want in vals.items():
                if poly.evaluate(pt) != want:
                    return _fail("interpolation mismatch", nvars=nvars,
                                 point=list(pt), trial=trial)
    return CheckOutcome("pass", {"degree_bound": q - 1})


@_register("lemma_functions_are_0",
           anchor="a sphere-supported function in the image of T takes "
                  "equal values on siblings",
           provenance="stated")
def check_functions_are_0(ws, cfg, rng):
    K = ws.K
    top = min(cfg.N, ws.radius)
    for n in range(2, top + 1):
        groups = _vertex_parent_groups(ws, n)
        src = ws.zero("vert")
        for v in ws.ball.vertices:
            if v.dist <= n - 1:
                c = rng.randrange(K.q)
                if c:
                    src.add_term(v, c)
        img = op_spherical(ws, src)
        vals = dict(img.terms())
        for parent, kids in groups.items():
            want = src.c.get(parent, 0)
            for kid in kids:
                if vals.get(kid, 0) != want:
                    return _fail("outer value differs from parent value",
                                 parent=str(parent), child=str(kid), n=n)
        parent, kids = next((u, k) for u, k in groups.items() if len(k) >= 2)
        bad = ws.zero("vert")
        bad.add_term(kids[0], 1)
        bad.add_term(kids[1], K.neg(1))
        cert = decide_im_spherical(ws, bad)
        if cert.member or not cert.complete:
            return _fail("unequal siblings admitted into Im T", n=n,
                         certificate=_cert_info(cert))
    return CheckOutcome("pass", {"levels": list(range(2, top + 1))})


@_register("lemma_tnk_reduction",
           anchor="sum of c_mu mu_{n-1}^k [g0(n-1,mu) u([mu_{n-1}]) w] lies "
                  "in Im T12 for k != q-1 and equals -sum c_mu [g0(n-1,mu)] "
                  "for k = q-1",
           provenance="stated")
def check_tnk_like_terms(ws, cfg, rng):
    K = ws.K
    q = K.q
    levels = (1, 2) if min(cfg.N, 3) < 3 else (1, 2, 3)
    tried = 0
    for n in levels:
        heads = _digit_tuples(q, n - 1)
        for _ in range(max(4, cfg.samples // 10)):
            table = {h: rng.randrange(q) for h in heads}
            if not any(table.values()):
                table[heads[0]] = 1
            for k in range(q):
                v = _t_like(ws, n, table.__getitem__, k)
                tried += 1
                if k != q - 1:
                    verdict, comb = _t12_member(ws, cfg, v,
                                                min(n, ws.radius - 1))
                    if verdict == "clamped":
                        return CheckOutcome(
                            "inconclusive",
                            {"reason": f"max_cutoff {cfg.max_cutoff} below "
                                       f"the natural cutoff {n}"})
                    if verdict != "member":
                        return _fail("t-like sum escaped Im T12", n=n, k=k)
                    acc = ws.zero("edge")
                    for e, c in comb.items():
                        acc = acc.add(op_t12(ws, ws.delta_edge(e)).scale(c))
                    if acc != v:
                        return _fail("membership certificate broken", n=n, k=k)
                else:
                    tgt = _s_like(ws, n - 1, lambda mu: K.neg(table[mu]))
                    cert = equal_in_quotient(ws, v, tgt)
                    if not (cert.member and cert.complete):
                        return _fail("top-power value wrong", n=n,
                                     certificate=_cert_info(cert))
    return CheckOutcome("pass", {"sums": tried, "levels": list(levels)})


@_register("remark_t_family",
           anchor="t_n^k in Im T12 for k != q-1; t_1^{q-1} = -[id,1] and "
                  "t_2^{q-1} = [beta,1]; exact expansion of T12(s_1^k)",
           provenance="stated")
def check_t_family(ws, cfg, rng):
    P, K = ws.P, ws.K
    q = K.q
    w = mat_w(P)
    for k in range(q):
        lhs = op_t12(ws, family_s(ws, 1, k))
        ps = power_sum(K, k)
        rhs = ws.zero("edge")
        if ps:
            rhs.add_term(ID_EDGE, ps)
            for lam in range(q):
                lab = _label_of(ws, mat_u(P, _teich(P, lam)).mul(w))
                rhs.add_term(lab, ps)
        rhs = rhs.sub(family_t(ws, 1, k))
        if lhs != rhs:
            return _fail("T12(s_1^k) expansion", k=k)
    for n in range(1, min(cfg.N, 3) + 1):
        for k in range(q - 1):
            verdict, _ = _t12_member(ws, cfg, family_t(ws, n, k),
                                     min(n, ws.radius - 1))
            if verdict == "clamped":
                return CheckOutcome(
                    "inconclusive",
                    {"reason": f"max_cutoff {cfg.max_cutoff} below the "
                               f"natural cutoff {n}"})
            if verdict != "member":
                return _fail("t_n^k escaped Im T12", n=n, k=k)
    c1 = equal_in_quotient(ws, family_t(ws, 1, q - 1),
                           ws.delta_edge(ID_EDGE).neg())
    if not c1.member:
        return _fail("t_1^(q-1) != -[id]", certificate=_cert_info(c1))
    c2 = equal_in_quotient(ws, family_t(ws, 2, q - 1), ws.delta_edge(BETA_EDGE))
    if not c2.member:
        return _fail("t_2^(q-1) != [beta]", certificate=_cert_info(c2))
    return CheckOutcome("pass", {"k_range": q})


@_register("lemma_tnk_top",
           anchor="t_n^{q-1} = 0 modulo (Im T12, Ker T12) for n >= 3",
           provenance="stated", min_ball=3)
def check_tnk_top(ws, cfg, rng):
    cert = decide_ideal(ws, family_t(ws, 3, ws.q - 1))
    if not (cert.member and cert.complete):
        return _fail("t_3^(q-1) stayed nonzero", certificate=_cert_info(cert))
    return CheckOutcome("pass", {"n": 3})


@_register("lemma_snk_like_terms",
           anchor="sum of c_mu mu_{n-2}^k [g0(n,mu)] vanishes for k != q-1 "
                  "and equals sum c_mu [g0(n-2,mu)] for k = q-1",
           provenance="stated")
def check_snk_like_terms(ws, cfg, rng):
    K = ws.K
    q = K.q
    levels = (2,) if min(cfg.N, 3) < 3 else (2, 3)
    tried = 0
    for n in levels:
        heads = _digit_tuples(q, n - 2)
        trials = 20 if n == 2 else 10
        for _ in range(trials):
            table = {h: rng.randrange(q) for h in heads}
            if not any(table.values()):
                table[heads[0]] = 1
            for k in range(q):
                v = _s_like(ws, n,
                            lambda mu: K.mul(table[mu[:n - 2]],
                                             K.pow(mu[n - 2], k)))
                tgt = ws.zero("edge") if k != q - 1 else \
                    _s_like(ws, n - 2, table.__getitem__)
                cert = equal_in_quotient(ws, v, tgt)
                tried += 1
                if not (cert.member and cert.complete):
                    return _fail("weight on digit n-2 did not collapse",
                                 n=n, k=k, certificate=_cert_info(cert))
    return CheckOutcome("pass", {"sums": tried, "levels": list(levels)})


@_register("lemma_info_about_sn0",
           anchor="s_1^0 = -[beta,1] and s_n^0 = 0 for n >= 2",
           provenance="stated")
def check_sn0(ws, cfg, rng):
    c1 = equal_in_quotient(ws, family_s(ws, 1, 0),
                           ws.delta_edge(BETA_EDGE).neg())
    if not c1.member:
        return _fail("s_1^0 != -[beta]", certificate=_cert_info(c1))
    for n in range(2, min(cfg.N, 3) + 1):
        cert = decide_ideal(ws, family_s(ws, n, 0))
        if not cert.member:
            return _fail("s_n^0 != 0", n=n, certificate=_cert_info(cert))
    return CheckOutcome("pass", {"levels": min(cfg.N, 3)})


# -- invariance and non-invariance ------------------------------------------------------


@_register("identity_first_digit",
           anchor="(1+pi a, b; pi c, 1+pi d)(pi, [lam]; 0, 1) = "
                  "(pi, [lam + b_0]; 0, 1) i with i in I(1)",
           provenance="stated", min_ball=1)
def check_first_digit_identity(ws, cfg, rng):
    P, K = ws.P, ws.K
    q = K.q
    one = FElem.one(P)
    deep = max(2, min(P.cap - 2, 4))
    tested = 0
    for lam in range(q):
        for b0 in range(q):
            for _ in range(max(1, cfg.samples // (q * q))):
                def rand(start):
                    digs = (0,) * start + tuple(rng.randrange(q)
                                                for _ in range(deep))
                    return FElem.from_digit_vec(P, digs)
                a, c, d = rand(0), rand(0), rand(0)
                b = _teich(P, b0).add(rand(1))
                m = Mat2(P, one.add(a.pi_mul(1)), b,
                         c.pi_mul(1), one.add(d.pi_mul(1)))
                n_out = Mat2(P, FElem.pi_power(P, 1), _teich(P, K.add(lam, b0)),
                             FElem.zero(P), one)
                n_in = Mat2(P, FElem.pi_power(P, 1), _teich(P, lam),
                            FElem.zero(P), one)
                i = n_out.inv().mul(m).mul(n_in)
                if not membership(i, "I1"):
                    return _fail("conjugated matrix left I(1)",
                                 lam=lam, b0=b0)
                tested += 1
    return CheckOutcome("pass", {"matrices": tested})


@_register("lemma_snk_not_invariant",
           anchor="s_n^k is not I(1)-invariant for 2 <= k <= q-1 not a "
                  "power of p",
           provenance="stated", min_q=3)
def check_snk_not_invariant(ws, cfg, rng):
    K = ws.K
    q = K.q
    powers = {pow(K.p, l) for l in range(K.f)}
    bad_ks = [k for k in range(2, q) if k not in powers]
    if not bad_ks:
        return CheckOutcome("inconclusive",
                            {"reason": "every exponent in [2, q-1] is a "
                                       "power of p here"})
    tested = []
    for n in (2,) if min(cfg.N, 3) < 3 else (2, 3):
        u = _neg_pi_unipotent(ws.P, n - 1)
        for k in bad_ks:
            s = family_s(ws, n, k)
            diff = act_left(ws, u, s).sub(s)
            want = _s_like(ws, n, lambda mu: K.sub(
                K.pow(K.add(mu[n - 1], 1), k), K.pow(mu[n - 1], k)))
            if diff != want:
                return _fail("exact difference formula", n=n, k=k)
            cert = decide_ideal(ws, diff)
            if cert.member or not cert.complete:
                return _fail("difference fell into the ideal", n=n, k=k,
                             certificate=_cert_info(cert))
            tested.append([n, k])
    return CheckOutcome("pass", {"cases": tested})


@_register("remark_s1_not_invariant",
           anchor="u(-1) s_1^{p^l} - s_1^{p^l} = s_1^0 = -[beta,1] != 0",
           provenance="stated")
def check_s1_not_invariant(ws, cfg, rng):
    K = ws.K
    u = _neg_pi_unipotent(ws.P, 0)
    for l in range(K.f):
        s = family_s(ws, 1, pow(K.p, l))
        diff = act_left(ws, u, s).sub(s)
        if diff != family_s(ws, 1, 0):
            return _fail("difference is not s_1^0 exactly", l=l)
        cert = equal_in_quotient(ws, diff, ws.delta_edge(BETA_EDGE).neg())
        if not cert.member:
            return _fail("difference != -[beta]", l=l,
                         certificate=_cert_info(cert))
    bcert = decide_ideal(ws, ws.delta_edge(BETA_EDGE))
    if bcert.member or not bcert.complete:
        return _fail("[beta] vanished in the quotient",
                     certificate=_cert_info(bcert))
    return CheckOutcome("pass", {"l_range": K.f})


@_register("prop_s2_invariance",
           anchor="g s_2^{p^l} - s_2^{p^l} in (Im T12, Ker T12) for all g "
                  "in I(1) when ef > 1 and q > 3; fails for q <= 3",
           provenance="stated")
def check_s2_invariance(ws, cfg, rng):
    P, K = ws.P, ws.K
    q = K.q
    if q == 2:
        g = mat_diag(P, FElem.one(P).add(FElem.pi_power(P, 1)), FElem.one(P))
        s = family_s(ws, 2, 1)
        diff = act_left(ws, g, s).sub(s)
        cert = equal_in_quotient(ws, diff, ws.delta_edge(ID_EDGE))
        zcert = decide_ideal(ws, diff)
        if not cert.member or zcert.member or not zcert.complete:
            return _fail("q=2 difference is not [id,1]",
                         certificate=_cert_info(cert))
        return CheckOutcome("pass", {"confirmed_negative": True,
                                     "witness_generator": "diag(1+pi,1)",
                                     "difference": "[id,1]"})
    if q == 3:
        g = mat_l(P, FElem.pi_power(P, 1))
        s = family_s(ws, 2, 1)
        cert = decide_ideal(ws, act_left(ws, g, s).sub(s))
        if cert.member or not cert.complete:
            return _fail("q=3 lower-unipotent difference vanished",
                         certificate=_cert_info(cert))
        return CheckOutcome("pass", {"confirmed_negative": True,
                                     "witness_generator": "l(pi)"})
    if P.e * K.f <= 1:
        return CheckOutcome("inconclusive",
                            {"reason": "outside the stated hypothesis ef > 1"})
    depth = min(cfg.N + 2, P.cap - 2)
    gens = list(i1_generators(P, depth))
    gens += [(f"random#{i}", random_pro_p_element(P, rng, depth=depth))
             for i in range(cfg.samples)]
    count = 0
    for l in range(K.f):
        s = family_s(ws, 2, pow(K.p, l))
        for name, g in gens:
            cert = decide_ideal(ws, act_left(ws, g, s).sub(s))
            if not (cert.member and cert.complete):
                return _fail("invariance failed", l=l, generator=name,
                             certificate=_cert_info(cert))
            count += 1
    return CheckOutcome("pass", {"matrices": count})


@_register("lemma_inductive_step",
           anchor="if s_{n-1}^k is I(1)-invariant then so is s_n^k, "
                  "checked as the n = 2 -> 3 instance",
           provenance="stated", min_ball=3, only_generic=True)
def check_inductive_step(ws, cfg, rng):
    K = ws.K
    depth = min(cfg.N + 2, ws.P.cap - 2)
    count = 0
    for l in range(K.f):
        ok_h, certs_h = is_invariant(ws, family_s(ws, 2, pow(K.p, l)), depth)
        if not ok_h:
            return _fail("hypothesis broke at n=2", l=l)
        ok_c, certs_c = is_invariant(ws, family_s(ws, 3, pow(K.p, l)), depth)
        if not ok_c:
            bad = [n for n, c in certs_c if not c.member]
            return _fail("conclusion broke at n=3", l=l, generators=bad)
        count += len(certs_h) + len(certs_c)
    return CheckOutcome("pass", {"certificates": count})


@_register("remark_q3_s31",
           anchor="for q = 3: s_2^1 is not I(1)-invariant but s_3^1 is",
           provenance="stated", min_ball=3, only_contexts=((3, 2, 1),))
def check_q3_s31(ws, cfg, rng):
    P = ws.P
    s2 = family_s(ws, 2, 1)
    g = mat_l(P, FElem.pi_power(P, 1))
    neg = decide_ideal(ws, act_left(ws, g, s2).sub(s2))
    if neg.member or not neg.complete:
        return _fail("s_2^1 unexpectedly invariant under l(pi)",
                     certificate=_cert_info(neg))
    ok, certs = is_invariant(ws, family_s(ws, 3, 1),
                             min(cfg.N + 2, P.cap - 2))
    if not ok:
        bad = [n for n, c in certs if not c.member]
        return _fail("s_3^1 not invariant", generators=bad)
    return CheckOutcome("pass", {"s2_negative": True,
                                 "s3_generators": len(certs)})


@_register("lemma_eigenvalues_sn",
           anchor="diag([a],[d]) s_n^{p^l} = (d/a)^{p^l} s_n^{p^l} exactly, "
                  "and the beta side twists by (a/d)^{p^l}",
           provenance="stated")
def check_eigenvalues(ws, cfg, rng):
    P, K = ws.P, ws.K
    q = K.q
    top = min(cfg.N, 3)
    if q <= 5:
        pairs = [(a, d) for a in ws.unit_range() for d in ws.unit_range()]
    else:
        pairs = [(rng.randrange(1, q), rng.randrange(1, q)) for _ in range(25)]
    for a, d in pairs:
        t = mat_diag_teich(P, a, d)
        for lab in (ID_EDGE, BETA_EDGE):
            if act_left(ws, t, ws.delta_edge(lab)) != ws.delta_edge(lab):
                return _fail("torus moved a base vector", label=str(lab))
        for n in range(2, top + 1):
            for l in range(K.f):
                k = pow(K.p, l)
                s = family_s(ws, n, k)
                lam = K.pow(K.div(d, a), k)
                if act_left(ws, t, s) != s.scale(lam):
                    return _fail("s eigencharacter", n=n, l=l, a=a, d=d)
                if n < top:
                    bs = family_beta_s(ws, n, k)
                    mu = K.pow(K.div(a, d), k)
                    if act_left(ws, t, bs) != bs.scale(mu):
                        return _fail("beta-s eigencharacter", n=n, l=l,
                                     a=a, d=d)
    return CheckOutcome("pass", {"torus_pairs": len(pairs)})


@_register("lemma_linear_independence",
           anchor="[id,1], [beta,1], the s_n^{p^l} and the beta s_n^{p^l} "
                  "are linearly independent in the quotient",
           provenance="stated", only_generic=True)
def check_linear_independence(ws, cfg, rng):
    K = ws.K
    N = min(cfg.N, ws.radius)
    vecs = _predicted_basis(ws, N)
    cols = [_quotient_residual(ws, v, N - 1) for _, v in vecs]
    rank = fp_rank(K.p, fq_mat_to_fp(K, np.stack(cols, axis=1)))
    if rank != K.f * len(vecs):
        return _fail("predicted vectors are dependent in the quotient",
                     rank_fp=rank, expected=K.f * len(vecs))
    return CheckOutcome("pass", {"vectors": len(vecs), "rank_fp": rank})


@_register("lemma_form_of_invariants",
           anchor="invariance under u(-pi^{n-1}) forces top-digit powers 0 "
                  "or p^l in the a-part; the beta-side part is automatic",
           provenance="stated", only_generic=True)
def check_form_of_invariants(ws, cfg, rng):
    K = ws.K
    q = K.q
    n = 2
    u = _neg_pi_unipotent(ws.P, n - 1)
    for _ in range(max(4, cfg.samples // 10)):
        table = {mu: rng.randrange(q) for mu in _digit_tuples(q, n)}
        fb = _s_like(ws, n, table.__getitem__, family=1)
        diff = act_left(ws, u, fb).sub(fb)
        verdict, _ = _t12_member(ws, cfg, diff, min(n, ws.radius - 1))
        if verdict == "clamped":
            return CheckOutcome("inconclusive",
                                {"reason": f"max_cutoff {cfg.max_cutoff} "
                                           f"below the natural cutoff {n}"})
        if verdict != "member":
            return _fail("beta-side difference escaped Im T12")
    powers = {pow(K.p, l) for l in range(K.f)}
    bad = [k for k in range(2, q) if k not in powers]
    if not bad:
        return CheckOutcome("inconclusive",
                            {"reason": "no non-p-power exponents at this q"})
    for k in bad:
        head = {h: rng.randrange(1, q) for h in _digit_tuples(q, n - 1)}
        mix = family_s(ws, n, 1).add(
            _s_like(ws, n, lambda mu: K.mul(head[mu[:n - 1]],
                                            K.pow(mu[n - 1], k))))
        cert = decide_ideal(ws, act_left(ws, u, mix).sub(mix))
        if cert.member or not cert.complete:
            return _fail("illegal top power survived invariance", k=k,
                         certificate=_cert_info(cert))
    return CheckOutcome("pass", {"illegal_exponents": len(bad)})


@_register("lemma_independence_smaller_mus",
           anchor="invariance under the deeper unipotents forces the a-part "
                  "constant in the lower digits, and the c-part likewise",
           provenance="stated", only_generic=True)
def check_independence_smaller_mus(ws, cfg, rng):
    K = ws.K
    q = K.q
    u0 = _neg_pi_unipotent(ws.P, 0)
    exps = sorted({1, K.p % (q - 1) if q > 2 else 1, q - 1})
    for i in exps:
        for l in range(K.f):
            k = pow(K.p, l)
            v = _s_like(ws, 2, lambda mu: K.mul(K.pow(mu[0], i),
                                                K.pow(mu[1], k)))
            cert = decide_ideal(ws, act_left(ws, u0, v).sub(v))
            if cert.member or not cert.complete:
                return _fail("lower-digit dependence survived", i=i, l=l,
                             certificate=_cert_info(cert))
    checked_c = False
    if cfg.N >= 3 and ws.radius >= 3:
        lo = _neg_pi_unipotent(ws.P, 1, lower=True)
        for l in range(K.f):
            k = pow(K.p, l)
            v = _beta_s_like(ws, 2, lambda mu: K.mul(mu[0],
                                                     K.pow(mu[1], k)))
            cert = decide_ideal(ws, act_left(ws, lo, v).sub(v))
            if cert.member or not cert.complete:
                return _fail("beta-side lower-digit dependence survived",
                             l=l, certificate=_cert_info(cert))
        checked_c = True
    return CheckOutcome("pass", {"exponents": exps, "beta_side": checked_c})


# -- the main theorem --------------------------------------------------------------------


@_register("thm_basis_dimension",
           anchor="a basis of the I(1)-invariants: [id,1], [beta,1], "
                  "s_n^{p^l} and beta s_n^{p^l} for n >= 2",
           provenance="derived", only_contexts=((2, 1, 2), (5, 2, 1)))
def check_basis_dimension(ws, cfg, rng):
    K = ws.K
    N = min(cfg.N, ws.radius)
    frozen = INVARIANT_DIMS.get((K.p, ws.P.e, K.f), {})
    res = invariant_space(ws, N)
    if N in frozen and res.dim_quotient != frozen[N]:
        return _fail("quotient dimension moved", N=N, got=res.dim_quotient,
                     want=frozen[N])
    vecs = _predicted_basis(ws, N)
    if len(vecs) != res.dim_quotient:
        return _fail("predicted count differs from computed dimension",
                     predicted=len(vecs), computed=res.dim_quotient)
    for name, v in vecs:
        if not in_solution_space(ws, res, v):
            return _fail("predicted vector is not a solution", vector=name)
        if decide_ideal(ws, v).member:
            return _fail("predicted vector vanishes in the quotient",
                         vector=name)
    cols = [_quotient_residual(ws, v, N - 1) for _, v in vecs]
    rank = fp_rank(K.p, fq_mat_to_fp(K, np.stack(cols, axis=1)))
    if rank != K.f * len(vecs):
        return _fail("predicted vectors not independent", rank_fp=rank)
    return CheckOutcome("pass", {"N": N, "dim": res.dim_quotient,
                                 "basis": [name for name, _ in vecs]})


@_register("remark_ollivier_growth",
           anchor="the space of I(1)-invariants grows with the ball: "
                  "dim B(N+1) > dim B(N)",
           provenance="derived", only_contexts=((2, 1, 2), (5, 2, 1)))
def check_growth(ws, cfg, rng):
    K = ws.K
    frozen = INVARIANT_DIMS.get((K.p, ws.P.e, K.f), {})
    top = min(cfg.N + 1, 4, ws.radius)
    dims = []
    for N in range(1, top + 1):
        res = invariant_space(ws, N)
        if N in frozen and res.dim_quotient != frozen[N]:
            return _fail("frozen dimension moved", N=N,
                         got=res.dim_quotient, want=frozen[N])
        dims.append(res.dim_quotient)
    for i in range(1, len(dims)):
        if dims[i] <= dims[i - 1]:
            return _fail("no strict growth", dims=dims)
    return CheckOutcome("pass", {"dims": dims})


@_register("thm_endo_algebra",
           anchor="End(pi_0) consists of scalars: the [beta]-coefficient of "
                  "an endomorphism dies on [w beta, 1]",
           provenance="stated")
def check_endo_algebra(ws, cfg, rng):
    P, K = ws.P, ws.K
    q = K.q
    wbeta = _label_of(ws, mat_w(P).mul(mat_beta(P)))
    ainv = _label_of(ws, Mat2(P, FElem.pi_power(P, 1), FElem.zero(P),
                              FElem.zero(P), FElem.one(P)))
    if wbeta != ainv:
        return _fail("[w beta] and [alpha^{-1}] are different edges")
    lhs = op_t12(ws, ws.delta_edge(ainv))
    rhs = ws.zero("edge")
    for lam in range(q):
        rhs = rhs.add(act_left(ws, mat_l(P, _teich(P, lam)),
                               ws.delta_edge(ID_EDGE)))
    if lhs != rhs:
        return _fail("T12[alpha^{-1}] expansion")
    lb = ws.zero("edge")
    for lam in range(q):
        lb = lb.add(act_left(ws, mat_l(P, _teich(P, lam)).mul(mat_beta(P)),
                             ws.delta_edge(ID_EDGE)))
    wg = ws.zero("edge")
    for mu in range(q):
        wg = wg.add(act_left(ws, mat_w(P).mul(edge_rep(P, ELabel(0, 1, (mu,)))),
                             ws.delta_edge(ID_EDGE)))
    wlab = _label_of(ws, mat_w(P))
    tm = op_tm10(ws, ws.delta_edge(wlab))
    if lb != wg or wg != tm:
        return _fail("lower-unipotent translate chain")
    cert = equal_in_quotient(ws, tm, ws.delta_edge(wbeta).neg())
    if not cert.member:
        return _fail("Tm10[w] != -[w beta]", certificate=_cert_info(cert))
    nz = decide_ideal(ws, ws.delta_edge(wbeta))
    if nz.member or not nz.complete:
        return _fail("[w beta] vanished in the quotient",
                     certificate=_cert_info(nz))
    return CheckOutcome("pass", {"wbeta_label": str(wbeta)})


# -- the action table ----------------------------------------------------------------------


def _expect_quotient(ws, got, want, cell):
    cert = equal_in_quotient(ws, got, want)
    if not (cert.member and cert.complete):
        return _fail(f"cell {cell}", certificate=_cert_info(cert))
    return None


@_register("table_action_Tbeta_id", anchor="[id,1] Tbeta = [beta,1]",
           provenance="stated", only_generic=True)
def check_tbeta_id(ws, cfg, rng):
    got = right_tbeta(ws, ws.delta_edge(ID_EDGE))
    bad = _expect_quotient(ws, got, ws.delta_edge(BETA_EDGE), "Tbeta/id")
    return bad or CheckOutcome("pass",
                               {"exact": got == ws.delta_edge(BETA_EDGE)})


@_register("table_action_Tbeta_beta", anchor="[beta,1] Tbeta = [id,1]",
           provenance="stated", only_generic=True)
def check_tbeta_beta(ws, cfg, rng):
    got = right_tbeta(ws, ws.delta_edge(BETA_EDGE))
    bad = _expect_quotient(ws, got, ws.delta_edge(ID_EDGE), "Tbeta/beta")
    return bad or CheckOutcome("pass",
                               {"exact": got == ws.delta_edge(ID_EDGE)})


@_register("table_action_Tbeta_s", anchor="s_n^{p^l} Tbeta = beta s_n^{p^l}",
           provenance="stated", only_generic=True)
def check_tbeta_s(ws, cfg, rng):
    K = ws.K
    for l in range(K.f):
        got = right_tbeta(ws, family_s(ws, 2, pow(K.p, l)))
        want = family_beta_s(ws, 2, pow(K.p, l))
        if got != want:
            return _fail("left beta translate not exact", l=l)
    return CheckOutcome("pass", {"exact": True, "l_range": K.f})


@_register("table_action_Tbeta_beta_s",
           anchor="beta s_n^{p^l} Tbeta = s_n^{p^l}",
           provenance="stated", only_generic=True)
def check_tbeta_beta_s(ws, cfg, rng):
    K = ws.K
    for l in range(K.f):
        got = right_tbeta(ws, family_beta_s(ws, 2, pow(K.p, l)))
        want = family_s(ws, 2, pow(K.p, l))
        if got != want:
            return _fail("beta involution not exact on beta_s", l=l)
    return CheckOutcome("pass", {"exact": True, "l_range": K.f})


@_register("table_action_Tns_id", anchor="[id,1] Tns = 0",
           provenance="stated", only_generic=True)
def check_tns_id(ws, cfg, rng):
    P = ws.P
    got = right_tns(ws, ws.delta_edge(ID_EDGE))
    flip = mat_diag(P, FElem.one(P), FElem.one(P).neg())
    tgt = op_t12(ws, act_left(ws, flip.mul(mat_beta(P)),
                              ws.delta_edge(ID_EDGE)))
    if got != tgt:
        return _fail("T12 factorization of [id] Tns")
    cert = decide_ideal(ws, got)
    if not (cert.member and cert.complete):
        return _fail("[id] Tns != 0", certificate=_cert_info(cert))
    return CheckOutcome("pass", {"exact_t12_image": True})


@_register("table_action_Tns_beta", anchor="[beta,1] Tns = -[beta,1]",
           provenance="stated", only_generic=True)
def check_tns_beta(ws, cfg, rng):
    got = right_tns(ws, ws.delta_edge(BETA_EDGE))
    bad = _expect_quotient(ws, got, ws.delta_edge(BETA_EDGE).neg(),
                           "Tns/beta")
    return bad or CheckOutcome("pass", {})


@_register("table_action_Tns_s", anchor="s_n^{p^l} Tns = 0 for n >= 2",
           provenance="stated", only_generic=True)
def check_tns_s(ws, cfg, rng):
    K = ws.K
    levels = (2,) if min(cfg.N, 3) < 3 else (2, 3)
    for n in levels:
        for l in range(K.f):
            got = right_tns(ws, family_s(ws, n, pow(K.p, l)))
            cert = decide_ideal(ws, got)
            if not (cert.member and cert.complete):
                return _fail("s Tns != 0", n=n, l=l,
                             certificate=_cert_info(cert))
    return CheckOutcome("pass", {"levels": list(levels)})


@_register("table_action_Tns_beta_s",
           anchor="beta s_n^{p^l} Tns = -s_{n+1}^{p^l}; exact when the digit "
                  "negation mu -> -mu is carry-free, else exact up to the "
                  "carry correction and still true in the quotient",
           provenance="stated", min_ball=3, only_generic=True)
def check_tns_beta_s(ws, cfg, rng):
    K = ws.K
    q = K.q
    # -[x] = [-x] needs -1 Teichmueller (p odd); for p = 2 with e >= 2 the
    # carry of -1 = 1 - pi^e(unit) falls outside the 3-digit label window
    carry_free = K.p != 2 or ws.P.e >= 2
    for l in range(K.f):
        k = pow(K.p, l)
        got = right_tns(ws, family_beta_s(ws, 2, k))
        want = family_s(ws, 3, k).neg()
        if carry_free:
            if got != want:
                return _fail("beta_s Tns != -s_{n+1} exactly", l=l)
            continue
        # p = 2 unramified: -1 has digit vector (1, 1, 1, ...), so negating
        # the offset adds each digit into the next one; the exact image
        # weights nu by (nu_1 + nu_2)^k in place of nu_2^k
        exact = ws.zero("edge")
        for nu in _digit_tuples(q, 3):
            c = K.pow(K.add(nu[1], nu[2]), k)
            if c:
                exact.add_term(ELabel(0, 3, nu), c)
        if got != exact.neg():
            return _fail("carry-corrected exact image", l=l)
        cert = equal_in_quotient(ws, got, want)
        if not (cert.member and cert.complete):
            return _fail("beta_s Tns != -s_{n+1} in the quotient", l=l,
                         certificate=_cert_info(cert))
    return CheckOutcome("pass", {"carry_free": carry_free, "l_range": K.f})


def _echi_row(ws, cfg, rng, vecs, eigen):
    """Verify the idempotent row for each vector: v e_chi = v at the
    eigencharacter and 0 at every other torus character."""
    K = ws.K
    q = K.q
    first = True
    for tag, v in vecs:
        translates = _torus_translates(ws, v)
        if first:
            # route agreement with the direct operator on a few characters
            for _ in range(2):
                chi = HChar(K, rng.randrange(q - 1), rng.randrange(q - 1))
                if _echi_from(ws, chi, translates, v.tag) != \
                        right_echi(ws, chi, v):
                    return _fail("translate cache disagrees with e_chi")
            first = False
        want_chi = eigen(tag)
        for r in range(q - 1):
            for s in range(q - 1):
                chi = HChar(K, r, s)
                got = _echi_from(ws, chi, translates, v.tag)
                want = v if chi == want_chi else ws.zero(v.tag)
                cert = equal_in_quotient(ws, got, want)
                if not (cert.member and cert.complete):
                    return _fail("e_chi value", vector=str(tag), r=r, s=s,
                                 certificate=_cert_info(cert))
    return None


@_register("table_action_echi_id",
           anchor="[id,1] e_chi = [id,1] if chi is trivial, else 0",
           provenance="stated", only_generic=True)
def check_echi_id(ws, cfg, rng):
    K = ws.K
    bad = _echi_row(ws, cfg, rng, [("id", ws.delta_edge(ID_EDGE))],
                    lambda tag: HChar(K, 0, 0))
    return bad or CheckOutcome("pass", {"characters": (K.q - 1) ** 2})


@_register("table_action_echi_beta",
           anchor="[beta,1] e_chi = [beta,1] if chi is trivial, else 0",
           provenance="stated", only_generic=True)
def check_echi_beta(ws, cfg, rng):
    K = ws.K
    bad = _echi_row(ws, cfg, rng, [("beta", ws.delta_edge(BETA_EDGE))],
                    lambda tag: HChar(K, 0, 0))
    return bad or CheckOutcome("pass", {"characters": (K.q - 1) ** 2})


@_register("table_action_echi_s",
           anchor="s_n^{p^l} e_chi = s_n^{p^l} exactly at chi = (d/a)^{p^l}",
           provenance="stated", only_generic=True)
def check_echi_s(ws, cfg, rng):
    K = ws.K
    vecs = [(l, family_s(ws, 2, pow(K.p, l))) for l in range(K.f)]
    bad = _echi_row(ws, cfg, rng, vecs,
                    lambda l: HChar(K, -pow(K.p, l), pow(K.p, l)))
    return bad or CheckOutcome("pass", {"characters": (K.q - 1) ** 2})


@_register("table_action_echi_beta_s",
           anchor="beta s_n^{p^l} e_chi = beta s_n^{p^l} exactly at "
                  "chi = (a/d)^{p^l}",
           provenance="stated", only_generic=True)
def check_echi_beta_s(ws, cfg, rng):
    K = ws.K
    vecs = [(l, family_beta_s(ws, 2, pow(K.p, l))) for l in range(K.f)]
    bad = _echi_row(ws, cfg, rng, vecs,
                    lambda l: HChar(K, pow(K.p, l), -pow(K.p, l)))
    return bad or CheckOutcome("pass", {"characters": (K.q - 1) ** 2})


@_register("remark_generator",
           anchor="[id,1] + sum_l s_2^{p^l} generates: the idempotents cut "
                  "out [id,1] and each s_2^{p^l}",
           provenance="stated", only_generic=True)
def check_generator(ws, cfg, rng):
    K = ws.K
    f0 = ws.delta_edge(ID_EDGE)
    for l in range(K.f):
        f0 = f0.add(family_s(ws, 2, pow(K.p, l)))
    cert = equal_in_quotient(ws, right_echi(ws, HChar(K, 0, 0), f0),
                             ws.delta_edge(ID_EDGE))
    if not cert.member:
        return _fail("trivial idempotent does not cut out [id]",
                     certificate=_cert_info(cert))
    for l in range(K.f):
        k = pow(K.p, l)
        cert = equal_in_quotient(ws, right_echi(ws, HChar(K, -k, k), f0),
                                 family_s(ws, 2, k))
        if not cert.member:
            return _fail("eigen idempotent does not cut out s_2", l=l,
                         certificate=_cert_info(cert))
    return CheckOutcome("pass", {"components": 1 + K.f})


# -- comparison with the pro-p induction -------------------------------------------------


@_register("lemma_direct_sum_decomp",
           anchor="v -> -sum_lam lam^{-s} [g diag(1,[lam]),1] decomposes "
                  "the pro-p induction into torus components",
           provenance="stated")
def check_direct_sum_decomp(ws, cfg, rng):
    P, K = ws.P, ws.K
    q = K.q
    d_prop = ws.delta_prop(PropLabel(ID_EDGE, 1), 0)
    translates = _torus_translates(ws, d_prop)
    total = ws.zero(("prop", 0))
    for s in range(q - 1):
        chi = HChar(K, -s, s)
        lhs = _echi_from(ws, chi, translates, ("prop", 0))
        tw = FormalSum(K, ("edge", chi.r, chi.s), {ID_EDGE: 1})
        if lhs != embed_char_component(ws, chi, tw):
            return _fail("idempotent image differs from component embed", s=s)
        total = total.add(lhs)
    if total != d_prop:
        return _fail("components do not sum back to [id,1]")
    small = [e for e in ws.ball.edges if e.radius <= 1]
    for trial in range(cfg.samples):
        s = rng.randrange(q - 1)
        chi = HChar(K, -s, s)
        v = FormalSum(K, ("edge", chi.r, chi.s))
        v.add_term(small[rng.randrange(len(small))], rng.randrange(1, q))
        i = random_pro_p_element(P, rng, depth=2).mul(
            mat_diag_teich(P, rng.randrange(1, q), rng.randrange(1, q)))
        if rng.randrange(2):
            i = i.pi_scale(1)
        lhs = act_left(ws, i, embed_char_component(ws, chi, v))
        rhs = embed_char_component(ws, chi, act_left(ws, i, v))
        if lhs != rhs:
            return _fail("component map not equivariant", trial=trial, s=s)
    return CheckOutcome("pass", {"samples": cfg.samples, "components": q - 1})


@_register("lemma_comparison",
           anchor="the pro-p induction splits under the idempotents, with "
                  "Tbeta and Tns transferring to T10 and T12 T10",
           provenance="stated")
def check_comparison(ws, cfg, rng):
    K = ws.K
    q = K.q
    chi1 = HChar(K, 0, 0)
    fibers = range(1, q) if q <= 5 else (1,)
    deltas = [PropLabel(e, fib) for e in ws.ball.edges if e.radius <= 1
              for fib in fibers]
    for lab in deltas:
        d = ws.delta_prop(lab, 0)
        translates = _torus_translates_right(ws, d)
        total = ws.zero(("prop", 0))
        for r in range(q - 1):
            for s in range(q - 1):
                total = total.add(_echi_from(ws, HChar(K, r, s), translates,
                                             ("prop", 0)))
        if total != d:
            return _fail("idempotents do not sum to the identity",
                         label=str(lab))
        if project_to_iz(ws, chi1, end_tbeta(ws, d)) != \
                op_t10(ws, project_to_iz(ws, chi1, d)):
            return _fail("Tbeta does not transfer to T10", label=str(lab))
        if project_to_iz(ws, chi1, end_tns(ws, d)) != \
                op_t12(ws, op_t10(ws, project_to_iz(ws, chi1, d))):
            return _fail("Tns does not transfer to T12 T10", label=str(lab))
    # at the identity coset the endomorphisms match the left coset sums
    d_id = ws.delta_prop(PropLabel(ID_EDGE, 1), 0)
    if end_tns(ws, d_id) != right_tns(ws, d_id) or \
            end_tbeta(ws, d_id) != right_tbeta(ws, d_id):
        return _fail("endomorphism and coset-sum routes disagree at [id,1]")
    small = [e for e in ws.ball.edges if e.radius <= 1]
    for trial in range(cfg.samples):
        s = rng.randrange(q - 1)
        chi = HChar(K, -s, s)
        v = FormalSum(K, ("edge", chi.r, chi.s))
        for _ in range(rng.randrange(1, 3)):
            v.add_term(small[rng.randrange(len(small))], rng.randrange(1, q))
        if project_to_iz(ws, chi, embed_char_component(ws, chi, v)) != v:
            return _fail("projection does not retract the embedding",
                         trial=trial, s=s)
    return CheckOutcome("pass", {"deltas": len(deltas)})


@_register("lemma_annihilator",
           anchor="the annihilator of [id,1] H is the right ideal (Tns, "
                  "Tbeta(Tns + 1), e_chi for chi != 1)",
           provenance="stated", only_generic=True)
def check_annihilator(ws, cfg, rng):
    K = ws.K
    q = K.q
    d_id = ws.delta_edge(ID_EDGE)
    d_b = ws.delta_edge(BETA_EDGE)

    def apply_word(v, word):
        for letter in word:
            if letter[0] == "tb":
                v = right_tbeta(ws, v)
            elif letter[0] == "tns":
                v = right_tns(ws, v)
            else:
                v = right_echi(ws, HChar(K, *letter[1]), v)
        return v

    c1 = decide_ideal(ws, right_tns(ws, d_id))
    tb = right_tbeta(ws, d_id)
    c2 = decide_ideal(ws, right_tns(ws, tb).add(tb))
    if not (c1.member and c2.member):
        return _fail("a generator does not annihilate [id,1]")
    for r in range(q - 1):
        for s in range(q - 1):
            if (r, s) == (0, 0):
                continue
            if not decide_ideal(ws, right_echi(ws, HChar(K, r, s),
                                               d_id)).member:
                return _fail("e_chi does not annihilate [id,1]", r=r, s=s)
    letters = [("tb",), ("tns",)] + \
        [("e", (r, s)) for r in range(q - 1) for s in range(q - 1)]
    nwords = cfg.samples if q <= 5 else max(10, cfg.samples // 4)
    done = 0
    attempts = 0
    while done < nwords and attempts < 20 * nwords:
        attempts += 1
        word = tuple(letters[rng.randrange(len(letters))]
                     for _ in range(rng.randrange(1, 7)))
        try:
            got = apply_word(d_id, word)
            got2 = apply_word(d_b, word)
        except OutOfBall:
            # word had too many tb/tns hops for this ball; draw another
            continue
        nf = hecke_word_normal_form(K, [(word, 1)])
        want = d_id.scale(nf["1"]).add(d_b.scale(nf["tb"]))
        if not equal_in_quotient(ws, got, want).member:
            return _fail("normal form mismatch on [id,1]", word=str(word))
        nf2 = hecke_word_normal_form(K, [(("tb",) + word, 1)])
        want2 = d_id.scale(nf2["1"]).add(d_b.scale(nf2["tb"]))
        if not equal_in_quotient(ws, got2, want2).member:
            return _fail("normal form mismatch on [beta,1]", word=str(word))
        done += 1
    if done < nwords:
        return CheckOutcome("inconclusive",
                            {"reason": "too many words left the ball",
                             "verified": done})
    pairs = [(a, b) for a in range(q) for b in range(q) if a or b] \
        if q <= 5 else [(rng.randrange(q), rng.randrange(q))
                        for _ in range(20)]
    for a, b in pairs:
        if a == 0 and b == 0:
            continue
        if decide_ideal(ws, d_id.scale(a).add(d_b.scale(b))).member:
            return _fail("nonzero a + b Tbeta annihilated [id,1]", a=a, b=b)
    return CheckOutcome("pass", {"words": nwords, "pairs": len(pairs)})


@_register("thm_reverse_functor_summand",
           anchor="ind modulo (Im Tns, Im Tbeta(Tns+1), Im e_chi) matches "
                  "the Iwahori quotient on the ball",
           provenance="derived", only_generic=True)
def check_reverse_functor(ws, cfg, rng):
    K = ws.K
    q = K.q
    chi1 = HChar(K, 0, 0)
    for e in (e for e in ws.ball.edges if e.radius <= 1):
        d = ws.delta_prop(PropLabel(e, 1), 0)
        g1 = project_to_iz(ws, chi1, end_tns(ws, d))
        g2 = project_to_iz(ws, chi1, end_tbeta(ws, end_tns(ws, d).add(d)))
        for tag, g in (("tns", g1), ("tb(tns+1)", g2)):
            cert = decide_ideal(ws, g)
            if not (cert.member and cert.complete):
                return _fail("transferred generator escaped the ideal",
                             generator=tag, label=str(e),
                             certificate=_cert_info(cert))
        echi = end_echi(ws, HChar(K, 1, 0), d)
        if not project_to_iz(ws, chi1, echi).is_zero():
            return _fail("nontrivial idempotent leaked into the trivial "
                         "component", label=str(e))
    # matched-cutoff span comparison: tbeta after tns deepens support by 2
    cut = min(2, ws.radius - 2)
    jcols, icols = [], []
    for e in _edges_upto(ws, cut):
        d_edge = ws.delta_edge(e)
        icols.append(edge_vector(ws, op_t12(ws, d_edge)))
        icols.append(edge_vector(ws, op_t10(ws, d_edge)
                                 .add(op_tm10(ws, d_edge))))
        d = ws.delta_prop(PropLabel(e, 1), 0)
        jcols.append(edge_vector(ws, project_to_iz(ws, chi1,
                                                   end_tns(ws, d))))
        jcols.append(edge_vector(ws, project_to_iz(
            ws, chi1, end_tbeta(ws, end_tns(ws, d).add(d)))))
    A = fq_mat_to_fp(K, np.stack(jcols, axis=1))
    B = fq_mat_to_fp(K, np.stack(icols, axis=1))
    ra, rb = fp_rank(K.p, A), fp_rank(K.p, B)
    rab = fp_rank(K.p, np.concatenate([A, B], axis=1))
    if not ra == rb == rab:
        return _fail("transferred span differs from the ideal span",
                     rank_transferred=ra, rank_iwahori=rb, rank_joint=rab)
    inner = [i for i, e in enumerate(ws.ball.edges) if e.radius <= 2]
    outer = [i for i, e in enumerate(ws.ball.edges) if e.radius > 2]
    f = K.f

    def quotient_rank(G):
        if outer:
            out_rows = np.concatenate([G[f * i: f * i + f] for i in outer],
                                      axis=0)
            cap = fp_rank(K.p, G) - fp_rank(K.p, out_rows)
        else:
            cap = fp_rank(K.p, G)
        return len(inner) * f - cap

    qa, qb = quotient_rank(A), quotient_rank(B)
    if qa != qb:
        return _fail("B(2) quotient ranks disagree", transferred=qa,
                     iwahori=qb)
    return CheckOutcome("pass", {"quotient_rank_fp": qa, "span_rank_fp": ra})
