"""Decision procedures for the universal quotient.

The quotient module is the edge induction modulo the submodule R generated by
the image and the kernel of T12 (the kernel equals the image of T10 + Tm10).
Membership in R is decidable exactly:

  * transfer route (complete): v lies in R iff transfer(v) lies in the image
    of the vertex adjacency operator T.  For a target supported at distance
    <= m, any preimage under T is supported at distance <= m-1: the outermost
    support of a candidate x always shows at distance +1 in T x, because each
    outermost vertex is the unique in-support neighbour of its children, so
    no cancellation can occur.  Solving the finite linear system against the
    generators {T delta_u : dist(u) <= m-1} is therefore a complete decision,
    both for membership and for non-membership.

  * span route (cutoff-bounded): echelonize {T12 delta_e} and
    {(T10 + Tm10) delta_e} for e up to a radius cutoff and test membership.
    A negative answer only says "not found up to cutoff".

Invariant spaces are computed as exact kernels: unknown coefficients over the
radius-N edge labels, one block of linear conditions per pro-p generator g,
requiring (g - 1) v to be in R, i.e. Q (P_g - 1) v = 0 where Q is the
reduce-mod-image-of-T matrix of the transfer map and P_g the permutation
action of g on edge labels (elements of the pro-p Iwahori fix the root
vertex, so they preserve label radius and P_g is a genuine permutation).
The heavy elimination runs over the prime subfield via the regular
representation; all ranks are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadIndex, CutoffExceeded, DimensionMismatch
from .linalg import (
    Echelon,
    fp_kernel,
    fp_matmul,
    fp_rank,
    fq_mat_to_fp,
    fq_vec_to_fp,
    fp_vec_to_fq,
    tables,
)
from .spaces import (
    FormalSum,
    Workspace,
    act_left,
    op_spherical,
    op_t10,
    op_t12,
    op_tm10,
    support_radius,
    transfer,
)
from .tree import ELabel, VLabel, i1_generators, reduce_edge


@dataclass
class Certificate:
    status: str  # "member" | "non_member" | "not_found_up_to_cutoff"
    complete: bool
    route: str
    combination: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def member(self) -> bool:
        return self.status == "member"


# -- coordinate vectors ---------------------------------------------------------


def edge_vector(ws: Workspace, v: FormalSum, nedges: int | None = None) -> np.ndarray:
    pos = ws.ball.edge_pos
    n = nedges if nedges is not None else len(ws.ball.edges)
    out = np.zeros(n, dtype=np.int16)
    for label, code in v.c.items():
        j = pos.get(label)
        if j is None or j >= n:
            raise BadIndex(f"support outside the first {n} edge labels")
        out[j] = code
    return out


def vert_vector(ws: Workspace, v: FormalSum, nverts: int | None = None) -> np.ndarray:
    pos = ws.ball.vertex_pos
    n = nverts if nverts is not None else len(ws.ball.vertices)
    out = np.zeros(n, dtype=np.int16)
    for label, code in v.c.items():
        j = pos.get(label)
        if j is None or j >= n:
            raise BadIndex(f"support outside the first {n} vertex labels")
        out[j] = code
    return out


def _verts_upto(ws: Workspace, dist: int):
    return [v for v in ws.ball.vertices if v.dist <= dist]


def _edges_upto(ws: Workspace, radius: int):
    return [e for e in ws.ball.edges if e.radius <= radius]


# -- image of the spherical operator --------------------------------------------


def _im_T_echelon(ws: Workspace, gen_dist: int):
    """Echelon of {T delta_u : dist(u) <= gen_dist}, coordinates over the full
    vertex list; insertion order follows the vertex list."""
    key = ("imT", gen_dist)
    got = ws.cache.get(key)
    if got is not None:
        return got
    gens = _verts_upto(ws, gen_dist)
    E = Echelon(ws.K, len(ws.ball.vertices))
    for u in gens:
        E.insert(vert_vector(ws, op_spherical(ws, ws.delta_vert(u))))
    ws.cache[key] = (E, gens)
    return E, gens


def decide_im_spherical(ws: Workspace, w: FormalSum) -> Certificate:
    """Is the vertex sum w in the image of the adjacency operator T?
    Complete in both directions (see module docstring)."""
    if w.is_zero():
        return Certificate("member", True, "transfer", {}, "zero target")
    m = support_radius(ws, w)
    if m + 1 > ws.radius + 1:
        raise BadIndex("support too close to the ball boundary for a complete answer")
    E, gens = _im_T_echelon(ws, m - 1) if m >= 1 else (Echelon(ws.K, len(ws.ball.vertices)), [])
    sol = E.solve(vert_vector(ws, w))
    if sol is None:
        return Certificate("non_member", True, "transfer", {},
                           f"no preimage supported at distance <= {max(m - 1, 0)}")
    comb = {gens[i]: c for i, c in sol.items()}
    return Certificate("member", True, "transfer", comb, "T x = w with x as combination")


def decide_ideal(ws: Workspace, v: FormalSum) -> Certificate:
    """Membership of an edge sum in R = (image of T12) + (kernel of T12)."""
    if v.is_zero():
        return Certificate("member", True, "transfer", {}, "zero vector")
    cert = decide_im_spherical(ws, transfer(ws, v))
    cert = Certificate(cert.status, cert.complete, "transfer", cert.combination,
                       "criterion: transfer(v) in image of T; " + cert.detail)
    return cert


def equal_in_quotient(ws: Workspace, a: FormalSum, b: FormalSum) -> Certificate:
    return decide_ideal(ws, a.sub(b))


# -- cutoff-bounded span route ---------------------------------------------------


def _ideal_span(ws: Workspace, cutoff: int):
    """Echelon of T12/kernel generators from edges of radius <= cutoff (their
    images live within radius cutoff+1)."""
    key = ("idealspan", cutoff)
    got = ws.cache.get(key)
    if got is not None:
        return got
    if cutoff + 1 > ws.radius:
        raise CutoffExceeded(f"cutoff {cutoff} needs ball radius >= {cutoff + 1}")
    E = Echelon(ws.K, len(ws.ball.edges))
    gens = []
    for e in _edges_upto(ws, cutoff):
        d = ws.delta_edge(e)
        for kind, img in (("t12", op_t12(ws, d)),
                          ("ker", op_t10(ws, d).add(op_tm10(ws, d)))):
            E.insert(edge_vector(ws, img))
            gens.append((kind, e))
    ws.cache[key] = (E, gens)
    return E, gens


def span_search(ws: Workspace, v: FormalSum, cutoff: int) -> Certificate:
    """Find v inside the span of ideal generators up to the radius cutoff."""
    if v.is_zero():
        return Certificate("member", True, "span", {}, "zero vector")
    E, gens = _ideal_span(ws, cutoff)
    sol = E.solve(edge_vector(ws, v))
    if sol is None:
        return Certificate("not_found_up_to_cutoff", False, "span", {},
                           f"not in the generator span at cutoff {cutoff}")
    comb = {gens[i]: c for i, c in sol.items()}
    return Certificate("member", True, "span", comb,
                       "explicit combination of T12/kernel generators")


# -- invariants -------------------------------------------------------------------


@dataclass
class InvariantResult:
    N: int
    labels: list
    dim_solutions_fp: int
    dim_ideal_fp: int
    dim_quotient: int
    solution_fp: np.ndarray  # (nedges*f) x dim_solutions_fp
    ideal_fp: np.ndarray
    representatives: list  # FormalSum, quotient basis lifts


def _quotient_matrix(ws: Workspace, N: int) -> np.ndarray:
    """Q over F_q: edge label j (radius <= N) -> transfer delta reduced
    against the image of T (complete for targets at distance <= N)."""
    key = ("Q", N)
    got = ws.cache.get(key)
    if got is not None:
        return got
    E, _ = _im_T_echelon(ws, N - 1) if N >= 1 else (Echelon(ws.K, len(ws.ball.vertices)), [])
    edges = _edges_upto(ws, N)
    nv = len(ws.ball.vertices)
    Q = np.zeros((nv, len(edges)), dtype=np.int16)
    for j, e in enumerate(edges):
        w = vert_vector(ws, transfer(ws, ws.delta_edge(e)))
        r, _ = E.reduce(w)
        Q[:, j] = r
    ws.cache[key] = Q
    return Q


def _mat_digits(m, cap: int):
    out = []
    for x in (m.a, m.b, m.c, m.d):
        v = x.val()
        out.append(None if v is None else (v, x.digits_from_zero(cap)))
    return tuple(out)


def _edge_permutation(ws: Workspace, g, N: int) -> np.ndarray:
    """P_g as an index map on the radius-N edge labels (pro-p elements
    permute labels of each radius, so the full-list permutation restricts
    to every smaller radius and is cached per matrix)."""
    key = ("eperm", _mat_digits(g, ws.P.cap))
    full = ws.cache.get(key)
    if full is None:
        pos = ws.ball.edge_pos
        full = np.zeros(len(ws.ball.edges), dtype=np.int64)
        for j, e in enumerate(ws.ball.edges):
            m = g.mul(ws.ball.edge_reps[pos[e]])
            lab, _ = reduce_edge(ws.ball, m, ws.checked)
            full[j] = pos[lab]
        ws.cache[key] = full
    nq = len(_edges_upto(ws, N))
    perm = full[:nq]
    if np.any(perm >= nq):
        raise BadIndex("pro-p action left the radius-N label set")
    return perm


def invariant_space(ws: Workspace, N: int, gen_depth: int | None = None) -> InvariantResult:
    """Exact I(1)-invariants of the quotient, computed on radius-N coefficients.

    Solutions = {v supported on B(N) : (g - 1) v in R for topological
    generators g of the pro-p Iwahori at digit depth < gen_depth}; the
    reported quotient dimension subtracts the part of R supported in B(N).
    """
    if N > ws.radius:
        raise BadIndex("N exceeds the enumerated ball")
    if gen_depth is None:
        gen_depth = N + 2
    cached = ws.cache.get(("inv", N, gen_depth))
    if cached is not None:
        return cached
    K, p, f = ws.K, ws.K.p, ws.K.f
    edges = _edges_upto(ws, N)
    nq = len(edges)
    Q = _quotient_matrix(ws, N)
    live = np.flatnonzero(np.any(Q, axis=1))
    # zero rows constrain nothing; dropping them shrinks every elimination
    Q = Q[live] if live.size else Q[:1]
    T = tables(K)
    Qfp = fq_mat_to_fp(K, Q)
    S = None                     # None encodes the identity seed
    for name, g in i1_generators(ws.P, gen_depth):
        perm = _edge_permutation(ws, g, N)
        C = T.ADD[Q[:, perm], T.NEG[Q]]
        Cfp = fq_mat_to_fp(K, C)
        A = Cfp if S is None else fp_matmul(p, Cfp, S)
        if not np.any(A):
            continue
        ker = fp_kernel(p, A)
        S = ker if S is None else fp_matmul(p, S, ker)
        if S.shape[1] == 0:
            break
    if S is None:
        S = np.eye(nq * f, dtype=np.int64)
    ideal_fp = fp_kernel(p, Qfp)
    # the ideal part of B(N) is automatically invariant: check it sits inside S
    if S.shape[1] or ideal_fp.shape[1]:
        rk_S = fp_rank(p, S.T)
        rk_join = fp_rank(p, np.concatenate([S, ideal_fp], axis=1).T)
        if rk_join != rk_S:
            raise DimensionMismatch("ideal cap not contained in the solution space")
    dim_sol = S.shape[1] if S.size else 0
    dim_cap = ideal_fp.shape[1] if ideal_fp.size else 0
    if (dim_sol - dim_cap) % f:
        raise DimensionMismatch("quotient dimension not divisible by f")
    reps = _quotient_representatives(ws, edges, S, ideal_fp)
    res = InvariantResult(
        N=N,
        labels=edges,
        dim_solutions_fp=dim_sol,
        dim_ideal_fp=dim_cap,
        dim_quotient=(dim_sol - dim_cap) // f,
        solution_fp=S,
        ideal_fp=ideal_fp,
        representatives=reps,
    )
    ws.cache[("inv", N, gen_depth)] = res
    return res


def _quotient_representatives(ws: Workspace, edges, S, ideal_fp):
    """Deterministic quotient basis lifts: reduce each solution column against
    the F_q-echelon of the ideal cap (and of previously accepted lifts)."""
    K = ws.K
    T = tables(K)
    E = Echelon(K, len(edges))
    for j in range(ideal_fp.shape[1] if ideal_fp.size else 0):
        E.insert(fp_vec_to_fq(K, ideal_fp[:, j]))
    reps = []
    for j in range(S.shape[1] if S.size else 0):
        codes = fp_vec_to_fq(K, S[:, j])
        r, _ = E.reduce(codes)
        nz = np.flatnonzero(r)
        if nz.size == 0:
            continue
        r = T.MUL[int(T.INV[int(r[int(nz[0])])])][r]
        E.insert(r)
        v = FormalSum(K, "edge")
        for idx in np.flatnonzero(r):
            v.add_term(edges[int(idx)], int(r[int(idx)]))
        reps.append(v)
    return reps


def in_solution_space(ws: Workspace, res: InvariantResult, v: FormalSum) -> bool:
    """Exact membership of v (edge sum on B(N)) in the solution space."""
    vec = fq_vec_to_fp(ws.K, edge_vector(ws, v, len(res.labels)))
    p = ws.K.p
    if res.solution_fp.size == 0:
        return not np.any(vec % p)
    A = res.solution_fp
    rk = fp_rank(p, A.T)
    rk2 = fp_rank(p, np.concatenate([A, vec.reshape(-1, 1)], axis=1).T)
    return rk == rk2


def is_invariant(ws: Workspace, v: FormalSum, gen_depth: int) -> tuple[bool, list]:
    """Direct per-generator test: (g - 1) v in R for each pro-p generator;
    returns (all_ok, list of (name, Certificate))."""
    out = []
    ok = True
    for name, g in i1_generators(ws.P, gen_depth):
        cert = decide_ideal(ws, act_left(ws, g, v).sub(v))
        out.append((name, cert))
        ok = ok and cert.member
    return ok, out


# -- words in the pro-p Hecke generators -------------------------------------------


def hecke_word_normal_form(K, terms):
    """Reduce a linear combination of words in the operators acting on the
    I(1)-invariants of the quotient to the canonical form a * 1 + b * TB.

    Words are tuples of letters, leftmost letter applied first:
        ("tns",)  ("tb",)  ("e", (r, s))
    Rules used (all identities of the action modulo the annihilator):
        leading tns                  -> 0
        leading e_chi, chi nontrivial-> 0
        leading e_1                  -> drop (sum of idempotents is 1,
                                        the others annihilate)
        tb tb                        -> drop (TB is an involution)
        tb tns                       -> -tb
        X e_chi (X in {tb, tns})     -> e_(chi conjugated) X
    Returns {(): a, ("tb",): b} over K-codes.
    """
    from collections import deque

    out = {"1": 0, "tb": 0}
    queue = deque((tuple(w), c) for w, c in terms)
    guard = 0
    while queue:
        guard += 1
        if guard > 100000:
            raise BadIndex("rewriting did not terminate")
        word, c = queue.popleft()
        if not c:
            continue
        if not word:
            out["1"] = K.add(out["1"], c)
            continue
        head = word[0]
        if head[0] == "tns":
            continue  # annihilates
        if head[0] == "e":
            r, s = head[1]
            if (r % (K.q - 1), s % (K.q - 1)) == (0, 0):
                queue.append((word[1:], c))  # e_1 acts as identity here
            continue  # nontrivial e_chi annihilates
        # head is tb
        if len(word) == 1:
            out["tb"] = K.add(out["tb"], c)
            continue
        nxt = word[1]
        if nxt[0] == "tb":
            queue.append((word[2:], c))
        elif nxt[0] == "tns":
            queue.append((("tb",) + word[2:], K.neg(c)))
        else:  # tb e_chi ... -> e_chi^w tb ...
            r, s = nxt[1]
            queue.append(((("e", (s % (K.q - 1), r % (K.q - 1))),) + (word[0],) + word[2:], c))
    return out
