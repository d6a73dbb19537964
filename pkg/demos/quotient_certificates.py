"""Certificates for membership in the defining ideal of the quotient.

Every yes/no answer about the quotient module comes with a replayable
certificate: members carry an explicit generator combination, non-members
carry the complete transfer-criterion refusal.  This script exercises both
routes on the same vectors and replays a combination coefficient by
coefficient.
"""

import random

from treehecke import (Workspace, act_left, decide_ideal, equal_in_quotient,
                       family_s, op_t10, op_t12, op_tm10, span_search)
from treehecke.checks import BETA_EDGE, ID_EDGE
from treehecke.tree import mat_u
from treehecke.localring import FElem

ws = Workspace(2, 1, 2, radius=3)
rng = random.Random(5)
print(f"q = {ws.q}, ball radius {ws.radius}")
print()

# a vector manufactured inside the ideal
seed = ws.delta_edge(ID_EDGE).add(ws.delta_edge(BETA_EDGE).scale(2))
v = op_t12(ws, seed).add(op_t10(ws, seed).add(op_tm10(ws, seed)))
ca = decide_ideal(ws, v)
cb = span_search(ws, v, cutoff=2)
print("manufactured ideal vector:")
print(f"  transfer route: {ca.status} (complete={ca.complete})")
print(f"  span route:     {cb.status} with {len(cb.combination)} generators")

acc = ws.zero("edge")
for (kind, e), code in cb.combination.items():
    d = ws.delta_edge(e)
    img = op_t12(ws, d) if kind == "t12" else op_t10(ws, d).add(op_tm10(ws, d))
    acc = acc.add(img.scale(code))
assert acc == v
print("  replayed the span combination: reproduces the vector exactly")
print()

# the generator of the quotient stays nonzero
cid = decide_ideal(ws, ws.delta_edge(ID_EDGE))
print(f"[id] in the ideal?    {cid.status} (complete={cid.complete})")
cbeta = decide_ideal(ws, ws.delta_edge(BETA_EDGE))
print(f"[beta] in the ideal?  {cbeta.status} (complete={cbeta.complete})")
print()

# the standard non-invariance computation, certified both ways
u = mat_u(ws.P, FElem.teichmueller(ws.P, 1).neg())
s = family_s(ws, 1, 1)
diff = act_left(ws, u, s).sub(s)
assert diff == family_s(ws, 1, 0)
cert = equal_in_quotient(ws, diff, ws.delta_edge(BETA_EDGE).neg())
print("u(-1) s_1^1 - s_1^1 = s_1^0:")
print(f"  equals -[beta] in the quotient: {cert.status}")
print("  so s_1^1 is not invariant, and its defect is the generator flip")
