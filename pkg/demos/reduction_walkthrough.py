"""Walk through coset reduction on the tree.

Takes a handful of group elements over Q_2(sqrt(2))-style parameters
(p = 2, e = 1, f = 2, so q = 4), reduces each one to its canonical
vertex / edge / pro-p labels, and prints the witness that certifies
the reduction: rep^(-1) * g must land in KZ / IZ / I(1)Z respectively.
"""

import random

from treehecke import BallIndex, membership, reduce_edge, reduce_prop, \
    reduce_vertex
from treehecke.localring import params_create
from treehecke.tree import (mat_alpha, mat_beta, mat_id, mat_u,
                            random_pro_p_element)
from treehecke.localring import FElem

P = params_create(2, 1, 2, prec=8)
ball = BallIndex(P, 3)
rng = random.Random(7)

print(f"residue field F_{P.q}, ball radius {ball.radius}")
print(f"tree ball: {len(ball.vertices)} vertices, {len(ball.edges)} oriented edges")
print()

samples = [
    ("identity", mat_id(P)),
    ("alpha = diag(pi, 1)", mat_alpha(P)),
    ("beta (edge flip)", mat_beta(P)),
    ("alpha^2 u([1])", mat_alpha(P).mul(mat_alpha(P)).mul(
        mat_u(P, FElem.teichmueller(P, 1)))),
    ("random pro-p element", random_pro_p_element(P, rng)),
    ("scrambled: beta * pro-p * pi-center",
     mat_beta(P).mul(random_pro_p_element(P, rng)).pi_scale(1)),
]

for name, g in samples:
    vlab, vwit = reduce_vertex(P, g)
    elab, ewit = reduce_edge(ball, g)
    plab, pwit = reduce_prop(ball, g)
    print(name)
    print(f"  vertex label {vlab}   witness in KZ:   {membership(vwit.mat, 'KZ')}")
    print(f"  edge   label {elab}   witness in IZ:   {membership(ewit.mat, 'IZ')}")
    print(f"  pro-p  label {plab}   witness in I1Z:  {membership(pwit.mat, 'I1Z')}")
    # reduction is idempotent: reducing the canonical rep returns the label
    again, _ = reduce_edge(ball, ball.edge_reps[ball.edge_pos[elab]])
    assert again == elab
    print()

print("sphere census (vertices at distance d, oriented edges at radius r):")
q = P.q
for d in range(0, ball.radius + 2):
    nv = 1 if d == 0 else (q + 1) * q ** (d - 1)
    print(f"  distance {d}: {nv} vertices")
for r in range(0, ball.radius + 1):
    ne = 2 if r == 0 else (2 * q if r == 1 else 2 * (q + 1) * q ** (r - 1))
    print(f"  radius   {r}: {ne} edges")
