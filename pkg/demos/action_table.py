"""Print the action of the Hecke generators on the standard invariant vectors.

The four families [id], [beta], s_n^{p^l}, beta s_n^{p^l} are closed under
the operators Tbeta, Tns and the torus idempotents e_chi, up to vectors that
die in the quotient.  This script evaluates every cell exactly and reports
whether the tabulated value holds on the nose or only modulo the ideal.
"""

from treehecke import (HChar, Workspace, decide_ideal, equal_in_quotient,
                       family_beta_s, family_s, right_echi, right_tbeta,
                       right_tns)
from treehecke.checks import BETA_EDGE, ID_EDGE

ws = Workspace(2, 1, 2, radius=4)
K = ws.K
print(f"q = {ws.q}, ball radius {ws.radius}")


def verdict(got, want):
    if got == want:
        return "exact"
    cert = equal_in_quotient(ws, got, want)
    return "quotient" if cert.member else "FAILS"


d_id = ws.delta_edge(ID_EDGE)
d_beta = ws.delta_edge(BETA_EDGE)
rows = [
    ("[id]", d_id),
    ("[beta]", d_beta),
    ("s_2^1", family_s(ws, 2, 1)),
    ("s_2^2", family_s(ws, 2, 2)),
    ("beta s_2^1", family_beta_s(ws, 2, 1)),
    ("beta s_2^2", family_beta_s(ws, 2, 2)),
]

print()
print("Tbeta column:")
targets = [d_beta, d_id, family_beta_s(ws, 2, 1), family_beta_s(ws, 2, 2),
           family_s(ws, 2, 1), family_s(ws, 2, 2)]
names = ["[beta]", "[id]", "beta s_2^1", "beta s_2^2", "s_2^1", "s_2^2"]
for (rname, v), want, wname in zip(rows, targets, names):
    print(f"  {rname:12s} Tbeta = {wname:12s} ({verdict(right_tbeta(ws, v), want)})")

print()
print("Tns column:")
zero = ws.zero("edge")
targets = [zero, d_beta.neg(), zero, zero,
           family_s(ws, 3, 1).neg(), family_s(ws, 3, 2).neg()]
names = ["0", "-[beta]", "0", "0", "-s_3^1", "-s_3^2"]
for (rname, v), want, wname in zip(rows, targets, names):
    print(f"  {rname:12s} Tns   = {wname:12s} ({verdict(right_tns(ws, v), want)})")
print("  (the quotient-only cell at p = 2, e = 1 reflects the carry of -1:")
print("   the digit negation mu -> -mu is not carry-free over Z_2)")

print()
print("e_chi column (which of the (q-1)^2 idempotents fixes each vector):")
for rname, v in rows:
    kept = []
    for r in range(K.q - 1):
        for s in range(K.q - 1):
            chi = HChar(K, r, s)
            img = right_echi(ws, chi, v)
            if img == v:
                kept.append(f"chi=({chi.r},{chi.s}) fixes exactly")
            elif not (img.is_zero() or decide_ideal(ws, img).member):
                kept.append(f"chi=({chi.r},{chi.s}) partial")
    print(f"  {rname:12s} {'; '.join(kept) if kept else 'killed by every chi'}")
