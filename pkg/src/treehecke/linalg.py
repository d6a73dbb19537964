"""Exact linear algebra over F_q and F_p.

Two layers:

  * Echelon: incremental row echelon over F_q (coefficients as field codes,
    rows as numpy arrays, table-gather row operations) with combination
    tracking, used for membership certificates.

  * fp_*: dense reduced row echelon / kernel / matmul over the prime field
    with numpy integer arithmetic.  Matmul goes through float64 (entries are
    < p <= 7, so dot products stay far below 2**53 and are exact).

F_q data can be expanded to F_p coordinates through the regular
representation (each code becomes the f x f multiplication-by-code matrix);
F_q-linear kernels computed in the expanded picture have F_p-dimension
divisible by f.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .gf import FqField

_TABLE_CACHE: dict = {}


class FqTables:
    def __init__(self, K: FqField):
        q = K.q
        self.K = K
        self.ADD = np.zeros((q, q), dtype=np.int16)
        self.MUL = np.zeros((q, q), dtype=np.int16)
        self.NEG = np.zeros(q, dtype=np.int16)
        self.INV = np.zeros(q, dtype=np.int16)
        for a in range(q):
            self.NEG[a] = K.neg(a)
            if a:
                self.INV[a] = K.inv(a)
            for b in range(q):
                self.ADD[a, b] = K.add(a, b)
                self.MUL[a, b] = K.mul(a, b)


def tables(K: FqField) -> FqTables:
    t = _TABLE_CACHE.get((K.p, K.f))
    if t is None:
        t = _TABLE_CACHE[(K.p, K.f)] = FqTables(K)
    return t


class Echelon:
    """Row space over F_q with unit pivots, insertion order remembered.

    Every stored row is a linear combination of the inserted vectors; the
    combinations are kept as dicts {inserted index: code} so that solve()
    can hand back an exact certificate.
    """

    def __init__(self, K: FqField, ncols: int):
        self.K = K
        self.T = tables(K)
        self.ncols = ncols
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        self.combs: list[dict] = []
        self.n_inserted = 0

    def _axpy_comb(self, acc: dict, c: int, comb: dict):
        K = self.K
        for idx, x in comb.items():
            v = K.add(acc.get(idx, 0), K.mul(c, x))
            if v:
                acc[idx] = v
            else:
                acc.pop(idx, None)

    def reduce(self, vec: np.ndarray):
        """Return (residual, combination) with vec = residual + sum."""
        T = self.T
        r = np.asarray(vec, dtype=np.int16).copy()
        if r.shape != (self.ncols,):
            raise DimensionMismatch(f"expected {self.ncols} columns")
        comb: dict = {}
        for row, pc, rc in zip(self.rows, self.pivots, self.combs):
            c = int(r[pc])
            if c:
                r = T.ADD[r, T.MUL[int(T.NEG[c])][row]]
                self._axpy_comb(comb, c, rc)
        return r, comb

    def insert(self, vec: np.ndarray) -> bool:
        """Add vec to the span; True if the rank grew."""
        idx = self.n_inserted
        self.n_inserted += 1
        r, comb = self.reduce(vec)
        nz = np.flatnonzero(r)
        if nz.size == 0:
            return False
        T = self.T
        pc = int(nz[0])
        cinv = int(T.INV[int(r[pc])])
        r = T.MUL[cinv][r]
        # vec = residual + sum(comb); stored row = cinv * residual
        #     = cinv * vec - cinv * sum(comb)
        stored = {idx: cinv}
        for k, v in comb.items():
            c = self.K.mul(cinv, self.K.neg(v))
            if c:
                stored[k] = c
        self.rows.append(r)
        self.pivots.append(pc)
        self.combs.append(stored)
        order = np.argsort(np.array(self.pivots, dtype=np.int64), kind="stable")
        self.rows = [self.rows[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]
        self.combs = [self.combs[i] for i in order]
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vec) -> bool:
        r, _ = self.reduce(vec)
        return not np.any(r)

    def solve(self, vec):
        """Combination dict over inserted indices with sum = vec, or None."""
        r, comb = self.reduce(vec)
        if np.any(r):
            return None
        return comb


# -- prime field ---------------------------------------------------------------


def fp_matmul(p: int, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    C = A.astype(np.float64) @ B.astype(np.float64)
    return np.rint(C).astype(np.int64) % p


def fp_rref(p: int, A: np.ndarray):
    """Reduced row echelon form mod p; returns (R, pivot_columns)."""
    A = np.asarray(A, dtype=np.int64).copy() % p
    m, n = A.shape
    piv: list[int] = []
    r = 0
    for j in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, j])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, j]), p - 2, p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        rows = np.flatnonzero(A[:, j])
        rows = rows[rows != r]
        if rows.size:
            A[rows] = (A[rows] - np.outer(A[rows, j], A[r])) % p
        piv.append(j)
        r += 1
    return A[:r], piv


def fp_rank(p: int, A: np.ndarray) -> int:
    return len(fp_rref(p, A)[1])


def fp_kernel(p: int, A: np.ndarray) -> np.ndarray:
    """Columns form a basis of {x : A x = 0 mod p}."""
    m, n = A.shape
    R, piv = fp_rref(p, A)
    free = [j for j in range(n) if j not in set(piv)]
    ker = np.zeros((n, len(free)), dtype=np.int64)
    for t, j in enumerate(free):
        ker[j, t] = 1
        for i, pc in enumerate(piv):
            ker[pc, t] = (-int(R[i, j])) % p
    return ker


def fp_solve(p: int, A: np.ndarray, b: np.ndarray):
    """One solution of A x = b mod p, or None."""
    m, n = A.shape
    aug = np.concatenate([A % p, (b % p).reshape(m, 1)], axis=1)
    R, piv = fp_rref(p, aug)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, n]
    return x


def reg_blocks(K: FqField) -> np.ndarray:
    """reg[c] is the f x f matrix of multiplication by code c on the
    power basis (column j = coefficients of c * x^j)."""
    f = K.f
    out = np.zeros((K.q, f, f), dtype=np.int64)
    basis = [K.from_coeffs(tuple(1 if i == j else 0 for i in range(f))) for j in range(f)]
    for c in range(K.q):
        for j, bj in enumerate(basis):
            out[c, :, j] = K.coeffs(K.mul(c, bj))
    return out


def fq_vec_to_fp(K: FqField, codes: np.ndarray) -> np.ndarray:
    """Coefficient expansion: length n code vector -> length n*f over F_p."""
    n = len(codes)
    out = np.zeros(n * K.f, dtype=np.int64)
    for i, c in enumerate(codes):
        out[i * K.f : (i + 1) * K.f] = K.coeffs(int(c))
    return out


def fp_vec_to_fq(K: FqField, vec: np.ndarray) -> np.ndarray:
    n = len(vec) // K.f
    out = np.zeros(n, dtype=np.int16)
    for i in range(n):
        out[i] = K.from_coeffs(tuple(int(x) % K.p for x in vec[i * K.f : (i + 1) * K.f]))
    return out


def fq_mat_to_fp(K: FqField, M: np.ndarray) -> np.ndarray:
    """Expand an m x n code matrix to (m f) x (n f) over F_p via the regular
    representation, so that expansion commutes with matrix-vector products
    against coefficient-expanded vectors."""
    reg = reg_blocks(K)
    m, n = M.shape
    f = K.f
    blocks = reg[np.asarray(M, dtype=np.int64)]  # m x n x f x f
    return blocks.transpose(0, 2, 1, 3).reshape(m * f, n * f)
