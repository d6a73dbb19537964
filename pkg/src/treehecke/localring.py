"""Exact finite-precision arithmetic in a p-adic field F with residue field F_q.

The ring of integers O is modelled uniformly for all three ramification
shapes: an element is a polynomial in the uniformizer pi of degree < e whose
coefficients live in the unramified ring W = Z[X]/(p^M, Conway lift), with
the relation pi^e = p.  Unramified fields are e = 1 (so O = W, pi = p),
totally ramified fields are f = 1 (W = Z/p^M), and the mixed case uses both.

Field elements (FElem) are num * pi^(-shift) with num in O and an explicit
count of known pi-digits; every operation propagates that count and anything
that would read an unknown digit raises PrecisionExhausted instead of
rounding.  Teichmueller digits give the canonical digit expansion: to_digits
and from_digits are mutually inverse on the tracked window.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

from .errors import (
    BadIndex,
    ConfigError,
    NotAUnit,
    PrecisionExhausted,
)
from .gf import FqField, field_create


@dataclass(frozen=True)
class LocalParams:
    p: int
    e: int
    f: int
    prec: int
    field: FqField = dc_field(compare=False)
    M: int = dc_field(compare=False)
    pmod: int = dc_field(compare=False)
    cap: int = dc_field(compare=False)
    mod_lift: tuple = dc_field(compare=False)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def model(self) -> str:
        if self.e == 1:
            return "unramified"
        if self.f == 1:
            return "eisenstein"
        return "mixed"

    def __repr__(self):
        return f"LocalParams(p={self.p}, e={self.e}, f={self.f}, prec={self.prec})"


_params_cache: dict = {}


def params_create(p: int, e: int, f: int, prec: int) -> LocalParams:
    if e < 1 or prec < 1:
        raise ConfigError("need e >= 1 and prec >= 1")
    key = (p, e, f, prec)
    if key in _params_cache:
        return _params_cache[key]
    K = field_create(p, f)
    M = (prec + e + e - 1) // e  # ceil((prec+e)/e)
    P = LocalParams(
        p=p, e=e, f=f, prec=prec,
        field=K, M=M, pmod=p**M, cap=e * M,
        mod_lift=tuple(int(c) for c in K.modulus),
    )
    _params_cache[key] = P
    return P


# ---------------------------------------------------------------------------
# W = Z[X]/(p^M, Conway lift): tuples of f ints mod p^M.


def w_zero(P: LocalParams):
    return (0,) * P.f


def w_one(P: LocalParams):
    return (1,) + (0,) * (P.f - 1)


def w_from_int(P: LocalParams, n: int):
    return (n % P.pmod,) + (0,) * (P.f - 1)


def w_add(P, a, b):
    return tuple((x + y) % P.pmod for x, y in zip(a, b))


def w_sub(P, a, b):
    return tuple((x - y) % P.pmod for x, y in zip(a, b))


def w_neg(P, a):
    return tuple((-x) % P.pmod for x in a)


def w_scale(P, n, a):
    return tuple((n * x) % P.pmod for x in a)


def w_mul(P, a, b):
    f = P.f
    if f == 1:
        return ((a[0] * b[0]) % P.pmod,)
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % P.pmod
    # reduce by the monic integral modulus
    for k in range(2 * f - 2, f - 1, -1):
        c = prod[k]
        if c:
            off = k - f
            for j in range(f):
                prod[off + j] = (prod[off + j] - c * P.mod_lift[j]) % P.pmod
            prod[k] = 0
    return tuple(prod[:f])


def w_pow(P, a, n: int):
    r = w_one(P)
    while n:
        if n & 1:
            r = w_mul(P, r, a)
        a = w_mul(P, a, a)
        n >>= 1
    return r


def w_vp(P, a):
    """p-valuation, or None when 0 mod p^M."""
    best = None
    for x in a:
        if x == 0:
            continue
        v = 0
        while x % P.p == 0:
            x //= P.p
            v += 1
        best = v if best is None else min(best, v)
        if best == 0:
            return 0
    return best


def w_residue(P, a) -> int:
    return P.field.from_coeffs(tuple(x % P.p for x in a))


def w_divp(P, a):
    assert all(x % P.p == 0 for x in a), "inexact division by p"
    return tuple(x // P.p for x in a)


# ---------------------------------------------------------------------------
# O: tuples of e W-elements, pi^e = p.


def r_zero(P):
    return (w_zero(P),) * P.e


def r_one(P):
    return (w_one(P),) + (w_zero(P),) * (P.e - 1)


def r_from_w(P, w):
    return (w,) + (w_zero(P),) * (P.e - 1)


def r_from_int(P, n: int):
    return r_from_w(P, w_from_int(P, n))


def r_add(P, x, y):
    return tuple(w_add(P, a, b) for a, b in zip(x, y))


def r_sub(P, x, y):
    return tuple(w_sub(P, a, b) for a, b in zip(x, y))


def r_neg(P, x):
    return tuple(w_neg(P, a) for a in x)


def r_mul(P, x, y):
    e = P.e
    acc = [w_zero(P) for _ in range(e)]
    for i, a in enumerate(x):
        for j, b in enumerate(y):
            t = w_mul(P, a, b)
            k = i + j
            if k >= e:
                t = w_scale(P, P.p, t)
                k -= e
            acc[k] = w_add(P, acc[k], t)
    return tuple(acc)


def r_pi_mul(P, x, j: int):
    """x * pi^j for j >= 0."""
    a, b = divmod(j, P.e)
    out = list(x)
    if b:
        rolled = [w_zero(P)] * P.e
        for i, w in enumerate(out):
            k = i + b
            if k >= P.e:
                rolled[k - P.e] = w_add(P, rolled[k - P.e], w_scale(P, P.p, w))
            else:
                rolled[k] = w_add(P, rolled[k], w)
        out = rolled
    if a:
        pa = pow(P.p, a, P.pmod)
        out = [w_scale(P, pa, w) for w in out]
    return tuple(out)


def r_vval(P, x):
    """pi-valuation, or None when 0 mod pi^cap."""
    best = None
    for i, w in enumerate(x):
        vp = w_vp(P, w)
        if vp is None:
            continue
        v = P.e * vp + i
        best = v if best is None else min(best, v)
    return best


def r_divpi(P, x):
    """Exact x / pi; caller guarantees vval >= 1."""
    out = list(x[1:])
    out.append(w_divp(P, x[0]))
    return tuple(out)


def r_residue(P, x) -> int:
    return w_residue(P, x[0])


_teich_cache: dict = {}


def teich(P: LocalParams, code: int):
    """Teichmueller lift of the residue-field element with the given code:
    the unique fixed point of y -> y^q congruent to it mod pi."""
    key = (P.p, P.e, P.f, P.prec, code)
    if key in _teich_cache:
        return _teich_cache[key]
    w = tuple(c % P.pmod for c in P.field.coeffs(code))
    for _ in range(P.M + 2):
        nxt = w_pow(P, w, P.q)
        if nxt == w:
            break
        w = nxt
    out = r_from_w(P, w)
    _teich_cache[key] = out
    return out


def r_unit_inv(P, x):
    """Inverse of a unit of O by Newton iteration."""
    res = r_residue(P, x)
    if res == 0:
        raise NotAUnit("residue zero: not a unit of O")
    y = teich(P, P.field.inv(res))
    two = r_from_int(P, 2)
    steps = 1
    while (1 << steps) < P.cap + 1:
        steps += 1
    for _ in range(steps + 1):
        y = r_mul(P, y, r_sub(P, two, r_mul(P, x, y)))
    return y


def to_digits(P: LocalParams, x, n: int):
    """First n Teichmueller pi-digits of x in O (codes)."""
    if n > P.cap:
        raise PrecisionExhausted(f"asked {n} digits, capacity {P.cap}")
    out = []
    cur = x
    for _ in range(n):
        d = r_residue(P, cur)
        out.append(d)
        if d:
            cur = r_sub(P, cur, teich(P, d))
        cur = r_divpi(P, cur)
    return tuple(out)


def from_digits(P: LocalParams, digits):
    acc = r_zero(P)
    for i, d in enumerate(digits):
        if d:
            acc = r_add(P, acc, r_pi_mul(P, teich(P, d), i))
    return acc


def truncate_digits(digits, m: int):
    """[x]_m on a digit vector: keep positions 0..m-1."""
    if m < 0:
        raise BadIndex("negative truncation length")
    return tuple(digits[:m])


def carry_Z(P: LocalParams, x: int, y: int) -> int:
    """First carry digit of [x] + [y]: digit 1 of the sum of Teichmueller
    lifts.  Vanishes identically when e > 1 (pi^2 | p); for e = 1 it is the
    universal polynomial sum_{0<i<q} (-binom(q,i)/p) x^i y^(q-i).
    """
    if P.e > 1:
        return 0
    K = P.field
    q = K.q
    acc = 0
    for i in range(1, q):
        c = (-(comb(q, i) // P.p)) % P.p
        if c:
            acc = K.add(acc, K.mul(c, K.mul(K.pow(x, i), K.pow(y, q - i))))
    return acc


# ---------------------------------------------------------------------------
# Field elements with tracked precision.


class FElem:
    """num * pi^(-shift) with num in O; digits of num at positions >= known
    are untracked junk.  Value digits live at positions [-shift, known-shift).
    """

    __slots__ = ("P", "num", "shift", "known", "_digits")

    def __init__(self, P: LocalParams, num, shift: int = 0, known: int | None = None):
        known = P.cap if known is None else min(known, P.cap)
        if shift > 0:
            # renormalize: move num's pi-valuation into the shift so that
            # products do not silently push all value digits past the cap.
            # Only the valuation visible inside the known window may be
            # stripped (beyond it the digits are untracked).
            v = r_vval(P, num)
            vk = known if (v is None or v > known) else v
            t = min(shift, vk)
            for _ in range(t):
                num = r_divpi(P, num)
            shift -= t
            known -= t
        self.P = P
        self.num = num
        self.shift = shift
        self.known = known
        self._digits = None
        if self.known <= 0:
            raise PrecisionExhausted("element has no tracked digits left")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def from_int(P, n: int) -> "FElem":
        return FElem(P, r_from_int(P, n))

    @staticmethod
    def from_ring(P, num) -> "FElem":
        return FElem(P, num)

    @staticmethod
    def from_digit_vec(P, digits, shift: int = 0) -> "FElem":
        return FElem(P, from_digits(P, digits), shift)

    @staticmethod
    def teichmueller(P, code: int) -> "FElem":
        return FElem(P, teich(P, code))

    @staticmethod
    def pi_power(P, j: int) -> "FElem":
        if j >= 0:
            return FElem(P, r_pi_mul(P, r_one(P), j))
        return FElem(P, r_one(P), shift=-j)

    @staticmethod
    def zero(P) -> "FElem":
        return FElem(P, r_zero(P))

    @staticmethod
    def one(P) -> "FElem":
        return FElem(P, r_one(P))

    # -- structure ---------------------------------------------------------
    def val(self):
        """pi-valuation of the value, None when zero at tracked precision."""
        v = r_vval(self.P, self.num)
        if v is None or v >= self.known:
            return None
        return v - self.shift

    def is_zero(self) -> bool:
        return self.val() is None

    def digit(self, i: int) -> int:
        """Teichmueller digit of the value at pi-position i."""
        j = i + self.shift
        if j < 0:
            return 0
        if j >= self.known:
            raise PrecisionExhausted(f"digit {i} beyond tracked precision")
        if self._digits is None or len(self._digits) <= j:
            self._digits = to_digits(self.P, self.num, self.known)
        return self._digits[j]

    def digits_from_zero(self, n: int):
        return tuple(self.digit(i) for i in range(n))

    # -- arithmetic --------------------------------------------------------
    def _aligned(self, other: "FElem"):
        S = max(self.shift, other.shift)
        a = r_pi_mul(self.P, self.num, S - self.shift)
        b = r_pi_mul(self.P, other.num, S - other.shift)
        ka = min(self.known + (S - self.shift), self.P.cap)
        kb = min(other.known + (S - other.shift), self.P.cap)
        return S, a, b, min(ka, kb)

    def add(self, other: "FElem") -> "FElem":
        S, a, b, k = self._aligned(other)
        return FElem(self.P, r_add(self.P, a, b), S, k)

    def sub(self, other: "FElem") -> "FElem":
        S, a, b, k = self._aligned(other)
        return FElem(self.P, r_sub(self.P, a, b), S, k)

    def neg(self) -> "FElem":
        return FElem(self.P, r_neg(self.P, self.num), self.shift, self.known)

    def mul(self, other: "FElem") -> "FElem":
        P = self.P
        v1 = r_vval(P, self.num)
        v2 = r_vval(P, other.num)
        v1 = self.known if v1 is None else min(v1, self.known)
        v2 = other.known if v2 is None else min(v2, other.known)
        k = min(self.known + v2, other.known + v1, P.cap)
        return FElem(P, r_mul(P, self.num, other.num), self.shift + other.shift, k)

    def pi_mul(self, j: int) -> "FElem":
        """Multiply by pi^j (j of either sign)."""
        return FElem(self.P, self.num, self.shift - j, self.known)

    def inv(self) -> "FElem":
        P = self.P
        v = r_vval(P, self.num)
        if v is None or v >= self.known:
            raise NotAUnit("inverse of (tracked) zero")
        u = self.num
        for _ in range(v):
            u = r_divpi(P, u)
        uinv = r_unit_inv(P, u)
        return FElem(P, uinv, -(self.shift - v), self.known - v)

    def div(self, other: "FElem") -> "FElem":
        return self.mul(other.inv())

    def unit_scale_to_pi_power(self):
        """Split x = pi^v * u: return (v, u as FElem with val 0)."""
        P = self.P
        v = r_vval(P, self.num)
        if v is None or v >= self.known:
            raise NotAUnit("zero has no unit part")
        u = self.num
        for _ in range(v):
            u = r_divpi(P, u)
        return v - self.shift, FElem(P, u, 0, self.known - v)

    def residue(self) -> int:
        """Digit at position 0 (the reduction mod pi when integral)."""
        return self.digit(0)

    def truncate(self, m: int) -> "FElem":
        """[x]_m: keep digits at positions 0..m-1 (requires shift-side zero)."""
        ds = [self.digit(i) for i in range(m)]
        return FElem.from_digit_vec(self.P, ds)

    def eq(self, other: "FElem") -> bool:
        return self.sub(other).is_zero()

    def __repr__(self):
        try:
            v = self.val()
        except PrecisionExhausted:
            v = "?"
        return f"FElem(val={v}, shift={self.shift}, known={self.known})"
