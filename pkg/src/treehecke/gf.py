"""Arithmetic in small finite fields F_q, q = p^f <= 81.

Elements are plain ints 0..q-1 packing the coefficient vector of the power
basis in little-endian base p: code = sum(c_i * p^i).  All arithmetic is
table-driven and exact.  The modulus is the Conway polynomial of (p, f),
recomputed at construction by lexicographic search so that element encodings
are reproducible bit for bit; prime fields use the modulus X, i.e. plain
integers mod p.

Also here: multiplicative characters of the diagonal torus H = (F_q^x)^2,
power sums over F_q, and exact multivariate polynomial interpolation of
arbitrary functions F_q^n -> F_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb

from .errors import (
    BadIndex,
    CharacterMismatch,
    DivisionByZero,
    FieldMismatch,
    UnsupportedField,
)

MAX_Q = 81


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Dense univariate polynomials over F_p, little-endian coefficient lists.
# Only used to find and validate moduli; field arithmetic itself is tables.


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    return _poly_divmod(res, mod, p)


def _poly_divmod(a, mod, p):
    # remainder of a by monic mod
    a = list(a)
    dm = len(mod) - 1
    while len(a) > dm:
        c = a[-1] % p
        if c:
            off = len(a) - 1 - dm
            for j in range(dm):
                a[off + j] = (a[off + j] - c * mod[j]) % p
        a.pop()
    return _poly_trim(a)


def _poly_powmod(a, e, mod, p):
    res = [1]
    base = _poly_divmod(a, mod, p)
    while e:
        if e & 1:
            res = _poly_mulmod(res, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return res


def _is_irreducible(mod, p):
    # x^(p^d) == x mod (mod) fails for all d < f, holds for d = f
    f = len(mod) - 1
    x = [0, 1]
    cur = list(x)
    for d in range(1, f + 1):
        cur = _poly_powmod(cur, p, mod, p)
        if d < f and cur == x:
            return False
    return cur == x


def _prime_factors(n: int):
    fs = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            fs.add(d)
            n //= d
        d += 1
    if n > 1:
        fs.add(n)
    return sorted(fs)


def _is_primitive(mod, p):
    # the class of X generates the unit group of F_p[X]/(mod)
    f = len(mod) - 1
    q1 = p**f - 1
    if _poly_powmod([0, 1], q1, mod, p) != [1]:
        return False
    for ell in _prime_factors(q1):
        if _poly_powmod([0, 1], q1 // ell, mod, p) == [1]:
            return False
    return True


_conway_cache: dict[tuple[int, int], tuple[int, ...]] = {}


def conway_polynomial(p: int, f: int) -> tuple[int, ...]:
    """Monic Conway polynomial of F_{p^f}, little-endian, coefficients in [0,p).

    Found by brute force: candidates are enumerated in the Conway ordering
    (lexicographic in the sign-alternated coefficient tuple) and the first
    primitive one compatible with the Conway polynomials of all proper
    subfield degrees wins.
    """
    key = (p, f)
    if key in _conway_cache:
        return _conway_cache[key]
    if f == 1:
        g = 2
        while True:
            ok = all(pow(g, (p - 1) // ell, p) != 1 for ell in _prime_factors(p - 1))
            if ok or p == 2:
                break
            g += 1
        if p == 2:
            g = 1
        poly = ((-g) % p, 1)
        _conway_cache[key] = poly
        return poly
    divisors = [m for m in range(1, f) if f % m == 0]
    subs = {m: conway_polynomial(p, m) for m in divisors}
    qf1 = p**f - 1
    for btup in product(range(p), repeat=f):
        # btup = (b_{f-1}, ..., b_0); candidate x^f - b_{f-1} x^{f-1} + ... +- b_0
        coeffs = [0] * (f + 1)
        coeffs[f] = 1
        for i in range(f):
            b = btup[f - 1 - i]
            coeffs[i] = (b if (f - i) % 2 == 0 else -b) % p
        mod = coeffs
        if not _is_irreducible(mod, p):
            continue
        if not _is_primitive(mod, p):
            continue
        ok = True
        for m in divisors:
            # Horner evaluation of the subfield polynomial at X^t
            t = qf1 // (p**m - 1)
            xt = _poly_powmod([0, 1], t, mod, p)
            acc: list[int] = []
            for c in reversed(subs[m]):
                acc = _poly_mulmod(acc, xt, mod, p)
                if c:
                    if acc:
                        acc[0] = (acc[0] + c) % p
                    else:
                        acc = [c % p]
                    _poly_trim(acc)
            if _poly_trim(acc):
                ok = False
                break
        if ok:
            poly = tuple(coeffs)
            _conway_cache[key] = poly
            return poly
    raise UnsupportedField(f"no Conway polynomial found for ({p},{f})")


# ---------------------------------------------------------------------------


class FqField:
    """F_q with table-driven arithmetic on int-coded elements."""

    def __init__(self, p: int, f: int):
        if not _is_prime(p):
            raise UnsupportedField(f"p = {p} is not prime")
        q = p**f
        if f < 1 or q > MAX_Q:
            raise UnsupportedField(f"q = p^f = {q} outside supported range (<= {MAX_Q})")
        self.p = p
        self.f = f
        self.q = q
        if f == 1:
            self.modulus = (0, 1)  # X: plain integers mod p
        else:
            self.modulus = conway_polynomial(p, f)
        self._build_tables()

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        mod = list(self.modulus)
        self.add_table = [[0] * q for _ in range(q)]
        self.mul_table = [[0] * q for _ in range(q)]
        for a in range(q):
            ca = self.coeffs(a)
            for b in range(q):
                cb = self.coeffs(b)
                s = tuple((x + y) % p for x, y in zip(ca, cb))
                self.add_table[a][b] = self.from_coeffs(s)
                m = _poly_mulmod(list(ca), list(cb), mod, p)
                self.mul_table[a][b] = self.from_coeffs(tuple(m) + (0,) * (f - len(m)))
        self.neg_table = [self.from_coeffs(tuple((-x) % p for x in self.coeffs(a))) for a in range(q)]
        self.inv_table = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    self.inv_table[a] = b
                    break

    # -- codecs ------------------------------------------------------------
    def coeffs(self, a: int) -> tuple[int, ...]:
        if not 0 <= a < self.q:
            raise BadIndex(f"element code {a} out of range for q={self.q}")
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        if len(cs) != self.f:
            raise BadIndex("coefficient vector has wrong length")
        a = 0
        for c in reversed(cs):
            a = a * self.p + (c % self.p)
        return a

    # -- arithmetic --------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a^e with 0^0 = 1; negative e inverts first."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of 0")
            return 0
        e %= self.q - 1
        r = 1
        base = a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def from_int(self, n: int) -> int:
        """Image of the rational integer n (lands in the prime subfield)."""
        return n % self.p

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def same(self, other: "FqField") -> bool:
        return self.p == other.p and self.f == other.f and self.modulus == other.modulus

    def __repr__(self):
        return f"FqField(p={self.p}, f={self.f})"


_field_cache: dict[tuple[int, int], FqField] = {}


def field_create(p: int, f: int) -> FqField:
    key = (p, f)
    if key not in _field_cache:
        _field_cache[key] = FqField(p, f)
    return _field_cache[key]


def power_sum(K: FqField, l: int) -> int:
    """sum over zeta in F_q of zeta^l, with the 0^0 = 1 convention.

    Closed form: 0 for l = 0 (q terms of 1) and for l >= 1 not divisible by
    q-1; -1 for l >= 1 divisible by q-1.
    """
    if l < 0:
        raise BadIndex("power sum wants l >= 0")
    acc = 0
    for z in K.elements():
        acc = K.add(acc, K.pow(z, l))
    return acc


# ---------------------------------------------------------------------------
# Characters of H = (F_q^x)^2, written chi = a^r d^s on diag residues (a, d).


@dataclass(frozen=True)
class HChar:
    field: FqField
    r: int
    s: int

    def __post_init__(self):
        object.__setattr__(self, "r", self.r % (self.field.q - 1))
        object.__setattr__(self, "s", self.s % (self.field.q - 1))

    def eval(self, a: int, d: int) -> int:
        if a == 0 or d == 0:
            raise CharacterMismatch("character evaluated at a non-unit")
        K = self.field
        return K.mul(K.pow(a, self.r), K.pow(d, self.s))

    def conj_w(self) -> "HChar":
        """Conjugate by the Weyl reflection: swap the two exponents."""
        return HChar(self.field, self.s, self.r)

    def mul(self, other: "HChar") -> "HChar":
        if not self.field.same(other.field):
            raise FieldMismatch("characters over different fields")
        return HChar(self.field, self.r + other.r, self.s + other.s)

    def is_trivial(self) -> bool:
        return self.r == 0 and self.s == 0

    def key(self):
        return (self.r, self.s)


def all_characters(K: FqField):
    return [HChar(K, r, s) for r in range(K.q - 1) for s in range(K.q - 1)]


def characters_with_central(K: FqField, r: int):
    """The q-1 characters a^(r-s) d^s, s = 0..q-2 (fixed central restriction)."""
    return [HChar(K, r - s, s) for s in range(K.q - 1)]


# ---------------------------------------------------------------------------
# Multivariate polynomials with per-variable degree < q, and interpolation.


class MPoly:
    """Sparse multivariate polynomial over F_q; exponent tuples -> coefficient."""

    def __init__(self, field: FqField, nvars: int, coeffs: dict | None = None):
        self.field = field
        self.nvars = nvars
        self.coeffs = {}
        if coeffs:
            for e, c in coeffs.items():
                if c:
                    self.coeffs[tuple(e)] = c

    def add(self, other: "MPoly") -> "MPoly":
        if self.nvars != other.nvars or not self.field.same(other.field):
            raise FieldMismatch("polynomial shape mismatch")
        K = self.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = K.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly(K, self.nvars, out)

    def scale(self, c: int) -> "MPoly":
        K = self.field
        return MPoly(K, self.nvars, {e: K.mul(c, v) for e, v in self.coeffs.items()})

    def mul(self, other: "MPoly") -> "MPoly":
        K = self.field
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = K.add(out.get(e, 0), K.mul(c1, c2))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MPoly(K, self.nvars, out)

    def evaluate(self, point) -> int:
        K = self.field
        if len(point) != self.nvars:
            raise BadIndex("wrong point arity")
        acc = 0
        for e, c in self.coeffs.items():
            t = c
            for x, k in zip(point, e):
                t = K.mul(t, K.pow(x, k))
            acc = K.add(acc, t)
        return acc

    def var_degree(self, i: int) -> int:
        return max((e[i] for e in self.coeffs), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, MPoly)
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"MPoly({self.nvars} vars, {len(self.coeffs)} terms)"


def _indicator_coeffs(K: FqField, a: int) -> list[int]:
    """Coefficients of 1 - (X - a)^(q-1): the indicator of X = a on F_q."""
    q = K.q
    cs = [0] * q
    na = K.neg(a)
    for i in range(q):
        # binomial(q-1, i) * (-a)^(q-1-i)
        b = comb(q - 1, i) % K.p
        cs[i] = K.mul(b, K.pow(na, q - 1 - i))
    cs[0] = K.sub(1, cs[0])
    for i in range(1, q):
        cs[i] = K.neg(cs[i])
    return cs


def interpolate(K: FqField, nvars: int, values) -> MPoly:
    """Exact interpolation of values: F_q^nvars -> F_q as an MPoly with
    per-variable degree <= q-1.  values is a callable or a dict keyed by
    point tuples; every point of F_q^nvars must be covered.
    """
    q = K.q
    get = values if callable(values) else (lambda pt: values[pt])
    ind = [_indicator_coeffs(K, a) for a in range(q)]
    out: dict = {}
    for pt in product(range(q), repeat=nvars):
        v = get(tuple(pt))
        if not v:
            continue
        for exps in product(range(q), repeat=nvars):
            c = v
            for x, k in zip(pt, exps):
                c = K.mul(c, ind[x][k])
                if not c:
                    break
            if c:
                e = tuple(exps)
                nv = K.add(out.get(e, 0), c)
                if nv:
                    out[e] = nv
                else:
                    out.pop(e, None)
    return MPoly(K, nvars, out)
