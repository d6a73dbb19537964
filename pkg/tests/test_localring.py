"""Truncated local ring: digits, Teichmueller lifts, carries, units."""

import random

import pytest

from treehecke import FElem, carry_Z
from treehecke.localring import params_create
from treehecke.errors import NotAUnit

CONTEXTS = [(2, 1, 2, 8), (3, 1, 2, 8), (5, 2, 1, 8), (2, 2, 1, 8),
            (3, 2, 1, 8), (2, 3, 1, 9)]


def _params(p, e, f, prec):
    return params_create(p, e, f, prec)


def test_digit_codec_roundtrip():
    rng = random.Random(411)
    for ctx in CONTEXTS:
        P = _params(*ctx)
        q = P.q
        for _ in range(40):
            digs = tuple(rng.randrange(q) for _ in range(P.cap))
            x = FElem.from_digit_vec(P, digs)
            assert x.digits_from_zero(P.cap) == digs
            for i, d in enumerate(digs):
                assert x.digit(i) == d
        # pi_mul moves the digit window; shift holds negative powers
        digs = tuple(rng.randrange(1, q) for _ in range(3))
        x = FElem.from_digit_vec(P, digs).pi_mul(2)
        assert x.digits_from_zero(5) == (0, 0) + digs
        assert x.val() == 2
        y = FElem.from_digit_vec(P, digs, shift=2)
        assert y.digit(-2) == digs[0]
        assert y.val() == -2


def test_ring_axioms_sampled():
    rng = random.Random(412)
    for ctx in CONTEXTS:
        P = _params(*ctx)
        q = P.q

        def rand():
            return FElem.from_digit_vec(
                P, tuple(rng.randrange(q) for _ in range(P.cap - 1)))

        for _ in range(25):
            x, y, z = rand(), rand(), rand()
            assert x.add(y).eq(y.add(x))
            assert x.mul(y).eq(y.mul(x))
            assert x.add(y).add(z).eq(x.add(y.add(z)))
            assert x.mul(y.add(z)).eq(x.mul(y).add(x.mul(z)))
            assert x.sub(x).is_zero()
            assert x.add(x.neg()).is_zero()
            assert x.mul(FElem.one(P)).eq(x)
            assert x.mul(FElem.zero(P)).is_zero()


def test_valuation_and_pi():
    for ctx in CONTEXTS:
        P = _params(*ctx)
        assert FElem.zero(P).val() is None
        assert FElem.zero(P).is_zero()
        assert FElem.one(P).val() == 0
        for j in range(P.cap):
            assert FElem.pi_power(P, j).val() == j
        x = FElem.teichmueller(P, 1).add(FElem.pi_power(P, 2))
        assert x.val() == 0
        assert x.pi_mul(3).val() == 3
        assert x.truncate(1).eq(FElem.one(P))
        assert x.truncate(3).eq(x.truncate(5).truncate(3))


def test_teichmueller_is_multiplicative():
    for ctx in CONTEXTS:
        P = _params(*ctx)
        K = P.field
        q = P.q
        for a in range(q):
            for b in range(q):
                ta, tb = FElem.teichmueller(P, a), FElem.teichmueller(P, b)
                assert ta.mul(tb).eq(FElem.teichmueller(P, K.mul(a, b)))
                assert ta.residue() == a
        t = FElem.teichmueller(P, q - 1 if q > 2 else 1)
        acc = FElem.one(P)
        for _ in range(q - 1):
            acc = acc.mul(t)
        assert acc.eq(FElem.one(P))


def test_units_and_inverses():
    rng = random.Random(413)
    for ctx in CONTEXTS:
        P = _params(*ctx)
        q = P.q
        for _ in range(20):
            digs = (rng.randrange(1, q),) + tuple(
                rng.randrange(q) for _ in range(P.cap - 2))
            x = FElem.from_digit_vec(P, digs)
            assert x.mul(x.inv()).eq(FElem.one(P))
            assert x.div(x).eq(FElem.one(P))
        # pi is invertible in the field of fractions, with valuation -1
        pi_inv = FElem.pi_power(P, 1).inv()
        assert pi_inv.val() == -1
        assert pi_inv.mul(FElem.pi_power(P, 1)).eq(FElem.one(P))
        with pytest.raises(NotAUnit):
            FElem.zero(P).inv()


def test_unit_scale_normalizes_to_pi_power():
    rng = random.Random(414)
    for ctx in CONTEXTS:
        P = _params(*ctx)
        q = P.q
        for _ in range(15):
            j = rng.randrange(P.cap - 3)
            digs = (rng.randrange(1, q),) + tuple(
                rng.randrange(q) for _ in range(2))
            x = FElem.from_digit_vec(P, digs).pi_mul(j)
            v, u = x.unit_scale_to_pi_power()
            assert v == j
            assert u.val() == 0
            assert FElem.pi_power(P, v).mul(u).eq(x)


def test_carry_oracle():
    for ctx in CONTEXTS:
        P = _params(*ctx)
        K = P.field
        q = P.q
        for x in range(q):
            for y in range(q):
                want = carry_Z(P, x, y)
                got = FElem.teichmueller(P, x).add(
                    FElem.teichmueller(P, y)).digit(1)
                assert got == want
                if P.e > 1 or x == 0 or y == 0:
                    assert want == 0
                # the sum always opens with the residue sum
                assert FElem.teichmueller(P, x).add(
                    FElem.teichmueller(P, y)).digit(0) == K.add(x, y)
