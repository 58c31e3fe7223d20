import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chlattice.exactfield import (
    CycloField,
    ConductorMismatch,
    NotCoprime,
    as_real,
    cyclotomic_poly,
)

F63 = CycloField(63)


def rand_elem(draw_coeffs):
    """Element of Q(zeta_63) from a short list of (power, numerator) pairs."""
    x = F63.zero()
    for k, c in draw_coeffs:
        x = x + F63.zeta(k) * Fraction(c, 3)
    return x


small_elems = st.lists(
    st.tuples(st.integers(0, 62), st.integers(-9, 9)), min_size=1, max_size=4
).map(rand_elem)


def test_cyclotomic_polys():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    # phi(63) = 36, phi(84) = 24, phi(105) = 48, phi(252) = 72
    for n, phi in ((63, 36), (84, 24), (105, 48), (126, 36), (168, 48), (252, 72)):
        assert len(cyclotomic_poly(n)) - 1 == phi


def test_zeta_relations():
    z = F63.zeta(1)
    assert z ** 63 == 1
    assert (z ** 62) * z == 1
    a = F63.zeta(7)  # e^{2 pi i/9}
    assert a ** 9 == 1 and not (a ** 3) == 1


def test_tau_basics():
    z7 = F63.zeta(9)
    tau = z7.conj() + (z7 ** 2).conj() + (z7 ** 4).conj()
    assert tau * tau.conj() == 2  # |tau|^2 = 2
    assert tau + tau.conj() == -1  # 2 Re tau = -1
    z = tau.approx()
    assert abs(z.real + 0.5) < 1e-12
    assert abs(z.imag + math.sqrt(7) / 2) < 1e-12  # negative imaginary part


def test_division_and_identity():
    a = F63.zeta(7)
    assert a * a.inverse() == 1
    x = a * 3 + F63.from_fraction(Fraction(1, 2))
    assert (x / x) == 1
    with pytest.raises(ZeroDivisionError):
        F63.zero().inverse()


@settings(max_examples=60, deadline=None)
@given(small_elems, small_elems, small_elems)
def test_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x + (y + z) == (x + y) + z


@settings(max_examples=60, deadline=None)
@given(small_elems, small_elems)
def test_conj_is_automorphism(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.conj().conj() == x


@settings(max_examples=30, deadline=None)
@given(small_elems)
def test_galois_composition(x):
    assert x.galois(2).galois(5) == x.galois(10)
    assert x.galois(1) == x
    assert x.galois(2).conj() == x.conj().galois(2)  # commutes with conj


def test_galois_requires_coprime():
    with pytest.raises(NotCoprime):
        F63.zeta(1).galois(3)


def test_conductor_mismatch():
    with pytest.raises(ConductorMismatch):
        F63.zeta(1) + CycloField(84).zeta(1)


def test_embedding_consistency():
    x = F63.zeta(7) * 2 + F63.zeta(11)
    big = x.embed(126)
    assert big.embed(252) == x.embed(252)
    assert abs(big.approx() - x.approx()) < 1e-12


def test_sign_witness():
    z3 = F63.zeta(21)
    s21 = (z3 - z3.conj()) * (
        F63.zeta(-9) + F63.zeta(-18) + F63.zeta(-36)
        - (F63.zeta(9) + F63.zeta(18) + F63.zeta(36))
    )
    assert s21 * s21 == 21
    w = (s21 - 4).real_sign()
    assert w.sign == 1 and w.interval[0] > 0
    assert (s21 - 5).sign() == -1
    assert F63.zero().real_sign().sign == 0


@settings(max_examples=40, deadline=None)
@given(small_elems)
def test_sign_never_zero_for_nonzero(x):
    r = x + x.conj()  # a real element
    if r.is_zero():
        assert r.real_sign().sign == 0
    else:
        assert as_real(r).real_sign().sign != 0


def test_canonical_equality_vs_embedding():
    # equality iff enclosures overlap at high precision (20 random-ish pairs)
    import random

    rng = random.Random(7)
    for _ in range(20):
        ks = [rng.randrange(63) for _ in range(3)]
        cs = [rng.randrange(-5, 6) for _ in range(3)]
        x = F63.zero()
        for k, c in zip(ks, cs):
            x = x + F63.zeta(k) * c
        y = x + F63.zeta(rng.randrange(63)) * rng.choice([0, 1])
        same = x == y
        zx = x.interval(256)
        zy = y.interval(256)
        overlap = not (
            zx.real.b < zy.real.a or zy.real.b < zx.real.a
            or zx.imag.b < zy.imag.a or zy.imag.b < zx.imag.a
        )
        if same:
            assert overlap
        else:
            diff = x - y
            assert not diff.is_zero()
