import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kwb.rings import (
    FiniteField,
    Integers,
    IntegersModN,
    Laurent,
    LaurentRing,
    NegPolynomial,
    Polynomial,
    PrimeField,
    RingAutomorphism,
    RingMismatchError,
    TwistedLaurent,
    UnsupportedError,
    classify_unit,
    field_embedding,
    laurent_mul,
    parse_ring,
    reduction_hom,
    ring_hom,
)

ZZ = Integers()

BASES = [ZZ, IntegersModN(6), IntegersModN(4), PrimeField(3), FiniteField(2, 2), FiniteField(3, 2)]
RINGS = BASES + [Laurent(ZZ), Polynomial(PrimeField(5)), NegPolynomial(IntegersModN(4)),
                 Laurent(FiniteField(2, 3)), Laurent(Laurent(PrimeField(2), "s"), "t")]


@pytest.mark.parametrize("R", RINGS, ids=str)
@given(seed=st.integers(0, 2**32 - 1))
def test_ring_axioms(R, seed):
    rng = random.Random(seed)
    a, b, c = (R.random_element(rng) for _ in range(3))
    assert R.eq(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
    assert R.eq(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))
    assert R.eq(R.mul(R.add(a, b), c), R.add(R.mul(a, c), R.mul(b, c)))
    assert R.eq(R.mul(R.one(), a), a) and R.eq(R.mul(a, R.one()), a)
    assert R.eq(R.add(a, R.neg(a)), R.zero())
    assert R.eq(R.add(a, b), R.add(b, a))


def test_laurent_mul_examples():
    L = Laurent(ZZ)
    t, tinv = L.gen(1), L.gen(-1)
    assert L.eq(L.mul(t, tinv), L.one())
    x = L.make({0: 1, 1: 2})
    y = L.make({1: 3})
    assert L.mul(x, y).as_dict() == {1: 3, 2: 6}
    ident = RingAutomorphism.identity(ZZ)
    assert laurent_mul(x, y, ZZ, ident) == laurent_mul(x, y, ZZ)


def test_twisted_convention():
    F = FiniteField(2, 2)
    phi = RingAutomorphism.frobenius(F)
    T = TwistedLaurent(F, phi)
    w = F.generator
    s = T.gen(1)
    # s * a = phi(a) * s
    assert T.eq(T.mul(s, T.const(w)), T.mul(T.const(phi(w)), s))
    assert not T.eq(T.mul(s, T.const(w)), T.mul(T.const(w), s))


@given(seed=st.integers(0, 2**32 - 1))
def test_identity_twist_is_untwisted(seed):
    rng = random.Random(seed)
    B = PrimeField(5)
    T = TwistedLaurent(B, RingAutomorphism.identity(B))
    L = Laurent(B, "s")
    x, y = T.random_element(rng), T.random_element(rng)
    assert T.mul(x, y).as_dict() == L.mul(x, y).as_dict()


def test_classify_unit_examples():
    L3 = Laurent(PrimeField(3))
    assert classify_unit(L3.make({-5: 2}), L3) == (2, -5)
    L2 = Laurent(PrimeField(2))
    assert classify_unit(L2.make({0: 1, 1: 1}), L2) is None
    LZ = Laurent(ZZ)
    assert classify_unit(LZ.make({2: -1}), LZ) == (-1, 2)


def test_classify_unit_unsupported_non_monomial():
    L = Laurent(IntegersModN(4))
    with pytest.raises(UnsupportedError):
        classify_unit(L.make({0: 1, 1: 2}), L)


def test_one_plus_t_over_f2_has_no_inverse_of_small_span():
    # independent check: no Laurent polynomial of span <= 6 inverts 1 + t
    L = Laurent(PrimeField(2))
    x = L.make({0: 1, 1: 1})
    for lo in range(-3, 1):
        for bits in product((0, 1), repeat=4):
            y = L.make({lo + k: b for k, b in enumerate(bits)})
            assert not L.eq(L.mul(x, y), L.one())


@pytest.mark.parametrize("L", [Laurent(ZZ), Laurent(PrimeField(7)), Laurent(FiniteField(2, 2))], ids=str)
@given(seed=st.integers(0, 2**32 - 1))
def test_classified_units_invert(L, seed):
    u = L.random_unit(random.Random(seed))
    c, n = classify_unit(u, L)
    assert L.eq(L.mul(u, L.monomial(L.base.inverse(c), -n)), L.one())


def test_ring_hom_examples():
    P = Polynomial(ZZ)
    L = Laurent(ZZ)
    x = P.make({0: 5, 1: 3})
    assert ring_hom(P, ZZ, "ev0_plus")(x) == 5
    assert ring_hom(P, L, "j_plus")(x).as_dict() == {0: 5, 1: 3}
    assert ring_hom(P, ZZ, "var_eval", 1)(x) == 8
    with pytest.raises(RingMismatchError):
        ring_hom(ZZ, Laurent(PrimeField(2)), "i0")


@pytest.mark.parametrize("B", BASES, ids=str)
@given(seed=st.integers(0, 2**32 - 1))
def test_square_identities(B, seed):
    rng = random.Random(seed)
    P, N, L = Polynomial(B), NegPolynomial(B), Laurent(B)
    a = B.random_element(rng)
    ip, im, i0 = ring_hom(B, P, "i_plus"), ring_hom(B, N, "i_minus"), ring_hom(B, L, "i0")
    jp, jm = ring_hom(P, L, "j_plus"), ring_hom(N, L, "j_minus")
    assert B.eq(ring_hom(P, B, "ev0_plus")(ip(a)), a)
    assert B.eq(ring_hom(N, B, "ev0_minus")(im(a)), a)
    assert L.eq(jp(ip(a)), i0(a)) and L.eq(jm(im(a)), i0(a))


def test_parse_ring():
    assert parse_ring("Z") == ZZ
    assert parse_ring("Zmod6") == IntegersModN(6)
    assert parse_ring("F9") == FiniteField(3, 2)
    R = parse_ring("F3[t,t^-1]")
    assert isinstance(R, LaurentRing) and R.kind == "laurent"
    assert parse_ring("Z[t][s^-1]").kind == "negpoly"
    for bad in ("F6", "Q", "Z[t", "Z[t][t]"):
        with pytest.raises(ValueError):
            parse_ring(bad)


def test_reduction_and_embedding():
    r = reduction_hom(ZZ, IntegersModN(4))
    assert r(7) == 3
    e = field_embedding(FiniteField(2, 1), FiniteField(2, 2))
    assert e(1) == 1
    F4, F16 = FiniteField(2, 2), FiniteField(2, 4)
    e = field_embedding(F4, F16)
    for a in F4.elements():
        for b in F4.elements():
            assert e(F4.mul(a, b)) == F16.mul(e(a), e(b))
            assert e(F4.add(a, b)) == F16.add(e(a), e(b))


def test_frobenius_automorphism_checks():
    F = FiniteField(3, 2)
    phi = RingAutomorphism.frobenius(F)
    assert phi.check(list(F.elements()))
    inv = phi.inverted()
    assert all(inv(phi(x)) == x for x in F.elements())
