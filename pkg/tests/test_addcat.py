import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kwb.addcat import (
    CategoryError,
    IdemCategory,
    IntervalProduct,
    LaurentCategory,
    MatCategory,
    NaturalityError,
    NilObject,
    NotNilpotentError,
    build_functor,
    chi_complex,
    laurent_compose,
    mat,
    matcat_laurent_equiv_check,
    natiso_to_interval_functor,
)
from kwb.rings import FiniteField, Integers, IntegersModN, PrimeField, RingAutomorphism

ZZ = Integers()
A = MatCategory(ZZ)
L = LaurentCategory(A, "laurent")
seeds = st.integers(0, 2**32 - 1)


def m1(x):
    return mat(ZZ, [[x]])


def test_laurent_compose_examples():
    t = L.monomial(A.identity(1), 1)
    tinv = L.monomial(A.identity(1), -1)
    assert L.equal(laurent_compose(tinv, t, L), L.identity(1))
    f = L.make(1, 1, {0: m1(1), 1: m1(2)})
    g = L.make(1, 1, {1: m1(3)})
    assert L.equal(L.compose(g, f), L.make(1, 1, {1: m1(3), 2: m1(6)}))
    assert L.is_zero(L.compose(L.zero(1, 1), f))


def test_polynomial_category_rejects_wrong_powers():
    P = LaurentCategory(A, "poly")
    with pytest.raises(CategoryError):
        P.make(1, 1, {-1: m1(1)})


@pytest.mark.parametrize("R", [ZZ, IntegersModN(6), PrimeField(3)], ids=str)
@given(seed=seeds)
def test_laurent_category_axioms(R, seed):
    rng = random.Random(seed)
    C = LaurentCategory(MatCategory(R), "laurent")
    a, b, c, d = (rng.randint(0, 2) for _ in range(4))
    f = C.random_morphism(rng, a, b)
    g = C.random_morphism(rng, b, c)
    h = C.random_morphism(rng, c, d)
    g2 = C.random_morphism(rng, b, c)
    assert C.equal(C.compose(h, C.compose(g, f)), C.compose(C.compose(h, g), f))
    assert C.equal(C.compose(C.identity(b), f), f) and C.equal(C.compose(f, C.identity(a)), f)
    assert C.equal(C.compose(C.add(g, g2), f), C.add(C.compose(g, f), C.compose(g2, f)))
    gf = C.compose(g, f)
    sums = {i + j for i in g.support for j in f.support}
    assert set(gf.support) <= sums


@given(seed=seeds)
def test_twisted_composition_associative(seed):
    rng = random.Random(seed)
    F = FiniteField(2, 2)
    C = LaurentCategory(MatCategory(F), "laurent", RingAutomorphism.frobenius(F))
    f, g, h = (C.random_morphism(rng, 2, 2) for _ in range(3))
    assert C.equal(C.compose(h, C.compose(g, f)), C.compose(C.compose(h, g), f))


@given(seed=seeds)
def test_identity_twist_category_is_untwisted(seed):
    rng = random.Random(seed)
    B = MatCategory(PrimeField(5))
    T = LaurentCategory(B, "laurent", RingAutomorphism.identity(PrimeField(5)))
    U = LaurentCategory(B, "laurent")
    f, g = U.random_morphism(rng, 2, 2), U.random_morphism(rng, 2, 2)
    assert T.equal(T.compose(g, f), U.compose(g, f))


def test_functor_examples():
    f = mat(ZZ, [[1, 2], [3, 4]])
    ip = build_functor("i_plus", A)
    assert ip(f).terms == ((0, f),)
    ev = build_functor("ev0_plus", A)
    P = LaurentCategory(A, "poly")
    g = P.make(2, 2, {0: f, 2: A.identity(2)})
    assert A.equal(ev(g), f)
    eta = build_functor("idem_eta", A)
    X = eta.obj(3)
    assert X.ambient == 3 and A.equal(X.idempotent, A.identity(3))


@given(seed=seeds)
def test_functor_square_identities(seed):
    rng = random.Random(seed)
    f = A.random_morphism(rng, 2, 3)
    F = {k: build_functor(k, A) for k in ("i0", "i_plus", "i_minus", "j_plus", "j_minus", "ev0_plus", "ev0_minus")}
    assert A.equal(F["ev0_plus"](F["i_plus"](f)), f)
    assert A.equal(F["ev0_minus"](F["i_minus"](f)), f)
    assert L.equal(F["j_plus"](F["i_plus"](f)), F["i0"](f))
    assert L.equal(F["j_minus"](F["i_minus"](f)), F["i0"](f))
    g = A.random_morphism(rng, 3, 2)
    ip = F["i_plus"]
    P = LaurentCategory(A, "poly")
    assert P.equal(ip(A.compose(g, f)), P.compose(ip(g), ip(f)))


def test_idempotent_completion():
    I = IdemCategory(A)
    p = mat(ZZ, [[1, 0], [0, 0]])
    X = I.obj(p)
    with pytest.raises(CategoryError):
        I.obj(mat(ZZ, [[2]]))
    assert I.equal(I.compose(I.identity(X), I.identity(X)), I.identity(X))


def test_interval_functor_identity():
    F = build_functor("i0", A)
    samples = [mat(ZZ, [[1, 2]]), mat(ZZ, [[3], [1]])]
    H = natiso_to_interval_functor(F, F, L.identity, samples)
    j0, j1 = build_functor("j0", A), build_functor("j1", A)
    for f in samples:
        assert L.equal(H(j0(f)), F(f)) and L.equal(H(j1(f)), F(f))


def test_interval_functor_t_transformation():
    F = build_functor("i0", A)
    rng = random.Random(1)
    samples = [A.random_morphism(rng, 2, 1), A.random_morphism(rng, 1, 2)]
    T = lambda n: L.monomial(A.identity(n), 1)  # noqa: E731
    H = natiso_to_interval_functor(F, F, T, samples)
    j0, j1 = build_functor("j0", A), build_functor("j1", A)
    for f in samples:
        assert L.equal(H(j0(f)), F(f))
        assert L.equal(H(j1(f)), F(f))
    P = IntervalProduct(A)
    iso = P.structural_iso(2, 0, 1)
    assert L.equal(H(iso), T(2))


def test_interval_functor_rejects_non_iso():
    F = build_functor("i0", A)
    two = lambda n: L.monomial(mat(ZZ, [[2 if i == j else 0 for j in range(n)] for i in range(n)]), 0)  # noqa: E731
    with pytest.raises(NaturalityError):
        natiso_to_interval_functor(F, F, two, [m1(1)])


def test_nil_objects_and_chi():
    nil = NilObject(A, 1, m1(0))
    chi = chi_complex(nil)
    assert chi.differential.terms == ((1, m1(1)),)
    with pytest.raises(NotNilpotentError):
        NilObject(A, 1, m1(2))
    nu = mat(ZZ, [[0, 1], [0, 0]])
    N = NilObject(A, 2, nu, witness=2)
    assert A.is_zero(N.composite(2))
    d = chi_complex(N).differential
    assert A.equal(d.term(1), A.identity(2)) and A.equal(d.term(0), A.neg(nu))


@given(seed=seeds)
def test_accepted_nil_composites_vanish(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    # strictly upper triangular matrices are nilpotent
    nu = mat(ZZ, [[rng.randint(-3, 3) if j > i else 0 for j in range(n)] for i in range(n)])
    N = NilObject(A, n, nu)
    assert A.is_zero(N.composite(N.witness))


def test_matcat_laurent_equivalence():
    assert matcat_laurent_equiv_check(PrimeField(2), 2).passed
    assert matcat_laurent_equiv_check(ZZ, 2, samples=60).passed
    r = matcat_laurent_equiv_check(ZZ, 0)
    assert r.passed and r.checked_morphisms == 0
