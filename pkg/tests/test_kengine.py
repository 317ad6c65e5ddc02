import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kwb.abgroup import FgAbGroup, GroupHom
from kwb.addcat import mat, mat_det, mat_identity, mat_mul
from kwb.kengine import (
    SingularMatrixError,
    certify_sk1,
    classify_ring,
    induced_k_map,
    k0,
    k1,
    k_value,
    matrix_k1_reduce,
    random_elementary_matrix,
    replay,
)
from kwb.rings import (
    FiniteField,
    Integers,
    IntegersModN,
    Laurent,
    NegPolynomial,
    Polynomial,
    PrimeField,
    UnsupportedError,
    parse_ring,
    ring_hom,
)

ZZ = Integers()
seeds = st.integers(0, 2**32 - 1)


def canon(G):
    return G.free_rank, list(G.invariant_factors)


def killed_by(G, k):
    # |{x in G : kx = 0}| for a finite group in invariant-factor form
    out = 1
    for d in G.invariant_factors:
        out *= gcd(k, d)
    return out


def unit_structure_oracle(elements, mul, one):
    """Counts |{x : x^k = 1}| for k up to the group order by brute force.

    For a finite abelian group these counts determine the isomorphism type."""
    units = [x for x in elements if any(mul(x, y) == one for y in elements)]
    n = len(units)

    def power(x, k):
        r = one
        for _ in range(k):
            r = mul(r, x)
        return r

    return n, {k: sum(1 for x in units if power(x, k) == one) for k in range(1, n + 1)}


# ---------------------------------------------------------------------------
# K_0


@pytest.mark.parametrize("name,expected", [("F5", 1), ("Zmod6", 2), ("Z", 1), ("Zmod30", 3), ("Zmod8", 1), ("Zmod1", 0)])
def test_k0_examples(name, expected):
    G = k0(parse_ring(name)).group
    assert canon(G) == (expected, [])


def test_k0_flavors_coincide():
    R = parse_ring("Zmod6")
    assert k0(R, True).group.same_presentation(k0(R, False).group)
    assert "coincides" in k0(R, False).provenance


def test_k0_generators_are_component_idempotents():
    R = IntegersModN(6)
    v = k0(R)
    assert sorted(v.generators) == [3, 4]
    assert sorted(v.coords(g) for g in v.generators) == [(0, 1), (1, 0)]


# ---------------------------------------------------------------------------
# K_1


@pytest.mark.parametrize("name,expected", [
    ("Z", (0, [2])),
    ("F4", (0, [3])),
    ("F2", (0, [])),
    ("F2[t,t^-1]", (1, [])),
    ("F3[t,t^-1]", (1, [2])),
    ("F4[t,t^-1]", (1, [3])),
    ("F5[t]", (0, [4])),
    ("Z[t,t^-1]", (1, [2])),
    ("Zmod1", (0, [])),
])
def test_k1_examples(name, expected):
    assert canon(k1(parse_ring(name)).group) == expected


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11])
def test_k1_finite_field_against_brute_force(q):
    F = parse_ring(f"F{q}")
    els = list(F.elements())
    n, counts = unit_structure_oracle(els, F.mul, F.one())
    G = k1(F).group
    assert G.order == n == q - 1
    assert all(killed_by(G, k) == c for k, c in counts.items())


@pytest.mark.parametrize("n", [4, 6, 8, 9, 12, 15, 16, 20, 27])
def test_k1_zmod_against_brute_force(n):
    G = k1(IntegersModN(n)).group
    order, counts = unit_structure_oracle(list(range(n)), lambda a, b: a * b % n, 1 % n)
    assert G.free_rank == 0 and G.order == order
    assert all(killed_by(G, k) == c for k, c in counts.items())


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_k1_laurent_over_field(q):
    G = k1(parse_ring(f"F{q}[t,t^-1]")).group
    expected = FgAbGroup.from_invariants(1, (q - 1,) if q > 2 else ())
    assert G.is_isomorphic(expected)


def test_k1_coords_roundtrip_on_generators():
    R = parse_ring("F9[t,t^-1]")
    v = k1(R)
    for j, g in enumerate(v.generators):
        assert v.coords(g) == tuple(1 if k == j else 0 for k in range(len(v.generators)))
    assert v.certified


def test_windowed_model_is_flagged():
    v = k1(parse_ring("Zmod4[t]"))
    assert "window" in classify_ring(parse_ring("Zmod4[t]")).detail
    assert v.group.order == 8


def test_engine_degree_range():
    with pytest.raises(UnsupportedError):
        k_value(ZZ, 2)
    with pytest.raises(UnsupportedError):
        k_value(ZZ, -1)


# ---------------------------------------------------------------------------
# classification and scope


def test_multi_laurent_is_outside_the_engine():
    R = parse_ring("F2[s,s^-1][t,t^-1]")
    assert classify_ring(R).kind == "Unsupported"
    with pytest.raises(UnsupportedError):
        k0(R)
    with pytest.raises(UnsupportedError):
        k1(R)


@pytest.mark.parametrize("name,kind", [
    ("F7", "Field"),
    ("Z", "Integers"),
    ("Zmod9", "LocalZModPk"),
    ("Zmod12", "ProductOfLocals"),
    ("F3[t,t^-1]", "LaurentOverField"),
])
def test_classify_ring(name, kind):
    assert classify_ring(parse_ring(name)).kind == kind


def test_zmod_pk_with_variable_beyond_square_is_unsupported():
    R = Polynomial(IntegersModN(8))
    assert classify_ring(R).kind == "Unsupported"
    with pytest.raises(UnsupportedError):
        k1(R)


# ---------------------------------------------------------------------------
# elementary reduction


def test_reduce_swap_over_z():
    M = mat(ZZ, [[0, 1], [1, 0]])
    r = matrix_k1_reduce(M, ZZ)
    assert r.unit == -1
    assert replay(M, ZZ, r.log) == mat(ZZ, [[-1, 0], [0, 1]])


def test_reduce_whitehead_diagonal():
    L = Laurent(PrimeField(3))
    t, tinv = L.gen(1), L.gen(-1)
    M = mat(L, [[t, L.zero()], [L.zero(), tinv]])
    r = matrix_k1_reduce(M, L)
    assert L.eq(r.unit, L.one())
    D = replay(M, L, r.log)
    assert all(L.eq(D.entries[i][j], L.one() if i == j else L.zero()) for i in range(2) for j in range(2))


def test_reduce_identity_is_trivial():
    M = mat_identity(ZZ, 3)
    r = matrix_k1_reduce(M, ZZ)
    assert r.unit == 1 and r.log == ()


def test_reduce_singular():
    with pytest.raises(SingularMatrixError):
        matrix_k1_reduce(mat(ZZ, [[2, 0], [0, 1]]), ZZ)
    with pytest.raises(SingularMatrixError):
        matrix_k1_reduce(mat(ZZ, [[1, 2], [2, 4]]), ZZ)


REDUCIBLE = [ZZ, Laurent(ZZ), Laurent(PrimeField(2)), Laurent(PrimeField(3)), Laurent(FiniteField(2, 2)),
             Polynomial(PrimeField(5)), IntegersModN(12)]


@pytest.mark.parametrize("R", REDUCIBLE, ids=str)
@given(seed=seeds, n=st.integers(2, 3))
def test_reduction_replays_to_diagonal(R, seed, n):
    rng = random.Random(seed)
    M = random_elementary_matrix(R, n, rng)
    if hasattr(R, "random_unit"):
        # move the determinant off 1
        D = [[R.one() if i == j else R.zero() for j in range(n)] for i in range(n)]
        D[n - 1][n - 1] = R.random_unit(rng)
        M = mat_mul(R, M, mat(R, D))
    r = matrix_k1_reduce(M, R)
    out = replay(M, R, r.log)
    for i in range(n):
        for j in range(n):
            want = r.unit if i == j == 0 else (R.one() if i == j else R.zero())
            assert R.eq(out.entries[i][j], want)
    assert R.eq(r.unit, mat_det(R, M))


@pytest.mark.parametrize("R", [Laurent(ZZ), Laurent(PrimeField(3)), Laurent(FiniteField(2, 2))], ids=str)
def test_certify_sk1(R):
    rep = certify_sk1(R, samples=60, seed=7)
    assert rep.passed, rep.failures


# ---------------------------------------------------------------------------
# induced maps


def test_k0_i_plus_is_identity():
    f = ring_hom(ZZ, Polynomial(ZZ), "i_plus")
    assert induced_k_map(f, 0).equals(GroupHom.identity(FgAbGroup.free(1)))


@pytest.mark.parametrize("q", [3, 4, 5])
def test_k1_j_plus_is_inclusion_of_constants(q):
    F = parse_ring(f"F{q}")
    P, L = Polynomial(F), Laurent(F)
    h = induced_k_map(ring_hom(P, L, "j_plus"), 1)
    assert h.is_injective() and not h.is_surjective()
    assert h.codomain.is_isomorphic(FgAbGroup.from_invariants(1, (q - 1,)))


def test_k1_var_eval_on_z_t():
    h = induced_k_map(ring_hom(Polynomial(ZZ), ZZ, "var_eval", 1), 1)
    assert h.equals(GroupHom.identity(FgAbGroup.cyclic(2)))


@pytest.mark.parametrize("name", ["Z", "F2", "F3", "F4", "F7", "Zmod6", "Zmod9"])
@pytest.mark.parametrize("degree", [0, 1])
def test_ev0_after_inclusion_is_identity(name, degree):
    B = parse_ring(name)
    for P, inc, ev in ((Polynomial(B), "i_plus", "ev0_plus"), (NegPolynomial(B), "i_minus", "ev0_minus")):
        i = induced_k_map(ring_hom(B, P, inc), degree)
        e = induced_k_map(ring_hom(P, B, ev), degree)
        assert (e @ i).equals(GroupHom.identity(i.domain))


@pytest.mark.parametrize("name", ["Z", "F2", "F9", "Zmod6", "Zmod4", "F3[t,t^-1]"])
def test_k0_i_plus_is_iso(name):
    B = parse_ring(name)
    h = induced_k_map(ring_hom(B, Polynomial(B), "i_plus"), 0)
    assert h.is_injective() and h.is_surjective()
