"""Additive categories built from matrices.

``MatCategory(R)`` is the skeletal category of finitely generated free
``R``-modules: objects are ranks, a morphism ``m -> n`` is an ``n x m`` matrix.
On top of it sit the Laurent categories (morphisms are finite sums
``sum f_k t^k``, possibly twisted), the idempotent completion, the product with
the interval groupoid and Nil objects.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Sequence

from .rings import LaurentElem, LaurentRing, Ring, RingAutomorphism


class CategoryError(ValueError):
    pass


class NotNilpotentError(CategoryError):
    pass


class NaturalityError(CategoryError):
    pass


# ---------------------------------------------------------------------------
# matrices over a ring


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    entries: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise CategoryError(f"entries do not form a {self.rows} x {self.cols} matrix")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def mat(R: Ring, rows: Sequence[Sequence[Any]], shape: tuple[int, int] | None = None) -> Mat:
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    return Mat(shape[0], shape[1], tuple(tuple(R.normalize(x) for x in r) for r in rows))


def mat_zero(R: Ring, n: int, m: int) -> Mat:
    z = R.zero()
    return Mat(n, m, tuple((z,) * m for _ in range(n)))


def mat_identity(R: Ring, n: int) -> Mat:
    z, o = R.zero(), R.one()
    return Mat(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))


def mat_mul(R: Ring, A: Mat, B: Mat) -> Mat:
    if A.cols != B.rows:
        raise CategoryError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    out = []
    for i in range(A.rows):
        row = []
        for j in range(B.cols):
            acc = R.zero()
            for k in range(A.cols):
                a = A.entries[i][k]
                if not R.is_zero(a):
                    acc = R.add(acc, R.mul(a, B.entries[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return Mat(A.rows, B.cols, tuple(out))


def mat_add(R: Ring, A: Mat, B: Mat) -> Mat:
    if (A.rows, A.cols) != (B.rows, B.cols):
        raise CategoryError("shape mismatch in addition")
    return Mat(A.rows, A.cols, tuple(tuple(R.add(a, b) for a, b in zip(r, s)) for r, s in zip(A.entries, B.entries)))


def mat_neg(R: Ring, A: Mat) -> Mat:
    return Mat(A.rows, A.cols, tuple(tuple(R.neg(a) for a in r) for r in A.entries))


def mat_map(A: Mat, fn: Callable[[Any], Any]) -> Mat:
    return Mat(A.rows, A.cols, tuple(tuple(fn(a) for a in r) for r in A.entries))


def mat_is_zero(R: Ring, A: Mat) -> bool:
    return all(R.is_zero(a) for r in A.entries for a in r)


def mat_eq(R: Ring, A: Mat, B: Mat) -> bool:
    return (A.rows, A.cols) == (B.rows, B.cols) and all(
        R.eq(a, b) for r, s in zip(A.entries, B.entries) for a, b in zip(r, s)
    )


def mat_det(R: Ring, A: Mat) -> Any:
    """Determinant by cofactor expansion; commutative rings, small sizes."""
    if A.rows != A.cols:
        raise CategoryError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return R.one()
    if n == 1:
        return A.entries[0][0]
    acc = R.zero()
    for j in range(n):
        a = A.entries[0][j]
        if R.is_zero(a):
            continue
        minor = Mat(n - 1, n - 1, tuple(tuple(r[:j] + r[j + 1:]) for r in A.entries[1:]))
        term = R.mul(a, mat_det(R, minor))
        acc = R.add(acc, term) if j % 2 == 0 else R.sub(acc, term)
    return acc


def mat_inverse(R: Ring, A: Mat) -> Mat:
    """Inverse via the adjugate; raises if the determinant is not a unit."""
    if not R.is_commutative:
        raise CategoryError("adjugate inverse needs a commutative ring")
    n = A.rows
    d = mat_det(R, A)
    if not R.is_unit(d):
        raise CategoryError("matrix is not invertible")
    dinv = R.inverse(d)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            # cofactor C_ji
            minor = Mat(n - 1, n - 1, tuple(
                tuple(r[:i] + r[i + 1:]) for k, r in enumerate(A.entries) if k != j
            ))
            c = mat_det(R, minor)
            if (i + j) % 2:
                c = R.neg(c)
            row.append(R.mul(dinv, c))
        rows.append(tuple(row))
    return Mat(n, n, tuple(rows))


def block_diag(R: Ring, blocks: Sequence[Mat]) -> Mat:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[R.zero()] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r + i][c + j] = b.entries[i][j]
        r += b.rows
        c += b.cols
    return Mat(n, m, tuple(map(tuple, out)))


# ---------------------------------------------------------------------------
# categories


class Category:
    def identity(self, obj): ...
    def compose(self, g, f): ...
    def equal(self, f, g) -> bool: ...
    def domain(self, f): ...
    def codomain(self, f): ...


@dataclass(frozen=True)
class MatCategory(Category):
    """Free ``R``-modules of finite rank and matrices between them."""

    ring: Ring

    def hom(self, m: int, n: int, rows) -> Mat:
        A = mat(self.ring, rows, (n, m))
        return A

    def identity(self, n: int) -> Mat:
        return mat_identity(self.ring, n)

    def zero(self, m: int, n: int) -> Mat:
        return mat_zero(self.ring, n, m)

    def compose(self, g: Mat, f: Mat) -> Mat:
        return mat_mul(self.ring, g, f)

    def add(self, f: Mat, g: Mat) -> Mat:
        return mat_add(self.ring, f, g)

    def neg(self, f: Mat) -> Mat:
        return mat_neg(self.ring, f)

    def equal(self, f: Mat, g: Mat) -> bool:
        return mat_eq(self.ring, f, g)

    def is_zero(self, f: Mat) -> bool:
        return mat_is_zero(self.ring, f)

    def domain(self, f: Mat) -> int:
        return f.cols

    def codomain(self, f: Mat) -> int:
        return f.rows

    def biproduct(self, fs: Sequence[Mat]) -> Mat:
        return block_diag(self.ring, fs)

    def is_iso(self, f: Mat) -> bool:
        if f.rows != f.cols:
            return False
        try:
            self.inverse(f)
        except CategoryError:
            return False
        return True

    def inverse(self, f: Mat) -> Mat:
        if f.rows != f.cols:
            raise CategoryError("non-square matrices are not isomorphisms")
        return mat_inverse(self.ring, f)

    def random_morphism(self, rng: random.Random, m: int, n: int, **kw) -> Mat:
        R = self.ring
        return Mat(n, m, tuple(tuple(R.random_element(rng, **kw) for _ in range(m)) for _ in range(n)))

    def apply_automorphism(self, phi: RingAutomorphism | None, f: Mat, power: int = 1) -> Mat:
        if phi is None or power == 0:
            return f
        return mat_map(f, phi.power(power))

    def __str__(self):
        return f"matcat({self.ring})"


@dataclass(frozen=True)
class LaurentMorphism:
    """``sum_k f_k t^k`` with every ``f_k`` a ``domain -> codomain`` matrix."""

    domain: int
    codomain: int
    terms: tuple[tuple[int, Mat], ...]

    def term(self, k: int) -> Mat | None:
        for e, f in self.terms:
            if e == k:
                return f
        return None

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.terms)


@dataclass(frozen=True)
class LaurentCategory(Category):
    """``A[t]``, ``A[t^-1]`` or ``A[t, t^-1]`` for ``A = matcat(R)``.

    With a ``twist`` (an automorphism of ``R``, acting entrywise) composition is
    ``g o f = sum_k (sum_{i+j=k} g_j o Phi^j(f_i)) t^k``.
    """

    base: MatCategory
    kind: str = "laurent"
    twist: RingAutomorphism | None = None
    var: str = "t"

    def __post_init__(self):
        if self.kind not in ("poly", "negpoly", "laurent"):
            raise CategoryError(f"unknown kind {self.kind!r}")

    @property
    def ring(self) -> Ring:
        return self.base.ring

    def make(self, m: int, n: int, terms: dict[int, Mat] | Iterable[tuple[int, Mat]]) -> LaurentMorphism:
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[int, Mat] = {}
        for k, f in items:
            if (f.cols, f.rows) != (m, n):
                raise CategoryError(f"term t^{k} has the wrong shape")
            acc[k] = self.base.add(acc[k], f) if k in acc else f
        out = tuple((k, f) for k, f in sorted(acc.items()) if not self.base.is_zero(f))
        if self.kind == "poly" and out and out[0][0] < 0:
            raise CategoryError("negative power in a polynomial category")
        if self.kind == "negpoly" and out and out[-1][0] > 0:
            raise CategoryError("positive power in a polynomial category")
        return LaurentMorphism(m, n, out)

    def monomial(self, f: Mat, k: int = 0) -> LaurentMorphism:
        return self.make(f.cols, f.rows, {k: f})

    def identity(self, n: int) -> LaurentMorphism:
        return self.monomial(self.base.identity(n), 0)

    def zero(self, m: int, n: int) -> LaurentMorphism:
        return LaurentMorphism(m, n, ())

    def compose(self, g: LaurentMorphism, f: LaurentMorphism) -> LaurentMorphism:
        return laurent_compose(g, f, self)

    def add(self, f: LaurentMorphism, g: LaurentMorphism) -> LaurentMorphism:
        if (f.domain, f.codomain) != (g.domain, g.codomain):
            raise CategoryError("shape mismatch in addition")
        return self.make(f.domain, f.codomain, list(f.terms) + list(g.terms))

    def neg(self, f: LaurentMorphism) -> LaurentMorphism:
        return LaurentMorphism(f.domain, f.codomain, tuple((k, self.base.neg(x)) for k, x in f.terms))

    def scale_t(self, f: LaurentMorphism, k: int) -> LaurentMorphism:
        return self.make(f.domain, f.codomain, [(e + k, x) for e, x in f.terms])

    def equal(self, f: LaurentMorphism, g: LaurentMorphism) -> bool:
        return (f.domain, f.codomain) == (g.domain, g.codomain) and not self.add(f, self.neg(g)).terms

    def is_zero(self, f: LaurentMorphism) -> bool:
        return not f.terms

    def domain(self, f):
        return f.domain

    def codomain(self, f):
        return f.codomain

    def inverse(self, f: LaurentMorphism) -> LaurentMorphism:
        """Inverse of an isomorphism.

        Monomials ``u t^k`` with ``u`` invertible are inverted directly; in the
        untwisted case general isomorphisms go through the adjugate over the
        Laurent ring.
        """
        if len(f.terms) == 1:
            (k, u), = f.terms
            try:
                ui = self.base.inverse(u)
            except CategoryError:
                ui = None
            if ui is not None and (self.kind == "laurent" or k == 0):
                # (v t^-k) o (u t^k) = v Phi^-k(u) t^0, so v = Phi^-k(u^-1)
                v = self.base.apply_automorphism(self.twist, ui, -k)
                return self.monomial(v, -k)
        if self.twist is not None and self.twist.name != "id":
            raise CategoryError("only monomial isomorphisms are inverted in twisted categories")
        E = to_matrix_over_laurent(self, f)
        L = laurent_ring_of(self)
        Ei = mat_inverse(L, E)
        return from_matrix_over_laurent(self, Ei)

    def random_morphism(self, rng: random.Random, m: int, n: int, span: int = 1, **kw) -> LaurentMorphism:
        lo = 0 if self.kind == "poly" else -span
        hi = 0 if self.kind == "negpoly" else span
        return self.make(m, n, {k: self.base.random_morphism(rng, m, n, **kw) for k in range(lo, hi + 1)})

    def __str__(self):
        suffix = {"poly": "[t]", "negpoly": "[t^-1]", "laurent": "[t,t^-1]"}[self.kind]
        tw = "" if self.twist is None else f"_{self.twist.name}"
        return f"{self.base}{tw}{suffix}"


def laurent_compose(g: LaurentMorphism, f: LaurentMorphism, cat: LaurentCategory) -> LaurentMorphism:
    """Convolution ``g o f``, twisted by ``cat.twist`` when present."""
    if f.codomain != g.domain:
        raise CategoryError(f"cannot compose {g.domain}->{g.codomain} after {f.domain}->{f.codomain}")
    A = cat.base
    acc: dict[int, Mat] = {}
    for j, gj in g.terms:
        for i, fi in f.terms:
            t = A.compose(gj, A.apply_automorphism(cat.twist, fi, j))
            acc[i + j] = A.add(acc[i + j], t) if i + j in acc else t
    return cat.make(f.domain, g.codomain, acc)


def laurent_ring_of(cat: LaurentCategory) -> LaurentRing:
    return LaurentRing(cat.ring, cat.var, cat.kind, cat.twist)


def to_matrix_over_laurent(cat: LaurentCategory, f: LaurentMorphism) -> Mat:
    """The evident functor ``matcat(R)[t] -> matcat(R[t])`` on morphisms."""
    L = laurent_ring_of(cat)
    rows = []
    for a in range(f.codomain):
        rows.append(tuple(L.make([(k, x.entries[a][b]) for k, x in f.terms]) for b in range(f.domain)))
    return Mat(f.codomain, f.domain, tuple(rows))


def from_matrix_over_laurent(cat: LaurentCategory, E: Mat) -> LaurentMorphism:
    R = cat.ring
    exps = sorted({e for r in E.entries for x in r for e, _ in x.terms})
    terms = {}
    for k in exps:
        terms[k] = Mat(E.rows, E.cols, tuple(tuple(x.coeff(k, R.zero()) for x in r) for r in E.entries))
    return cat.make(E.cols, E.rows, terms)


# ---------------------------------------------------------------------------
# idempotent completion


@dataclass(frozen=True)
class IdemObject:
    ambient: int
    idempotent: Mat


@dataclass(frozen=True)
class IdemMorphism:
    source: IdemObject
    target: IdemObject
    matrix: Mat


@dataclass(frozen=True)
class IdemCategory(Category):
    base: MatCategory

    def obj(self, p: Mat) -> IdemObject:
        if p.rows != p.cols:
            raise CategoryError("idempotents are square")
        if not self.base.equal(self.base.compose(p, p), p):
            raise CategoryError("p o p != p")
        return IdemObject(p.rows, p)

    def hom(self, src: IdemObject, tgt: IdemObject, f: Mat) -> IdemMorphism:
        B = self.base
        if not B.equal(B.compose(tgt.idempotent, B.compose(f, src.idempotent)), f):
            raise CategoryError("morphism does not satisfy q f p = f")
        return IdemMorphism(src, tgt, f)

    def identity(self, X: IdemObject) -> IdemMorphism:
        return IdemMorphism(X, X, X.idempotent)

    def compose(self, g: IdemMorphism, f: IdemMorphism) -> IdemMorphism:
        if g.source != f.target:
            raise CategoryError("not composable")
        return IdemMorphism(f.source, g.target, self.base.compose(g.matrix, f.matrix))

    def equal(self, f: IdemMorphism, g: IdemMorphism) -> bool:
        return f.source == g.source and f.target == g.target and self.base.equal(f.matrix, g.matrix)

    def domain(self, f):
        return f.source

    def codomain(self, f):
        return f.target


# ---------------------------------------------------------------------------
# product with the interval groupoid


@dataclass(frozen=True)
class IntervalMorphism:
    """A morphism ``(A, b_src) -> (B, b_tgt)`` of ``A x I``."""

    f: Any
    b_src: int
    b_tgt: int


@dataclass(frozen=True)
class IntervalProduct(Category):
    """``A x I`` where ``I`` has objects 0, 1 and exactly one morphism between any two."""

    base: Category

    def obj(self, A, b: int):
        if b not in (0, 1):
            raise CategoryError("interval objects are 0 and 1")
        return (A, b)

    def identity(self, X):
        A, b = X
        return IntervalMorphism(self.base.identity(A), b, b)

    def structural_iso(self, A, b_src: int, b_tgt: int) -> IntervalMorphism:
        return IntervalMorphism(self.base.identity(A), b_src, b_tgt)

    def compose(self, g: IntervalMorphism, f: IntervalMorphism) -> IntervalMorphism:
        if g.b_src != f.b_tgt:
            raise CategoryError("not composable in A x I")
        return IntervalMorphism(self.base.compose(g.f, f.f), f.b_src, g.b_tgt)

    def equal(self, f: IntervalMorphism, g: IntervalMorphism) -> bool:
        return (f.b_src, f.b_tgt) == (g.b_src, g.b_tgt) and self.base.equal(f.f, g.f)

    def domain(self, f):
        return (self.base.domain(f.f), f.b_src)

    def codomain(self, f):
        return (self.base.codomain(f.f), f.b_tgt)


# ---------------------------------------------------------------------------
# functors


@dataclass(frozen=True)
class AdditiveFunctor:
    name: str
    source: Category
    target: Category
    on_object: Callable[[Any], Any] = field(compare=False, repr=False)
    on_morphism: Callable[[Any], Any] = field(compare=False, repr=False)

    def __call__(self, f):
        return self.on_morphism(f)

    def obj(self, A):
        return self.on_object(A)

    def then(self, other: AdditiveFunctor) -> AdditiveFunctor:
        """``other o self``."""
        return AdditiveFunctor(f"{other.name}.{self.name}", self.source, other.target,
                               lambda A: other.on_object(self.on_object(A)),
                               lambda f: other.on_morphism(self.on_morphism(f)))


def build_functor(kind: str, base: MatCategory) -> AdditiveFunctor:
    """Structural functors around ``A = base``.

    ``i0``, ``i_plus``, ``i_minus`` send ``f`` to ``f t^0``; ``j_plus``,
    ``j_minus`` include the polynomial categories in the Laurent category;
    ``ev0_plus``, ``ev0_minus`` keep the ``t^0`` term; ``idem_eta`` embeds ``A``
    in its idempotent completion; ``j0``, ``j1`` embed ``A`` in ``A x I``.
    """
    Lp = LaurentCategory(base, "poly")
    Lm = LaurentCategory(base, "negpoly")
    L = LaurentCategory(base, "laurent")
    ident = lambda A: A  # noqa: E731
    if kind in ("i0", "i_plus", "i_minus"):
        T = {"i0": L, "i_plus": Lp, "i_minus": Lm}[kind]
        return AdditiveFunctor(kind, base, T, ident, lambda f: T.monomial(f, 0))
    if kind in ("j_plus", "j_minus"):
        S = Lp if kind == "j_plus" else Lm
        return AdditiveFunctor(kind, S, L, ident, lambda f: L.make(f.domain, f.codomain, f.terms))
    if kind in ("ev0_plus", "ev0_minus"):
        S = Lp if kind == "ev0_plus" else Lm

        def ev(f: LaurentMorphism):
            x = f.term(0)
            return x if x is not None else base.zero(f.domain, f.codomain)

        return AdditiveFunctor(kind, S, base, ident, ev)
    if kind == "idem_eta":
        I = IdemCategory(base)

        def eta_obj(n):
            return IdemObject(n, base.identity(n))

        return AdditiveFunctor(kind, base, I, eta_obj,
                               lambda f: IdemMorphism(eta_obj(f.cols), eta_obj(f.rows), f))
    if kind in ("j0", "j1"):
        b = 0 if kind == "j0" else 1
        P = IntervalProduct(base)
        return AdditiveFunctor(kind, base, P, lambda A: (A, b), lambda f: IntervalMorphism(f, b, b))
    raise CategoryError(f"unknown functor kind {kind!r}")


def natiso_to_interval_functor(
    F0: AdditiveFunctor,
    F1: AdditiveFunctor,
    T: Callable[[Any], Any],
    samples: Sequence[Any],
    objects: Sequence[Any] = (),
) -> AdditiveFunctor:
    """The functor ``H: A x I -> B`` with ``H o j0 = F0`` and ``H o j1 = F1``.

    ``H(f: (A,b) -> (B,b')) = T_B^[b'=1] o F0(f) o T_A^-[b=1]``.  ``T`` must
    be a natural isomorphism; this is checked on ``samples`` (morphisms of
    ``A``) and on ``objects``, and a :class:`NaturalityError` is raised when
    it fails.
    """
    src, B = F0.source, F0.target
    if F1.source != src or F1.target != B:
        raise CategoryError("F0 and F1 must share source and target")
    inv_cache: dict[Any, Any] = {}

    def Tinv(A):
        if A not in inv_cache:
            try:
                inv_cache[A] = B.inverse(T(A))
            except CategoryError as e:
                raise NaturalityError(f"component at {A} is not an isomorphism") from e
        return inv_cache[A]

    objs = list(objects) + [src.domain(f) for f in samples] + [src.codomain(f) for f in samples]
    for A in objs:
        TA, TAi = T(A), Tinv(A)
        if not (B.equal(B.compose(TA, TAi), B.identity(F1.obj(A))) and B.equal(B.compose(TAi, TA), B.identity(F0.obj(A)))):
            raise NaturalityError(f"component at {A} is not an isomorphism")
    for f in samples:
        A, C = src.domain(f), src.codomain(f)
        if not B.equal(B.compose(T(C), F0(f)), B.compose(F1(f), T(A))):
            raise NaturalityError("T is not natural on a sampled morphism")

    P = IntervalProduct(src)

    def on_obj(X):
        A, b = X
        return F1.obj(A) if b else F0.obj(A)

    def on_mor(g: IntervalMorphism):
        A, C = src.domain(g.f), src.codomain(g.f)
        out = F0(g.f)
        if g.b_src == 1:
            out = B.compose(out, Tinv(A))
        if g.b_tgt == 1:
            out = B.compose(T(C), out)
        return out

    return AdditiveFunctor("H", P, B, on_obj, on_mor)


# ---------------------------------------------------------------------------
# Nil objects


@dataclass(frozen=True)
class NilObject:
    """An endomorphism ``nu: Phi(A) -> A`` of ``matcat(R)`` that is nilpotent.

    Nilpotent means the twisted composite
    ``nu o Phi(nu) o ... o Phi^(n-1)(nu)`` vanishes for ``n = witness``.
    Without a witness the smallest ``n <= search_bound`` is searched for.
    """

    category: MatCategory
    carrier: int
    nu: Mat
    twist: RingAutomorphism | None = None
    witness: int | None = None
    search_bound: int = 16

    def __post_init__(self):
        if (self.nu.rows, self.nu.cols) != (self.carrier, self.carrier):
            raise CategoryError("nu must be a square matrix on the carrier")
        w = self.witness
        if w is not None:
            if w < 0 or not self.category.is_zero(self.composite(w)):
                raise NotNilpotentError(f"the {w}-fold twisted composite is not zero")
            return
        for n in range(0, self.search_bound + 1):
            if self.category.is_zero(self.composite(n)):
                object.__setattr__(self, "witness", n)
                return
        raise NotNilpotentError(f"no vanishing twisted composite up to length {self.search_bound}")

    def composite(self, n: int) -> Mat:
        A = self.category
        out = A.identity(self.carrier)
        for k in range(n):
            out = A.compose(out, A.apply_automorphism(self.twist, self.nu, k))
        return out


@dataclass(frozen=True)
class ChiComplex:
    """Two-term complex ``Phi(A) --(t - nu)--> A`` in ``A_Phi[t]``."""

    source: int
    target: int
    differential: LaurentMorphism
    category: LaurentCategory


def chi_complex(nil: NilObject) -> ChiComplex:
    A = nil.category
    cat = LaurentCategory(A, "poly", nil.twist)
    n = nil.carrier
    d = cat.make(n, n, {1: A.identity(n), 0: A.neg(nil.nu)})
    return ChiComplex(n, n, d, cat)


# ---------------------------------------------------------------------------
# matcat(R)[t, t^-1] versus matcat(R[t, t^-1])


@dataclass(frozen=True)
class EquivReport:
    passed: bool
    checked_morphisms: int
    checked_compositions: int
    failures: tuple[str, ...] = ()


def matcat_laurent_equiv_check(
    R: Ring,
    size_bound: int,
    *,
    span: int = 1,
    samples: int = 200,
    seed: int = 0,
    enumerate_limit: int = 4096,
) -> EquivReport:
    """Compare ``matcat(R)[t, t^-1]`` with ``matcat(R[t, t^-1])`` on small objects.

    Objects ``0..size_bound`` correspond identically.  On each hom-set the
    evident functor is checked to be injective and to round-trip with its
    inverse; hom-sets over finite rings with support in ``[-span, span]`` are
    enumerated when they have at most ``enumerate_limit`` elements, other
    hom-sets are sampled.  Composition is checked on sampled pairs.
    """
    rng = random.Random(seed)
    A = MatCategory(R)
    cat = LaurentCategory(A, "laurent")
    L = laurent_ring_of(cat)
    B = MatCategory(L)
    failures: list[str] = []
    n_mor = n_comp = 0
    objs = range(0, size_bound + 1)
    if size_bound <= 0:
        return EquivReport(True, 0, 0)
    homs: dict[tuple[int, int], list[LaurentMorphism]] = {}
    for m in objs:
        for n in objs:
            cells = m * n * (2 * span + 1)
            mors: list[LaurentMorphism]
            if R.is_finite and len(list(R.elements())) ** cells <= enumerate_limit:
                els = list(R.elements())
                mors = []
                for vals in product(els, repeat=cells):
                    it = iter(vals)
                    terms = {}
                    for k in range(-span, span + 1):
                        terms[k] = Mat(n, m, tuple(tuple(next(it) for _ in range(m)) for _ in range(n)))
                    mors.append(cat.make(m, n, terms))
            else:
                mors = [cat.random_morphism(rng, m, n, span=span) for _ in range(samples // 4 + 1)]
            images = set()
            for f in mors:
                E = to_matrix_over_laurent(cat, f)
                back = from_matrix_over_laurent(cat, E)
                n_mor += 1
                if not cat.equal(back, f):
                    failures.append(f"round trip failed on {m}->{n}")
                images.add(E)
            if len(images) != len({f for f in mors}):
                failures.append(f"functor not injective on hom({m},{n})")
            homs[(m, n)] = mors
    for _ in range(samples):
        a, b, c = (rng.choice(list(objs)) for _ in range(3))
        f = rng.choice(homs[(a, b)])
        g = rng.choice(homs[(b, c)])
        lhs = to_matrix_over_laurent(cat, cat.compose(g, f))
        rhs = mat_mul(L, to_matrix_over_laurent(cat, g), to_matrix_over_laurent(cat, f))
        n_comp += 1
        if not B.equal(lhs, rhs):
            failures.append(f"composition not respected on {a}->{b}->{c}")
    return EquivReport(not failures, n_mor, n_comp, tuple(failures[:10]))
