"""Finitely generated abelian groups as cokernels of integer matrices.

A group is stored as ``Z^n / rowspan(R)``: ``num_generators`` is ``n`` and each
row of ``relations`` is a relation among the generators.  Elements are integer
column vectors of length ``n``.  A homomorphism ``G -> H`` is an integer matrix
with one row per generator of ``H`` and one column per generator of ``G``.

Everything is exact; Python integers never overflow.

>>> G = FgAbGroup.from_invariants(1, [2])
>>> str(G)
'Z + Z/2'
>>> f = GroupHom(FgAbGroup.free(1), FgAbGroup.free(1), [[2]])
>>> str(cokernel(f).group)
'Z/2'
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import NamedTuple, Sequence

Matrix = tuple[tuple[int, ...], ...]


class ShapeError(ValueError):
    """Matrix or presentation shapes do not fit together."""


class IllDefinedHomError(ValueError):
    """A matrix does not send relations of the domain to relations of the codomain."""


# ---------------------------------------------------------------------------
# plain integer matrix helpers


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return zeros(ncols or 0, 0)
    return tuple(zip(*A))


def matmul(A: Matrix, B: Matrix, inner: int | None = None, ncols: int | None = None) -> Matrix:
    """Product of ``A`` (r x k) and ``B`` (k x c).

    ``ncols`` is needed when ``B`` has no rows; ``inner`` is unused except as a
    shape hint for readers.
    """
    if not B:
        c = ncols if ncols is not None else 0
        return zeros(len(A), c)
    c = len(B[0])
    cols = list(zip(*B)) if c else []
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def matvec(A: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def bareiss_det(A: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    M = [list(row) for row in A]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form.

    The inverses of ``U`` and ``V`` are carried along because every consumer in
    this package needs them.
    """

    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.V))))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form with transforms.

    Pivot rule: the smallest nonzero absolute value in the active block, ties
    broken by row-major position.  The result is deterministic.

    >>> smith_normal_form([[2, 4], [6, 8]]).diagonal
    (2, 4)
    """
    M = [[int(x) for x in row] for row in A]
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    if ncols is not None and m and ncols != n:
        raise ShapeError(f"expected {ncols} columns, got {n}")
    U = [list(r) for r in identity(m)]
    Ui = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]
    Vi = [list(r) for r in identity(n)]

    def row_add(i: int, j: int, c: int) -> None:
        # row_i += c * row_j
        if c == 0:
            return
        Mi, Mj = M[i], M[j]
        for k in range(n):
            Mi[k] += c * Mj[k]
        Ri, Rj = U[i], U[j]
        for k in range(m):
            Ri[k] += c * Rj[k]
        for row in Ui:
            row[j] -= c * row[i]

    def row_swap(i: int, j: int) -> None:
        if i == j:
            return
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def row_neg(i: int) -> None:
        M[i] = [-x for x in M[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def col_add(i: int, j: int, c: int) -> None:
        # col_i += c * col_j
        if c == 0:
            return
        for row in M:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]
        Ri, Rj = Vi[i], Vi[j]
        for k in range(n):
            Rj[k] -= c * Ri[k]

    def col_swap(i: int, j: int) -> None:
        if i == j:
            return
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = M[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    row_add(i, t, -(M[i][t] // p))
            for j in range(t + 1, n):
                if M[t][j]:
                    col_add(j, t, -(M[t][j] // p))
            # a nonzero remainder is smaller than the pivot: promote it
            cand = None
            for i in range(t + 1, m):
                if M[i][t] and (cand is None or abs(M[i][t]) < cand[0]):
                    cand = (abs(M[i][t]), "r", i)
            for j in range(t + 1, n):
                if M[t][j] and (cand is None or abs(M[t][j]) < cand[0]):
                    cand = (abs(M[t][j]), "c", j)
            if cand is not None:
                if cand[1] == "r":
                    row_swap(t, cand[2])
                else:
                    col_swap(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if M[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if M[t][t] < 0:
            row_neg(t)

    return SmithForm(as_matrix(U), as_matrix(M) if m else zeros(0, n), as_matrix(V), as_matrix(Ui), as_matrix(Vi))


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Two spanning sets give the same output iff they span the same lattice.
    """
    M = [list(map(int, r)) for r in rows if any(r)]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(M[i][c]), i))
            M[r], M[p] = M[p], M[r]
            others = [i for i in range(r + 1, len(M)) if M[i][c]]
            if not others:
                break
            for i in others:
                q = M[i][c] // M[r][c]
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        if r < len(M) and M[r][c]:
            if M[r][c] < 0:
                M[r] = [-a for a in M[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
            r += 1
    return as_matrix(M[:r])


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> tuple[int, ...] | None:
    """Some integer ``x`` with ``A x = b``, or ``None`` if none exists."""
    sols = solve_integer_many(A, [b], ncols)
    return sols[0]


def solve_integer_many(A, bs, ncols: int | None = None) -> list[tuple[int, ...] | None]:
    S = smith_normal_form(A, ncols)
    m = len(S.U)
    n = len(S.V)
    diag = S.diagonal
    out: list[tuple[int, ...] | None] = []
    for b in bs:
        if len(b) != m:
            raise ShapeError(f"right-hand side has length {len(b)}, expected {m}")
        c = matvec(S.U, b)
        y = [0] * n
        ok = True
        for k in range(m):
            d = diag[k] if k < len(diag) else 0
            if d == 0:
                if c[k]:
                    ok = False
                    break
            else:
                if c[k] % d:
                    ok = False
                    break
                y[k] = c[k] // d
        out.append(matvec(S.V, y) if ok else None)
    return out


def integer_nullspace(A: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """A basis of ``{x in Z^ncols : A x = 0}``."""
    S = smith_normal_form(A, ncols)
    r = S.rank
    return [tuple(S.V[i][j] for i in range(ncols)) for j in range(r, ncols)]


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True, eq=False)
class FgAbGroup:
    """``Z^num_generators`` modulo the row span of ``relations``.

    Equality (``==``) is abstract isomorphism, decided on canonical forms.  Use
    :meth:`same_presentation` when two presentations must literally agree, for
    instance before composing homomorphisms.
    """

    num_generators: int
    relations: Matrix = ()

    def __post_init__(self) -> None:
        rel = as_matrix(self.relations)
        for row in rel:
            if len(row) != self.num_generators:
                raise ShapeError(f"relation of length {len(row)} in a group with {self.num_generators} generators")
        object.__setattr__(self, "relations", tuple(r for r in rel if any(r)))

    # constructors
    @classmethod
    def free(cls, rank: int) -> FgAbGroup:
        return cls(rank, ())

    @classmethod
    def trivial(cls) -> FgAbGroup:
        return cls(0, ())

    @classmethod
    def cyclic(cls, order: int) -> FgAbGroup:
        """``Z/order``; order 0 gives ``Z``."""
        return cls(1, ((order,),))

    @classmethod
    def from_invariants(cls, free_rank: int, factors: Sequence[int] = ()) -> FgAbGroup:
        """Generators are the torsion factors (in the given order) followed by the free part."""
        factors = [int(d) for d in factors]
        n = len(factors) + free_rank
        rels = tuple(tuple(d if j == i else 0 for j in range(n)) for i, d in enumerate(factors))
        return cls(n, rels)

    # canonical data
    @cached_property
    def smith(self) -> SmithForm:
        return smith_normal_form(self.relations, self.num_generators)

    @cached_property
    def canonical_form(self) -> tuple[int, tuple[int, ...]]:
        diag = self.smith.diagonal
        rank = sum(1 for d in diag if d)
        factors = tuple(d for d in diag if d > 1)
        return self.num_generators - rank, factors

    @property
    def free_rank(self) -> int:
        return self.canonical_form[0]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.canonical_form[1]

    @property
    def is_trivial(self) -> bool:
        return self.canonical_form == (0, ())

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.canonical_form == other.canonical_form

    def __hash__(self) -> int:
        return hash(self.canonical_form)

    def is_isomorphic(self, other: FgAbGroup) -> bool:
        return self.canonical_form == other.canonical_form

    def same_presentation(self, other: FgAbGroup) -> bool:
        return self is other or (self.num_generators == other.num_generators and self.relations == other.relations)

    def __str__(self) -> str:
        free, factors = self.canonical_form
        parts = [f"Z/{d}" for d in factors]
        if free == 1:
            parts.append("Z")
        elif free > 1:
            parts.append(f"Z^{free}")
        if not parts:
            return "0"
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FgAbGroup<{self}; {self.num_generators} gens>"

    # elements
    @cached_property
    def _membership(self) -> SmithForm:
        return smith_normal_form(transpose(self.relations, self.num_generators), len(self.relations))

    def is_zero_element(self, v: Sequence[int]) -> bool:
        """Whether ``v`` lies in the relation lattice."""
        if len(v) != self.num_generators:
            raise ShapeError("element has the wrong length")
        if not any(v):
            return True
        if not self.relations:
            return False
        S = self._membership
        c = matvec(S.U, v)
        diag = S.diagonal
        for k, ck in enumerate(c):
            d = diag[k] if k < len(diag) else 0
            if (d == 0 and ck) or (d and ck % d):
                return False
        return True

    def smith_coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of ``v`` in the canonical decomposition, torsion reduced."""
        iso = self.smith_iso
        w = matvec(iso.to_canonical.matrix, v)
        factors = iso.canonical.invariant_factors
        return tuple(x % factors[k] if k < len(factors) else x for k, x in enumerate(w))

    def elements(self):
        """Representatives of all elements of a finite group."""
        if not self.is_finite:
            raise ValueError("group is infinite")
        iso = self.smith_iso
        for coords in product(*(range(d) for d in iso.canonical.invariant_factors)):
            yield matvec(iso.from_canonical.matrix, coords)

    @cached_property
    def smith_iso(self) -> CanonicalIso:
        """An isomorphism onto ``from_invariants(free_rank, invariant_factors)``."""
        S = self.smith
        n = self.num_generators
        diag = list(S.diagonal) + [0] * (n - len(S.diagonal))
        kept = [k for k in range(n) if diag[k] != 1]
        T = transpose(S.V, n) if n else ()
        Tinv = transpose(S.V_inv, n) if n else ()
        canon = FgAbGroup.from_invariants(*self.canonical_form)
        to_c = tuple(T[k] for k in kept)
        from_c = tuple(tuple(Tinv[i][k] for k in kept) for i in range(n))
        return CanonicalIso(canon, GroupHom(self, canon, to_c, check=False), GroupHom(canon, self, from_c, check=False))

    def rebased(self, P: Matrix, P_inv: Matrix) -> tuple[FgAbGroup, GroupHom, GroupHom]:
        """The same group on generators changed by the unimodular ``P``.

        Returns the new group with the isomorphisms to and from it.
        """
        n = self.num_generators
        rels = matmul(self.relations, transpose(P, n), ncols=n) if self.relations else ()
        G = FgAbGroup(n, rels)
        return G, GroupHom(self, G, P, check=False), GroupHom(G, self, P_inv, check=False)


class CanonicalIso(NamedTuple):
    canonical: FgAbGroup
    to_canonical: GroupHom
    from_canonical: GroupHom


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism given on generators.

    ``matrix[a][b]`` is the coefficient of codomain generator ``a`` in the image
    of domain generator ``b``.  Construction checks that relations go to
    relations unless ``check=False`` is passed by trusted internal callers.
    """

    domain: FgAbGroup
    codomain: FgAbGroup
    matrix: Matrix
    check: bool = True

    def __post_init__(self) -> None:
        M = as_matrix(self.matrix)
        n, m = self.domain.num_generators, self.codomain.num_generators
        if m == 0:
            M = ()
        if len(M) != m or any(len(row) != n for row in M):
            raise ShapeError(f"matrix shape does not match {m} x {n}")
        object.__setattr__(self, "matrix", M)
        if self.check:
            for rel in self.domain.relations:
                if not self.codomain.is_zero_element(matvec(M, rel)):
                    raise IllDefinedHomError(f"relation {rel} is not sent to zero")

    @classmethod
    def identity(cls, G: FgAbGroup) -> GroupHom:
        return cls(G, G, identity(G.num_generators), check=False)

    @classmethod
    def zero(cls, G: FgAbGroup, H: FgAbGroup) -> GroupHom:
        return cls(G, H, zeros(H.num_generators, G.num_generators), check=False)

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return matvec(self.matrix, v)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)

    def __matmul__(self, other: GroupHom) -> GroupHom:
        """``self @ other`` is the composite ``self o other``."""
        if not self.domain.same_presentation(other.codomain):
            raise ShapeError("composable maps must share a presentation")
        M = matmul(self.matrix, other.matrix, ncols=other.domain.num_generators)
        return GroupHom(other.domain, self.codomain, M, check=False)

    def _same_shape(self, other: GroupHom) -> None:
        if not (self.domain.same_presentation(other.domain) and self.codomain.same_presentation(other.codomain)):
            raise ShapeError("maps have different domains or codomains")

    def __add__(self, other: GroupHom) -> GroupHom:
        self._same_shape(other)
        M = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix))
        return GroupHom(self.domain, self.codomain, M, check=False)

    def __neg__(self) -> GroupHom:
        return GroupHom(self.domain, self.codomain, tuple(tuple(-a for a in r) for r in self.matrix), check=False)

    def __sub__(self, other: GroupHom) -> GroupHom:
        return self + (-other)

    def scaled(self, k: int) -> GroupHom:
        return GroupHom(self.domain, self.codomain, tuple(tuple(k * a for a in r) for r in self.matrix), check=False)

    def is_zero(self) -> bool:
        return all(self.codomain.is_zero_element(self.column(j)) for j in range(self.domain.num_generators))

    def equals(self, other: GroupHom) -> bool:
        return (self - other).is_zero()

    def is_injective(self) -> bool:
        return kernel(self).group.is_trivial

    def is_surjective(self) -> bool:
        return cokernel(self).group.is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def canonical(self) -> GroupHom:
        """The same map between the canonical forms of domain and codomain."""
        d, c = self.domain.smith_iso, self.codomain.smith_iso
        return c.to_canonical @ self @ d.from_canonical

    def __repr__(self) -> str:
        return f"GroupHom({self.domain} -> {self.codomain}, {list(map(list, self.matrix))})"


# ---------------------------------------------------------------------------
# kernels, cokernels, images


class Kernel(NamedTuple):
    group: FgAbGroup
    inclusion: GroupHom


class Cokernel(NamedTuple):
    group: FgAbGroup
    projection: GroupHom
    lift: Matrix
    """Set-theoretic section of the projection: ``projection(lift @ v) == v``."""


def kernel(f: GroupHom) -> Kernel:
    """The kernel in canonical form, with its inclusion into the domain."""
    G, H = f.domain, f.codomain
    n, m = G.num_generators, H.num_generators
    k = len(H.relations)
    # x with f(x) in rowspan(R_H):  [M | -R_H^T] (x, y) = 0
    RHt = transpose(H.relations, m)
    A = tuple(tuple(f.matrix[a]) + tuple(-RHt[a][l] for l in range(k)) for a in range(m))
    if m == 0:
        spanning = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    else:
        spanning = [v[:n] for v in integer_nullspace(A, n + k)]
    basis = hermite_rows(spanning, n)
    r = len(basis)
    if G.relations:
        Bt = transpose(basis, n)
        sols = solve_integer_many(Bt, G.relations, r)
        if any(s is None for s in sols):
            raise IllDefinedHomError("domain relations are not in the kernel lattice")
        rels = tuple(sols)  # type: ignore[arg-type]
    else:
        rels = ()
    K = FgAbGroup(r, rels)
    incl = GroupHom(K, G, transpose(basis, n) if r else zeros(n, 0), check=False)
    iso = K.smith_iso
    return Kernel(iso.canonical, incl @ iso.from_canonical)


def cokernel(f: GroupHom) -> Cokernel:
    """``codomain / image`` in canonical form, with the projection."""
    H = f.codomain
    m = H.num_generators
    extra = transpose(f.matrix, m) if f.domain.num_generators else ()
    Q = FgAbGroup(m, tuple(H.relations) + tuple(extra))
    iso = Q.smith_iso
    proj = GroupHom(H, iso.canonical, iso.to_canonical.matrix, check=False)
    return Cokernel(iso.canonical, proj, iso.from_canonical.matrix)


def image_lattice(f: GroupHom) -> Matrix:
    """Canonical (Hermite) form of ``im(f) + relations`` inside ``Z^m``."""
    m = f.codomain.num_generators
    cols = transpose(f.matrix, m) if f.domain.num_generators else ()
    return hermite_rows(tuple(cols) + tuple(f.codomain.relations), m)


def image(f: GroupHom) -> Kernel:
    """The image as a group with its inclusion into the codomain."""
    # im f = domain / ker f
    C = cokernel(kernel(f).inclusion)
    M = matmul(f.matrix, C.lift, ncols=C.group.num_generators) if f.codomain.num_generators else ()
    return Kernel(C.group, GroupHom(C.group, f.codomain, M))


# ---------------------------------------------------------------------------
# exactness


@dataclass(frozen=True)
class Exactness:
    image_in_kernel: bool
    kernel_in_image: bool

    @property
    def exact(self) -> bool:
        return self.image_in_kernel and self.kernel_in_image

    def __bool__(self) -> bool:
        return self.exact


def exactness(f: GroupHom, g: GroupHom) -> Exactness:
    """Compare ``im f`` and ``ker g`` inside ``codomain(f) == domain(g)``."""
    if not f.codomain.same_presentation(g.domain):
        raise ShapeError("codomain of f must be the domain of g")
    H = f.codomain
    m = H.num_generators
    im_rows = image_lattice(f)
    K = kernel(g)
    ker_rows = hermite_rows(
        [K.inclusion.column(j) for j in range(K.group.num_generators)] + list(H.relations), m
    )
    if im_rows == ker_rows:
        return Exactness(True, True)
    im_in_ker = (g @ f).is_zero()
    ker_in_im = all(solve_integer(transpose(im_rows, m), v, len(im_rows)) is not None for v in ker_rows) if im_rows else not ker_rows
    return Exactness(im_in_ker, ker_in_im)


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    return exactness(f, g).exact


# ---------------------------------------------------------------------------
# splittings


def _solve_hom(
    dom: FgAbGroup,
    cod: FgAbGroup,
    left: GroupHom | None,
    right: GroupHom | None,
    target: GroupHom,
) -> GroupHom | None:
    """Find a homomorphism ``X: dom -> cod`` with ``left o X o right == target``.

    ``left`` defaults to the identity of ``cod`` and ``right`` to the identity
    of ``dom``.  The search is a single integer linear system, solved through
    Smith normal form; no enumeration is involved.
    """
    di, ci = dom.smith_iso, cod.smith_iso
    D, C = di.canonical, ci.canonical
    P = (left if left is not None else GroupHom.identity(cod)) @ ci.from_canonical
    Q = di.to_canonical @ (right if right is not None else GroupHom.identity(dom))
    W = target.codomain
    wi = W.smith_iso
    Wc = wi.canonical
    P = wi.to_canonical @ P
    T = wi.to_canonical @ target
    S = Q.domain
    nd, nc = D.num_generators, C.num_generators
    nw, ns = Wc.num_generators, S.num_generators
    RW, RD, RC = Wc.relations, D.relations, C.relations
    nx = nc * nd
    n_y = len(RD) * len(RC)
    n_z = ns * len(RW)
    nvars = nx + n_y + n_z

    def xi(b: int, c: int) -> int:
        return b * nd + c

    rows: list[list[int]] = []
    rhs: list[int] = []
    # X sends relations of D into the relation lattice of C
    for k, h in enumerate(RD):
        for b in range(nc):
            row = [0] * nvars
            for c in range(nd):
                row[xi(b, c)] += h[c]
            for l, rc in enumerate(RC):
                row[nx + k * len(RC) + l] -= rc[b]
            rows.append(row)
            rhs.append(0)
    # P X Q - T lies in the relation lattice of W, column by column
    for j in range(ns):
        for a in range(nw):
            row = [0] * nvars
            for b in range(nc):
                pab = P.matrix[a][b]
                if not pab:
                    continue
                for c in range(nd):
                    qcj = Q.matrix[c][j]
                    if qcj:
                        row[xi(b, c)] += pab * qcj
            for l, rw in enumerate(RW):
                row[nx + n_y + j * len(RW) + l] -= rw[a]
            rows.append(row)
            rhs.append(T.matrix[a][j])
    if nvars == 0:
        return GroupHom(dom, cod, zeros(cod.num_generators, dom.num_generators)) if not any(rhs) else None
    if not rows:
        sol: tuple[int, ...] | None = (0,) * nvars
    else:
        sol = solve_integer(rows, rhs, nvars)
    if sol is None:
        return None
    Xc = tuple(tuple(sol[xi(b, c)] for c in range(nd)) for b in range(nc))
    Xh = GroupHom(D, C, Xc, check=False)
    return ci.from_canonical @ Xh @ di.to_canonical


def has_retraction(f: GroupHom) -> GroupHom | None:
    """Some ``r`` with ``r o f == id``, or ``None``."""
    return _solve_hom(f.codomain, f.domain, None, f, GroupHom.identity(f.domain))


def has_section(f: GroupHom) -> GroupHom | None:
    """Some ``s`` with ``f o s == id``, or ``None``."""
    return _solve_hom(f.codomain, f.domain, f, None, GroupHom.identity(f.codomain))


def lift_through(mono: GroupHom, f: GroupHom) -> GroupHom | None:
    """Some ``m`` with ``mono o m == f``, or ``None`` when ``f`` does not factor."""
    if not mono.codomain.same_presentation(f.codomain):
        raise ShapeError("maps must share a codomain")
    return _solve_hom(f.domain, mono.domain, mono, None, f)


def descend_through(epi: GroupHom, f: GroupHom) -> GroupHom | None:
    """Some ``m`` with ``m o epi == f``, or ``None``."""
    if not epi.domain.same_presentation(f.domain):
        raise ShapeError("maps must share a domain")
    return _solve_hom(epi.codomain, f.codomain, None, epi, f)


# ---------------------------------------------------------------------------
# sums and sequential colimits


class DirectSum(NamedTuple):
    group: FgAbGroup
    injections: tuple[GroupHom, ...]
    projections: tuple[GroupHom, ...]


def direct_sum(groups: Sequence[FgAbGroup]) -> DirectSum:
    """Block presentation of the direct sum with its structure maps."""
    n = sum(G.num_generators for G in groups)
    rels = []
    offsets = []
    off = 0
    for G in groups:
        offsets.append(off)
        for r in G.relations:
            rels.append((0,) * off + tuple(r) + (0,) * (n - off - G.num_generators))
        off += G.num_generators
    S = FgAbGroup(n, tuple(rels))
    inj, proj = [], []
    for G, off in zip(groups, offsets):
        k = G.num_generators
        I = tuple(tuple(1 if a == off + b else 0 for b in range(k)) for a in range(n))
        inj.append(GroupHom(G, S, I, check=False))
        proj.append(GroupHom(S, G, transpose(I, k) if n else zeros(k, 0), check=False))
    return DirectSum(S, tuple(inj), tuple(proj))


def hom_from_blocks(domain_sum: DirectSum, codomain: FgAbGroup, blocks: Sequence[GroupHom]) -> GroupHom:
    """The map out of a direct sum given by one map per summand."""
    m = codomain.num_generators
    rows = [[] for _ in range(m)]
    for b in blocks:
        for a in range(m):
            rows[a].extend(b.matrix[a] if b.matrix else ())
    M = tuple(tuple(r) for r in rows)
    return GroupHom(domain_sum.group, codomain, M, check=False)


def hom_into_sum(domain: FgAbGroup, codomain_sum: DirectSum, blocks: Sequence[GroupHom]) -> GroupHom:
    """The map into a direct sum given by one map per summand."""
    rows: list[tuple[int, ...]] = []
    for b in blocks:
        rows.extend(b.matrix)
    return GroupHom(domain, codomain_sum.group, tuple(rows), check=False)


@dataclass(frozen=True)
class ColimitResult:
    stable: bool
    group: FgAbGroup | None
    stable_index: int | None
    reason: str = ""


def colim_sequence(
    groups: Sequence[FgAbGroup], maps: Sequence[GroupHom], stabilization_bound: int
) -> ColimitResult:
    """Colimit of ``G_0 -> G_1 -> ...`` when the given chain stabilizes.

    The chain is stable from index ``k`` when every given map from ``k`` on is
    an isomorphism and at least one such map witnesses it (a single group with
    no maps is its own colimit).  ``k`` must not exceed the bound.  A chain
    that never stabilizes yields ``stable=False`` and no group.
    """
    if len(maps) != max(len(groups) - 1, 0):
        raise ShapeError("need exactly one map between consecutive groups")
    for k, f in enumerate(maps):
        if not (f.domain.same_presentation(groups[k]) and f.codomain.same_presentation(groups[k + 1])):
            raise ShapeError(f"map {k} does not connect groups {k} and {k + 1}")
    if not groups:
        return ColimitResult(False, None, None, "empty sequence")
    if not maps:
        return ColimitResult(True, groups[0], 0)
    iso = [f.is_isomorphism() for f in maps]
    k = len(maps)
    while k > 0 and iso[k - 1]:
        k -= 1
    if k == len(maps):
        return ColimitResult(False, None, None, "no isomorphism witnessed at the end of the chain")
    if k > stabilization_bound:
        return ColimitResult(False, None, None, f"stabilizes only at index {k} > bound {stabilization_bound}")
    return ColimitResult(True, groups[k], k)
