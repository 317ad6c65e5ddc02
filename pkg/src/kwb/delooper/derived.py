"""Functors derived from a source: NK, the restricted BHS map, L and Omega L.

Everything here is computed from ``source.group`` and ``source.struct``; the
new variable of a derived construction is always appended outermost, so the
positions of the variables already in an expression are unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..abgroup import (
    DirectSum,
    FgAbGroup,
    GroupHom,
    cokernel,
    direct_sum,
    hom_from_blocks,
    kernel,
    lift_through,
    matmul,
)
from .expression import Expression, target_expression
from .sources import KSource, SourceGap

SIGNS = {"+": ("poly", "i_plus", "j_plus", "ev0_plus"), "-": ("negpoly", "i_minus", "j_minus", "ev0_minus")}


@dataclass(frozen=True)
class NKData:
    """``NK_i`` with its inclusion into ``K_i`` of the extension and a retraction."""

    sign: str
    degree: int
    group: FgAbGroup
    inclusion: GroupHom
    retraction: GroupHom
    ev0: GroupHom
    i_map: GroupHom


def nk_data(source: KSource, X: Expression, i: int, sign: str = "+", twist: str | None = None) -> NKData:
    """``NK^sign_i(X) = ker(ev_0)`` on the extension by a new outer variable.

    ``retraction`` is ``r`` with ``r o inclusion = id`` and
    ``inclusion o r = id - i o ev_0``, so ``(ev_0, r)`` splits the extension
    group as ``K_i(X) + NK_i``.
    """
    kind, i_kind, _, ev_kind = SIGNS[sign]
    p = len(X)
    Y = X.insert(p, kind, twist)
    ev0 = source.struct(Y, ev_kind, i, p)
    inc = source.struct(X, i_kind, i, p, twist)
    K = kernel(ev0)
    comp = GroupHom.identity(ev0.domain) - inc @ ev0
    r = lift_through(K.inclusion, comp)
    if r is None:
        raise ArithmeticError(f"ev0 o i is not the identity on {X} in degree {i}")
    return NKData(sign, i, K.group, K.inclusion, r, ev0, inc)


@dataclass(frozen=True)
class RestrictedBHS:
    """``K_i(X) + NK_i^+ + NK_i^- -> K_i(X[u, u^-1])`` and its pieces."""

    degree: int
    domain: DirectSum
    map: GroupHom
    nk_plus: NKData
    nk_minus: NKData
    i0: GroupHom
    b_plus: GroupHom
    b_minus: GroupHom

    @property
    def codomain(self) -> FgAbGroup:
        return self.map.codomain


def restricted_bhs(source: KSource, X: Expression, i: int, twist: str | None = None) -> RestrictedBHS:
    p = len(X)
    i0 = source.struct(X, "i0", i, p, twist)
    nkp = nk_data(source, X, i, "+", twist)
    nkm = nk_data(source, X, i, "-", twist)
    jp = source.struct(X.insert(p, "poly", twist), "j_plus", i, p)
    jm = source.struct(X.insert(p, "negpoly", twist), "j_minus", i, p)
    bp = jp @ nkp.inclusion
    bm = jm @ nkm.inclusion
    D = direct_sum([i0.domain, nkp.group, nkm.group])
    M = hom_from_blocks(D, i0.codomain, [i0, bp, bm])
    return RestrictedBHS(i, D, M, nkp, nkm, i0, bp, bm)


def _conjugate_on_quotients(f: GroupHom, proj_y: GroupHom, lift_x, G: FgAbGroup) -> GroupHom:
    """``proj_y o f o lift_x`` as a map ``G -> proj_y.codomain``."""
    H = proj_y.codomain
    n = G.num_generators
    if not (H.num_generators and f.codomain.num_generators):
        return GroupHom.zero(G, H)
    inner = matmul(f.matrix, lift_x, ncols=n)
    return GroupHom(G, H, matmul(proj_y.matrix, inner, ncols=n))


class DeloopedSource(KSource):
    """``Omega L E``: ``pi_i(X) = coker(pi_{i+1} BHS_r)`` of the inner source.

    The structure map ``kind`` at ``pos`` is the inner map on ``X[s, s^-1]``
    pushed to cokernels; naturality is checked when the map is built.
    """

    def __init__(self, inner: KSource) -> None:
        super().__init__()
        self.inner = inner
        self.mode = inner.mode

    def _coker(self, X: Expression, i: int):
        key = ("coker", X, i)
        if key not in self._cache:
            B = restricted_bhs(self.inner, X, i + 1)
            self._cache[key] = cokernel(B.map)
        return self._cache[key]

    def _group(self, X, i):
        return self._coker(X, i).group

    def _struct(self, X, kind, i, pos, twist=None):
        if kind == "phi_inverse":
            raise SourceGap("no twist data on delooped sources")
        Y = target_expression(X, kind, pos, twist)
        j = i + 1 if kind == "a" else i
        cx, cy = self._coker(X, i), self._coker(Y, j)
        f = self.inner.struct(X.extend("laurent"), kind, i + 1, pos, twist)
        return _conjugate_on_quotients(f, cy.projection, cx.lift, cx.group)

    def serves_a(self):
        return self.inner.serves_a()

    def provenance(self, X, i):
        return f"coker of BHS_r over {self.inner.provenance(X, i + 1)}"

    def describe(self):
        return f"Omega L of ({self.inner.describe()})"


def structure_map_s(source: KSource, X: Expression, i: int) -> GroupHom:
    """``pi_i E(X) -> pi_i (Omega L E)(X)``: the class of ``a``."""
    a = source.struct(X, "a", i, len(X))
    C = cokernel(restricted_bhs(source, X, i + 1).map)
    return C.projection @ a


@dataclass(frozen=True)
class BassStep:
    degree: int
    group: FgAbGroup
    boundary: GroupHom
    j_sum: GroupHom
    consumed: tuple[tuple[str, int], ...] = ()


def j_sum_map(source: KSource, X: Expression, i: int, twist: str | None = None) -> tuple[DirectSum, GroupHom]:
    """``K_i(X[u]) + K_i(X[u^-1]) -> K_i(X[u, u^-1])``."""
    p = len(X)
    jp = source.struct(X.insert(p, "poly", twist), "j_plus", i, p)
    jm = source.struct(X.insert(p, "negpoly", twist), "j_minus", i, p)
    D = direct_sum([jp.domain, jm.domain])
    return D, hom_from_blocks(D, jp.codomain, [jp, jm])


def bass_step(source: KSource, X: Expression, i: int) -> BassStep:
    """``coker(j_+ + j_-)`` in degree ``i``: a model for ``K_{i-1}(X)``."""
    _, J = j_sum_map(source, X, i)
    C = cokernel(J)
    return BassStep(i, C.group, C.projection, J)


class NegativeKSource(KSource):
    """The inner source in degrees >= 0, Bass cokernels below.

    ``pi_{i}(X) = coker(j_+ + j_-)`` in degree ``i + 1`` for ``i < 0``, where
    the degree ``i + 1`` data again comes from this source.
    """

    def __init__(self, inner: KSource) -> None:
        super().__init__()
        self.inner = inner
        self.mode = inner.mode

    def _coker(self, X, i):
        key = ("bass", X, i)
        if key not in self._cache:
            _, J = j_sum_map(self, X, i + 1)
            self._cache[key] = cokernel(J)
        return self._cache[key]

    def _group(self, X, i):
        if i >= 0:
            return self.inner.group(X, i)
        return self._coker(X, i).group

    def _struct(self, X, kind, i, pos, twist=None):
        Y = target_expression(X, kind, pos, twist)
        j = i + 1 if kind == "a" else i
        if i >= 0 and j >= 0:
            return self.inner.struct(X, kind, i, pos, twist)
        if kind == "phi_inverse":
            raise SourceGap("no twist data below degree 0")
        if j >= 0:
            raise SourceGap("a-map from degree -1 to 0 is not derived")
        f = self.struct(X.extend("laurent"), kind, i + 1, pos, twist)
        cx = self._coker(X, i)
        cy = self._coker(Y, j)
        return _conjugate_on_quotients(f, cy.projection, cx.lift, cx.group)

    def serves_a(self):
        return False

    def provenance(self, X, i):
        if i >= 0:
            return self.inner.provenance(X, i)
        return f"Bass cokernel over {self.inner.provenance(X, 0)}"


class RecordingSource(KSource):
    """Pass-through that records which (expression, degree) pairs were read."""

    def __init__(self, inner: KSource) -> None:
        super().__init__()
        self.inner = inner
        self.mode = inner.mode
        self.consumed: list[tuple[str, int]] = []

    def _note(self, X, i):
        k = (str(X), i)
        if k not in self.consumed:
            self.consumed.append(k)

    def _group(self, X, i):
        self._note(X, i)
        return self.inner.group(X, i)

    def _struct(self, X, kind, i, pos, twist=None):
        return self.inner.struct(X, kind, i, pos, twist)

    def serves_a(self):
        return self.inner.serves_a()

    def provenance(self, X, i):
        return self.inner.provenance(X, i)


@dataclass
class NegativeKResult:
    groups: list[FgAbGroup]
    provenance: list[str]
    consumed: list[list[tuple[str, int]]]
    gap: str | None = None

    @property
    def complete(self) -> bool:
        return self.gap is None


def negative_k(source: KSource, X: Expression, depth: int) -> NegativeKResult:
    """``K_{-1}(X), ..., K_{-depth}(X)`` by iterated Bass cokernels.

    Stops at the first gap and reports it with the groups found so far.
    """
    rec = RecordingSource(source)
    neg = NegativeKSource(rec)
    out = NegativeKResult([], [], [])
    for k in range(1, depth + 1):
        before = len(rec.consumed)
        try:
            g = neg.group(X, -k)
        except SourceGap as e:
            out.gap = f"K_{-k}: {e}"
            break
        out.groups.append(g)
        out.provenance.append(neg.provenance(X, -k))
        out.consumed.append(rec.consumed[before:])
    return out
