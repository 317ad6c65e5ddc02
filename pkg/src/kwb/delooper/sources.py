"""Providers of K-group data with structure maps.

A source answers two questions for an :class:`Expression` ``X`` and degree
``i``: the group ``pi_i E(X)`` and the structure maps between ``X`` and the
expressions obtained by adding, removing or relabelling one variable.

Structure map kinds, for a variable at position ``pos``:

``i0``, ``i_plus``, ``i_minus``
    ``X -> X`` with a Laurent / polynomial / inverse-polynomial variable
    inserted at ``pos``.
``j_plus``, ``j_minus``
    the variable at ``pos`` goes from polynomial to Laurent.
``ev0_plus``, ``ev0_minus``
    the polynomial variable at ``pos`` is set to zero.
``a``
    ``pi_i E(X) -> pi_{i+1} E(X[u, u^-1])``, the restriction of the
    Bass-Heller-Swan map to the circle factor (multiplication by the class of
    ``u``).  Optional: sources that cannot provide it say so.
``phi_inverse``
    the action of the inverse twist on ``X``; oracle data only.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from typing import Any, Callable

from ..abgroup import FgAbGroup, GroupHom, direct_sum, identity as int_identity
from ..kengine import DEFAULT_WINDOW, WindowError, induced_k_map, k_value
from ..rings import LaurentRing, Ring, RingHom, UnsupportedError
from .expression import Expression, default_position, target_expression

STRUCT_KINDS = ("i0", "i_plus", "i_minus", "j_plus", "j_minus", "ev0_plus", "ev0_minus", "a", "phi_inverse")


class SourceGap(LookupError):
    """The source has no data for the requested expression, degree or map."""


class KSource:
    """Base class: memoizes ``group`` and ``struct`` and checks shapes."""

    mode = "abstract"

    def __init__(self) -> None:
        self._cache: dict[Any, Any] = {}

    # subclasses implement these two
    def _group(self, X: Expression, i: int) -> FgAbGroup:
        raise NotImplementedError

    def _struct(self, X: Expression, kind: str, i: int, pos: int, twist: str | None = None) -> GroupHom:
        raise NotImplementedError

    def group(self, X: Expression, i: int) -> FgAbGroup:
        key = ("g", X, i)
        if key not in self._cache:
            self._cache[key] = self._group(X, i)
        return self._cache[key]

    def struct(self, X: Expression, kind: str, i: int, pos: int | None = None, twist: str | None = None) -> GroupHom:
        """The structure map ``kind`` at ``pos``; ``twist`` labels an inserted
        variable (only meaningful for the inserting kinds)."""
        if kind not in STRUCT_KINDS:
            raise ValueError(f"unknown structure map {kind!r}")
        if pos is None and kind != "phi_inverse":
            pos = default_position(X, kind)
        key = ("s", X, kind, i, pos, twist)
        if key not in self._cache:
            if twist is None:
                f = self._struct(X, kind, i, pos)  # type: ignore[arg-type]
            else:
                f = self._struct(X, kind, i, pos, twist)  # type: ignore[arg-type]
            Y = target_expression(X, kind, pos, twist)
            j = i + 1 if kind == "a" else i
            if not (f.domain.same_presentation(self.group(X, i)) and f.codomain.same_presentation(self.group(Y, j))):
                raise AssertionError(f"{kind} at {X} does not match the served groups")
            self._cache[key] = f
        return self._cache[key]

    def serves_a(self) -> bool:
        return False

    def provenance(self, X: Expression, i: int) -> str:
        return self.mode

    def describe(self) -> str:
        return self.mode


# ---------------------------------------------------------------------------
# ring-level structure maps inside nested Laurent rings


def ring_of(X: Expression) -> Ring:
    R = X.base
    if not isinstance(R, Ring):
        raise SourceGap(f"{X.base!r} is not a ring")
    for pos, adj in enumerate(X.chain):
        if adj.twist is not None:
            raise SourceGap("twisted variables are not served by the engine")
        R = LaurentRing(R, f"u{pos}", adj.kind)
    return R


def _at_depth(x: Any, depth: int, src: Ring, tgt: Ring, op: Callable[[Any, Ring, Ring], Any]) -> Any:
    if depth == 0:
        return op(x, src, tgt)
    assert isinstance(src, LaurentRing) and isinstance(tgt, LaurentRing)
    return tgt.make([(e, _at_depth(c, depth - 1, src.base, tgt.base, op)) for e, c in x.terms])


def structural_ring_hom(X: Expression, kind: str, pos: int) -> RingHom:
    """The ring homomorphism behind a structure map of ``X``."""
    Y = target_expression(X, kind, pos)
    S, T = ring_of(X), ring_of(Y)
    if kind in ("i0", "i_plus", "i_minus"):
        depth = len(X) - pos
        op = lambda x, s, t: t.const(x)  # noqa: E731
    elif kind in ("j_plus", "j_minus"):
        depth = len(X) - 1 - pos
        op = lambda x, s, t: t.make(x.terms)  # noqa: E731
    elif kind in ("ev0_plus", "ev0_minus"):
        depth = len(X) - 1 - pos
        op = lambda x, s, t: x.coeff(0, t.zero())  # noqa: E731
    else:
        raise ValueError(kind)
    return RingHom(f"{kind}@{pos}", S, T, lambda x: _at_depth(x, depth, S, T, op))


def variable_element(X: Expression, pos: int) -> Any:
    """The variable at ``pos`` as an element of ``ring_of(X)``."""
    R = ring_of(X)
    layers = []
    r: Ring = R
    while isinstance(r, LaurentRing):
        layers.append(r)
        r = r.base
    layers = layers[::-1]
    x = layers[pos].gen(1)
    for L in layers[pos + 1:]:
        x = L.const(x)
    return x


# ---------------------------------------------------------------------------
# the independent engine


class EngineSource(KSource):
    """Connective K-theory from :mod:`kwb.kengine`: degrees 0 and 1.

    Groups in negative degrees are zero (this is the connective functor, not a
    claim about negative K-theory); degrees above 1 are gaps.
    """

    mode = "independent"

    def __init__(self, window: int = DEFAULT_WINDOW) -> None:
        super().__init__()
        self.window = window

    def _kv(self, X: Expression, i: int):
        try:
            return k_value(ring_of(X), i, self.window)
        except UnsupportedError as e:
            raise SourceGap(f"engine: K_{i}({X}) unsupported: {e}") from e

    def _group(self, X, i):
        if i < 0:
            ring_of(X)
            return FgAbGroup.trivial()
        if i > 1:
            raise SourceGap(f"engine computes K_0 and K_1 only, not K_{i}")
        return self._kv(X, i).group

    def _struct(self, X, kind, i, pos, twist=None):
        if kind == "phi_inverse" or twist is not None:
            raise SourceGap("engine has no twist data")
        Y = target_expression(X, kind, pos)
        j = i + 1 if kind == "a" else i
        G, H = self.group(X, i), self.group(Y, j)
        if kind == "a":
            if i < 0:
                return GroupHom.zero(G, H)
            if i > 0:
                raise SourceGap("engine a-map only from K_0 to K_1")
            src, tgt = self._kv(X, 0), self._kv(Y, 1)
            inc = structural_ring_hom(X, "i0", pos)
            T = ring_of(Y)
            t = variable_element(Y, pos)
            cols = []
            for e in src.generators:
                f = inc(e)
                u = T.add(T.mul(f, t), T.sub(T.one(), f))
                try:
                    cols.append(tgt.coords(u))
                except WindowError as err:  # pragma: no cover - t^n always fits
                    raise SourceGap(str(err)) from err
            M = tuple(tuple(c[r] for c in cols) for r in range(H.num_generators))
            return GroupHom(G, H, M)
        if i < 0:
            return GroupHom.zero(G, H)
        h = structural_ring_hom(X, kind, pos)
        try:
            f = induced_k_map(h, i, self.window)
        except UnsupportedError as e:
            raise SourceGap(str(e)) from e
        return GroupHom(G, H, f.matrix, check=False)

    def serves_a(self):
        return True

    def provenance(self, X, i):
        if i < 0:
            return "independent (connective: zero below degree 0)"
        return f"independent ({self._kv(X, i).provenance})"


# ---------------------------------------------------------------------------
# the decomposition model


class BHSModelSource(KSource):
    """Groups synthesized from seeds by the Bass-Heller-Swan formula.

    With seeds ``K_j(A)`` and vanishing Nil terms,
    ``K_i(A[...]) = sum over sets S of Laurent positions of K_{i-|S|}(A)``.
    Structure maps are the evident block inclusions, identifications and
    shifts.  ``connective_from`` truncates the model below that degree, which
    produces a 0-contracted but not 1-contracted functor.

    ``mode`` is ``"bhs-extended"`` when the seeds come from the engine and
    ``"synthetic"`` for hand-made fixtures.
    """

    def __init__(
        self,
        base: Any,
        seeds: dict[int, FgAbGroup] | Callable[[int], FgAbGroup],
        *,
        connective_from: int | None = None,
        mode: str = "synthetic",
        seed_range: tuple[int, int] | None = None,
    ) -> None:
        super().__init__()
        self.base = base
        self._seeds = seeds
        self.connective_from = connective_from
        self.mode = mode
        self.seed_range = seed_range
        self._seed_cache: dict[int, FgAbGroup] = {}

    def seed(self, j: int) -> FgAbGroup:
        if j not in self._seed_cache:
            if self.seed_range is not None and not (self.seed_range[0] <= j <= self.seed_range[1]):
                raise SourceGap(f"{self.mode} model has no seed in degree {j}")
            if callable(self._seeds):
                g = self._seeds(j)
            else:
                g = self._seeds.get(j, FgAbGroup.trivial())
            self._seed_cache[j] = g
        return self._seed_cache[j]

    def _check_expr(self, X: Expression) -> None:
        if X.base != self.base:
            raise SourceGap(f"model serves {self.base}, not {X.base}")
        if any(a.twist is not None for a in X.chain):
            raise SourceGap("model has no twisted data")

    def _summands(self, X: Expression, i: int) -> list[tuple[frozenset, int]]:
        self._check_expr(X)
        if self.connective_from is not None and i < self.connective_from:
            return []
        lpos = [p for p, a in enumerate(X.chain) if a.kind == "laurent"]
        out = []
        for r in range(len(lpos) + 1):
            from itertools import combinations

            for S in combinations(lpos, r):
                out.append((frozenset(S), i - r))
        return out

    def _layout(self, X: Expression, i: int):
        key = ("layout", X, i)
        if key not in self._cache:
            sums = self._summands(X, i)
            groups = [self.seed(j) for _, j in sums]
            D = direct_sum(groups)
            offsets, off = {}, 0
            for (S, j), g in zip(sums, groups):
                offsets[S] = (off, g)
                off += g.num_generators
            self._cache[key] = (D.group, offsets)
        return self._cache[key]

    def _group(self, X, i):
        return self._layout(X, i)[0]

    def _struct(self, X, kind, i, pos, twist=None):
        if kind == "phi_inverse" or twist is not None:
            raise SourceGap("model has no twist data")
        Y = target_expression(X, kind, pos)
        j = i + 1 if kind == "a" else i
        G, offX = self._layout(X, i)
        H, offY = self._layout(Y, j)

        def shift(S):
            return frozenset(p + 1 if p >= pos else p for p in S)

        def unshift(S):
            return frozenset(p - 1 if p > pos else p for p in S)

        if kind in ("i0", "i_plus", "i_minus"):
            move = shift
        elif kind in ("j_plus", "j_minus"):
            move = lambda S: S  # noqa: E731
        elif kind in ("ev0_plus", "ev0_minus"):
            move = unshift
        else:  # a
            move = lambda S: shift(S) | {pos}  # noqa: E731
        M = [[0] * G.num_generators for _ in range(H.num_generators)]
        for S, (o, g) in offX.items():
            T = move(S)
            if T in offY:
                o2, g2 = offY[T]
                for k in range(g.num_generators):
                    M[o2 + k][o + k] = 1
        return GroupHom(G, H, M)

    def serves_a(self):
        return True

    def describe(self):
        trunc = "" if self.connective_from is None else f", zero below degree {self.connective_from}"
        return f"{self.mode} model over {self.base}{trunc}"


def engine_seeds_are_regular(R: Ring, window: int = DEFAULT_WINDOW) -> bool:
    """Whether the engine sees ``NK_0 = NK_1 = 0`` for ``R`` (both signs)."""
    from .derived import nk_data

    src = EngineSource(window)
    X = Expression(R, ())
    try:
        for i in (0, 1):
            for sign in "+-":
                if not nk_data(src, X, i, sign).group.is_trivial:
                    return False
    except SourceGap:
        return False
    return True


def bhs_extended_source(R: Ring, window: int = DEFAULT_WINDOW) -> BHSModelSource:
    """Engine seeds ``K_0(R)``, ``K_1(R)``, zero below, extended by the formula.

    Only for rings where the engine sees no Nil terms; degrees above 1 are
    gaps.
    """
    if not engine_seeds_are_regular(R, window):
        raise SourceGap(f"bhs-extended needs vanishing NK_0 and NK_1; not the case for {R}")
    X = Expression(R, ())
    eng = EngineSource(window)
    seeds = {0: eng.group(X, 0), 1: eng.group(X, 1)}
    return BHSModelSource(R, lambda j: seeds.get(j, FgAbGroup.trivial()), mode="bhs-extended",
                          seed_range=(-(10**6), 1))


class AutoSource(KSource):
    """Independent data where available, falling back to a second source."""

    mode = "auto"

    def __init__(self, primary: KSource, fallback: KSource) -> None:
        super().__init__()
        self.primary, self.fallback = primary, fallback
        self._which: dict[Any, KSource] = {}

    def _pick(self, X: Expression, i: int, j: int, Y: Expression | None = None) -> KSource:
        key = (X, i, Y, j)
        if key not in self._which:
            try:
                self.primary.group(X, i)
                if Y is not None:
                    self.primary.group(Y, j)
                self._which[key] = self.primary
            except SourceGap:
                self._which[key] = self.fallback
        return self._which[key]

    def _group(self, X, i):
        return self._pick(X, i, i).group(X, i)

    def _struct(self, X, kind, i, pos, twist=None):
        Y = target_expression(X, kind, pos, twist)
        j = i + 1 if kind == "a" else i
        sx, sy = self._pick(X, i, i), self._pick(Y, j, j)
        if sx is sy:
            try:
                return sx.struct(X, kind, i, pos, twist)
            except SourceGap:
                pass
        raise SourceGap(f"{kind} at {X} would cross between sources")

    def serves_a(self):
        return self.primary.serves_a() and self.fallback.serves_a()

    def provenance(self, X, i):
        return self._pick(X, i, i).provenance(X, i)


# ---------------------------------------------------------------------------
# change of basis


def random_unimodular(n: int, rng: random.Random, steps: int = 6) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """A random unimodular integer matrix and its inverse."""
    P = [list(r) for r in int_identity(n)]
    Q = [list(r) for r in int_identity(n)]
    if n < 2:
        if n == 1 and rng.random() < 0.5:
            return ((-1,),), ((-1,),)
        return int_identity(n), int_identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # P <- E P with E = I + c e_ij;  Q <- Q E^-1
        P[i] = [a + c * b for a, b in zip(P[i], P[j])]
        for row in Q:
            row[j] -= c * row[i]
    return tuple(map(tuple, P)), tuple(map(tuple, Q))


class RebasedSource(KSource):
    """The same data on randomly changed generators.

    Every group is replaced by an isomorphic presentation and every map is
    conjugated accordingly; verdicts of all checks must not change.
    """

    def __init__(self, inner: KSource, seed: int = 0) -> None:
        super().__init__()
        self.inner = inner
        self.seed = seed
        self.mode = inner.mode

    def _rebase(self, X, i):
        key = ("rebase", X, i)
        if key not in self._cache:
            G = self.inner.group(X, i)
            rng = random.Random(zlib.crc32(f"{self.seed}|{X}|{X.chain_text}|{i}".encode()))
            P, Q = random_unimodular(G.num_generators, rng)
            self._cache[key] = G.rebased(P, Q)
        return self._cache[key]

    def _group(self, X, i):
        return self._rebase(X, i)[0]

    def _struct(self, X, kind, i, pos, twist=None):
        Y = target_expression(X, kind, pos, twist)
        j = i + 1 if kind == "a" else i
        f = self.inner.struct(X, kind, i, pos, twist)
        Gx, _, back_x = self._rebase(X, i)
        Gy, to_y, _ = self._rebase(Y, j)
        return to_y @ f @ back_x

    def serves_a(self):
        return self.inner.serves_a()

    def provenance(self, X, i):
        return self.inner.provenance(X, i)
