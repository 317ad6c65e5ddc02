"""K_0 and K_1 of tractable rings, computed from first principles.

The engine never uses the decomposition formulas the rest of the package is
meant to test.  K_0 is read off from the connected components (CRT local
factors); K_1 is the unit group, with the vanishing of SK_1 witnessed by an
elementary-reduction algorithm on sampled matrices where the ring is
Euclidean.

Supported rings, by local factor:

* ``Z`` or a finite field, possibly with polynomial variables and at most one
  Laurent variable;
* ``Z/p^k`` without variables;
* ``Z/p^2`` with one variable.  Here ``NK_1`` is not finitely generated, so
  the unit group is truncated to a window of exponents ``|e| <= window``
  (see :class:`WindowedUnitModel`).

Anything else raises :class:`UnsupportedError`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Sequence

from .abgroup import FgAbGroup, GroupHom, direct_sum
from .addcat import Mat, mat_det, mat_identity, mat_mul
from .rings import (
    FiniteField,
    Integers,
    IntegersModN,
    LaurentElem,
    LaurentRing,
    Ring,
    RingHom,
    UnsupportedError,
    discrete_log_mod,
    factorize,
    primitive_root,
    prime_power,
    unit_group_generators_mod,
)

DEFAULT_WINDOW = 2


class SingularMatrixError(ValueError):
    pass


class ReductionStalled(RuntimeError):
    """The heuristic reducer found no norm-decreasing move."""


class WindowError(ValueError):
    """A unit lies outside the truncated exponent window of the model."""


# ---------------------------------------------------------------------------
# ring anatomy


def _chain(R: Ring) -> tuple[Ring, list[LaurentRing]]:
    layers = []
    while isinstance(R, LaurentRing):
        layers.append(R)
        R = R.base
    return R, layers[::-1]


def _rebuild(core: Ring, layers: Sequence[LaurentRing]) -> Ring:
    R = core
    for L in layers:
        if L.twist is not None:
            raise UnsupportedError("twisted layers are outside the engine")
        R = LaurentRing(R, L.var, L.kind)
    return R


def _map_coeffs(x: Any, depth: int, fn: Callable[[Any], Any], rings: Sequence[Ring]) -> Any:
    """Apply ``fn`` to the core coefficients of a nested Laurent element.

    ``rings[d]`` is the target ring at nesting depth ``d`` (outermost first).
    """
    if depth == 0:
        return fn(x)
    L = rings[0]
    return L.make([(e, _map_coeffs(c, depth - 1, fn, rings[1:])) for e, c in x.terms])


@dataclass(frozen=True)
class LocalFactor:
    """A connected factor ``R_l`` of ``R`` with the CRT structure maps."""

    ring: Ring
    project: Callable[[Any], Any] = field(compare=False, repr=False)
    lift: Callable[[Any], Any] = field(compare=False, repr=False)
    idempotent: Any = None


@lru_cache(maxsize=None)
def local_factors(R: Ring) -> tuple[LocalFactor, ...]:
    """Split ``R`` by the CRT decomposition of its coefficient ring.

    ``Z`` and fields give one factor; ``Z/n`` one factor per prime power; the
    zero ring none.
    """
    core, layers = _chain(R)
    if isinstance(core, IntegersModN):
        fac = factorize(core.n)
        if len(fac) <= 1 and core.n > 1:
            pass
        else:
            out = []
            n = core.n
            depth = len(layers)
            outer_R = _outer_rings(R)
            for p, k in sorted(fac.items()):
                q = p**k
                m = n // q
                e_int = (m * pow(m, -1, q)) % n
                Rq = _rebuild(IntegersModN(q), layers)
                outer_q = _outer_rings(Rq)

                def proj(x, q=q, outer_q=outer_q):
                    return _map_coeffs(x, depth, lambda c: c % q, outer_q)

                def lift(x, e_int=e_int, outer=outer_R):
                    return _map_coeffs(x, depth, lambda c: c * e_int % n, outer)

                idem = _const(R, e_int)
                out.append(LocalFactor(Rq, proj, lift, idem))
            return tuple(out)
    return (LocalFactor(R, lambda x: x, lambda x: x, R.one()),)


def _outer_rings(R: Ring) -> list[Ring]:
    out = []
    while isinstance(R, LaurentRing):
        out.append(R)
        R = R.base
    return out


def _const(R: Ring, c: Any) -> Any:
    if isinstance(R, LaurentRing):
        return R.const(_const(R.base, c))
    return R.normalize(c)


# ---------------------------------------------------------------------------
# Euclidean witnesses


@dataclass(frozen=True)
class EuclideanWitness:
    """A norm and a partial division used by the reducer.

    ``quotient(a, p)`` returns ``q`` with ``norm(a - q p) < norm(a)`` or
    ``None``.  For genuinely Euclidean rings the division property holds
    whenever ``norm(p) <= norm(a)``; for the heuristic witness on ``Z[t^+-1]``
    it may fail.
    """

    name: str
    norm: Callable[[Any], tuple] = field(compare=False)
    quotient: Callable[[Any, Any], Any] = field(compare=False)
    exact: bool = True


def _int_witness() -> EuclideanWitness:
    def q(a, p):
        if p == 0:
            return None
        r = (2 * a + p) // (2 * p)  # round(a / p)
        return r if abs(a - r * p) < abs(a) else None

    return EuclideanWitness("abs", lambda a: (abs(a),), q)


def _modn_witness(n: int) -> EuclideanWitness:
    def q(a, p):
        if p % n == 0:
            return None
        a, p = a % n, p % n
        r = a // p
        return r if (a - r * p) % n < a else None

    return EuclideanWitness("representative", lambda a: (a % n,), q)


def _laurent_witness(L: LaurentRing) -> EuclideanWitness:
    B = L.base
    over_field = B.is_field
    kind = L.kind

    def norm(a: LaurentElem) -> tuple:
        if a.is_zero:
            return (-1, 0)
        span = a.max_exp - a.min_exp
        if kind == "poly":
            lead = a.max_exp
        elif kind == "negpoly":
            lead = -a.min_exp
        else:
            lead = span
        if over_field:
            return (lead,)
        return (lead, sum(abs(c) for _, c in a.terms))

    def candidates(a: LaurentElem, p: LaurentElem):
        pairs = []
        if kind in ("poly", "laurent"):
            pairs.append((a.max_exp - p.max_exp, a.terms[-1][1], p.terms[-1][1]))
        if kind in ("negpoly", "laurent"):
            pairs.append((a.min_exp - p.min_exp, a.terms[0][1], p.terms[0][1]))
        for shift, ca, cp in pairs:
            if (kind == "poly" and shift < 0) or (kind == "negpoly" and shift > 0):
                continue
            if over_field:
                yield L.monomial(B.mul(ca, B.inverse(cp)), shift)
            else:
                for c in {ca // cp, -((-ca) // cp)}:
                    if c:
                        yield L.monomial(c, shift)

    def quotient(a: LaurentElem, p: LaurentElem):
        if p.is_zero:
            return None
        qacc = L.zero()
        rem = a
        for _ in range(256):
            if rem.is_zero:
                break
            best = None
            for q in candidates(rem, p):
                r = L.sub(rem, L.mul(q, p))
                if best is None or norm(r) < best[0]:
                    best = (norm(r), q, r)
            if best is None or best[0] >= norm(rem):
                break
            qacc = L.add(qacc, best[1])
            rem = best[2]
        return qacc if norm(rem) < norm(a) else None

    exact = over_field
    return EuclideanWitness(f"{'degree' if kind != 'laurent' else 'span'} over {B}", norm, quotient, exact)


def euclidean_witness(R: Ring) -> EuclideanWitness | None:
    if isinstance(R, Integers):
        return _int_witness()
    if isinstance(R, IntegersModN):
        return _modn_witness(R.n)
    if isinstance(R, LaurentRing) and R.twist is None and not isinstance(R.base, LaurentRing):
        if R.base.is_field or isinstance(R.base, Integers):
            return _laurent_witness(R)
    return None


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class RingClass:
    kind: str
    detail: str
    witness: EuclideanWitness | None = None

    def check_division(self, samples: Sequence[tuple[Any, Any]], zero: Any) -> bool:
        """Spot-check ``norm(a - q p) < norm(a)`` whenever ``0 != norm(p) <= norm(a)``."""
        w = self.witness
        if w is None:
            return False
        for a, p in samples:
            if w.norm(zero) < w.norm(p) <= w.norm(a):
                if w.quotient(a, p) is None:
                    return False
        return True


def classify_ring(R: Ring) -> RingClass:
    """Deterministic classification of ``R`` for the engine."""
    core, layers = _chain(R)
    if any(L.twist is not None for L in layers):
        return RingClass("Unsupported", "twisted Laurent extension")
    w = euclidean_witness(R)
    if isinstance(core, IntegersModN) and core.n == 1:
        return RingClass("ProductOfLocals", "zero ring (no factors)")
    if isinstance(core, IntegersModN) and len(factorize(core.n)) > 1:
        return RingClass("ProductOfLocals", f"CRT factors of Z/{core.n}", w)
    if not layers:
        if isinstance(core, Integers):
            return RingClass("Integers", "Z", w)
        if core.is_field:
            q = core.q if isinstance(core, FiniteField) else core.n  # type: ignore[attr-defined]
            return RingClass("Field", f"F{q}", w)
        if isinstance(core, IntegersModN):
            return RingClass("LocalZModPk", f"Z/{core.n}", w)
    n_laurent = sum(1 for L in layers if L.kind == "laurent")
    if len(layers) == 1 and core.is_field:
        kind = "LaurentOverField" if layers[0].kind == "laurent" else "EuclideanDomain"
        return RingClass(kind, str(R), w)
    if len(layers) == 1 and w is not None:
        return RingClass("EuclideanDomain", f"{R} (heuristic norm)", w)
    if isinstance(core, IntegersModN) and not core.is_field:
        pk = prime_power(core.n)
        if pk and pk[1] == 2 and len(layers) == 1:
            return RingClass("LocalZModPk", f"{R} (windowed units)", None)
        return RingClass("Unsupported", f"{R}: Z/p^k coefficients beyond the windowed model")
    if n_laurent > 1:
        return RingClass("Unsupported", f"{R}: several Laurent variables")
    return RingClass("EuclideanDomain" if w else "PolynomialOverRegular", str(R), w)


# ---------------------------------------------------------------------------
# unit models


class UnitModel:
    """A finitely generated model of ``R^x`` on one connected factor."""

    ring: Ring
    group: FgAbGroup
    generators: list[Any]
    semantics: list[str]
    certified: bool

    def coords(self, u: Any) -> tuple[int, ...]:
        raise NotImplementedError


class FieldUnits(UnitModel):
    def __init__(self, F: Ring):
        self.ring = F
        if isinstance(F, FiniteField):
            q = F.q
            self.generators = [F.generator] if q > 2 else []
            self._log = F.log
        else:
            q = F.n  # type: ignore[attr-defined]
            g = primitive_root(q) if q > 2 else 1
            table = {pow(g, i, q): i for i in range(q - 1)}
            self.generators = [g] if q > 2 else []
            self._log = lambda x: table[x % q]
        self.q = q
        self.group = FgAbGroup(1, ((q - 1,),)) if q > 2 else FgAbGroup.trivial()
        self.semantics = ["primitive element"] if q > 2 else []
        self.certified = True

    def coords(self, u):
        if self.ring.is_zero(u):
            raise ValueError("zero is not a unit")
        return (self._log(u),) if self.q > 2 else ()


class IntegerUnits(UnitModel):
    def __init__(self):
        self.ring = Integers()
        self.group = FgAbGroup.cyclic(2)
        self.generators = [-1]
        self.semantics = ["-1"]
        self.certified = True

    def coords(self, u):
        if u not in (1, -1):
            raise ValueError(f"{u} is not a unit")
        return (0 if u == 1 else 1,)


class ModPkUnits(UnitModel):
    def __init__(self, R: IntegersModN):
        self.ring = R
        self._gens = unit_group_generators_mod(R.n)
        self.generators = [g for g, _ in self._gens]
        self.group = FgAbGroup(len(self._gens), tuple(
            tuple(o if j == i else 0 for j in range(len(self._gens))) for i, (_, o) in enumerate(self._gens)
        ))
        self.semantics = [f"unit {g} of order {o}" for g, o in self._gens]
        self.certified = True

    def coords(self, u):
        return discrete_log_mod(u, self._gens, self.ring.n)


class ChainUnits(UnitModel):
    """Units of a domain with polynomial variables and at most one Laurent one.

    Every unit is ``c * t^n`` with ``c`` a unit of the core and ``t`` the
    Laurent variable (if any).
    """

    def __init__(self, R: Ring, base: UnitModel, layers: list[LaurentRing]):
        self.ring = R
        self.base = base
        self.layers = layers
        laurent = [i for i, L in enumerate(layers) if L.kind == "laurent"]
        if len(laurent) > 1:
            raise UnsupportedError("several Laurent variables are outside the engine")
        self.laurent = laurent
        S = direct_sum([base.group] + [FgAbGroup.free(1) for _ in laurent])
        self.group = S.group
        gens = [self._lift_const(g) for g in base.generators]
        for i in laurent:
            gens.append(self._var(i))
        self.generators = gens
        self.semantics = list(base.semantics) + [f"variable {layers[i].var}" for i in laurent]
        poly = [L for L in layers if L.kind != "laurent"]
        euclid = len(layers) == 1
        self.certified = euclid or not poly

    def _lift_const(self, c):
        for L in self.layers:
            c = L.const(c)
        return c

    def _var(self, i: int):
        L = self.layers[i]
        x = L.gen(1)
        for M in self.layers[i + 1:]:
            x = M.const(x)
        return x

    def coords(self, u):
        exps = []
        x = u
        for L in reversed(self.layers):
            if len(x.terms) != 1:
                raise ValueError(f"{self.ring.format(u)} is not a unit")
            (e, c), = x.terms
            if L.kind != "laurent" and e != 0:
                raise ValueError(f"{self.ring.format(u)} is not a unit")
            if L.kind == "laurent":
                exps.append(e)
            x = c
        return tuple(self.base.coords(x)) + tuple(exps[::-1])


class WindowedUnitModel(UnitModel):
    """Units of ``Z/p^2[t]``, ``Z/p^2[t^-1]`` or ``Z/p^2[t, t^-1]``, truncated.

    Every unit factors uniquely as ``t^n * z * (1 + p h)`` with ``z`` a
    ``(p-1)``-th root of unity and ``h`` a polynomial over ``F_p``.  The model
    keeps the exponents of ``h`` within ``window`` of zero, so the group is
    ``Z^[laurent] + Z/(p-1) + (Z/p)^(#exponents)``.  Structural maps preserve
    exponents, so they respect the truncation.
    """

    def __init__(self, L: LaurentRing, window: int = DEFAULT_WINDOW):
        self.ring = L
        n = L.base.n  # type: ignore[attr-defined]
        p, k = prime_power(n)  # type: ignore[misc]
        if k != 2:
            raise UnsupportedError("windowed model needs Z/p^2 coefficients")
        self.p, self.n = p, n
        lo = 0 if L.kind == "poly" else -window
        hi = 0 if L.kind == "negpoly" else window
        self.exps = list(range(lo, hi + 1))
        g = primitive_root(n)
        self.omega = pow(g, p, n)  # order p - 1
        self._zlog = {pow(self.omega, i, n): i for i in range(p - 1)}
        gens, sem, orders = [], [], []
        if L.kind == "laurent":
            gens.append(L.gen(1))
            sem.append(f"variable {L.var}")
            orders.append(0)
        if p > 2:
            gens.append(L.const(self.omega))
            sem.append("root of unity")
            orders.append(p - 1)
        for e in self.exps:
            gens.append(L.make({0: 1, e: p} if e else {0: 1 + p}))
            sem.append(f"1 + {p}{L.var}^{e}")
            orders.append(p)
        self.generators = gens
        self.semantics = sem
        m = len(orders)
        self.group = FgAbGroup(m, tuple(
            tuple(o if j == i else 0 for j in range(m)) for i, o in enumerate(orders) if o
        ))
        self.certified = False
        self.window = window

    def coords(self, u):
        L, p, n = self.ring, self.p, self.n
        red = [(e, c) for e, c in u.terms if c % p]
        if len(red) != 1:
            raise ValueError(f"{L.format(u)} is not a unit")
        shift, _ = red[0]
        if L.kind != "laurent" and shift != 0:
            raise ValueError(f"{L.format(u)} is not a unit")
        y = {e - shift: c for e, c in u.terms}
        zeta = pow(y[0], p, n)
        zinv = pow(zeta, -1, n)
        z = {e: c * zinv % n for e, c in y.items()}
        h = {}
        for e, c in z.items():
            c = (c - (1 if e == 0 else 0)) % n
            if c % p:
                raise ValueError(f"{L.format(u)} is not a unit")
            if c:
                h[e] = c // p
        for e in h:
            if e not in self.exps:
                raise WindowError(f"exponent {e} outside the window of the unit model")
        out: list[int] = []
        if L.kind == "laurent":
            out.append(shift)
        if p > 2:
            out.append(self._zlog[zeta])
        out.extend(h.get(e, 0) for e in self.exps)
        return tuple(out)


def _factor_unit_model(R: Ring, window: int) -> UnitModel:
    core, layers = _chain(R)
    if any(L.twist is not None for L in layers):
        raise UnsupportedError("twisted rings are outside the engine")
    if isinstance(core, Integers):
        base: UnitModel = IntegerUnits()
    elif core.is_field:
        base = FieldUnits(core)
    elif isinstance(core, IntegersModN):
        if not layers:
            return ModPkUnits(core)
        p, k = prime_power(core.n)  # type: ignore[misc]
        if k == 2 and len(layers) == 1:
            return WindowedUnitModel(layers[0], window)
        raise UnsupportedError(f"K_1 of {R} is outside the engine")
    else:
        raise UnsupportedError(f"K_1 of {R} is outside the engine")
    if not layers:
        return base
    return ChainUnits(R, base, layers)


# ---------------------------------------------------------------------------
# K-values


@dataclass(frozen=True)
class KValue:
    """``K_degree(ring)`` with named generators.

    ``generators`` are ring elements: idempotents for K_0 (the class of the
    module they cut out) and units for K_1.  ``coords`` expresses an element of
    that kind in the generators.
    """

    ring: Ring
    degree: int
    group: FgAbGroup
    generator_semantics: tuple[str, ...]
    generators: tuple[Any, ...]
    coords: Callable[[Any], tuple[int, ...]] = field(compare=False, repr=False)
    provenance: str = "engine"
    certified: bool = True


@lru_cache(maxsize=None)
def k0(R: Ring, idempotent_complete: bool = True) -> KValue:
    """K_0 as Z^(number of connected factors).

    For every supported ring finitely generated projectives are stably free on
    each factor, so the free and idempotent-complete flavors agree; the
    ``idempotent_complete`` flag is recorded but does not change the answer.
    """
    cls = classify_ring(R)
    if cls.kind == "Unsupported":
        raise UnsupportedError(f"K_0 of {R}: {cls.detail}")
    factors = local_factors(R)
    m = len(factors)

    def coords(e):
        return tuple(1 if f.ring.eq(f.project(e), f.ring.one()) else 0 for f in factors)

    sem = ("class of the free rank-1 module",) if m == 1 else tuple(f"class of e_{j} R ({f.ring})" for j, f in enumerate(factors))
    flavor = "idempotent-complete" if idempotent_complete else "free"
    return KValue(R, 0, FgAbGroup.free(m), sem, tuple(f.idempotent for f in factors), coords,
                  f"engine:components ({flavor} flavor coincides)")


@lru_cache(maxsize=None)
def k1(R: Ring, window: int = DEFAULT_WINDOW) -> KValue:
    """K_1 as the unit group, assembled over the connected factors."""
    cls = classify_ring(R)
    if cls.kind == "Unsupported":
        raise UnsupportedError(f"K_1 of {R}: {cls.detail}")
    factors = local_factors(R)
    models = [_factor_unit_model(f.ring, window) for f in factors]
    S = direct_sum([m.group for m in models])
    gens, sem = [], []
    for f, m in zip(factors, models):
        one_minus = R.sub(R.one(), f.idempotent)
        for g, s in zip(m.generators, m.semantics):
            gens.append(R.add(f.lift(g), one_minus))
            sem.append(s if len(factors) == 1 else f"{s} on {f.ring}")

    def coords(u):
        out: list[int] = []
        for f, m in zip(factors, models):
            out.extend(m.coords(f.project(u)))
        return tuple(out)

    certified = all(m.certified for m in models)
    prov = "engine:units+elementary reduction" if certified else "engine:units (SK_1 vanishing not certified)"
    return KValue(R, 1, S.group, tuple(sem), tuple(gens), coords, prov, certified)


def k_value(R: Ring, degree: int, window: int = DEFAULT_WINDOW) -> KValue:
    if degree == 0:
        return k0(R)
    if degree == 1:
        return k1(R, window)
    raise UnsupportedError(f"the engine computes K_0 and K_1 only, not K_{degree}")


def induced_k_map(f: RingHom, degree: int, window: int = DEFAULT_WINDOW) -> GroupHom:
    """``K_degree(f)`` in the generators of :func:`k_value`."""
    src = k_value(f.source, degree, window)
    tgt = k_value(f.target, degree, window)
    cols = [tgt.coords(f(g)) for g in src.generators]
    m = tgt.group.num_generators
    M = tuple(tuple(c[a] for c in cols) for a in range(m))
    return GroupHom(src.group, tgt.group, M)


# ---------------------------------------------------------------------------
# elementary reduction


@dataclass(frozen=True)
class ReductionResult:
    unit: Any
    log: tuple[tuple[str, int, int, Any], ...]


def replay(M: Mat, R: Ring, log: Sequence[tuple[str, int, int, Any]]) -> Mat:
    """Apply logged operations: ``("row", i, j, x)`` is ``row_i += x row_j``
    and ``("col", i, j, x)`` is ``col_i += col_j x``."""
    A = [list(r) for r in M.entries]
    for kind, i, j, x in log:
        if kind == "row":
            A[i] = [R.add(a, R.mul(x, b)) for a, b in zip(A[i], A[j])]
        else:
            for r in A:
                r[i] = R.add(r[i], R.mul(r[j], x))
    return Mat(M.rows, M.cols, tuple(map(tuple, A)))


def matrix_k1_reduce(M: Mat, R: Ring, max_steps: int = 20000) -> ReductionResult:
    """Reduce an invertible ``M`` to ``diag(u, 1, ..., 1)`` by transvections.

    Column by column from the right, a unit is produced in the pivot column
    (directly, or by Euclidean steps with the ring's witness), moved to the
    diagonal and normalized to 1, and its row and column are cleared.  The
    operation log replays exactly; ``u`` equals ``det(M)``.
    """
    if M.rows != M.cols:
        raise SingularMatrixError("matrix is not square")
    n = M.rows
    if n == 0:
        return ReductionResult(R.one(), ())
    A = [list(r) for r in M.entries]
    log: list[tuple[str, int, int, Any]] = []
    w = euclidean_witness(R)
    steps = 0

    def row_op(i, j, x):
        if R.is_zero(x):
            return
        A[i] = [R.add(a, R.mul(x, b)) for a, b in zip(A[i], A[j])]
        log.append(("row", i, j, x))

    def col_op(i, j, x):
        if R.is_zero(x):
            return
        for r in A:
            r[i] = R.add(r[i], R.mul(r[j], x))
        log.append(("col", i, j, x))

    one = R.one()

    def block_norms(k):
        return [w.norm(A[i][j]) for i in range(k + 1) for j in range(k + 1) if not R.is_zero(A[i][j])]

    def potential(norms):
        return (min(norms), sorted(norms)) if norms else ((-1,), [])

    def best_move(k):
        # greedy search over row and column transvections inside the block
        base = block_norms(k)
        cur = potential(base)
        best = None
        for c in range(k + 1):
            for i in range(k + 1):
                for r in range(k + 1):
                    if i == r or R.is_zero(A[r][c]) or R.is_zero(A[i][c]):
                        continue
                    q = w.quotient(A[i][c], A[r][c])
                    if q is None:
                        continue
                    new_row = [R.sub(a, R.mul(q, b)) for a, b in zip(A[i][: k + 1], A[r][: k + 1])]
                    norms = [w.norm(A[x][y]) for x in range(k + 1) if x != i for y in range(k + 1) if not R.is_zero(A[x][y])]
                    norms += [w.norm(a) for a in new_row if not R.is_zero(a)]
                    pot = potential(norms)
                    if pot < cur and (best is None or pot < best[0]):
                        best = (pot, "row", i, r, R.neg(q))
        for i in range(k + 1):
            for j in range(k + 1):
                for l in range(k + 1):
                    if j == l or R.is_zero(A[i][l]) or R.is_zero(A[i][j]):
                        continue
                    q = w.quotient(A[i][j], A[i][l])
                    if q is None:
                        continue
                    new_col = [R.sub(A[x][j], R.mul(A[x][l], q)) for x in range(k + 1)]
                    norms = [w.norm(A[x][y]) for x in range(k + 1) for y in range(k + 1) if y != j and not R.is_zero(A[x][y])]
                    norms += [w.norm(a) for a in new_col if not R.is_zero(a)]
                    pot = potential(norms)
                    if pot < cur and (best is None or pot < best[0]):
                        best = (pot, "col", j, l, R.neg(q))
        return best

    for k in range(n - 1, 0, -1):
        while True:
            steps += 1
            if steps > max_steps:
                raise ReductionStalled("step budget exhausted")
            if all(R.is_zero(A[i][k]) for i in range(k + 1)):
                raise SingularMatrixError("zero pivot column")
            unit = next(((i, j) for j in [k] + list(range(k)) for i in range(k + 1) if R.is_unit(A[i][j])), None)
            if unit is not None:
                break
            if w is None:
                raise ReductionStalled(f"no unit in the active block and no Euclidean witness for {R}")
            mv = best_move(k)
            if mv is None:
                raise ReductionStalled("no norm-decreasing move")
            _, kind, a, b, x = mv
            if kind == "row":
                row_op(a, b, x)
            else:
                col_op(a, b, x)
        i, j = unit
        if j != k:
            # bring the unit into the pivot column: A[i][k] becomes 1
            col_op(k, j, R.mul(R.sub(one, A[i][k]), R.inverse(A[i][j])))
        u_row = k if R.is_unit(A[k][k]) else i
        if u_row != k:
            row_op(k, u_row, R.mul(R.sub(one, A[k][k]), R.inverse(A[u_row][k])))
        elif not R.eq(A[k][k], one):
            u = A[k][k]
            row_op(0, k, R.mul(R.sub(one, A[0][k]), R.inverse(u)))
            row_op(k, 0, R.sub(one, u))
        for i in range(k):
            row_op(i, k, R.neg(A[i][k]))
        for j in range(k):
            col_op(j, k, R.neg(A[k][j]))
    u = A[0][0]
    if not R.is_unit(u):
        raise SingularMatrixError("remaining entry is not a unit")
    return ReductionResult(u, tuple(log))


def random_elementary_matrix(R: Ring, n: int, rng: random.Random, length: int = 6, **kw) -> Mat:
    """A product of ``length`` random transvections, optionally with a
    Whitehead factor ``diag(u, u^-1)``."""
    A = [list(r) for r in mat_identity(R, n).entries]
    for _ in range(length):
        i, j = rng.sample(range(n), 2)
        x = R.random_element(rng, **kw)
        A[i] = [R.add(a, R.mul(x, b)) for a, b in zip(A[i], A[j])]
    M = Mat(n, n, tuple(map(tuple, A)))
    if hasattr(R, "random_unit") and rng.random() < 0.5:
        u = R.random_unit(rng)  # type: ignore[attr-defined]
        D = [[R.zero()] * n for _ in range(n)]
        for i in range(n):
            D[i][i] = R.one()
        D[0][0], D[1][1] = u, R.inverse(u)
        M = mat_mul(R, Mat(n, n, tuple(map(tuple, D))), M)
    return M


@dataclass(frozen=True)
class SK1Report:
    ring: str
    samples: int
    reduced: int
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return self.reduced == self.samples


def certify_sk1(R: Ring, samples: int = 100, sizes: Sequence[int] = (2, 3), seed: int = 0, **kw) -> SK1Report:
    """Reduce random elementary-generated ``SL_n`` samples to the identity."""
    rng = random.Random(seed)
    ok = 0
    fails: list[str] = []
    for s in range(samples):
        n = sizes[s % len(sizes)]
        M = random_elementary_matrix(R, n, rng, **kw)
        try:
            res = matrix_k1_reduce(M, R)
        except (ReductionStalled, SingularMatrixError) as e:
            fails.append(f"sample {s}: {e}")
            continue
        D = replay(M, R, res.log)
        target = mat_identity(R, n)
        if R.eq(res.unit, R.one()) and D == target and R.eq(mat_det(R, M), R.one()):
            ok += 1
        else:
            fails.append(f"sample {s}: did not reduce to the identity")
    return SK1Report(str(R), samples, ok, tuple(fails[:10]))
