"""Exact computable rings: Z, Z/n, finite fields and Laurent-type extensions.

Elements are plain Python values.  Integers and residues are ``int``; a finite
field element is an ``int`` whose base-``p`` digits are its coordinates in the
power basis of a fixed primitive modulus; Laurent-type elements are
:class:`LaurentElem`.  Rings do the arithmetic, elements carry no back pointer.

Twisted Laurent rings use the rule ``t * a = phi(a) * t``, hence

    (a t^j)(b t^i) = a phi^j(b) t^(i+j).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterator, Sequence


class UnsupportedError(NotImplementedError):
    """The requested computation is outside what this package can certify."""


class RingMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# number theory helpers


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    f = factorize(n)
    if len(f) != 1:
        return None
    ((p, k),) = f.items()
    return p, k


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise ValueError("not a unit")
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def primitive_root(n: int) -> int:
    """Smallest generator of ``(Z/n)^x``; ``n`` is ``p^k`` with ``p`` odd, or 2 or 4."""
    phi = sum(1 for a in range(1, n) if math.gcd(a, n) == 1) if n > 1 else 1
    for g in range(1, max(n, 2)):
        if math.gcd(g, n) == 1 and multiplicative_order(g, n) == phi:
            return g
    raise ValueError(f"(Z/{n})^x is not cyclic")


# ---------------------------------------------------------------------------
# base class


class Ring:
    """Interface shared by all rings.  Subclasses are frozen dataclasses."""

    is_commutative: bool = True
    is_domain: bool = False
    is_field: bool = False
    is_finite: bool = False

    # arithmetic
    def zero(self) -> Any: ...
    def one(self) -> Any: ...
    def add(self, x, y): ...
    def neg(self, x): ...
    def mul(self, x, y): ...

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def eq(self, x, y) -> bool:
        return self.normalize(x) == self.normalize(y)

    def is_zero(self, x) -> bool:
        return self.eq(x, self.zero())

    def normalize(self, x):
        return x

    def from_int(self, n: int):
        n = int(n)
        out = self.zero()
        base = self.one() if n >= 0 else self.neg(self.one())
        # double and add
        acc, k = base, abs(n)
        while k:
            if k & 1:
                out = self.add(out, acc)
            acc = self.add(acc, acc)
            k >>= 1
        return out

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inverse(x), -n)
        out, acc = self.one(), x
        while n:
            if n & 1:
                out = self.mul(out, acc)
            acc = self.mul(acc, acc)
            n >>= 1
        return out

    def sum(self, xs):
        out = self.zero()
        for x in xs:
            out = self.add(out, x)
        return out

    def is_unit(self, x) -> bool: ...

    def inverse(self, x):
        """Two-sided inverse of a unit; raises ``ZeroDivisionError`` otherwise."""
        ...

    def random_element(self, rng: random.Random, **kw) -> Any: ...

    def elements(self) -> Iterator[Any]:
        raise UnsupportedError(f"{self} is infinite")

    def units(self) -> Iterator[Any]:
        return (x for x in self.elements() if self.is_unit(x))

    def format(self, x) -> str:
        return str(x)

    @property
    def name(self) -> str:
        return str(self)


# ---------------------------------------------------------------------------
# Z and Z/n


@dataclass(frozen=True)
class Integers(Ring):
    is_domain = True

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def from_int(self, n):
        return int(n)

    def is_unit(self, x):
        return x in (1, -1)

    def inverse(self, x):
        if x not in (1, -1):
            raise ZeroDivisionError(f"{x} is not a unit of Z")
        return x

    def random_element(self, rng, bound: int = 9, **kw):
        return rng.randint(-bound, bound)

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class IntegersModN(Ring):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus must be positive")

    @property
    def is_domain(self):  # type: ignore[override]
        return prime_power(self.n) is not None and prime_power(self.n)[1] == 1

    is_field = is_domain  # type: ignore[assignment]
    is_finite = True

    def zero(self):
        return 0

    def one(self):
        return 1 % self.n

    def normalize(self, x):
        return x % self.n

    def add(self, x, y):
        return (x + y) % self.n

    def neg(self, x):
        return -x % self.n

    def mul(self, x, y):
        return x * y % self.n

    def from_int(self, n):
        return int(n) % self.n

    def is_unit(self, x):
        return math.gcd(x, self.n) == 1

    def inverse(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit mod {self.n}")
        return pow(x, -1, self.n) if self.n > 1 else 0

    def random_element(self, rng, **kw):
        return rng.randrange(self.n)

    def elements(self):
        return iter(range(self.n))

    def __str__(self):
        return f"Z/{self.n}"


def PrimeField(p: int) -> FiniteField:
    return FiniteField(p, 1)


# ---------------------------------------------------------------------------
# finite fields


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return (prod + [0] * k)[:k]


@dataclass(frozen=True)
class FiniteField(Ring):
    """``F_q`` with ``q = p^k``.

    The modulus is the first monic degree-``k`` polynomial (in lexicographic
    order of its coefficients) whose root ``x`` generates the unit group, so
    ``x`` is a primitive element and the log/exp tables use it.
    """

    p: int
    k: int = 1

    is_domain = True
    is_field = True
    is_finite = True

    def __post_init__(self):
        if prime_power(self.p) != (self.p, 1) or self.k < 1:
            raise ValueError(f"F_{self.p}^{self.k} is not a field")

    @property
    def q(self) -> int:
        return self.p**self.k

    def _digits(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.k)]

    def _undigits(self, ds: Sequence[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(ds))

    @cached_property
    def _tables(self) -> tuple[list[int], tuple[int, ...], dict[int, int]]:
        p, k, q = self.p, self.k, self.q
        for tail in range(p**k):
            mod = [(tail // p**i) % p for i in range(k)] + [1]
            if mod[0] == 0:
                continue
            xs = [1] + [0] * (k - 1)
            gen = [0] * k
            if k == 1:
                gen = [(-mod[0]) % p]
            else:
                gen[1] = 1
            exp: list[int] = []
            seen = set()
            cur = xs
            ok = True
            for _ in range(q - 1):
                v = self._undigits(cur)
                if v in seen or v == 0:
                    ok = False
                    break
                seen.add(v)
                exp.append(v)
                cur = _poly_mulmod(cur, gen, mod, p) if k > 1 else [cur[0] * gen[0] % p]
            if ok and self._undigits(cur) == 1:
                log = {v: i for i, v in enumerate(exp)}
                return mod, tuple(exp), log
        raise AssertionError("no primitive modulus found")

    @property
    def modulus(self) -> list[int]:
        """Coefficients of the modulus, constant term first."""
        return list(self._tables[0])

    @property
    def generator(self) -> int:
        """The primitive element used for logarithms."""
        return self._tables[1][1] if self.q > 2 else 1

    def log(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("log of zero")
        return self._tables[2][x]

    def exp(self, n: int) -> int:
        return self._tables[1][n % (self.q - 1)]

    def zero(self):
        return 0

    def one(self):
        return 1

    def normalize(self, x):
        return x

    def add(self, x, y):
        if self.k == 1:
            return (x + y) % self.p
        return self._undigits([(a + b) % self.p for a, b in zip(self._digits(x), self._digits(y))])

    def neg(self, x):
        if self.k == 1:
            return -x % self.p
        return self._undigits([-a % self.p for a in self._digits(x)])

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        return self.exp(self.log(x) + self.log(y))

    def from_int(self, n):
        return int(n) % self.p

    def is_unit(self, x):
        return x != 0

    def inverse(self, x):
        if x == 0:
            raise ZeroDivisionError("zero is not invertible")
        return self.exp(-self.log(x))

    def random_element(self, rng, **kw):
        return rng.randrange(self.q)

    def elements(self):
        return iter(range(self.q))

    def format(self, x):
        if self.k == 1:
            return str(x)
        terms = []
        for i, d in enumerate(self._digits(x)):
            if d:
                mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
                terms.append(f"{d}{mono}" if d != 1 or not mono else mono)
        return "+".join(terms) or "0"

    def __str__(self):
        return f"F{self.q}"


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class RingAutomorphism:
    """An automorphism of ``ring`` given by mutually inverse element maps.

    ``name`` identifies the automorphism for equality and printing; the
    callables are not compared.
    """

    name: str
    ring: Ring
    forward: Callable[[Any], Any] = field(compare=False, repr=False)
    inverse: Callable[[Any], Any] = field(compare=False, repr=False)

    def __call__(self, x):
        return self.forward(x)

    def power(self, n: int) -> Callable[[Any], Any]:
        f = self.forward if n >= 0 else self.inverse

        def go(x):
            for _ in range(abs(n)):
                x = f(x)
            return x

        return go

    def inverted(self) -> RingAutomorphism:
        return RingAutomorphism(f"{self.name}^-1", self.ring, self.inverse, self.forward)

    @property
    def is_identity_name(self) -> bool:
        return self.name == "id"

    def check(self, samples: Sequence[Any]) -> bool:
        R = self.ring
        gens = [R.one()] + list(samples)
        for x in gens:
            if not (R.eq(self.forward(self.inverse(x)), x) and R.eq(self.inverse(self.forward(x)), x)):
                return False
        for x in samples:
            for y in samples:
                if not R.eq(self.forward(R.mul(x, y)), R.mul(self.forward(x), self.forward(y))):
                    return False
                if not R.eq(self.forward(R.add(x, y)), R.add(self.forward(x), self.forward(y))):
                    return False
        return True

    @classmethod
    def identity(cls, ring: Ring) -> RingAutomorphism:
        return cls("id", ring, lambda x: x, lambda x: x)

    @classmethod
    def frobenius(cls, F: FiniteField, power: int = 1) -> RingAutomorphism:
        """``x -> x^(p^power)``."""
        e = F.p ** (power % F.k)
        e_inv = F.p ** ((-power) % F.k)
        name = "id" if power % F.k == 0 else f"frob^{power % F.k}"
        return cls(name, F, lambda x: F.pow(x, e), lambda x: F.pow(x, e_inv))

    @classmethod
    def negate_variable(cls, L: LaurentRing) -> RingAutomorphism:
        """``t -> -t`` on a commutative Laurent-type ring."""
        B = L.base

        def f(x: LaurentElem) -> LaurentElem:
            return L.make({e: (B.neg(c) if e % 2 else c) for e, c in x.terms})

        return cls(f"{L.var}->-{L.var}", L, f, f)


# ---------------------------------------------------------------------------
# Laurent-type rings


@dataclass(frozen=True)
class LaurentElem:
    """Finitely supported ``{exponent: coefficient}``, sorted, no zero terms."""

    terms: tuple[tuple[int, Any], ...] = ()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.terms)

    def coeff(self, e: int, zero: Any = 0):
        for k, c in self.terms:
            if k == e:
                return c
        return zero

    def as_dict(self) -> dict[int, Any]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_exp(self) -> int | None:
        return self.terms[0][0] if self.terms else None

    @property
    def max_exp(self) -> int | None:
        return self.terms[-1][0] if self.terms else None


def laurent_mul(x: LaurentElem, y: LaurentElem, base: Ring, twist: RingAutomorphism | None = None) -> LaurentElem:
    """Convolution product; with a twist, ``(a t^j)(b t^i) = a phi^j(b) t^(i+j)``."""
    acc: dict[int, Any] = {}
    for j, a in x.terms:
        phij = twist.power(j) if twist is not None else None
        for i, b in y.terms:
            bb = phij(b) if phij is not None else b
            k = i + j
            acc[k] = base.add(acc[k], base.mul(a, bb)) if k in acc else base.mul(a, bb)
    return LaurentElem(tuple((k, c) for k, c in sorted(acc.items()) if not base.is_zero(c)))


KINDS = ("poly", "negpoly", "laurent")


@dataclass(frozen=True)
class LaurentRing(Ring):
    """``base[t]``, ``base[t^-1]`` or ``base[t, t^-1]``, optionally twisted.

    ``kind`` is ``"poly"``, ``"negpoly"`` or ``"laurent"``.  A ``twist`` is only
    allowed with ``kind="laurent"``.
    """

    base: Ring
    var: str = "t"
    kind: str = "laurent"
    twist: RingAutomorphism | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.twist is not None:
            if self.kind != "laurent":
                raise ValueError("twists only apply to Laurent rings")
            if self.twist.ring != self.base:
                raise RingMismatchError("twist must be an automorphism of the base ring")

    @property
    def is_commutative(self):  # type: ignore[override]
        return self.base.is_commutative and (self.twist is None or self.twist.name == "id")

    @property
    def is_domain(self):  # type: ignore[override]
        return self.base.is_domain

    is_field = False
    is_finite = False

    # construction
    def make(self, coeffs: dict[int, Any] | Sequence[tuple[int, Any]]) -> LaurentElem:
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        acc: dict[int, Any] = {}
        B = self.base
        for e, c in items:
            e = int(e)
            c = B.normalize(c)
            acc[e] = B.add(acc[e], c) if e in acc else c
        terms = tuple((e, c) for e, c in sorted(acc.items()) if not B.is_zero(c))
        x = LaurentElem(terms)
        self._check_support(x)
        return x

    def _check_support(self, x: LaurentElem) -> None:
        if self.kind == "poly" and x.terms and x.terms[0][0] < 0:
            raise ValueError(f"negative exponent in {self}")
        if self.kind == "negpoly" and x.terms and x.terms[-1][0] > 0:
            raise ValueError(f"positive exponent in {self}")

    def contains(self, x: LaurentElem) -> bool:
        try:
            self._check_support(x)
        except ValueError:
            return False
        return True

    def const(self, c) -> LaurentElem:
        return self.make({0: c})

    def gen(self, power: int = 1) -> LaurentElem:
        return self.make({power: self.base.one()})

    def monomial(self, c, e: int) -> LaurentElem:
        return self.make({e: c})

    # ring interface
    def zero(self):
        return LaurentElem()

    def one(self):
        return self.const(self.base.one())

    def normalize(self, x):
        return x

    def eq(self, x, y):
        return x == y

    def is_zero(self, x):
        return not x.terms

    def add(self, x, y):
        return self.make(list(x.terms) + list(y.terms))

    def neg(self, x):
        B = self.base
        return LaurentElem(tuple((e, B.neg(c)) for e, c in x.terms))

    def mul(self, x, y):
        return laurent_mul(x, y, self.base, self.twist)

    def from_int(self, n):
        return self.const(self.base.from_int(n))

    def scale(self, c, x):
        """Left multiplication by a base element."""
        B = self.base
        return self.make([(e, B.mul(c, a)) for e, a in x.terms])

    # units
    def _monomial_unit(self, x: LaurentElem):
        if len(x.terms) != 1:
            return None
        (e, c), = x.terms
        if not self.base.is_unit(c):
            return None
        if (self.kind == "poly" and e != 0) or (self.kind == "negpoly" and e != 0):
            return None
        return c, e

    def is_unit(self, x):
        if self.base.is_domain:
            return self._monomial_unit(x) is not None
        try:
            self.inverse(x)
        except ZeroDivisionError:
            return False
        return True

    def inverse(self, x):
        B = self.base
        mono = self._monomial_unit(x)
        if mono is not None:
            c, e = mono
            if self.twist is None:
                return self.monomial(B.inverse(c), -e)
            # (c s^e)(b s^-e) = c phi^e(b) = 1
            return self.monomial(self.twist.power(-e)(B.inverse(c)), -e)
        if B.is_domain:
            raise ZeroDivisionError("not a unit: units over a domain are unit monomials")
        if isinstance(B, IntegersModN) and self.twist is None:
            return _inverse_mod_n(self, x)
        raise UnsupportedError(f"unit test over {B} is not implemented")

    def random_element(self, rng, span: int = 2, **kw):
        lo = 0 if self.kind == "poly" else -span
        hi = 0 if self.kind == "negpoly" else span
        return self.make({e: self.base.random_element(rng, **kw) for e in range(lo, hi + 1)})

    def random_unit(self, rng, span: int = 3):
        """A random unit of the form ``c t^n`` (or a constant for polynomial kinds)."""
        B = self.base
        while True:
            c = B.random_element(rng)
            if B.is_unit(c):
                break
        e = 0 if self.kind != "laurent" else rng.randint(-span, span)
        return self.monomial(c, e)

    def format(self, x):
        if not x.terms:
            return "0"
        parts = []
        for e, c in x.terms:
            cs = self.base.format(c)
            if e == 0:
                parts.append(cs)
                continue
            mono = self.var if e == 1 else f"{self.var}^{e}"
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs}){mono}" if any(ch in cs[1:] for ch in "+-") else f"{cs}{mono}")
        return " + ".join(parts)

    def __str__(self):
        v = self.var
        if self.kind == "poly":
            s = f"{v}"
        elif self.kind == "negpoly":
            s = f"{v}^-1"
        else:
            s = f"{v},{v}^-1"
        tw = "" if self.twist is None or self.twist.name == "id" else f"_{self.twist.name}"
        return f"{self.base}{tw}[{s}]"

    # tower helpers
    def variable_chain(self) -> list[LaurentRing]:
        """Laurent layers from the innermost outwards."""
        chain = []
        R: Ring = self
        while isinstance(R, LaurentRing):
            chain.append(R)
            R = R.base
        return chain[::-1]

    @property
    def core(self) -> Ring:
        R: Ring = self
        while isinstance(R, LaurentRing):
            R = R.base
        return R


def Polynomial(base: Ring, var: str = "t") -> LaurentRing:
    return LaurentRing(base, var, "poly")


def NegPolynomial(base: Ring, var: str = "t") -> LaurentRing:
    return LaurentRing(base, var, "negpoly")


def Laurent(base: Ring, var: str = "t") -> LaurentRing:
    return LaurentRing(base, var, "laurent")


def TwistedLaurent(base: Ring, automorphism: RingAutomorphism, var: str = "s") -> LaurentRing:
    return LaurentRing(base, var, "laurent", automorphism)


def core_ring(R: Ring) -> Ring:
    return R.core if isinstance(R, LaurentRing) else R


def _inverse_mod_n(L: LaurentRing, x: LaurentElem) -> LaurentElem:
    """Inverse over ``Z/n``, prime power by prime power and glued by CRT."""
    n = L.base.n  # type: ignore[attr-defined]
    parts = []
    for p, k in factorize(n).items():
        q = p**k
        Lq = LaurentRing(IntegersModN(q), L.var, L.kind)
        xq = Lq.make([(e, c % q) for e, c in x.terms])
        parts.append((q, _inverse_prime_power(Lq, xq, p, k)))
    if not parts:
        return L.zero()
    acc: dict[int, int] = {}
    for q, y in parts:
        m = n // q
        e_q = m * pow(m, -1, q)  # idempotent for the q-part
        for e, c in y.terms:
            acc[e] = (acc.get(e, 0) + c * e_q) % n
    return L.make(acc)


def _inverse_prime_power(L: LaurentRing, x: LaurentElem, p: int, k: int) -> LaurentElem:
    B = L.base
    red = [(e, c) for e, c in x.terms if c % p]
    if len(red) != 1:
        raise ZeroDivisionError("not a unit: reduction mod p is not a unit monomial")
    e, c = red[0]
    if L.kind != "laurent" and e != 0:
        raise ZeroDivisionError("not a unit in a polynomial ring")
    y0 = L.monomial(B.inverse(c), -e)
    N = L.sub(L.mul(x, y0), L.one())  # coefficients divisible by p, so N^k = 0
    acc, term = L.one(), L.one()
    negN = L.neg(N)
    for _ in range(1, k):
        term = L.mul(term, negN)
        acc = L.add(acc, term)
    return L.mul(y0, acc)


# ---------------------------------------------------------------------------
# unit classification


def classify_unit(x: LaurentElem, ring: LaurentRing) -> tuple[Any, int] | None:
    """``(c, n)`` when ``x = c t^n`` with ``c`` a base unit, else ``None``.

    Over a field or Z this decides unit-ness: those are all the units.  Over
    ``Z/p^k`` with ``k >= 2`` there are further units such as ``1 + 2t`` over
    Z/4; for such an ``x`` an :class:`UnsupportedError` is raised instead of a
    misleading ``None``.
    """
    if not isinstance(ring, LaurentRing):
        raise RingMismatchError("classify_unit expects a Laurent-type ring")
    B = ring.base
    mono = ring._monomial_unit(x)
    if isinstance(B, (Integers, FiniteField)) or (isinstance(B, IntegersModN) and B.is_field):
        return mono
    if isinstance(B, IntegersModN) and prime_power(B.n) is not None:
        if mono is not None:
            return mono
        if ring.is_unit(x):
            raise UnsupportedError(f"{ring.format(x)} is a non-monomial unit over {B}")
        return None
    raise UnsupportedError(f"unit classification over {B} is not supported")


# ---------------------------------------------------------------------------
# ring homomorphisms


@dataclass(frozen=True)
class RingHom:
    name: str
    source: Ring
    target: Ring
    fn: Callable[[Any], Any] = field(compare=False, repr=False)

    def __call__(self, x):
        return self.fn(x)

    def __matmul__(self, other: RingHom) -> RingHom:
        if other.target != self.source:
            raise RingMismatchError("homomorphisms are not composable")
        return RingHom(f"{self.name}.{other.name}", other.source, self.target, lambda x: self.fn(other.fn(x)))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise RingMismatchError(msg)


def ring_hom(source: Ring, target: Ring, kind: str, value: Any = None) -> RingHom:
    """The structural homomorphism ``kind`` between related rings.

    Kinds: ``i0``, ``i_plus``, ``i_minus`` (base into an extension),
    ``j_plus``, ``j_minus`` (polynomial kinds into the Laurent ring),
    ``ev0_plus``, ``ev0_minus`` (set the variable to zero) and ``var_eval``
    (substitute ``value``, a base element, for the variable).
    """
    kinds = {
        "i0": ("laurent",),
        "i_plus": ("poly",),
        "i_minus": ("negpoly",),
    }
    if kind in kinds:
        _need(isinstance(target, LaurentRing) and target.kind in kinds[kind] and target.base == source,
              f"{kind} needs {source} and an extension of it, got {target}")
        T: LaurentRing = target  # type: ignore[assignment]
        return RingHom(kind, source, target, lambda x: T.const(x))
    if kind in ("j_plus", "j_minus"):
        want = "poly" if kind == "j_plus" else "negpoly"
        _need(isinstance(source, LaurentRing) and isinstance(target, LaurentRing)
              and source.kind == want and target.kind == "laurent" and source.base == target.base
              and source.var == target.var and target.twist is None,
              f"{kind} does not apply to {source} -> {target}")
        return RingHom(kind, source, target, lambda x: x)
    if kind in ("ev0_plus", "ev0_minus"):
        want = "poly" if kind == "ev0_plus" else "negpoly"
        _need(isinstance(source, LaurentRing) and source.kind == want and source.base == target,
              f"{kind} does not apply to {source} -> {target}")
        B = target
        return RingHom(kind, source, target, lambda x: x.coeff(0, B.zero()))
    if kind == "var_eval":
        _need(isinstance(source, LaurentRing) and source.base == target and source.twist is None,
              f"var_eval does not apply to {source} -> {target}")
        B = target
        S: LaurentRing = source  # type: ignore[assignment]
        _need(value is not None, "var_eval needs a value")
        if S.kind != "poly" and not B.is_unit(value):
            raise RingMismatchError("evaluation of negative powers needs a unit value")

        def ev(x: LaurentElem):
            return B.sum(B.mul(c, B.pow(value, e)) for e, c in x.terms)

        return RingHom(f"var_eval({value})", source, target, ev)
    raise RingMismatchError(f"unknown homomorphism kind {kind!r}")


def reduction_hom(source: Ring, target: IntegersModN | FiniteField) -> RingHom:
    """``Z -> Z/n``, ``Z/n -> Z/m`` (``m | n``) or ``Z/p -> F_p``."""
    if isinstance(target, IntegersModN):
        m = target.n
        if isinstance(source, Integers) or (isinstance(source, IntegersModN) and source.n % m == 0):
            return RingHom("reduce", source, target, lambda x: x % m)
    if isinstance(target, FiniteField) and target.k == 1:
        if isinstance(source, Integers) or (isinstance(source, IntegersModN) and source.n % target.p == 0):
            return RingHom("reduce", source, target, lambda x: x % target.p)
    raise RingMismatchError(f"no reduction {source} -> {target}")


def field_embedding(source: FiniteField, target: FiniteField) -> RingHom:
    """An embedding ``F_{p^a} -> F_{p^b}`` for ``a | b``.

    The primitive element of the source goes to the first root (in element
    order) of the source modulus inside the target.
    """
    if source.p != target.p or target.k % source.k:
        raise RingMismatchError(f"{source} does not embed in {target}")
    if source.k == 1:
        return RingHom("embed", source, target, lambda x: target.from_int(x))
    mod = source.modulus
    root = None
    for r in target.elements():
        acc = 0
        for c in reversed(mod):
            acc = target.add(target.mul(acc, r), target.from_int(c))
        if acc == 0:
            root = r
            break
    assert root is not None

    def emb(x: int) -> int:
        out = 0
        for i, d in enumerate(source._digits(x)):
            if d:
                out = target.add(out, target.mul(target.from_int(d), target.pow(root, i)))
        return out

    return RingHom("embed", source, target, emb)


def extend_coefficients(h: RingHom, source: LaurentRing, target: LaurentRing) -> RingHom:
    """Apply ``h`` coefficientwise between Laurent-type rings of the same kind."""
    _need(source.kind == target.kind and source.base == h.source and target.base == h.target,
          "coefficient extension needs matching Laurent layers")
    return RingHom(f"{h.name}[{source.var}]", source, target,
                   lambda x: target.make([(e, h(c)) for e, c in x.terms]))


# ---------------------------------------------------------------------------
# unit groups of finite base rings


def unit_group_generators_mod(n: int) -> list[tuple[int, int]]:
    """Generators of ``(Z/n)^x`` as ``(generator, order)``, one per cyclic factor.

    The factors come prime by prime in increasing order; for ``2^k`` with
    ``k >= 3`` the factors are ``<-1>`` and ``<5>``.
    """
    out: list[tuple[int, int]] = []
    fac = factorize(n)
    for p, k in sorted(fac.items()):
        q = p**k
        m = n // q

        def lift(g: int, q: int = q, m: int = m) -> int:
            # g mod q and 1 mod the other prime powers
            if m == 1:
                return g % n
            return (g * m * pow(m, -1, q) + q * pow(q, -1, m)) % n

        if p == 2:
            if k == 1:
                continue
            if k == 2:
                out.append((lift(3), 2))
                continue
            out.append((lift(q - 1), 2))
            out.append((lift(5), 2 ** (k - 2)))
            continue
        g = primitive_root(q)
        out.append((lift(g), (p - 1) * p ** (k - 1)))
    return out


def discrete_log_mod(x: int, gens: list[tuple[int, int]], n: int) -> tuple[int, ...]:
    """Exponents of ``x`` in terms of ``unit_group_generators_mod(n)``.

    Brute force over the group; only used for small moduli.
    """
    orders = [o for _, o in gens]
    total = 1
    for o in orders:
        total *= o
    if total > 200000:
        raise UnsupportedError("unit group too large for discrete logarithms")
    from itertools import product as _product

    for exps in _product(*(range(o) for o in orders)):
        acc = 1 % n
        for (g, _), e in zip(gens, exps):
            acc = acc * pow(g, e, n) % n
        if acc == x % n:
            return tuple(exps)
    raise ValueError(f"{x} is not a unit mod {n}")


def parse_ring(text: str) -> Ring:
    """Parse ``Z``, ``Fq``, ``Zmod<n>`` or ``Z/n``, optionally followed by
    ``[t]``, ``[t^-1]`` or ``[t,t^-1]`` (repeatable, new variable each time)."""
    s = text.replace(" ", "")
    i = s.find("[")
    head, tail = (s, "") if i < 0 else (s[:i], s[i:])
    R: Ring
    if head == "Z":
        R = Integers()
    elif head.startswith("Zmod"):
        R = IntegersModN(int(head[4:]))
    elif head.startswith("Z/"):
        R = IntegersModN(int(head[2:]))
    elif head.startswith("F") and head[1:].isdigit():
        q = int(head[1:])
        pk = prime_power(q)
        if pk is None:
            raise ValueError(f"F{q}: {q} is not a prime power")
        R = FiniteField(*pk)
    else:
        raise ValueError(f"cannot parse ring {text!r}")
    used: list[str] = []
    while tail:
        j = tail.find("]")
        if not tail.startswith("[") or j < 0:
            raise ValueError(f"cannot parse ring suffix {tail!r}")
        inner, tail = tail[1:j], tail[j + 1:]
        parts = inner.split(",")
        var = parts[0].split("^")[0]
        if not var.isidentifier() or var in used:
            raise ValueError(f"bad or repeated variable in {text!r}")
        if len(parts) == 1 and parts[0] == var:
            kind = "poly"
        elif len(parts) == 1 and parts[0] == f"{var}^-1":
            kind = "negpoly"
        elif len(parts) == 2 and parts[0] == var and parts[1] == f"{var}^-1":
            kind = "laurent"
        else:
            raise ValueError(f"cannot parse ring suffix [{inner}]")
        used.append(var)
        R = LaurentRing(R, var, kind)
    return R
