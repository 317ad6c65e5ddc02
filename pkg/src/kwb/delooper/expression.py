"""Expressions: a base object with an ordered list of adjoined variables.

Position 0 is the innermost variable.  Variables are anonymous; an
expression only records the kind of each one (``poly`` for ``[t]``,
``negpoly`` for ``[t^-1]``, ``laurent`` for ``[t, t^-1]``) and an optional
twist label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

KINDS = ("poly", "negpoly", "laurent")


@dataclass(frozen=True)
class Adjunction:
    kind: str
    twist: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown adjunction kind {self.kind!r}")

    def __str__(self):
        return self.kind if self.twist is None else f"{self.kind}@{self.twist}"


@dataclass(frozen=True)
class Expression:
    base: Any
    chain: tuple[Adjunction, ...] = ()

    @classmethod
    def of(cls, base: Any, chain: str | tuple = "") -> Expression:
        return cls(base, parse_chain(chain) if isinstance(chain, str) else tuple(chain))

    def __len__(self) -> int:
        return len(self.chain)

    def insert(self, pos: int, kind: str, twist: str | None = None) -> Expression:
        if not 0 <= pos <= len(self.chain):
            raise IndexError(f"position {pos} outside 0..{len(self.chain)}")
        c = list(self.chain)
        c.insert(pos, Adjunction(kind, twist))
        return Expression(self.base, tuple(c))

    def extend(self, kind: str, twist: str | None = None) -> Expression:
        return self.insert(len(self.chain), kind, twist)

    def remove(self, pos: int) -> Expression:
        c = list(self.chain)
        del c[pos]
        return Expression(self.base, tuple(c))

    def replace(self, pos: int, kind: str) -> Expression:
        c = list(self.chain)
        c[pos] = Adjunction(kind, c[pos].twist)
        return Expression(self.base, tuple(c))

    def kind_at(self, pos: int) -> str:
        return self.chain[pos].kind

    @property
    def chain_text(self) -> str:
        return format_chain(self.chain)

    def __str__(self):
        base = str(self.base)
        names = [f"u{k}" for k in range(len(self.chain))]
        parts = []
        for n, a in zip(names, self.chain):
            s = {"poly": n, "negpoly": f"{n}^-1", "laurent": f"{n},{n}^-1"}[a.kind]
            parts.append(f"[{s}]" if a.twist is None else f"_{a.twist}[{s}]")
        return base + "".join(parts)


def parse_chain(text: str) -> tuple[Adjunction, ...]:
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        kind, _, twist = part.strip().partition("@")
        out.append(Adjunction(kind, twist or None))
    return tuple(out)


def format_chain(chain: tuple[Adjunction, ...]) -> str:
    return ",".join(str(a) for a in chain)


def target_expression(X: Expression, kind: str, pos: int | None, twist: str | None = None) -> Expression:
    """Codomain expression of the structure map ``kind`` at ``pos``."""
    if kind in ("i0", "i_plus", "i_minus", "a"):
        k = {"i0": "laurent", "a": "laurent", "i_plus": "poly", "i_minus": "negpoly"}[kind]
        return X.insert(len(X) if pos is None else pos, k, twist)
    p = len(X) - 1 if pos is None else pos
    if kind in ("j_plus", "j_minus"):
        want = "poly" if kind == "j_plus" else "negpoly"
        if X.kind_at(p) != want:
            raise ValueError(f"{kind} needs a {want} variable at position {p}")
        return X.replace(p, "laurent")
    if kind in ("ev0_plus", "ev0_minus"):
        want = "poly" if kind == "ev0_plus" else "negpoly"
        if X.kind_at(p) != want:
            raise ValueError(f"{kind} needs a {want} variable at position {p}")
        return X.remove(p)
    if kind == "phi_inverse":
        return X
    raise ValueError(f"unknown structure map {kind!r}")


def default_position(X: Expression, kind: str) -> int:
    """Structure maps act on the outermost variable unless told otherwise."""
    if kind in ("i0", "i_plus", "i_minus", "a"):
        return len(X)
    return len(X) - 1
