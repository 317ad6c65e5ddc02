"""Checks on one base expression: NK splitting, the fundamental sequence, the
Bass-Heller-Swan isomorphism and contractedness.

Reports are plain dataclasses with a ``to_dict`` for serialization.  Verdict
strings are ``"pass"``, ``"fail"``, ``"gap"`` (missing data) and, for BHS,
``"splitting missing"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..abgroup import (
    FgAbGroup,
    GroupHom,
    cokernel,
    direct_sum,
    exactness,
    has_retraction,
    has_section,
    hom_from_blocks,
    hom_into_sum,
    image_lattice,
    kernel,
    solve_integer,
    transpose,
)
from .derived import NKData, bass_step, j_sum_map, nk_data, restricted_bhs
from .expression import Expression
from .sources import KSource, SourceGap


def group_dict(G: FgAbGroup) -> dict[str, Any]:
    return {"free_rank": G.free_rank, "invariant_factors": list(G.invariant_factors)}


def group_text(G: FgAbGroup) -> str:
    parts = [f"Z/{d}" for d in G.invariant_factors]
    if G.free_rank:
        parts.append("Z" if G.free_rank == 1 else f"Z^{G.free_rank}")
    return " + ".join(parts) if parts else "0"


def matrix_list(f: GroupHom) -> list[list[int]]:
    """The canonical-generator matrix of ``f``, torsion rows reduced."""
    c = f.canonical()
    M = [list(r) for r in c.matrix]
    for a, d in enumerate(c.codomain.invariant_factors):
        M[a] = [x % d for x in M[a]]
    return M


# ---------------------------------------------------------------------------
# NK


@dataclass
class NKReport:
    expression: str
    degree: int
    sign: str
    group: FgAbGroup
    splitting_ok: bool
    data: NKData | None = None

    def to_dict(self):
        return {
            "expression": self.expression,
            "degree": self.degree,
            "sign": self.sign,
            "group": group_dict(self.group),
            "splitting_ok": self.splitting_ok,
        }


def nk(source: KSource, X: Expression, i: int, sign: str = "+") -> NKReport:
    """``NK_i`` and a check that ``(ev_0, retraction)`` is an isomorphism
    ``K_i(X[u]) -> K_i(X) + NK_i``."""
    d = nk_data(source, X, i, sign)
    S = direct_sum([d.ev0.codomain, d.group])
    both = hom_into_sum(d.ev0.domain, S, [d.ev0, d.retraction])
    ok = both.is_isomorphism() and (d.retraction @ d.inclusion).equals(GroupHom.identity(d.group))
    return NKReport(str(X), i, sign, d.group, ok, d)


# ---------------------------------------------------------------------------
# fundamental sequence


@dataclass
class SpotFailure:
    spot: int
    reason: str
    element: list[int] | None = None

    def to_dict(self):
        return {"spot": self.spot, "reason": self.reason, "element": self.element}


@dataclass
class FundamentalSequence:
    """``0 -> K_i(X) -> K_i(X[u]) + K_i(X[u^-1]) -> K_i(X[u,u^-1]) -> K_{i-1} -> 0``."""

    expression: str
    degree: int
    terms: tuple[FgAbGroup, FgAbGroup, FgAbGroup, FgAbGroup]
    alpha: GroupHom
    beta: GroupHom
    boundary: GroupHom
    section: GroupHom | None
    failures: list[SpotFailure] = field(default_factory=list)
    declared_previous: FgAbGroup | None = None
    complement: FgAbGroup | None = None

    @property
    def exact(self) -> bool:
        return not self.failures

    @property
    def failing_spots(self) -> list[int]:
        return sorted({f.spot for f in self.failures})

    @property
    def verdict(self) -> str:
        if not self.exact:
            return "fail"
        return "pass" if self.section is not None else "section missing"

    @property
    def complement_agrees(self) -> bool | None:
        """Whether ``coker(j_+ + j_-)`` is isomorphic to ``coker(BHS_r)``."""
        if self.complement is None:
            return None
        return self.complement.is_isomorphic(self.terms[3])

    def to_dict(self):
        d = {
            "expression": self.expression,
            "degree": self.degree,
            "terms": [group_dict(t) for t in self.terms],
            "verdict": self.verdict,
            "failing_spots": self.failing_spots,
            "failures": [f.to_dict() for f in self.failures],
            "section": matrix_list(self.section) if self.section is not None else None,
            "complement_agrees": self.complement_agrees,
        }
        if self.declared_previous is not None:
            d["declared_previous"] = group_dict(self.declared_previous)
        return d


def _outside_image(f: GroupHom, g: GroupHom) -> list[int] | None:
    """An element of ``ker g`` outside ``im f``, if there is one."""
    m = f.codomain.num_generators
    rows = image_lattice(f)
    K = kernel(g)
    for j in range(K.group.num_generators):
        v = K.inclusion.column(j)
        if not rows or solve_integer(transpose(rows, m), v, len(rows)) is None:
            if not f.codomain.is_zero_element(v):
                return list(v)
    return None


def _not_in_kernel(f: GroupHom, g: GroupHom) -> list[int] | None:
    h = g @ f
    for j in range(f.domain.num_generators):
        if not h.codomain.is_zero_element(h.column(j)):
            return list(f.domain.smith_coordinates(tuple(1 if k == j else 0 for k in range(f.domain.num_generators))))
    return None


def fundamental_sequence(source: KSource, X: Expression, i: int) -> FundamentalSequence:
    """Assemble and verify the fundamental sequence in degree ``i``.

    The boundary is the projection onto ``coker(j_+ + j_-)``.  Exactness at
    the first two spots is tested directly.  At the third spot the question is
    whether ``im(j_+ + j_-)`` is the kernel of an epimorphism onto the
    source's own ``K_{i-1}(X)``; when the source serves that group this holds
    exactly when it is isomorphic to the cokernel, and a mismatch is reported
    there.  Without served ``K_{i-1}`` the cokernel is taken as its value.
    """
    p = len(X)
    ip = source.struct(X, "i_plus", i, p)
    im = source.struct(X, "i_minus", i, p)
    S, beta = j_sum_map(source, X, i)
    alpha = hom_into_sum(ip.domain, S, [ip, -im])
    C = cokernel(beta)
    boundary = C.projection
    failures: list[SpotFailure] = []

    K = kernel(alpha)
    if not K.group.is_trivial:
        failures.append(SpotFailure(1, "K_i(i_+) - K_i(i_-) is not injective", list(K.inclusion.column(0))))

    ex = exactness(alpha, beta)
    if not ex.image_in_kernel:
        failures.append(SpotFailure(2, "j o i does not vanish: image not in kernel", _not_in_kernel(alpha, beta)))
    if not ex.kernel_in_image:
        failures.append(SpotFailure(2, "kernel of j_+ + j_- exceeds the image of i", _outside_image(alpha, beta)))

    declared = None
    try:
        declared = source.group(X, i - 1)
    except SourceGap:
        pass
    if declared is not None and not declared.is_isomorphic(C.group):
        failures.append(SpotFailure(
            3,
            f"coker(j_+ + j_-) = {group_text(C.group)} but K_{i - 1} = {group_text(declared)}: "
            "no epimorphism onto K_{i-1} has kernel im(j_+ + j_-)",
        ))

    section = has_section(boundary)
    complement = None
    try:
        complement = cokernel(restricted_bhs(source, X, i).map).group
    except (SourceGap, ArithmeticError):
        pass
    return FundamentalSequence(
        str(X), i, (ip.domain, S.group, beta.codomain, C.group), alpha, beta, boundary, section,
        failures, declared, complement,
    )


# ---------------------------------------------------------------------------
# Bass-Heller-Swan


@dataclass
class BHSReport:
    expression: str
    degree: int
    verdict: str
    summands: dict[str, FgAbGroup]
    target: FgAbGroup | None
    witness: GroupHom | None = None
    a_route: bool | None = None
    abstract_match: bool | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "expression": self.expression,
            "degree": self.degree,
            "verdict": self.verdict,
            "summands": {k: group_dict(v) for k, v in self.summands.items()},
            "target": group_dict(self.target) if self.target is not None else None,
            "witness": matrix_list(self.witness) if self.witness is not None else None,
            "a_route": self.a_route,
            "abstract_match": self.abstract_match,
            "detail": self.detail,
        }


def bhs_check(source: KSource, X: Expression, i: int, seq: FundamentalSequence | None = None) -> BHSReport:
    """Decide whether ``K_{i-1} + K_i + NK_i^+ + NK_i^- -> K_i(X[u,u^-1])`` is an
    isomorphism.

    The ``K_{i-1}`` component is the section of the boundary found by
    :func:`fundamental_sequence`.  When the source serves the map ``a`` and
    ``K_{i-1}(X)``, the map built with ``a`` in place of the section is tested
    too (``a_route``).
    """
    try:
        seq = seq or fundamental_sequence(source, X, i)
        B = restricted_bhs(source, X, i)
    except SourceGap as e:
        return BHSReport(str(X), i, "gap", {}, None, detail=str(e))
    except ArithmeticError as e:
        # broken structure identities leave no NK splitting to compare with
        return BHSReport(str(X), i, "fail", {}, None, detail=str(e))
    summands = {
        "K_{i-1}": seq.terms[3],
        "K_i": B.i0.domain,
        "NK_i+": B.nk_plus.group,
        "NK_i-": B.nk_minus.group,
    }
    target = B.codomain
    abstract = _abstract_sum(list(summands.values())).is_isomorphic(target)
    a_route = None
    if source.serves_a():
        try:
            a = source.struct(X, "a", i - 1, len(X))
            D = direct_sum([a.domain, B.i0.domain, B.nk_plus.group, B.nk_minus.group])
            a_route = hom_from_blocks(D, target, [a, B.i0, B.b_plus, B.b_minus]).is_isomorphism()
        except SourceGap:
            a_route = None
    if not seq.exact:
        why = "; ".join(f"spot {f.spot}: {f.reason}" for f in seq.failures)
        return BHSReport(str(X), i, "fail", summands, target, None, a_route, abstract,
                         f"fundamental sequence is not exact ({why})")
    if seq.section is None:
        return BHSReport(str(X), i, "splitting missing", summands, target, None, a_route, abstract,
                         "the boundary onto the Bass cokernel has no section")
    D = direct_sum([seq.section.domain, B.i0.domain, B.nk_plus.group, B.nk_minus.group])
    full = hom_from_blocks(D, target, [seq.section, B.i0, B.b_plus, B.b_minus])
    iso = full.is_isomorphism()
    verdict = "pass" if iso else "fail"
    detail = "" if iso else _why_not_iso(full)
    return BHSReport(str(X), i, verdict, summands, target, full, a_route, abstract, detail)


def _abstract_sum(groups):
    return direct_sum(groups).group


def _why_not_iso(f: GroupHom) -> str:
    k, c = kernel(f).group, cokernel(f).group
    return f"kernel {group_text(k)}, cokernel {group_text(c)}"


# ---------------------------------------------------------------------------
# contractedness


@dataclass
class DegreeVerdict:
    degree: int
    retraction: GroupHom | None
    bhs: BHSReport | None
    verdict: str
    detail: str = ""

    def to_dict(self):
        return {
            "degree": self.degree,
            "verdict": self.verdict,
            "retraction": matrix_list(self.retraction) if self.retraction is not None else None,
            "bhs": self.bhs.to_dict() if self.bhs is not None else None,
            "detail": self.detail,
        }


@dataclass
class ContractedReport:
    expression: str
    c: int
    window: tuple[int, int]
    degrees: list[DegreeVerdict]

    @property
    def verdict(self) -> str:
        vs = {d.verdict for d in self.degrees}
        if "fail" in vs:
            return "fail"
        if "gap" in vs:
            return "gap"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def failing_degrees(self) -> list[int]:
        return [d.degree for d in self.degrees if d.verdict == "fail"]

    def to_dict(self):
        return {
            "expression": self.expression,
            "c": self.c,
            "window": list(self.window),
            "verdict": self.verdict,
            "degrees": [d.to_dict() for d in self.degrees],
        }


def declared_rho(source: KSource, X: Expression, i: int) -> GroupHom | None:
    getter = getattr(source, "rho", None)
    return getter(X, i) if getter is not None else None


def contracted_check(source: KSource, X: Expression, c: int, window: tuple[int, int] = (-3, 1)) -> ContractedReport:
    """``BHS_r`` split injective in every degree of the window, and the full
    BHS map an isomorphism in degrees ``i >= -c + 1``."""
    lo, hi = window
    out = []
    for i in range(lo, hi + 1):
        try:
            B = restricted_bhs(source, X, i)
        except SourceGap as e:
            out.append(DegreeVerdict(i, None, None, "gap", str(e)))
            continue
        except ArithmeticError as e:
            out.append(DegreeVerdict(i, None, None, "fail", str(e)))
            continue
        rho = declared_rho(source, X, i)
        if rho is not None and not (rho @ B.map).equals(GroupHom.identity(B.map.domain)):
            out.append(DegreeVerdict(i, rho, None, "fail", "declared rho is not a retraction of BHS_r"))
            continue
        rho = rho or has_retraction(B.map)
        if rho is None:
            out.append(DegreeVerdict(i, None, None, "fail", "BHS_r has no retraction"))
            continue
        if i >= -c + 1:
            rep = bhs_check(source, X, i)
            v = "pass" if rep.passed else ("gap" if rep.verdict == "gap" else "fail")
            out.append(DegreeVerdict(i, rho, rep, v, rep.detail))
        else:
            out.append(DegreeVerdict(i, rho, None, "pass", "retraction only"))
    return ContractedReport(str(X), c, window, out)


def bass_complement_agrees(source: KSource, X: Expression, i: int) -> bool:
    """``coker(j_+ + j_-)`` and ``coker(BHS_r)`` agree in degree ``i``."""
    return bass_step(source, X, i).group.is_isomorphic(cokernel(restricted_bhs(source, X, i).map).group)
