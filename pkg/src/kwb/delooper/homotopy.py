"""Homotopy K-theory along polynomial extensions, and filtered colimits of
rings, both through stabilizing sequences of groups."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..abgroup import ColimitResult, FgAbGroup, GroupHom, colim_sequence
from ..kengine import DEFAULT_WINDOW, induced_k_map, k_value
from ..rings import Ring, RingHom, UnsupportedError
from .checks import group_dict
from .derived import nk_data
from .expression import Expression
from .sources import KSource, SourceGap


@dataclass
class KHReport:
    expression: str
    degree: int
    colimit: ColimitResult
    chain: list[FgAbGroup]
    inverse_ok: bool | None
    nk_vanishes: bool | None
    detail: str = ""
    truncated: bool = False

    @property
    def group(self) -> FgAbGroup | None:
        return self.colimit.group

    @property
    def verdict(self) -> str:
        if not self.colimit.stable:
            # a chain cut short by missing data says nothing about stability
            return "gap" if self.truncated else "unstable"
        return "pass" if self.inverse_ok and self.nk_vanishes else "fail"

    def to_dict(self):
        r = self.colimit
        return {
            "expression": self.expression,
            "degree": self.degree,
            "verdict": self.verdict,
            "group": group_dict(r.group) if r.group is not None else None,
            "stable_index": r.stable_index,
            "chain": [group_dict(g) for g in self.chain],
            "inverse_ok": self.inverse_ok,
            "nk_vanishes": self.nk_vanishes,
            "detail": self.detail or r.reason,
        }


def poly_chain(X: Expression, n: int) -> Expression:
    for _ in range(n):
        X = X.extend("poly")
    return X


def kh_groups(source: KSource, X: Expression, i: int, n_bound: int = 4) -> KHReport:
    """``KH_i`` as the colimit of ``K_i(X) -> K_i(X[t_1]) -> ...`` along ``i_+``.

    At the stable index ``k`` the maps ``ev_0^+`` and ``i_+`` between levels
    ``k`` and ``k + 1`` must be mutually inverse, and ``NK_i`` must vanish at
    every served level from ``k`` on.
    """
    groups: list[FgAbGroup] = []
    maps: list[GroupHom] = []
    detail = ""
    for n in range(n_bound + 1):
        Xn = poly_chain(X, n)
        try:
            groups.append(source.group(Xn, i))
            if n < n_bound:
                maps.append(source.struct(Xn, "i_plus", i, len(Xn)))
        except SourceGap as e:
            detail = f"chain stops at level {n}: {e}"
            break
    maps = maps[: max(len(groups) - 1, 0)]
    res = colim_sequence(groups, maps, n_bound)
    if not res.stable:
        return KHReport(str(X), i, res, groups, None, None, detail or res.reason, bool(detail))
    k = res.stable_index
    inverse_ok = None
    nk_ok = None
    if k is not None and k < len(maps):
        Xk = poly_chain(X, k)
        ip = maps[k]
        ev = source.struct(Xk.extend("poly"), "ev0_plus", i, len(Xk))
        inverse_ok = (ev @ ip).equals(GroupHom.identity(ip.domain)) and (ip @ ev).equals(GroupHom.identity(ip.codomain))
        nk_ok = True
        for n in range(k, len(maps)):
            if not nk_data(source, poly_chain(X, n), i, "+").group.is_trivial:
                nk_ok = False
    return KHReport(str(X), i, res, groups, inverse_ok, nk_ok, detail, bool(detail))


# ---------------------------------------------------------------------------
# filtered colimits of rings


@dataclass(frozen=True)
class RingDiagram:
    """``R_0 -> R_1 -> ...`` with a named colimit and the map into it from the
    last stage (``None`` when the colimit is not a supported ring)."""

    name: str
    stages: tuple[Ring, ...]
    maps: tuple[RingHom, ...]
    colimit: Ring | None = None
    to_colimit: RingHom | None = None


@dataclass
class ColimitReport:
    diagram: str
    degree: int
    verdict: str
    colimit: ColimitResult
    chain: list[FgAbGroup] = field(default_factory=list)
    ring_group: FgAbGroup | None = None
    detail: str = ""

    def to_dict(self):
        r = self.colimit
        return {
            "diagram": self.diagram,
            "degree": self.degree,
            "verdict": self.verdict,
            "group": group_dict(r.group) if r.group is not None else None,
            "stable_index": r.stable_index,
            "ring_group": group_dict(self.ring_group) if self.ring_group is not None else None,
            "detail": self.detail,
        }


def filtered_colimit_check(diagram: RingDiagram, i: int, bound: int = 8, window: int = DEFAULT_WINDOW) -> ColimitReport:
    """Compare ``colim K_i(R_k)`` with ``K_i(colim R_k)``.

    The comparison is made with the map induced from the stable stage into the
    colimit ring, which must be an isomorphism.  A chain that does not
    stabilize gives the verdict ``"unstable"`` and no group.
    """
    try:
        groups = [k_value(R, i, window).group for R in diagram.stages]
        maps = [induced_k_map(f, i, window) for f in diagram.maps]
    except UnsupportedError as e:
        return ColimitReport(diagram.name, i, "gap", ColimitResult(False, None, None, str(e)), detail=str(e))
    res = colim_sequence(groups, maps, bound)
    if not res.stable:
        return ColimitReport(diagram.name, i, "unstable", res, groups, detail=res.reason)
    if diagram.colimit is None or diagram.to_colimit is None:
        return ColimitReport(diagram.name, i, "gap", res, groups, detail="colimit ring not supplied")
    g = induced_k_map(diagram.to_colimit, i, window)
    for f in reversed(maps[res.stable_index:]):
        g = g @ f
    ring_group = g.codomain
    ok = g.is_isomorphism() and ring_group.canonical_form == res.group.canonical_form
    return ColimitReport(diagram.name, i, "pass" if ok else "fail", res, groups, ring_group,
                         "" if ok else "induced map from the stable stage is not an isomorphism")


def identity_hom(R: Ring) -> RingHom:
    return RingHom("id", R, R, lambda x: x)


def eventually_constant(name: str, stages: list[Ring], maps: list[RingHom], tail: int = 1) -> RingDiagram:
    """A diagram that repeats its last stage ``tail`` more times by identities;
    its colimit is the last stage."""
    stages = list(stages)
    maps = list(maps)
    for _ in range(tail):
        maps.append(identity_hom(stages[-1]))
        stages.append(stages[-1])
    return RingDiagram(name, tuple(stages), tuple(maps), stages[-1], identity_hom(stages[-1]))
