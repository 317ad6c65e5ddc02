"""Homotopy groups of the functors built from ``E``, each with its formula.

Every shadow is recomputed from the source on demand, degree by degree; a
degree the source cannot serve is recorded as a gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..abgroup import FgAbGroup, cokernel, direct_sum
from .checks import group_dict
from .derived import DeloopedSource, nk_data, restricted_bhs
from .expression import Expression
from .homotopy import kh_groups
from .sources import KSource, SourceGap
from .twisted import mapping_torus_pi


@dataclass
class FunctorShadow:
    name: str
    formula: str
    groups: dict[int, FgAbGroup | None]
    gaps: dict[int, str] = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "formula": self.formula,
            "groups": {str(i): (group_dict(g) if g is not None else None) for i, g in sorted(self.groups.items())},
            "gaps": {str(i): m for i, m in sorted(self.gaps.items())},
        }


def _sum(*gs: FgAbGroup) -> FgAbGroup:
    return direct_sum(list(gs)).group.smith_iso.canonical


def _shadow(name: str, formula: str, window: tuple[int, int], fn: Callable[[int], FgAbGroup]) -> FunctorShadow:
    s = FunctorShadow(name, formula, {})
    for i in range(window[0], window[1] + 1):
        try:
            s.groups[i] = fn(i)
        except (SourceGap, ArithmeticError) as e:
            s.groups[i] = None
            s.gaps[i] = str(e)
    return s


def functor_shadows(
    source: KSource,
    X: Expression,
    window: tuple[int, int] = (-1, 1),
    n_max: int = 2,
    twist: str | None = None,
    kh_bound: int = 2,
) -> dict[str, FunctorShadow]:
    """All shadows of ``E`` at ``X`` over ``window``."""
    E = lambda i: source.group(X, i)  # noqa: E731
    out = {
        "E": _shadow("E", "pi_i E(X)", window, E),
        "ZE": _shadow("ZE", "pi_i E(X[t,t^-1])", window, lambda i: source.group(X.extend("laurent"), i)),
        "Z+E": _shadow("Z+E", "pi_i E(X[t])", window, lambda i: source.group(X.extend("poly"), i)),
        "Z-E": _shadow("Z-E", "pi_i E(X[t^-1])", window, lambda i: source.group(X.extend("negpoly"), i)),
        "N+E": _shadow("N+E", "ker pi_i(ev0+)", window, lambda i: nk_data(source, X, i, "+").group),
        "N-E": _shadow("N-E", "ker pi_i(ev0-)", window, lambda i: nk_data(source, X, i, "-").group),
        "BE": _shadow("BE", "pi_i E + pi_(i-1) E + NK+_i + NK-_i", window,
                      lambda i: _sum(E(i), E(i - 1), nk_data(source, X, i, "+").group, nk_data(source, X, i, "-").group)),
        "BrE": _shadow("BrE", "pi_i E + NK+_i + NK-_i", window,
                       lambda i: restricted_bhs(source, X, i).domain.group.smith_iso.canonical),
        "LE": _shadow("LE", "coker pi_i(BHS_r)", window, lambda i: cokernel(restricted_bhs(source, X, i).map).group),
        "OmegaLE": _shadow("OmegaLE", "pi_(i+1) LE", window,
                           lambda i: cokernel(restricted_bhs(source, X, i + 1).map).group),
        "E^S1+": _shadow("E^S1+", "pi_i E + pi_(i-1) E", window, lambda i: _sum(E(i), E(i - 1))),
        "HE": _shadow("HE", "colim_n pi_i E(X[t_1..t_n]) along i+", window, lambda i: _kh(source, X, i, kh_bound)),
    }
    if twist is not None:
        def torus(i):
            p = mapping_torus_pi(source.struct(X, "phi_inverse", i), source.struct(X, "phi_inverse", i - 1))
            if p.resolved is None:
                raise SourceGap("mapping torus extension not forced")
            return p.resolved
        out["TtE"] = _shadow("TtE", "Wang pieces coker(1-phi_i), ker(1-phi_(i-1))", window, torus)
    src = source
    for n in range(n_max + 1):
        s = src
        out[f"E[{n}]"] = _shadow(f"E[{n}]", "E" if n == 0 else f"Omega L E[{n - 1}]", window, lambda i, s=s: s.group(X, i))
        src = DeloopedSource(src)
    return out


def _kh(source, X, i, bound):
    r = kh_groups(source, X, i, bound)
    if r.group is None:
        raise SourceGap(r.detail or "KH chain did not stabilize")
    return r.group
