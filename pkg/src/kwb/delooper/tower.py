"""The delooping tower ``E[0] -> E[1] -> ...`` on homotopy groups."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..abgroup import ColimitResult, FgAbGroup, GroupHom, colim_sequence
from .checks import contracted_check, group_dict
from .derived import DeloopedSource, structure_map_s
from .expression import Expression
from .sources import KSource, SourceGap

DEFAULT_WINDOW = (-3, 1)
DEFAULT_N_MAX = 4
DEFAULT_COLIMIT_BOUND = 8


@dataclass
class TowerLevel:
    n: int
    groups: dict[int, FgAbGroup | None]
    maps: dict[int, GroupHom | None] = field(default_factory=dict)
    gaps: dict[int, str] = field(default_factory=dict)


@dataclass
class TowerReport:
    expression: str
    window: tuple[int, int]
    levels: list[TowerLevel]
    colimits: dict[int, ColimitResult]
    c_max: int | None
    property_ok: bool
    violations: list[tuple[int, int]]

    def stable_from(self, i: int) -> int | None:
        r = self.colimits.get(i)
        return r.stable_index if r is not None and r.stable else None

    def column(self, i: int) -> list[FgAbGroup | None]:
        return [lv.groups.get(i) for lv in self.levels]

    @property
    def gaps(self) -> list[str]:
        return [f"E[{lv.n}] degree {i}: {msg}" for lv in self.levels for i, msg in sorted(lv.gaps.items())]

    @property
    def complete(self) -> bool:
        return not self.gaps

    @property
    def degreewise_constant(self) -> bool:
        """Every computed structure map is an isomorphism."""
        return all(f is not None and f.is_isomorphism() for lv in self.levels[:-1] for f in lv.maps.values())

    @property
    def verdict(self) -> str:
        if not self.property_ok:
            return "fail"
        return "pass" if self.complete else "gap"

    def to_dict(self):
        lo, hi = self.window
        return {
            "expression": self.expression,
            "window": [lo, hi],
            "levels": [
                {
                    "n": lv.n,
                    "groups": {str(i): (group_dict(g) if g is not None else None) for i, g in sorted(lv.groups.items())},
                    "iso_to_next": {str(i): (f.is_isomorphism() if f is not None else None) for i, f in sorted(lv.maps.items())},
                }
                for lv in self.levels
            ],
            "colimits": {
                str(i): {"stable": r.stable, "stable_index": r.stable_index,
                         "group": group_dict(r.group) if r.group is not None else None, "reason": r.reason}
                for i, r in sorted(self.colimits.items())
            },
            "c_max": self.c_max,
            "property_ok": self.property_ok,
            "violations": [list(v) for v in self.violations],
            "gaps": self.gaps,
            "verdict": self.verdict,
        }


def largest_contracted_level(source: KSource, X: Expression, window: tuple[int, int], depth: int = 0) -> int | None:
    """Largest ``c`` (up to ``1 - lo``, beyond which the check no longer
    changes) for which :func:`contracted_check` passes on the window.

    Contractedness is a property of the functor, not of one object, so the
    check is repeated on the iterated Laurent extensions of ``X`` up to
    ``depth`` (the objects the tower reads).  There a gap is tolerated and only
    a failure lowers ``c``.
    """
    lo, _ = window
    objects = [X]
    for _ in range(depth):
        objects.append(objects[-1].extend("laurent"))
    best = None
    for c in range(0, 2 - lo):
        if not contracted_check(source, X, c, window).passed:
            break
        if any(contracted_check(source, Y, c, window).verdict == "fail" for Y in objects[1:]):
            break
        best = c
    return best


def shadow_tower(
    source: KSource,
    X: Expression,
    window: tuple[int, int] = DEFAULT_WINDOW,
    n_max: int = DEFAULT_N_MAX,
    colimit_bound: int = DEFAULT_COLIMIT_BOUND,
) -> TowerReport:
    """Levels ``E[0..n_max]`` over the window with the maps ``s``.

    A level that cannot be computed in some degree records a gap there and
    the tower continues with what it has.  The stabilization property checked
    is: if ``E`` is ``c``-contracted on the window (at ``X`` and its Laurent
    extensions up to ``n_max``), every map
    ``pi_i E[n] -> pi_i E[n+1]`` with ``i >= -c`` is an isomorphism.
    """
    lo, hi = window
    levels: list[TowerLevel] = []
    src = source
    for n in range(n_max + 1):
        lv = TowerLevel(n, {})
        for i in range(lo, hi + 1):
            try:
                lv.groups[i] = src.group(X, i)
            except SourceGap as e:
                lv.groups[i] = None
                lv.gaps[i] = str(e)
        if n < n_max:
            for i in range(lo, hi + 1):
                if lv.groups[i] is None:
                    lv.maps[i] = None
                    continue
                try:
                    lv.maps[i] = structure_map_s(src, X, i)
                except SourceGap as e:
                    lv.maps[i] = None
                    lv.gaps.setdefault(i, f"structure map: {e}")
            src = DeloopedSource(src)
        levels.append(lv)

    colimits: dict[int, ColimitResult] = {}
    for i in range(lo, hi + 1):
        gs, ms = [], []
        for lv in levels:
            g = lv.groups.get(i)
            if g is None:
                break
            gs.append(g)
            f = lv.maps.get(i)
            if f is None:
                break
            ms.append(f)
        ms = ms[: max(len(gs) - 1, 0)]
        if not gs:
            colimits[i] = ColimitResult(False, None, None, "no data")
        else:
            colimits[i] = colim_sequence(gs, ms, colimit_bound)

    c_max = largest_contracted_level(source, X, window, n_max)
    violations = []
    if c_max is not None:
        for lv in levels[:-1]:
            for i, f in lv.maps.items():
                if i >= -c_max and f is not None and not f.is_isomorphism():
                    violations.append((lv.n, i))
    return TowerReport(str(X), window, levels, colimits, c_max, not violations, violations)
