"""Shipped oracle fixtures and synthetic model sources.

Every JSON file here is produced by a builder below; ``python -m
kwb.fixtures DIR`` rewrites them.  The environment variable ``KWB_FIXTURES``
points lookups at another directory.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Callable

from ..abgroup import FgAbGroup
from ..delooper.expression import Expression
from ..delooper.sources import BHSModelSource, EngineSource
from ..oracle import OracleSource, dumps, export, load, standard_slice
from ..rings import parse_ring

HERE = Path(__file__).resolve().parent


def fixture_dir() -> Path:
    env = os.environ.get("KWB_FIXTURES")
    return Path(env) if env else HERE


def fixture_path(name: str) -> Path:
    if not name.endswith(".json"):
        name += ".json"
    return fixture_dir() / name


def load_fixture(name: str, validate: bool | None = None) -> OracleSource:
    """Load a shipped fixture; corrupted controls load unvalidated by default."""
    if validate is None:
        validate = not BUILDERS[name.removesuffix(".json")][1] if name.removesuffix(".json") in BUILDERS else True
    return load(fixture_path(name), validate=validate)


# ---------------------------------------------------------------------------
# builders

S = lambda *xs: [str(x) for x in xs]  # noqa: E731


def _table(
    base: str,
    objects: dict[str, str],
    degrees: tuple[int, int],
    groups: dict[tuple[str, int], tuple[int, tuple[int, ...]]],
    maps: list[tuple],
    mode: str = "oracle",
    nil: list[dict] | None = None,
) -> dict[str, Any]:
    """A file from short tables; ``maps`` entries are
    ``(name, domain, codomain, degree, matrix[, position])``."""
    out: dict[str, Any] = {
        "schema_version": "1",
        "mode": mode,
        "objects": [{"name": n, "base": base, "chain": c} for n, c in objects.items()],
        "degrees": S(*degrees),
        "groups": [
            {"object": o, "degree": str(d), "free_rank": str(fr), "invariant_factors": S(*fs)}
            for (o, d), (fr, fs) in groups.items()
        ],
        "maps": [],
    }
    for m in maps:
        name, dom, cod, deg, M = m[:5]
        e = {"name": name, "domain": dom, "codomain": cod, "degree": str(deg), "matrix": [S(*r) for r in M]}
        if len(m) > 5:
            e["position"] = str(m[5])
        out["maps"].append(e)
    if nil:
        out["nil"] = nil
    return out


def _finish(data: dict[str, Any], rho: bool = True, validate: bool = True) -> dict[str, Any]:
    """Validate, add solver-found retractions, and normalize through export."""
    src = OracleSource(data, validate=validate)
    exprs = list(src.objects.values())
    names = {X: n for n, X in src.objects.items()}
    return export(src, exprs, src.window, include_rho=rho, names=names)


def _square(base: str, degrees, groups, maps, **kw) -> dict[str, Any]:
    objects = {"A": "", "A[t]": "poly", "A[t^-1]": "negpoly", "A[t,t^-1]": "laurent"}
    return _table(base, objects, degrees, groups, maps, **kw)


def field_f3() -> dict[str, Any]:
    """Engine data for F3 and its three extensions in degrees 0 and 1."""
    R = parse_ring("F3")
    return export(EngineSource(), standard_slice(R), (0, 1))


def k_minus_one() -> dict[str, Any]:
    """``K_0(A[t,t^-1]) = Z^2`` with ``j_+ + j_-`` hitting ``Z + 0``: ``K_-1 = Z``."""
    one = [[1]]
    g = {("A", 0): (1, ()), ("A[t]", 0): (1, ()), ("A[t^-1]", 0): (1, ()), ("A[t,t^-1]", 0): (2, ()),
         ("A", -1): (1, ())}
    maps = [
        ("i_plus", "A", "A[t]", 0, one), ("i_minus", "A", "A[t^-1]", 0, one),
        ("ev0_plus", "A[t]", "A", 0, one), ("ev0_minus", "A[t^-1]", "A", 0, one),
        ("j_plus", "A[t]", "A[t,t^-1]", 0, [[1], [0]]), ("j_minus", "A[t^-1]", "A[t,t^-1]", 0, [[1], [0]]),
        ("i0", "A", "A[t,t^-1]", 0, [[1], [0]]),
    ]
    return _finish(_square("A", (-1, 0), g, maps))


def _nk_z2_tables(j_plus=((1, 0), (0, 1)), i_pm=1):
    # K_0(A[t]) = Z/2 + Z: generators (nil class, free class)
    g = {("A", 0): (1, ()), ("A[t]", 0): (1, (2,)), ("A[t^-1]", 0): (1, ()), ("A[t,t^-1]", 0): (1, (2,)),
         ("A", -1): (0, ())}
    maps = [
        ("i_plus", "A", "A[t]", 0, [[0], [i_pm]]), ("i_minus", "A", "A[t^-1]", 0, [[i_pm]]),
        ("ev0_plus", "A[t]", "A", 0, [[0, 1]]), ("ev0_minus", "A[t^-1]", "A", 0, [[1]]),
        ("j_plus", "A[t]", "A[t,t^-1]", 0, [list(r) for r in j_plus]),
        ("j_minus", "A[t^-1]", "A[t,t^-1]", 0, [[0], [1]]),
        ("i0", "A", "A[t,t^-1]", 0, [[0], [1]]),
    ]
    return g, maps


def nk_z2() -> dict[str, Any]:
    """``ev_0^+`` is the projection ``Z/2 + Z -> Z``, so ``NK_0 = Z/2``."""
    g, maps = _nk_z2_tables()
    return _finish(_square("A", (-1, 0), g, maps))


def corrupted_zero_i() -> dict[str, Any]:
    """Control: ``i_+`` and ``i_-`` are zero; the first spot must fail."""
    g, maps = _nk_z2_tables(i_pm=0)
    return _finish(_square("A", (-1, 0), g, maps), rho=False, validate=False)


def corrupted_drop_j() -> dict[str, Any]:
    """Control: ``j_+`` forgets the Nil generator; spots 2 and 3 must fail."""
    g, maps = _nk_z2_tables(j_plus=((0, 0), (0, 1)))
    return _finish(_square("A", (-1, 0), g, maps), rho=False, validate=False)


def corrupted_double_j() -> dict[str, Any]:
    """Control: ``j_+ = j_- = i0 = 2`` on ``Z`` with ``K_-1 = 0`` declared;
    every composite identity holds but the cokernel is ``Z/2``, so the third
    spot fails and there is no section."""
    g = {(o, 0): (1, ()) for o in ("A", "A[t]", "A[t^-1]", "A[t,t^-1]")}
    g[("A", -1)] = (0, ())
    one, two = [[1]], [[2]]
    maps = [
        ("i_plus", "A", "A[t]", 0, one), ("i_minus", "A", "A[t^-1]", 0, one),
        ("ev0_plus", "A[t]", "A", 0, one), ("ev0_minus", "A[t^-1]", "A", 0, one),
        ("j_plus", "A[t]", "A[t,t^-1]", 0, two), ("j_minus", "A[t^-1]", "A[t,t^-1]", 0, two),
        ("i0", "A", "A[t,t^-1]", 0, two),
    ]
    return _finish(_square("A", (-1, 0), g, maps), rho=False, validate=True)


def kh_stabilizes() -> dict[str, Any]:
    """``NK_0(A) = Z/2`` but ``A[t] -> A[t][t]`` is an isomorphism on ``K_0``."""
    objects = {"A": "", "A[t]": "poly", "A[t,t]": "poly,poly", "A[t,t,t]": "poly,poly,poly"}
    g = {("A", 0): (1, ()), ("A[t]", 0): (1, (2,)), ("A[t,t]", 0): (1, (2,)), ("A[t,t,t]", 0): (1, (2,))}
    ident = [[1, 0], [0, 1]]
    maps = [
        ("i_plus", "A", "A[t]", 0, [[0], [1]], 0), ("ev0_plus", "A[t]", "A", 0, [[0, 1]], 0),
        ("i_plus", "A[t]", "A[t,t]", 0, ident, 1), ("ev0_plus", "A[t,t]", "A[t]", 0, ident, 1),
        ("i_plus", "A[t,t]", "A[t,t,t]", 0, ident, 2), ("ev0_plus", "A[t,t,t]", "A[t,t]", 0, ident, 2),
    ]
    return _finish(_table("A", objects, (0, 0), g, maps))


def _nil_base(k_nil: tuple[int, tuple[int, ...]]) -> dict[str, Any]:
    objects = {"A": "", "A[t]": "poly"}
    g = {("A", 0): (1, ()), ("A[t]", 0): (1, ()), ("A", 1): (0, ()), ("A[t]", 1): (0, (2,))}
    maps = [
        ("i_plus", "A", "A[t]", 0, [[1]]), ("ev0_plus", "A[t]", "A", 0, [[1]]),
        ("i_plus", "A", "A[t]", 1, [[]]), ("ev0_plus", "A[t]", "A", 1, []),
    ]
    nil = [{"object": "A", "degree": "0",
            "k_nil": {"free_rank": str(k_nil[0]), "invariant_factors": S(*k_nil[1])},
            "nk_shift": {"free_rank": "0", "invariant_factors": ["2"]}}]
    return _finish(_table("A", objects, (0, 1), g, maps, nil=nil))


def nil_matched() -> dict[str, Any]:
    """``K_0(Nil) = Z + Z/2`` against ``K_0(A) = Z`` and ``NK_1 = Z/2``."""
    return _nil_base((1, (2,)))


def nil_mismatched() -> dict[str, Any]:
    """Control: ``K_0(Nil) = Z`` although ``NK_1 = Z/2``."""
    return _nil_base((1, ()))


def _twisted_square(twist: str, degrees, K: dict[int, tuple], phi: dict[int, list], target: dict[int, tuple]):
    objects = {"A": "", f"A_{twist}[t]": f"poly@{twist}", f"A_{twist}[t^-1]": f"negpoly@{twist}",
               f"A_{twist}[t,t^-1]": f"laurent@{twist}"}
    g, maps = {}, []
    for d in range(degrees[0], degrees[1] + 1):
        fr, fs = K[d]
        n = fr + len(fs)
        ident = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        g[("A", d)] = K[d]
        g[(f"A_{twist}[t]", d)] = K[d]
        g[(f"A_{twist}[t^-1]", d)] = K[d]
        g[(f"A_{twist}[t,t^-1]", d)] = target[d]
        maps += [
            ("i_plus", "A", f"A_{twist}[t]", d, ident), ("i_minus", "A", f"A_{twist}[t^-1]", d, ident),
            ("ev0_plus", f"A_{twist}[t]", "A", d, ident), ("ev0_minus", f"A_{twist}[t^-1]", "A", d, ident),
            ("phi_inverse", "A", "A", d, phi[d]),
        ]
    return _table("A", objects, degrees, g, maps)


def twisted_minus_one() -> dict[str, Any]:
    """``Phi^-1`` acts by ``-1`` on ``K_0 = Z`` and trivially on ``K_1 = Z/2``.

    The Wang pieces force ``pi_0 T = Z/2`` and ``pi_1 T = Z/2``; Nil terms
    vanish, and the twisted Laurent groups are declared accordingly.
    """
    K = {-1: (0, ()), 0: (1, ()), 1: (0, (2,))}
    phi = {-1: [], 0: [[-1]], 1: [[1]]}
    target = {-1: (0, ()), 0: (0, (2,)), 1: (0, (2,))}
    return _finish(_twisted_square("phi", (-1, 1), K, phi, target), rho=False)


def twisted_ambiguous() -> dict[str, Any]:
    """``Phi^-1 = -1`` on ``K_0 = K_1 = Z/4``: both Wang pieces are ``Z/2`` and
    the extension is not forced."""
    K = {0: (0, (4,)), 1: (0, (4,))}
    phi = {0: [[-1]], 1: [[-1]]}
    target = {0: (0, (2,)), 1: (0, (4,))}
    return _finish(_twisted_square("psi", (0, 1), K, phi, target), rho=False)


def free_flavor() -> dict[str, Any]:
    """K-theory of finitely generated free modules over a Dedekind ring with
    class group ``Z/2`` and units ``{1, -1}`` (for instance ``Z[sqrt(-5)]``).

    ``pi_0`` is ``Z`` everywhere; ``K_1`` of the Laurent extension is
    ``K_1(R) + K_0(R) = Z/2 + (Z + Z/2)``, where ``K_0`` is the projective
    class group.  Generators of that group: the unit ``-1``, the class-group
    part, and the class of ``t``.  Degree ``-1`` is zero (connective).
    """
    objects = {"R": "", "R[t]": "poly", "R[t^-1]": "negpoly", "R[t,t^-1]": "laurent"}
    g = {}
    for o in objects:
        g[(o, -1)] = (0, ())
        g[(o, 0)] = (1, ())
        g[(o, 1)] = (0, (2,))
    g[("R[t,t^-1]", 1)] = (1, (2, 2))
    one = [[1]]
    maps = []
    for d in (0, 1):
        lj = [[1]] if d == 0 else [[1], [0], [0]]
        maps += [
            ("i_plus", "R", "R[t]", d, one), ("i_minus", "R", "R[t^-1]", d, one),
            ("ev0_plus", "R[t]", "R", d, one), ("ev0_minus", "R[t^-1]", "R", d, one),
            ("j_plus", "R[t]", "R[t,t^-1]", d, lj), ("j_minus", "R[t^-1]", "R[t,t^-1]", d, lj),
            ("i0", "R", "R[t,t^-1]", d, lj),
        ]
    maps += [
        ("i_plus", "R", "R[t]", -1, []), ("i_minus", "R", "R[t^-1]", -1, []),
        ("ev0_plus", "R[t]", "R", -1, []), ("ev0_minus", "R[t^-1]", "R", -1, []),
        ("j_plus", "R[t]", "R[t,t^-1]", -1, []), ("j_minus", "R[t^-1]", "R[t,t^-1]", -1, []),
        ("i0", "R", "R[t,t^-1]", -1, []),
        ("a", "R", "R[t,t^-1]", 0, [[0], [0], [1]]),
    ]
    return _finish(_table("Zsqrt-5", objects, (-1, 1), g, maps))


def empty() -> dict[str, Any]:
    return _table("A", {}, (0, 0), {}, [])


# name -> (builder, is a corrupted control)
BUILDERS: dict[str, tuple[Callable[[], dict[str, Any]], bool]] = {
    "field_f3": (field_f3, False),
    "k_minus_one": (k_minus_one, False),
    "nk_z2": (nk_z2, False),
    "corrupted_zero_i": (corrupted_zero_i, True),
    "corrupted_drop_j": (corrupted_drop_j, True),
    "corrupted_double_j": (corrupted_double_j, False),
    "kh_stabilizes": (kh_stabilizes, False),
    "nil_matched": (nil_matched, False),
    "nil_mismatched": (nil_mismatched, False),
    "twisted_minus_one": (twisted_minus_one, False),
    "twisted_ambiguous": (twisted_ambiguous, False),
    "free_flavor": (free_flavor, False),
    "empty": (empty, False),
}

# the corrupted controls and the spots at which each must fail
CONTROLS = {
    "corrupted_zero_i": [1, 2],
    "corrupted_drop_j": [2, 3],
    "corrupted_double_j": [3],
}


def write_all(directory: str | Path | None = None) -> list[Path]:
    d = Path(directory) if directory else HERE
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for name, (fn, _) in BUILDERS.items():
        p = d / f"{name}.json"
        p.write_text(dumps(fn()))
        out.append(p)
    return out


# ---------------------------------------------------------------------------
# synthetic model sources (not files: they serve arbitrarily many variables)


def truncated_model() -> BHSModelSource:
    """Seeds ``K_0 = K_-1 = Z``, zero below degree 0: 0-contracted, and the
    tower recovers ``K_-1 = Z`` at level 1."""
    Z = FgAbGroup.free(1)
    return BHSModelSource("A", {0: Z, -1: Z}, connective_from=0)


def contracted_model() -> BHSModelSource:
    """Seeds ``K_1 = Z/2``, ``K_0 = Z``, ``K_-1 = Z`` with no truncation: the
    BHS map is an isomorphism in every degree."""
    Z = FgAbGroup.free(1)
    return BHSModelSource("A", {1: FgAbGroup.cyclic(2), 0: Z, -1: Z})


def model_base() -> Expression:
    return Expression("A", ())

