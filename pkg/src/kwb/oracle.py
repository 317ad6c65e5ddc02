"""User-supplied K-group tables: loading, validation and export.

File format (JSON, schema version ``"1"``)::

    {
      "schema_version": "1",
      "mode": "oracle",
      "objects": [{"name": "A", "base": "A", "chain": ""},
                  {"name": "A[t]", "base": "A", "chain": "poly"}, ...],
      "degrees": ["-1", "1"],
      "groups": [{"object": "A", "degree": "0",
                  "free_rank": "1", "invariant_factors": ["2"]}, ...],
      "maps": [{"name": "i_plus", "domain": "A", "codomain": "A[t]",
                "degree": "0", "position": "0", "matrix": [["1", "0"], ...]}, ...],
      "nil": [{"object": "A", "degree": "0",
               "k_nil": {...group...}, "nk_shift": {...group...}}]
    }

Integers are decimal strings (plain JSON integers are accepted on input).
A group with free rank ``r`` and invariant factors ``d_1 | ... | d_k`` has
generators ``Z/d_1, ..., Z/d_k, Z, ..., Z`` in that order, and map matrices
are written in these generators (``matrix[a][b]`` is the coefficient of
codomain generator ``a`` in the image of domain generator ``b``).

Map names are the structure maps ``i0``, ``i_plus``, ``i_minus``, ``j_plus``,
``j_minus``, ``ev0_plus``, ``ev0_minus``, ``phi_inverse``, optionally ``a``,
and ``rho``.  ``position`` defaults to the outermost variable.  A ``rho``
entry goes from ``X[t,t^-1]`` to the object ``X`` and its matrix has the rows
of ``K(X) + K(X[t]) + K(X[t^-1])``; composed with the NK retractions it must
be a retraction of the restricted BHS map.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .abgroup import FgAbGroup, GroupHom, IllDefinedHomError, ShapeError, direct_sum, has_retraction, hom_into_sum
from .delooper.derived import nk_data, restricted_bhs
from .delooper.expression import KINDS, Expression, default_position, format_chain, parse_chain, target_expression
from .delooper.sources import KSource, SourceGap

SCHEMA_VERSION = "1"
TOP_KEYS = ("schema_version", "mode", "objects", "degrees", "groups", "maps")
MAP_NAMES = ("i0", "i_plus", "i_minus", "j_plus", "j_minus", "ev0_plus", "ev0_minus", "phi_inverse", "a", "rho")
MAX_GENERATORS = 4096
_INT = re.compile(r"-?[0-9]+\Z")


class OracleError(ValueError):
    """Invalid oracle data.  ``kind`` is parse, schema, map or identity."""

    def __init__(self, kind: str, location: str, message: str) -> None:
        super().__init__(f"{kind} error at {location}: {message}")
        self.kind = kind
        self.location = location
        self.message = message


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool):
        raise OracleError("schema", where, "expected an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and _INT.match(v.strip()):
        try:
            return int(v)
        except ValueError:  # beyond the interpreter's digit limit
            raise OracleError("schema", where, "integer too long") from None
    raise OracleError("schema", where, f"expected an integer, got {v!r}")


def _need(d: Any, key: str, where: str, typ: type | tuple) -> Any:
    if not isinstance(d, dict):
        raise OracleError("schema", where, "expected an object")
    if key not in d:
        raise OracleError("schema", f"{where}.{key}", "missing field")
    v = d[key]
    if not isinstance(v, typ) or isinstance(v, bool) and typ is not bool:
        raise OracleError("schema", f"{where}.{key}", f"wrong type {type(v).__name__}")
    return v


def _group(d: Any, where: str) -> FgAbGroup:
    fr = _int(_need(d, "free_rank", where, (str, int)), f"{where}.free_rank")
    fs_raw = _need(d, "invariant_factors", where, list)
    fs = [_int(x, f"{where}.invariant_factors[{k}]") for k, x in enumerate(fs_raw)]
    if fr < 0:
        raise OracleError("schema", f"{where}.free_rank", "negative rank")
    if fr + len(fs) > MAX_GENERATORS:
        raise OracleError("schema", where, f"more than {MAX_GENERATORS} generators")
    for k, x in enumerate(fs):
        if x < 2:
            raise OracleError("schema", f"{where}.invariant_factors[{k}]", "factors must be at least 2")
        if k and x % fs[k - 1]:
            raise OracleError("schema", f"{where}.invariant_factors[{k}]", "factors must form a divisibility chain")
    return FgAbGroup.from_invariants(fr, fs)


def group_json(G: FgAbGroup) -> dict[str, Any]:
    fr, fs = G.canonical_form
    return {"free_rank": str(fr), "invariant_factors": [str(d) for d in fs]}


class OracleSource(KSource):
    """A validated table of groups and maps.

    ``tag`` is the mode recorded in the file (``oracle``, ``independent``,
    ``bhs-extended``, ...); the source itself always reports mode ``oracle``.
    """

    mode = "oracle"

    def __init__(self, data: dict[str, Any], validate: bool = True, origin: str = "<memory>") -> None:
        super().__init__()
        self.origin = origin
        self.raw = data
        self._parse(data)
        if validate:
            self._check_maps()
            self._check_identities()

    # -- parsing ---------------------------------------------------------
    def _parse(self, data: Any) -> None:
        if not isinstance(data, dict):
            raise OracleError("schema", "$", "top level must be an object")
        for k in TOP_KEYS:
            if k not in data:
                raise OracleError("schema", f"$.{k}", "missing field")
        if data["schema_version"] != SCHEMA_VERSION:
            raise OracleError("schema", "$.schema_version", f"unsupported version {data['schema_version']!r}")
        self.tag = _need(data, "mode", "$", str)
        degs = _need(data, "degrees", "$", list)
        if len(degs) != 2:
            raise OracleError("schema", "$.degrees", "expected [lo, hi]")
        lo, hi = _int(degs[0], "$.degrees[0]"), _int(degs[1], "$.degrees[1]")
        if lo > hi:
            raise OracleError("schema", "$.degrees", "lo exceeds hi")
        self.window = (lo, hi)

        self.objects: dict[str, Expression] = {}
        self.names: dict[Expression, str] = {}
        for k, o in enumerate(_need(data, "objects", "$", list)):
            w = f"$.objects[{k}]"
            name = _need(o, "name", w, str)
            base = _need(o, "base", w, str)
            chain = _need(o, "chain", w, str)
            try:
                X = Expression(base, parse_chain(chain))
            except ValueError as e:
                raise OracleError("schema", f"{w}.chain", str(e)) from None
            if name in self.objects:
                raise OracleError("schema", f"{w}.name", f"duplicate object {name!r}")
            if X in self.names:
                raise OracleError("schema", f"{w}.chain", f"same expression as {self.names[X]!r}")
            self.objects[name] = X
            self.names[X] = name

        self.groups: dict[tuple[str, int], FgAbGroup] = {}
        for k, g in enumerate(_need(data, "groups", "$", list)):
            w = f"$.groups[{k}]"
            obj = self._obj(_need(g, "object", w, str), f"{w}.object")
            deg = self._deg(_need(g, "degree", w, (str, int)), f"{w}.degree")
            if (obj, deg) in self.groups:
                raise OracleError("schema", w, f"duplicate group for {obj!r} in degree {deg}")
            self.groups[(obj, deg)] = _group(g, w)

        self.maps: dict[tuple[str, str, int, int | None], GroupHom] = {}
        self.map_where: dict[tuple[str, str, int, int | None], str] = {}
        self.map_codomain: dict[tuple[str, str, int, int | None], str] = {}
        for k, m in enumerate(_need(data, "maps", "$", list)):
            self._parse_map(m, f"$.maps[{k}]")

        self.nil: dict[tuple[str, int], tuple[FgAbGroup, FgAbGroup]] = {}
        nil = data.get("nil", [])
        if not isinstance(nil, list):
            raise OracleError("schema", "$.nil", "expected a list")
        for k, e in enumerate(nil):
            w = f"$.nil[{k}]"
            obj = self._obj(_need(e, "object", w, str), f"{w}.object")
            deg = _int(_need(e, "degree", w, (str, int)), f"{w}.degree")
            if (obj, deg) in self.nil:
                raise OracleError("schema", w, "duplicate nil entry")
            self.nil[(obj, deg)] = (_group(_need(e, "k_nil", w, dict), f"{w}.k_nil"),
                                    _group(_need(e, "nk_shift", w, dict), f"{w}.nk_shift"))

    def _obj(self, name: str, where: str) -> str:
        if name not in self.objects:
            raise OracleError("schema", where, f"unknown object {name!r}")
        return name

    def _deg(self, v: Any, where: str) -> int:
        d = _int(v, where)
        if not self.window[0] <= d <= self.window[1]:
            raise OracleError("schema", where, f"degree {d} outside the window {self.window}")
        return d

    def _parse_map(self, m: Any, w: str) -> None:
        name = _need(m, "name", w, str)
        if name not in MAP_NAMES:
            raise OracleError("schema", f"{w}.name", f"unknown map {name!r}")
        dom = self._obj(_need(m, "domain", w, str), f"{w}.domain")
        cod = self._obj(_need(m, "codomain", w, str), f"{w}.codomain")
        deg = self._deg(_need(m, "degree", w, (str, int)), f"{w}.degree")
        X, Y = self.objects[dom], self.objects[cod]
        pos = None
        if name not in ("phi_inverse", "rho"):
            if "position" in m:
                pos = _int(m["position"], f"{w}.position")
            else:
                pos = default_position(X, name)
            expected = self._expected_target(X, name, pos, Y, f"{w}.position")
            if expected != Y:
                raise OracleError("schema", f"{w}.codomain", f"{name} at {pos} on {dom!r} does not land in {cod!r}")
        elif name == "phi_inverse":
            if X != Y:
                raise OracleError("schema", f"{w}.codomain", "phi_inverse must be an endomorphism")
        else:  # rho
            if not (len(X) == len(Y) + 1 and X.chain[:-1] == Y.chain and X.chain[-1].kind == "laurent"
                    and X.base == Y.base):
                raise OracleError("schema", f"{w}.codomain", "rho goes from X[t,t^-1] to X")
        tdeg = deg + 1 if name == "a" else deg
        if name == "a" and not tdeg <= self.window[1]:
            raise OracleError("schema", f"{w}.degree", "target degree outside the window")
        key = (name, dom, deg, pos)
        if key in self.maps or key in self.map_where:
            raise OracleError("schema", w, "duplicate map")
        G = self._declared(dom, deg, f"{w}.domain")
        if name == "rho":
            parts = [self._declared(cod, deg, f"{w}.codomain")]
            for k in ("poly", "negpoly"):
                nm = self.names.get(Y.extend(k))
                if nm is None:
                    raise OracleError("schema", f"{w}.codomain", f"rho needs the object {Y.extend(k)}")
                parts.append(self._declared(nm, deg, f"{w}.codomain"))
            H = direct_sum(parts).group
        else:
            H = self._declared(cod, tdeg, f"{w}.codomain")
        rows = _need(m, "matrix", w, list)
        if len(rows) != H.num_generators:
            raise OracleError("schema", f"{w}.matrix", f"expected {H.num_generators} rows, got {len(rows)}")
        M = []
        for a, r in enumerate(rows):
            if not isinstance(r, list) or len(r) != G.num_generators:
                raise OracleError("schema", f"{w}.matrix[{a}]", f"expected a row of {G.num_generators} entries")
            M.append(tuple(_int(x, f"{w}.matrix[{a}][{b}]") for b, x in enumerate(r)))
        self.map_where[key] = w
        self.map_codomain[key] = cod
        self.maps[key] = GroupHom(G, H, tuple(M), check=False)

    def _expected_target(self, X: Expression, name: str, pos: int, Y: Expression, where: str) -> Expression:
        n = len(X)
        limit = n if name in ("i0", "i_plus", "i_minus", "a") else n - 1
        if not 0 <= pos <= limit:
            raise OracleError("schema", where, f"position {pos} outside 0..{limit}")
        twist = None
        if name in ("i0", "i_plus", "i_minus", "a") and len(Y) == n + 1:
            twist = Y.chain[pos].twist
        try:
            return target_expression(X, name, pos, twist)
        except (ValueError, IndexError) as e:
            raise OracleError("schema", where, str(e)) from None

    def _declared(self, obj: str, deg: int, where: str) -> FgAbGroup:
        if (obj, deg) not in self.groups:
            raise OracleError("schema", where, f"no group declared for {obj!r} in degree {deg}")
        return self.groups[(obj, deg)]

    # -- validation ------------------------------------------------------
    def _check_maps(self) -> None:
        for key, f in self.maps.items():
            try:
                GroupHom(f.domain, f.codomain, f.matrix)
            except (IllDefinedHomError, ShapeError) as e:
                raise OracleError("map", self.map_where[key], f"{key[0]} is not well defined: {e}") from None

    def _get(self, name, obj, deg, pos):
        return self.maps.get((name, obj, deg, pos))

    def _check_identities(self) -> None:
        for (name, dom, deg, pos), inc in list(self.maps.items()):
            if name not in ("i_plus", "i_minus"):
                continue
            sign = "plus" if name == "i_plus" else "minus"
            ynm = self.map_codomain[(name, dom, deg, pos)]
            ev = self._get(f"ev0_{sign}", ynm, deg, pos)
            if ev is not None and not (ev @ inc).equals(GroupHom.identity(inc.domain)):
                raise OracleError("identity", f"object {dom!r} degree {deg} position {pos}",
                                  f"ev0_{sign} o i_{sign} is not the identity")
            j = self._get(f"j_{sign}", ynm, deg, pos)
            i0 = self._get("i0", dom, deg, pos)
            if j is not None and i0 is not None:
                if not j.codomain.same_presentation(i0.codomain):
                    continue
                if not (j @ inc).equals(i0):
                    raise OracleError("identity", f"object {dom!r} degree {deg} position {pos}",
                                      f"i0 differs from j_{sign} o i_{sign}")
        for (name, dom, deg, pos), r in list(self.maps.items()):
            if name != "rho":
                continue
            base = self.objects[dom].remove(len(self.objects[dom]) - 1)
            where = f"object {self.names[base]!r} degree {deg}"
            try:
                rho = self.rho(base, deg)
                B = restricted_bhs(self, base, deg)
            except (SourceGap, ArithmeticError) as e:
                raise OracleError("identity", where, f"rho needs the data around it: {e}") from None
            if not (rho @ B.map).equals(GroupHom.identity(B.map.domain)):
                raise OracleError("identity", where, "rho o BHS_r is not the identity")

    # -- KSource interface ----------------------------------------------
    def _name(self, X: Expression) -> str:
        if X not in self.names:
            raise SourceGap(f"oracle has no object {X}")
        return self.names[X]

    def _group(self, X, i):
        key = (self._name(X), i)
        if key not in self.groups:
            raise SourceGap(f"oracle has no group for {key[0]!r} in degree {i}")
        return self.groups[key]

    def _struct(self, X, kind, i, pos, twist=None):
        nm = self._name(X)
        Y = target_expression(X, kind, pos, twist)
        self._name(Y)
        f = self._get(kind, nm, i, pos)
        if f is None:
            raise SourceGap(f"oracle has no {kind} at position {pos} on {nm!r} in degree {i}")
        if self.map_codomain[(kind, nm, i, pos)] != self.names[Y]:
            raise SourceGap(f"oracle {kind} on {nm!r} does not land in {Y}")
        return f

    def serves_a(self):
        return any(k[0] == "a" for k in self.maps)

    def rho(self, X: Expression, i: int) -> GroupHom | None:
        """Declared retraction of ``BHS_r`` at ``X`` in degree ``i``, or ``None``."""
        L = X.extend("laurent")
        if L not in self.names:
            return None
        r = self._get("rho", self.names[L], i, None)
        if r is None:
            return None
        nkp, nkm = nk_data(self, X, i, "+"), nk_data(self, X, i, "-")
        G0 = self.group(X, i)
        S = direct_sum([G0, nkp.ev0.domain, nkm.ev0.domain])
        # K(X) + K(X[t]) + K(X[t^-1]) -> K(X) + NK+ + NK-
        T = direct_sum([G0, nkp.group, nkm.group])
        comp = hom_into_sum(S.group, T, [S.projections[0], nkp.retraction @ S.projections[1],
                                         nkm.retraction @ S.projections[2]])
        return comp @ GroupHom(r.domain, S.group, r.matrix, check=False)

    def nil_table(self, X: Expression, i: int):
        return self.nil.get((self.names.get(X, ""), i))

    def provenance(self, X, i):
        return f"oracle ({self.tag}, {self.origin})"

    def describe(self):
        return f"oracle {self.origin} (tagged {self.tag})"

    def base_objects(self) -> list[Expression]:
        return [X for X in self.objects.values() if not X.chain]


# ---------------------------------------------------------------------------
# entry points


def loads(text: str, validate: bool = True, origin: str = "<string>") -> OracleSource:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise OracleError("parse", f"line {e.lineno} column {e.colno}", e.msg) from None
    return OracleSource(data, validate=validate, origin=origin)


def load(path: str | Path, validate: bool = True) -> OracleSource:
    """Load and validate an oracle file; invalid data raises :class:`OracleError`."""
    p = Path(path)
    return loads(p.read_text(), validate=validate, origin=p.name)


def _matrix_json(f: GroupHom) -> list[list[str]]:
    c = f.canonical()
    out = []
    for a, r in enumerate(c.matrix):
        fs = c.codomain.invariant_factors
        d = fs[a] if a < len(fs) else 0
        out.append([str(x % d if d else x) for x in r])
    return out


def export(
    source: KSource,
    expressions: list[Expression],
    window: tuple[int, int],
    path: str | Path | None = None,
    include_rho: bool = True,
    names: dict[Expression, str] | None = None,
) -> dict[str, Any]:
    """Serialize what ``source`` serves on the given expressions and degrees.

    Structure maps are included whenever both ends are among the
    expressions; ``rho`` is included for every ``X`` with its three
    extensions present, found by the retraction solver.  Groups the source
    does not serve are left out, together with every map touching them.
    """
    lo, hi = window
    exprs = list(dict.fromkeys(expressions))
    names = dict(names or {})
    for X in exprs:
        names.setdefault(X, str(X))
    objects = [{"name": names[X], "base": str(X.base), "chain": format_chain(X.chain)} for X in exprs]
    groups, maps = [], []
    served: dict[tuple[Expression, int], FgAbGroup] = {}
    for X in exprs:
        for i in range(lo, hi + 1):
            try:
                G = source.group(X, i)
            except SourceGap:
                continue
            served[(X, i)] = G
            groups.append({"object": names[X], "degree": str(i), **group_json(G)})
    present = set(exprs)
    for X in exprs:
        for i in range(lo, hi + 1):
            for kind in ("i0", "i_plus", "i_minus", "j_plus", "j_minus", "ev0_plus", "ev0_minus", "a"):
                if kind == "a" and (i + 1 > hi or not source.serves_a()):
                    continue
                inserting = kind in ("i0", "i_plus", "i_minus", "a")
                for pos in range(len(X) + (1 if inserting else 0)):
                    twists = {None}
                    if inserting:
                        twists |= {Y.chain[pos].twist for Y in present if len(Y) == len(X) + 1 and len(Y.chain) > pos}
                    for tw in sorted(twists, key=lambda t: (t is not None, t or "")):
                        try:
                            Y = target_expression(X, kind, pos, tw)
                        except ValueError:
                            continue
                        if Y not in present or (X, i) not in served or (Y, i + (kind == "a")) not in served:
                            continue
                        try:
                            f = source.struct(X, kind, i, pos, tw)
                        except SourceGap:
                            continue
                        maps.append({"name": kind, "domain": names[X], "codomain": names[Y], "degree": str(i),
                                     "position": str(pos), "matrix": _matrix_json(f)})
            try:
                if (X, i) not in served:
                    raise SourceGap("not served")
                f = source.struct(X, "phi_inverse", i)
                maps.append({"name": "phi_inverse", "domain": names[X], "codomain": names[X], "degree": str(i),
                             "matrix": _matrix_json(f)})
            except SourceGap:
                pass
    if include_rho:
        for X in exprs:
            ext = [X.extend(k) for k in ("laurent", "poly", "negpoly")]
            if not all(E in present for E in ext):
                continue
            for i in range(lo, hi + 1):
                try:
                    B = restricted_bhs(source, X, i)
                except (SourceGap, ArithmeticError):
                    continue
                rho = has_retraction(B.map)
                if rho is None:
                    continue
                D = B.domain
                parts = [D.projections[0] @ rho, B.nk_plus.inclusion @ D.projections[1] @ rho,
                         B.nk_minus.inclusion @ D.projections[2] @ rho]
                rows: list[list[str]] = []
                for p in parts:
                    rows.extend(_matrix_json(p))
                maps.append({"name": "rho", "domain": names[ext[0]], "codomain": names[X], "degree": str(i),
                             "matrix": rows})
    data: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "mode": getattr(source, "tag", source.mode),
        "objects": objects,
        "degrees": [str(lo), str(hi)],
        "groups": groups,
        "maps": maps,
    }
    nil_rows = []
    table = getattr(source, "nil_table", None)
    if table is not None:
        for X in exprs:
            for i in range(lo, hi + 1):
                e = table(X, i)
                if e is not None:
                    nil_rows.append({"object": names[X], "degree": str(i), "k_nil": group_json(e[0]),
                                     "nk_shift": group_json(e[1])})
    if nil_rows:
        data["nil"] = nil_rows
    if path is not None:
        Path(path).write_text(dumps(data))
    return data


def dumps(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=1) + "\n"


def standard_slice(base: Any) -> list[Expression]:
    """``X``, ``X[t]``, ``X[t^-1]`` and ``X[t,t^-1]`` for a base."""
    X = Expression(base, ())
    return [X, X.extend("poly"), X.extend("negpoly"), X.extend("laurent")]
