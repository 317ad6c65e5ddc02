"""Command line: ``kwb negk|nk|bhs-check|contract-check|kh|report``.

Exit status 0 means pass, 1 a failed check, a gap or an unstable colimit,
2 an input error.  JSON output is deterministic.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .delooper import (
    EngineSource,
    Expression,
    KSource,
    SourceGap,
    bhs_check,
    bhs_extended_source,
    contracted_check,
    group_dict,
    group_text,
    kh_groups,
    negative_k,
    nk,
    shadow_tower,
    twisted_bhs_check,
)
from .delooper.expression import Adjunction
from .fixtures import fixture_path
from .oracle import OracleError, load
from .rings import UnsupportedError, parse_ring

PASSING = {"pass", "consistent-up-to-extension"}


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    instance: dict[str, Any]
    results: list[dict[str, Any]] = field(default_factory=list)
    verdict: str = "pass"

    def to_dict(self) -> dict[str, Any]:
        return {"command": self.command, "instance": self.instance, "results": self.results, "verdict": self.verdict}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Report:
        return cls(d["command"], d["instance"], list(d["results"]), d["verdict"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict in PASSING else 1


# ---------------------------------------------------------------------------
# selectors

_SUFFIX = re.compile(r"\[([A-Za-z_]\w*)(\^-1)?(?:,\s*\1\^-1)?\]")


def parse_selector(text: str) -> Expression:
    """``F3[t][s,s^-1]`` to the expression over ``F3`` with two variables."""
    s = text.replace(" ", "")
    k = s.find("[")
    head, tail = (s, "") if k < 0 else (s[:k], s[k:])
    try:
        R = parse_ring(head)
    except ValueError as e:
        raise InputError(str(e)) from None
    chain = []
    while tail:
        m = _SUFFIX.match(tail)
        if m is None:
            raise InputError(f"cannot parse ring suffix {tail!r}")
        inner = m.group(0)[1:-1]
        kind = "laurent" if "," in inner else ("negpoly" if m.group(2) else "poly")
        chain.append(Adjunction(kind))
        tail = tail[m.end():]
    return Expression(R, tuple(chain))


def parse_window(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if m is None:
        raise InputError(f"window must look like LO..HI, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise InputError(f"empty window {text!r}")
    return lo, hi


def resolve_oracle(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    q = fixture_path(p.name)
    if q.exists():
        return q
    raise InputError(f"no oracle file {path!r}")


def make_sources(args) -> tuple[list[KSource], Expression, dict[str, Any]]:
    """Candidate sources in order of preference, the expression and the
    instance descriptor.  ``auto`` tries the engine first and falls back to
    the bhs-extended model for the whole command."""
    if args.ring and args.oracle:
        raise InputError("give --ring or --oracle, not both")
    if args.oracle:
        try:
            src = load(resolve_oracle(args.oracle))
        except OracleError as e:
            raise InputError(str(e)) from None
        name = args.object
        if name is None:
            bases = src.base_objects()
            if not bases:
                raise InputError("oracle file declares no base object")
            X = bases[0]
            name = src.names[X]
        elif name in src.objects:
            X = src.objects[name]
        else:
            raise InputError(f"oracle has no object {name!r}")
        return [src], X, {"oracle": str(args.oracle), "object": name, "mode": "oracle"}
    if not args.ring:
        raise InputError("one of --ring or --oracle is required")
    if getattr(args, "twist", None):
        raise InputError("--twist needs oracle data")
    X = parse_selector(args.ring)
    inst = {"ring": args.ring, "mode": args.mode}
    if args.mode == "independent":
        return [EngineSource()], X, inst
    try:
        ext = bhs_extended_source(X.base)
    except (SourceGap, UnsupportedError) as e:
        if args.mode == "bhs-extended":
            raise InputError(str(e)) from None
        return [EngineSource()], X, inst
    return ([ext] if args.mode == "bhs-extended" else [EngineSource(), ext]), X, inst


def run_with_fallback(args, body) -> Report:
    sources, X, inst = make_sources(args)
    rep = None
    for k, src in enumerate(sources):
        rep = body(src, X, dict(inst, mode=src.mode) if k else inst)
        if rep.verdict != "gap":
            break
    if len(sources) > 1:
        rep.instance["mode"] = f"auto ({sources[k].mode})"
    return rep


# ---------------------------------------------------------------------------
# commands


def _combine(verdicts: list[str]) -> str:
    if any(v not in PASSING for v in verdicts):
        for v in ("fail", "splitting missing", "unstable", "gap"):
            if v in verdicts:
                return v
        return next(v for v in verdicts if v not in PASSING)
    return "consistent-up-to-extension" if "consistent-up-to-extension" in verdicts else "pass"


def cmd_negk(args) -> Report:
    return run_with_fallback(args, lambda src, X, inst: _negk(args, src, X, inst))


def _negk(args, src, X, inst) -> Report:
    res = negative_k(src, X, args.depth)
    rows = [{"degree": -(k + 1), "group": group_dict(g), "text": group_text(g), "provenance": p}
            for k, (g, p) in enumerate(zip(res.groups, res.provenance))]
    if res.gap:
        rows.append({"degree": -(len(res.groups) + 1), "gap": res.gap})
    return Report("negk", {**inst, "depth": args.depth}, rows, "pass" if res.complete else "gap")


def cmd_nk(args) -> Report:
    return run_with_fallback(args, lambda src, X, inst: _nk(args, src, X, inst))


def _nk(args, src, X, inst) -> Report:
    rows, vs = [], []
    for sign in ("+", "-"):
        try:
            r = nk(src, X, args.degree, sign)
        except SourceGap as e:
            rows.append({"degree": args.degree, "sign": sign, "verdict": "gap", "detail": str(e)})
            vs.append("gap")
            continue
        except ArithmeticError as e:
            rows.append({"degree": args.degree, "sign": sign, "verdict": "fail", "detail": str(e)})
            vs.append("fail")
            continue
        d = r.to_dict()
        d["verdict"] = "pass" if r.splitting_ok else "fail"
        rows.append(d)
        vs.append(d["verdict"])
    return Report("nk", {**inst, "degree": args.degree}, rows, _combine(vs))


def cmd_bhs(args) -> Report:
    return run_with_fallback(args, lambda src, X, inst: _bhs(args, src, X, inst))


def _bhs(args, src, X, inst) -> Report:
    if args.twist:
        r = twisted_bhs_check(src, X, args.degree, args.twist)
        return Report("bhs-check", {**inst, "degree": args.degree, "twist": args.twist}, [r.to_dict()], r.verdict)
    r = bhs_check(src, X, args.degree)
    return Report("bhs-check", {**inst, "degree": args.degree}, [r.to_dict()], r.verdict)


def cmd_contract(args) -> Report:
    return run_with_fallback(args, lambda src, X, inst: _contract(args, src, X, inst))


def _contract(args, src, X, inst) -> Report:
    w = parse_window(args.window)
    r = contracted_check(src, X, args.c, w)
    return Report("contract-check", {**inst, "c": args.c, "window": list(w)}, [r.to_dict()], r.verdict)


def cmd_kh(args) -> Report:
    return run_with_fallback(args, lambda src, X, inst: _kh(args, src, X, inst))


def _kh(args, src, X, inst) -> Report:
    r = kh_groups(src, X, args.degree, args.bound)
    return Report("kh", {**inst, "degree": args.degree, "bound": args.bound}, [r.to_dict()], r.verdict)


def cmd_report(args) -> Report:
    return run_with_fallback(args, lambda src, X, inst: _report(args, src, X, inst))


def _report(args, src, X, inst) -> Report:
    lo, hi = parse_window(args.window)
    rows, vs = [], []

    def add(section: str, d: dict[str, Any], verdict: str) -> None:
        rows.append({"section": section, **d})
        vs.append(verdict)

    res = negative_k(src, X, args.depth)
    add("negk", {"groups": [group_dict(g) for g in res.groups], "provenance": res.provenance, "gap": res.gap},
        "pass" if res.complete else "gap")
    for i in range(lo, hi + 1):
        r = bhs_check(src, X, i)
        add("bhs-check", r.to_dict(), r.verdict)
    c = contracted_check(src, X, args.c, (lo, hi))
    add("contract-check", c.to_dict(), c.verdict)
    for i in range(max(lo, 0), hi + 1):
        k = kh_groups(src, X, i, args.bound)
        add("kh", k.to_dict(), k.verdict)
    t = shadow_tower(src, X, (lo, hi), args.depth, args.bound)
    add("tower", t.to_dict(), t.verdict)
    return Report("report", {**inst, "window": [lo, hi], "c": args.c}, rows, _combine(vs))


# ---------------------------------------------------------------------------
# text rendering


def render_text(rep: Report) -> str:
    head = ", ".join(f"{k}={v}" for k, v in sorted(rep.instance.items()))
    lines = [f"{rep.command}: {head}"]
    for r in rep.results:
        lines.extend(_render_row(rep.command, r))
    lines.append(f"verdict: {rep.verdict}")
    return "\n".join(lines) + "\n"


def _g(d: dict[str, Any] | None) -> str:
    if d is None:
        return "?"
    parts = [f"Z/{n}" for n in d["invariant_factors"]]
    if d["free_rank"]:
        parts.append("Z" if d["free_rank"] == 1 else f"Z^{d['free_rank']}")
    return " + ".join(parts) or "0"


def _render_row(command: str, r: dict[str, Any]) -> list[str]:
    section = r.get("section", command)
    if section == "negk" and "groups" in r:
        out = [f"  K_{-(k + 1)} = {_g(g)}   [{p}]" for k, (g, p) in enumerate(zip(r["groups"], r["provenance"]))]
        return out + ([f"  gap: {r['gap']}"] if r.get("gap") else [])
    if section == "negk":
        if "gap" in r:
            return [f"  K_{r['degree']}: gap ({r['gap']})"]
        return [f"  K_{r['degree']} = {r['text']}   [{r['provenance']}]"]
    if section == "nk":
        if r["verdict"] == "gap":
            return [f"  NK_{r['degree']}{r['sign']}: gap ({r['detail']})"]
        return [f"  NK_{r['degree']}{r['sign']} = {_g(r['group'])}   splitting {'ok' if r['splitting_ok'] else 'FAILS'}"]
    if section == "bhs-check":
        out = [f"  degree {r['degree']}: {r['verdict']}"]
        for k, g in r.get("summands", {}).items():
            out.append(f"    {k} = {_g(g)}")
        if r.get("target") is not None:
            out.append(f"    target = {_g(r['target'])}")
        if r.get("torus"):
            t = r["torus"]
            out.append(f"    torus pieces: coker {_g(t['coker_piece'])}, ker {_g(t['ker_piece'])}, "
                       f"resolved {_g(t['resolved']) if t['resolved'] else 'not forced'}")
        if r.get("witness") is not None:
            out.append("    witness:")
            out.extend(f"      {row}" for row in r["witness"])
        if r.get("detail"):
            out.append(f"    {r['detail']}")
        return out
    if section == "contract-check":
        out = [f"  c = {r['c']}, window {r['window'][0]}..{r['window'][1]}: {r['verdict']}"]
        for d in r["degrees"]:
            out.append(f"    degree {d['degree']}: {d['verdict']}" + (f" ({d['detail']})" if d["detail"] else ""))
        return out
    if section == "kh":
        g = _g(r["group"]) if r["group"] else "none"
        return [f"  KH_{r['degree']} = {g}, stable at n = {r['stable_index']}: {r['verdict']}"
                + (f" ({r['detail']})" if r["detail"] else "")]
    if section == "tower":
        out = [f"  tower: {r['verdict']}, c_max = {r['c_max']}"]
        for i, cr in r["colimits"].items():
            where = f"stable from n = {cr['stable_index']}" if cr["stable"] else "not stable"
            out.append(f"    pi_{i} colim = {_g(cr['group']) if cr['group'] else '?'} ({where})")
        out.extend(f"    gap: {g}" for g in r["gaps"][:3])
        return out
    return [f"  {json.dumps(r, sort_keys=True)}"]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kwb", description="K-theory workbench")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--ring", help="Z, Fq, Zmod<n>, optionally with [t], [t^-1], [t,t^-1] suffixes")
        sp.add_argument("--oracle", help="oracle JSON file (looked up in KWB_FIXTURES when not found)")
        sp.add_argument("--object", help="object of the oracle file (default: first base object)")
        sp.add_argument("--mode", choices=("auto", "independent", "bhs-extended"), default="auto")
        sp.add_argument("--format", choices=("json", "text"), default="text")
        return sp

    common(sub.add_parser("negk", help="negative K-groups")).add_argument("--depth", type=int, default=2)
    common(sub.add_parser("nk", help="NK groups and their splitting")).add_argument("--degree", type=int, default=0)
    sp = common(sub.add_parser("bhs-check", help="Bass-Heller-Swan comparison"))
    sp.add_argument("--degree", type=int, default=0)
    sp.add_argument("--twist", help="twist label (oracle data only)")
    sp = common(sub.add_parser("contract-check", help="c-contractedness over a window"))
    sp.add_argument("--c", type=int, default=0)
    sp.add_argument("--window", default="-3..1")
    sp = common(sub.add_parser("kh", help="homotopy K-theory"))
    sp.add_argument("--degree", type=int, default=0)
    sp.add_argument("--bound", type=int, default=4)
    sp = common(sub.add_parser("report", help="everything above plus the delooping tower"))
    sp.add_argument("--window", default="-1..1")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--bound", type=int, default=4)
    sp.add_argument("--c", type=int, default=0)
    return p


COMMANDS = {"negk": cmd_negk, "nk": cmd_nk, "bhs-check": cmd_bhs, "contract-check": cmd_contract,
            "kh": cmd_kh, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let "--window -1..1" through: argparse takes "-1..1" for an option
    for k in range(len(argv) - 1):
        if argv[k] == "--window":
            argv[k:k + 2] = [f"--window={argv[k + 1]}", ""]
    argv = [a for a in argv if a != ""]
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        for name in ("depth", "bound"):
            if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
                raise InputError(f"--{name} must be non-negative")
        rep = COMMANDS[args.command](args)
    except InputError as e:
        print(f"kwb: error: {e}", file=sys.stderr)
        return 2
    except UnsupportedError as e:
        print(f"kwb: gap: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(rep.to_json() if args.format == "json" else render_text(rep))
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
