"""Command-line front end: ``rational-ktheory <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 a mathematical verdict the budget
could not settle (undetermined orbits, unresolved cases, ambiguous tuples).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .config import Budget, Config
from .cycle_analysis import FatouSpec, fatou_census
from .exceptions import (
    BudgetExceeded,
    CoprimalityViolation,
    IncompleteSpec,
    MissingHValue,
    NonConvergence,
    SpecValidationError,
)
from .graph_algebra import DirectedGraph, builtin_table, graph_k_theory
from .invariants import (
    Ambiguous,
    CycleLengthTuple,
    fatou_count_sequence,
    lemma_number_bruteforce,
    recover_tuple,
)
from .k_theory import build_herman_matrix, k_fatou, k_julia, k_sphere
from .quadratic import QuadCase, classify_quadratic
from .rational_map import RationalMap
from .render import Rect, render
from .schemas import SCHEMAS
from .shift_model import id_minus_phi_invariants

EXIT_OK, EXIT_INPUT, EXIT_UNRESOLVED = 0, 1, 2

# options whose values may start with '-' (negative coordinates)
_VALUE_OPTIONS = ("--quadratic-c", "--c", "--rect")


class InputError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError("usage", f"{self.prog}: {message}")


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) > 2:
        raise InputError("parse", f"expected re,im but got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise InputError("parse", f"expected re,im but got {text!r}") from None
    return complex(vals[0], vals[1] if len(vals) > 1 else 0.0)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError("parse", f"expected comma-separated integers, got {text!r}") from None


def _read_json(source: str | None):
    if source is None or source == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError("parse", f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("parse", f"invalid JSON: {exc}") from None


def _coeff(v) -> complex:
    if isinstance(v, bool):
        raise InputError("validation", "coefficients must be numbers or [re, im] pairs")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise InputError("validation", f"bad coefficient {v!r}; use a number or [re, im]")


def map_from_json(data) -> RationalMap:
    """Map JSON: {"num": [...], "den": [...]} with coefficients lowest degree
    first, or {"quadratic_c": [re, im]}."""
    if not isinstance(data, dict):
        raise InputError("validation", "map JSON must be an object")
    if "quadratic_c" in data:
        if set(data) != {"quadratic_c"}:
            raise InputError("validation", "quadratic_c excludes other keys")
        return RationalMap.quadratic(_coeff(data["quadratic_c"]))
    unknown = set(data) - {"num", "den"}
    if unknown or "num" not in data:
        raise InputError("validation", "map JSON needs 'num' (and optionally 'den') only")
    num, den = data["num"], data.get("den", [1])
    if not isinstance(num, list) or not isinstance(den, list) or not num or not den:
        raise InputError("validation", "'num' and 'den' must be nonempty lists")
    return RationalMap.from_coeffs([_coeff(v) for v in num], [_coeff(v) for v in den])


def map_to_json(r: RationalMap) -> dict:
    def coeffs(p):
        return [[float(c.real), float(c.imag)] for c in p.coeffs]
    return {"num": coeffs(r.numerator), "den": coeffs(r.denominator)}


def k_report(spec: FatouSpec) -> tuple[dict, int]:
    """The three K-theory results for a spec, with the exit status."""
    notes = []
    sphere = fatou = julia = None
    if spec.c_sphere >= 2:
        sphere = k_sphere(spec.degree, spec.c_sphere).to_json()
    else:
        notes.append("spec lists fewer than two critical points; sphere algebra omitted")
    hm = build_herman_matrix(spec).to_json() if spec.h else None
    status = EXIT_OK
    try:
        julia = k_julia(spec).to_json()
        fatou = k_fatou(spec.c_fatou, spec.f, spec.h).to_json()
    except IncompleteSpec as exc:
        notes.append(str(exc))
        status = EXIT_UNRESOLVED
    out = {"sphere": sphere, "fatou": fatou, "julia": julia, "herman_matrix": hm}
    if notes:
        out["notes"] = notes
    return out, status


# --------------------------------------------------------------------------
# subcommands; each returns (payload, exit status, text summary)
# --------------------------------------------------------------------------

def _load_map(args) -> RationalMap:
    if args.quadratic_c is not None:
        if args.map is not None:
            raise InputError("usage", "give either a map file or --quadratic-c, not both")
        return RationalMap.quadratic(_complex_arg(args.quadratic_c))
    return map_from_json(_read_json(args.map))


def cmd_analyze(args, cfg: Config):
    r = _load_map(args)
    report = fatou_census(r, cfg.budget, cfg.tolerances, cfg.escape_radius)
    ks, status = k_report(report.spec)
    payload = {"map": map_to_json(r), "degree": r.degree, **report.to_json(), "k_theory": ks,
               "complete": report.spec.complete}
    lines = [f"degree {r.degree}, critical points {len(report.critical)}"]
    for label, out in sorted(payload["orbits"].items()):
        lines.append(f"  {label}: {out['outcome']}")
    lines.append(_groups_text(ks))
    return payload, status, "\n".join(lines)


def cmd_ktheory(args, cfg: Config):
    data = _read_json(args.input)
    if isinstance(data, dict) and ({"num", "quadratic_c"} & set(data)):
        r = map_from_json(data)
        spec = fatou_census(r, cfg.budget, cfg.tolerances, cfg.escape_radius).spec
    else:
        if not isinstance(data, dict):
            raise InputError("validation", "Fatou spec JSON must be an object")
        spec = FatouSpec.from_json(data)
    ks, status = k_report(spec)
    return ks, status, _groups_text(ks)


def cmd_quad(args, cfg: Config):
    v = classify_quadratic(_complex_arg(args.c), cfg.budget, cfg.tolerances)
    status = EXIT_UNRESOLVED if v.case is QuadCase.UNRESOLVED else EXIT_OK
    text = f"{v.case.value} ({v.algebra_name.value})"
    if v.k0 is not None:
        text += f": K0 = {v.k0}, K1 = {v.k1}, unit {v.k0.unit_status}"
    return v.to_json(), status, text


def cmd_graph(args, cfg: Config):
    if args.builtin:
        rows = []
        for row in builtin_table():
            kt = graph_k_theory(row.graph)
            rows.append({"region": row.region, "algebra": row.algebra, "case": row.case,
                         "graph": row.graph.to_json(), **kt.to_json()})
        text = "\n".join(f"{r['case']} {r['algebra']}: K0 = {r['k0']['pretty']}, K1 = {r['k1']['pretty']}"
                         for r in rows)
        return {"table": rows}, EXIT_OK, text
    data = _read_json(args.input)
    if not isinstance(data, dict):
        raise InputError("validation", "graph JSON must be an object")
    kt = graph_k_theory(DirectedGraph.from_json(data))
    return kt.to_json(), EXIT_OK, f"K0 = {kt.k0}, K1 = {kt.k1}"


def cmd_invariants(args, cfg: Config):
    if args.action == "shift":
        if args.k is None:
            raise InputError("usage", "invariants shift needs --k")
        inv = id_minus_phi_invariants(args.k, cfg.budget.shift_level_cap)
        return inv.to_json(), EXIT_OK, f"k={inv.level}: det {inv.det}, kernel rank {inv.kernel_rank}, cokernel {inv.cokernel}"
    chosen = [x for x in (args.tuple, args.recover) if x is not None] + ([1] if args.verify_lemma else [])
    if len(chosen) != 1:
        raise InputError("usage", "choose exactly one of shift, --tuple, --recover, --verify-lemma")
    if args.verify_lemma:
        rep = lemma_number_bruteforce(args.max_len, args.max_val)
        return rep.to_json(), EXIT_OK, (f"{rep.tuple_count} tuples, n <= {rep.n_max}: "
                                        f"{'injective' if rep.injective else f'{len(rep.collisions)} collisions'}")
    if args.tuple is not None:
        t = CycleLengthTuple(_int_list(args.tuple))
        seq = fatou_count_sequence(t, args.nmax)
        payload = {"tuple": list(t), "nmax": args.nmax, "sequence": seq}
        return payload, EXIT_OK, " ".join(map(str, seq))
    seq = _int_list(args.recover)
    found = recover_tuple(seq)
    if isinstance(found, Ambiguous):
        return {"sequence": seq, **found.to_json()}, EXIT_UNRESOLVED, \
            "ambiguous: " + "; ".join(",".join(map(str, c)) for c in found.candidates)
    return {"sequence": seq, "tuple": list(found)}, EXIT_OK, ",".join(map(str, found))


def cmd_render(args, cfg: Config):
    try:
        rect = Rect.parse(args.rect)
        w, _, h = args.size.lower().partition("x")
        width, height = int(w), int(h or w)
    except ValueError as exc:
        raise InputError("validation", str(exc)) from None
    max_iter = args.sub_max_iter or args.max_iter or 256
    data = render(rect, width, height, args.mode, _complex_arg(args.c), max_iter)
    return data, EXIT_OK, None


def cmd_schema(args, cfg: Config):
    if args.name is None:
        return sorted(SCHEMAS), EXIT_OK, "\n".join(sorted(SCHEMAS))
    if args.name not in SCHEMAS:
        raise InputError("usage", f"unknown schema {args.name!r}; choose from {sorted(SCHEMAS)}")
    return SCHEMAS[args.name], EXIT_OK, json.dumps(SCHEMAS[args.name], indent=2, sort_keys=True)


def _groups_text(ks: dict) -> str:
    out = []
    for name in ("sphere", "fatou", "julia"):
        res = ks.get(name)
        if res is None:
            out.append(f"{name}: unavailable")
            continue
        unit = res["k0"].get("unit_status")
        out.append(f"{name}: K0 = {res['k0']['pretty']}, K1 = {res['k1']['pretty']}"
                   + (f", unit {unit}" if unit else ""))
    return "\n".join(out)


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rational-ktheory", description="K-theory invariants of rational maps.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="JSON file with tolerances, budget, escape_radius, pretty")
    p.add_argument("--json", action="store_true", help="emit JSON instead of a text summary")
    p.add_argument("--max-iter", type=int, dest="max_iter", help="orbit iteration budget")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="critical census, Fatou spec and K-theory of a map")
    a.add_argument("map", nargs="?", help="map JSON file, '-' or omitted for stdin")
    a.add_argument("--quadratic-c", help="analyze z**2 + c, given as re,im")
    a.set_defaults(func=cmd_analyze)

    k = sub.add_parser("ktheory", help="K-theory from a Fatou spec (or a map, censused first)")
    k.add_argument("input", nargs="?", help="JSON file, '-' or omitted for stdin")
    k.set_defaults(func=cmd_ktheory)

    q = sub.add_parser("quad", help="case of z**2 + c")
    q.add_argument("--c", required=True, help="re,im")
    q.add_argument("--max-iter", type=int, dest="sub_max_iter")
    q.set_defaults(func=cmd_quad)

    g = sub.add_parser("graph", help="K-theory of a graph algebra")
    g.add_argument("input", nargs="?", help="graph JSON file, '-' or omitted for stdin")
    g.add_argument("--builtin", action="store_true", help="the four graphs of the quadratic family")
    g.set_defaults(func=cmd_graph)

    i = sub.add_parser("invariants", help="shift model and cycle-length invariants")
    i.add_argument("action", nargs="?", choices=["shift"])
    i.add_argument("--k", type=int, help="cylinder level for 'shift'")
    i.add_argument("--tuple", help="cycle lengths, e.g. 1,2,2")
    i.add_argument("--nmax", type=int, default=12)
    i.add_argument("--recover", help="gcd-sum sequence to invert, e.g. 3,5,3,5")
    i.add_argument("--verify-lemma", action="store_true")
    i.add_argument("--max-len", type=int, default=3)
    i.add_argument("--max-val", type=int, default=8)
    i.set_defaults(func=cmd_invariants)

    r = sub.add_parser("render", help="escape-time PPM image of the quadratic family")
    r.add_argument("--rect", default="-2,0.5,-1.25,1.25", help="re_min,re_max,im_min,im_max")
    r.add_argument("--size", default="256x256", help="WIDTHxHEIGHT")
    r.add_argument("--mode", choices=["parameter", "dynamical"], default="parameter")
    r.add_argument("--c", default="0,0", help="parameter for dynamical mode, re,im")
    r.add_argument("--max-iter", type=int, dest="sub_max_iter")
    r.add_argument("-o", "--output", help="write here instead of stdout")
    r.set_defaults(func=cmd_render)

    s = sub.add_parser("schema", help="print a JSON schema")
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_schema)
    return p


def _join_value_options(argv: Sequence[str]) -> list[str]:
    """Turn ``--c -1,0`` into ``--c=-1,0`` so negative values parse."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _dump(obj, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _config(args) -> Config:
    cfg = Config.load(args.config) if args.config else Config()
    max_iter = getattr(args, "sub_max_iter", None) or args.max_iter
    if max_iter is not None and args.command != "render":
        cfg = cfg.with_max_iter(max_iter)
    return cfg


_INPUT_ERRORS = (SpecValidationError, MissingHValue, CoprimalityViolation, ValueError)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    out = sys.stdout
    try:
        args = build_parser().parse_args(_join_value_options(argv))
        as_json = args.json
        try:
            cfg = _config(args)
        except OSError as exc:
            raise InputError("parse", f"cannot read config: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InputError("parse", f"invalid config JSON: {exc}") from None
        payload, status, text = args.func(args, cfg)
    except InputError as exc:
        return _fail(exc.kind, str(exc), as_json, EXIT_INPUT)
    except BudgetExceeded as exc:
        return _fail("budget", str(exc), as_json, EXIT_INPUT)
    except NonConvergence as exc:
        return _fail("nonconvergence", str(exc), as_json, EXIT_UNRESOLVED)
    except _INPUT_ERRORS as exc:
        return _fail("validation", str(exc), as_json, EXIT_INPUT)

    if isinstance(payload, bytes):
        if args.output:
            Path(args.output).write_bytes(payload)
        else:
            out.flush()
            sys.stdout.buffer.write(payload)
            sys.stdout.buffer.flush()
        return status
    if as_json:
        out.write(_dump(payload, cfg.pretty) + "\n")
    else:
        out.write(text + "\n")
    return status


def _fail(kind: str, message: str, as_json: bool, status: int) -> int:
    if as_json:
        sys.stdout.write(_dump({"error": kind, "message": message}, False) + "\n")
    else:
        sys.stderr.write(f"error ({kind}): {message}\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
