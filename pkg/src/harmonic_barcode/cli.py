"""Command-line front end: ``hcb <subcommand> ...``.

Exit codes: 0 ok, 1 unreadable or malformed input, 2 internal inconsistency
(invariant violation, endpoint mismatch, stability bound broken), 3 a
verification FAIL.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence

from .barcode import Bar, Barcode, barcode_from_json, barcode_to_json
from .engine import InvariantViolation, compute_harmonic_barcode
from .filtration import (Filtration, FiltrationError, RealInterval, TimestampMap,
                         format_rational, parse_complex, parse_filtration,
                         parse_rational, parse_vertex_function, random_filtration)
from .oracle import endpoint_mismatches, verify_filtration
from .ordinary import compute_ordinary_barcode
from .stability import bottleneck_distance, stability_experiment

EXIT_OK, EXIT_PARSE, EXIT_INTERNAL, EXIT_VERIFY = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def load_filtration(path: str) -> Filtration:
    try:
        return parse_filtration(_read(path))
    except FiltrationError as exc:
        raise InputError(f"{path}: {exc}") from None


def thread_cap(default: Optional[int] = None) -> int:
    raw = os.environ.get("HCB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return default or os.cpu_count() or 1


def _map(fn, items: Sequence):
    """Apply ``fn`` to each item, in worker processes when allowed."""
    workers = min(len(items), thread_cap())
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- text rendering ----------------------------------------------------------

def _simplex_label(F: Filtration, k: int) -> str:
    return "-".join(map(str, F.simplices[k]))


def format_bar(bar: Bar, F: Filtration, tau: TimestampMap, with_rep: bool) -> str:
    line = (f"{bar.degree} [{bar.birth},{bar.death}] "
            f"{format_rational(tau(bar.birth))} {format_rational(tau(bar.death + 1))}")
    if with_rep:
        rep = ",".join(f"{_simplex_label(F, k)}:{format_rational(x)}"
                       for k, x in sorted(bar.representative.items()))
        line += " rep:{" + rep + "}"
    return line


def render(bc: Barcode, F: Filtration, fmt: str, degrees, with_rep: bool) -> str:
    tau = F.timestamp_map()
    if fmt == "json":
        return barcode_to_json(bc, tau, degrees)
    keep = None if degrees is None else set(degrees)
    lines = [format_bar(b, F, tau, with_rep) for b in bc.sorted().bars
             if keep is None or b.degree in keep]
    return "".join(line + "\n" for line in lines)


# -- workers (module level so they pickle) -----------------------------------

def _compute_job(args):
    path, kind, verify = args
    try:
        F = load_filtration(path)
    except InputError as exc:
        return {"error": str(exc), "code": EXIT_PARSE}
    try:
        if kind == "harmonic":
            bc, _ = compute_harmonic_barcode(F)
        else:
            bc = compute_ordinary_barcode(F)
    except InvariantViolation as exc:
        return {"error": f"{path}: invariant violation: {exc}", "code": EXIT_INTERNAL}
    report = verify_filtration(F, bc) if verify else None
    return {"F": F, "bc": bc, "report": report}


def _verify_job(args):
    path, seed, max_m, max_dim = args
    if path is not None:
        try:
            F = load_filtration(path)
        except InputError as exc:
            return {"error": str(exc), "code": EXIT_PARSE}
        name = path
    else:
        F = random_filtration(random.Random(seed), max_m, max_dim)
        name = f"seed:{seed}"
    try:
        bc, _ = compute_harmonic_barcode(F)
    except InvariantViolation as exc:
        return {"error": f"{name}: invariant violation: {exc}", "code": EXIT_INTERNAL}
    report = verify_filtration(F, bc)
    report["input"] = name
    return {"report": report}


# -- subcommands -------------------------------------------------------------

def _barcode_command(args, kind: str) -> int:
    jobs = [(p, kind, getattr(args, "verify", False)) for p in args.files]
    results = _map(_compute_job, jobs)
    code = EXIT_OK
    out: List[str] = []
    for path, res in zip(args.files, results):
        if "error" in res:
            print(res["error"], file=sys.stderr)
            code = max(code, res["code"])
            continue
        with_rep = kind == "harmonic" and args.with_representatives
        text = render(res["bc"], res["F"], args.format, args.degree, with_rep)
        if len(args.files) > 1:
            text = f"# {path}\n" + text
        out.append(text)
        report = res["report"]
        if report is not None:
            print(json.dumps(report, sort_keys=True), file=sys.stderr)
            if report["status"] != "PASS":
                code = max(code, EXIT_VERIFY)
    sys.stdout.write("".join(out))
    return code


def cmd_compute(args) -> int:
    return _barcode_command(args, "harmonic")


def cmd_ordinary(args) -> int:
    return _barcode_command(args, "ordinary")


def cmd_compare(args) -> int:
    try:
        F = load_filtration(args.file)
        H, _ = compute_harmonic_barcode(F)
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    O = compute_ordinary_barcode(F)
    bad = endpoint_mismatches(H, O)
    degrees = sorted(set(H.degrees) | set(O.degrees))
    if args.degree is not None:
        degrees = [p for p in degrees if p in set(args.degree)]
    if args.format == "json":
        doc = {"degrees": {str(p): {"harmonic": [list(iv) for iv in H.intervals(p)],
                                    "ordinary": [list(iv) for iv in O.intervals(p)]}
                           for p in degrees},
               "endpoints_agree": not bad,
               "mismatched_degrees": bad}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for p in degrees:
            hs = " ".join(f"[{b},{d}]" for b, d in H.intervals(p))
            os_ = " ".join(f"[{b},{d}]" for b, d in O.intervals(p))
            print(f"degree {p}")
            print(f"  harmonic: {hs}")
            print(f"  ordinary: {os_}")
        print("endpoints: " + ("agree" if not bad else f"MISMATCH in degrees {bad}"))
    return EXIT_INTERNAL if bad else EXIT_OK


def cmd_verify(args) -> int:
    if args.barcode is not None:
        if len(args.files) != 1:
            print("--barcode needs exactly one filtration file", file=sys.stderr)
            return EXIT_PARSE
        try:
            F = load_filtration(args.files[0])
            bc = barcode_from_json(_read(args.barcode))
        except InputError as exc:
            print(exc, file=sys.stderr)
            return EXIT_PARSE
        except (ValueError, KeyError, TypeError) as exc:
            print(f"{args.barcode}: malformed barcode: {exc}", file=sys.stderr)
            return EXIT_PARSE
        report = verify_filtration(F, bc)
        report["input"] = args.files[0]
        reports = [report]
        code = EXIT_OK
    else:
        jobs = [(p, None, None, None) for p in args.files]
        if args.seed is not None:
            jobs += [(None, args.seed + k, args.max_m, args.max_dim) for k in range(args.count)]
        if not jobs:
            print("nothing to verify: give files or --seed", file=sys.stderr)
            return EXIT_PARSE
        reports, code = [], EXIT_OK
        for res in _map(_verify_job, jobs):
            if "error" in res:
                print(res["error"], file=sys.stderr)
                code = max(code, res["code"])
            else:
                reports.append(res["report"])
    failed = [r for r in reports if r["status"] != "PASS"]
    doc = {"status": "PASS" if not failed and code == EXIT_OK else "FAIL",
           "checked": len(reports), "failed": len(failed), "reports": reports}
    print(json.dumps(doc, indent=2, sort_keys=True))
    if failed:
        return EXIT_VERIFY
    return code


def cmd_fuzz(args) -> int:
    jobs = [(None, args.seed + k, args.max_m, args.max_dim) for k in range(args.count)]
    fails = 0
    for res in _map(_verify_job, jobs):
        if "error" in res:
            print(res["error"], file=sys.stderr)
            return res["code"]
        r = res["report"]
        if r["status"] != "PASS":
            fails += 1
        print(f"{r['input']} m={r['m']} {r['status']}")
    print(f"{args.count - fails}/{args.count} passed")
    return EXIT_VERIFY if fails else EXIT_OK


def parse_diagram(text: str) -> Dict[int, List[RealInterval]]:
    """A barcode JSON document, or lines ``<degree> <birth> <death>`` with
    ``inf`` allowed as death."""
    stripped = text.lstrip()
    out: Dict[int, List[RealInterval]] = {}
    if stripped.startswith("{"):
        doc = json.loads(text)
        for d in doc["bars"]:
            b = parse_rational(d["birth_time"])
            e = math.inf if d["death_time"] is None else parse_rational(d["death_time"])
            if b != e:
                out.setdefault(int(d["degree"]), []).append(RealInterval(int(d["degree"]), b, e))
        return out
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise FiltrationError("expected '<degree> <birth> <death>'", lineno)
        try:
            p, b = int(tokens[0]), parse_rational(tokens[1])
            e = math.inf if tokens[2] == "inf" else parse_rational(tokens[2])
        except ValueError as exc:
            raise FiltrationError(f"malformed line: {exc}", lineno) from None
        out.setdefault(p, []).append(RealInterval(p, b, e))
    return out


def _fmt_distance(x) -> str:
    return format_rational(x)


def cmd_bottleneck(args) -> int:
    try:
        A = parse_diagram(_read(args.first))
        B = parse_diagram(_read(args.second))
    except (InputError, FiltrationError, ValueError, KeyError, TypeError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    degrees = sorted(set(A) | set(B))
    if args.degree is not None:
        degrees = [p for p in degrees if p in set(args.degree)]
    try:
        dist = {p: bottleneck_distance(A.get(p, []), B.get(p, [])) for p in degrees}
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    if args.format == "json":
        print(json.dumps({str(p): _fmt_distance(d) for p, d in dist.items()},
                         indent=2, sort_keys=True))
    else:
        for p, d in dist.items():
            print(f"{p} {_fmt_distance(d)}")
    return EXIT_OK


def cmd_stability(args) -> int:
    try:
        K = parse_complex(_read(args.complex))
        f = parse_vertex_function(_read(args.f))
        g = parse_vertex_function(_read(args.g))
        res = stability_experiment(K, f, g)
    except (InputError, FiltrationError, ValueError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    doc = {"bottleneck": {str(p): _fmt_distance(d) for p, d in res["bottleneck"].items()},
           "max_bottleneck": _fmt_distance(res["max_bottleneck"]),
           "sup_norm": _fmt_distance(res["sup_norm"]),
           "bound_holds": res["bound_holds"]}
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for p, d in doc["bottleneck"].items():
            print(f"{p} {d}")
        print(f"sup_norm {doc['sup_norm']}")
        print(f"bound_holds {str(doc['bound_holds']).lower()}")
    return EXIT_OK if res["bound_holds"] else EXIT_INTERNAL


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hcb", description="Harmonic chain barcodes with exact representatives.")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p, default="text"):
        p.add_argument("--format", choices=("text", "json"), default=default)

    def degree(p):
        p.add_argument("--degree", type=int, action="append",
                       help="only report this degree (repeatable)")

    c = sub.add_parser("compute", help="harmonic barcode of filtration files")
    c.add_argument("files", nargs="+")
    fmt(c)
    degree(c)
    c.add_argument("--with-representatives", action="store_true",
                   help="print representatives in text mode (JSON always has them)")
    c.add_argument("--verify", action="store_true",
                   help="also certify the result; the report goes to stderr")
    c.set_defaults(func=cmd_compute)

    o = sub.add_parser("ordinary", help="ordinary persistence barcode")
    o.add_argument("files", nargs="+")
    fmt(o)
    degree(o)
    o.set_defaults(func=cmd_ordinary, with_representatives=False)

    cp = sub.add_parser("compare", help="harmonic and ordinary barcodes side by side")
    cp.add_argument("file")
    fmt(cp)
    degree(cp)
    cp.set_defaults(func=cmd_compare)

    v = sub.add_parser("verify", help="certify barcodes against brute force")
    v.add_argument("files", nargs="*")
    v.add_argument("--barcode", help="check this barcode JSON instead of computing one")
    v.add_argument("--seed", type=int, help="also verify random filtrations from this seed")
    v.add_argument("--count", type=int, default=1)
    v.add_argument("--max-m", type=int, default=40)
    v.add_argument("--max-dim", type=int, default=3)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bottleneck", help="bottleneck distance between two diagrams")
    b.add_argument("first")
    b.add_argument("second")
    fmt(b)
    degree(b)
    b.set_defaults(func=cmd_bottleneck)

    s = sub.add_parser("stability", help="bottleneck vs sup-norm for two vertex functions")
    s.add_argument("complex", help="maximal simplices, one per line")
    s.add_argument("f")
    s.add_argument("g")
    fmt(s, "json")
    s.set_defaults(func=cmd_stability)

    fz = sub.add_parser("fuzz", help="verify many random filtrations")
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--count", type=int, default=100)
    fz.add_argument("--max-m", type=int, default=40)
    fz.add_argument("--max-dim", type=int, default=3)
    fz.set_defaults(func=cmd_fuzz)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
