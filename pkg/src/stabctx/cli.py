"""``stabctx`` command line.

Exit codes: 0 verified/true, 1 check failed/false, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import __version__
from .nogo import (
    FalsificationError, NoGoError, exhaustive_relabel_search, theorem1_certificate,
    theorem2_certificate,
)
from .ontology import ONTIC_STATES, corrupted_gamma, gamma, gamma_channel, verify_against_born
from .operational import (
    EXTREMAL_STATES, channel_equivalent, channel_from_json, effect_equivalent,
    effect_from_json, make_T1, make_T2, prep_equivalent, state_from_json,
)

log = logging.getLogger("stabctx")

DEFAULT_NAMES = {
    "verify-born": "verify_born",
    "replay": "certificate_theorem{theorem}",
    "export-cube": "cube",
    "relabel-search": "relabel_search",
}


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not an integer: %r" % text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="stabctx", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="stabctx " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-born", parents=[common],
                       help="check the 8-state model against the Born rule")
    p.add_argument("--inject-fault", action="store_true",
                   help="self-test: replace the Hadamard table by the identity")

    p = sub.add_parser("replay", parents=[common], help="emit a no-go certificate")
    p.add_argument("theorem", type=int, choices=[1, 2])

    p = sub.add_parser("equiv", parents=[common], help="decide operational equivalence")
    p.add_argument("kind", choices=["prep", "channel", "effect"])
    p.add_argument("a")
    p.add_argument("b")

    sub.add_parser("export-cube", parents=[common], help="plot-ready ontic cube geometry")

    p = sub.add_parser("relabel-search", parents=[common],
                       help="brute-force search over cell relabelings")
    p.add_argument("--cliffords-only", action="store_true")
    p.add_argument("--limit", type=_positive_int)
    return parser


def _emit(args, text: str) -> None:
    path = args.out
    if path is None and os.environ.get("STABCTX_OUT_DIR"):
        name = DEFAULT_NAMES[args.command].format(theorem=getattr(args, "theorem", ""))
        path = os.path.join(os.environ["STABCTX_OUT_DIR"], "%s.%s" % (name, args.format))
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    log.info("wrote %s", path)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_verify_born(args) -> int:
    report = verify_against_born(gamma_fn=corrupted_gamma if args.inject_fault else gamma)
    log.info("checked %d triples, %d mismatches", report["checked"], len(report["mismatches"]))
    if args.format == "csv":
        rows = [["checked", report["checked"]], ["mismatches", len(report["mismatches"])],
                ["prep", "channel", "effect", "model", "quantum"]]
        for m in report["mismatches"]:
            rows.append([" ".join(m["prep"]),
                         " + ".join("%s*%s" % (x["weight"], x["clifford"]) for x in m["channel"]),
                         "%s;%s" % (m["effect"]["constant"], " ".join(m["effect"]["gradient"])),
                         m["model"], m["quantum"]])
        _emit(args, _csv(rows))
    else:
        _emit(args, _dumps({**report, "toolVersion": __version__}))
    return 0 if not report["mismatches"] else 1


def cmd_replay(args) -> int:
    if args.format != "json":
        raise UsageError("certificates are only emitted as json")
    build = theorem1_certificate if args.theorem == 1 else theorem2_certificate
    try:
        cert = build()
    except FalsificationError as exc:
        _emit(args, _dumps({"falsification": exc.report, "toolVersion": __version__}))
        return 1
    _emit(args, cert.dumps())
    ok = cert.disjoint_support and len(cert.equivalence_evidence) == len(EXTREMAL_STATES)
    return 0 if ok else 1


_LOADERS = {
    "prep": (state_from_json, prep_equivalent),
    "channel": (channel_from_json, channel_equivalent),
    "effect": (effect_from_json, effect_equivalent),
}


def cmd_equiv(args) -> int:
    load, decide = _LOADERS[args.kind]
    objs = []
    for path in (args.a, args.b):
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        try:
            objs.append(load(data))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise UsageError("cannot parse %s as %s: %s" % (path, args.kind, exc))
    result = decide(*objs)
    sys.stdout.write("true\n" if result else "false\n")
    return 0 if result else 1


def _vertex(s):
    return list(s)


def cube_geometry() -> dict:
    arrows = {}
    for name, t in (("T1", make_T1()), ("T2", make_T2())):
        g = gamma_channel(t)
        arrows[name] = [{"from": _vertex(src), "to": _vertex(dst), "weight": str(g[dst, src])}
                        for src in ONTIC_STATES for dst in ONTIC_STATES if g[dst, src]]
    return {
        "vertices": [{"vertex": _vertex(s), "parity": s.parity} for s in ONTIC_STATES],
        "tetrahedra": {
            "even": [_vertex(s) for s in ONTIC_STATES if s.parity == 1],
            "odd": [_vertex(s) for s in ONTIC_STATES if s.parity == -1],
        },
        "octahedron": [[int(v) for v in s.r] for s in EXTREMAL_STATES],
        "arrows": arrows,
        "toolVersion": __version__,
    }


def cmd_export_cube(args) -> int:
    geo = cube_geometry()
    if args.format == "csv":
        rows = [["x", "y", "z", "parity"]] + [v["vertex"] + [v["parity"]] for v in geo["vertices"]]
        _emit(args, _csv(rows))
    else:
        _emit(args, _dumps(geo))
    return 0


def cmd_relabel_search(args) -> int:
    report = exhaustive_relabel_search(cliffords_only=args.cliffords_only, limit=args.limit)
    if args.format == "csv":
        _emit(args, _csv([[k, v if not isinstance(v, list) else " vs ".join(v)]
                          for k, v in report.items()]))
    else:
        _emit(args, _dumps({**report, "toolVersion": __version__}))
    return 0 if report["escapes"] == 0 else 1


COMMANDS = {
    "verify-born": cmd_verify_born,
    "replay": cmd_replay,
    "equiv": cmd_equiv,
    "export-cube": cmd_export_cube,
    "relabel-search": cmd_relabel_search,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write("stabctx: error: %s\n" % exc)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write("stabctx: error: %s\n" % exc)
        return 2
    except NoGoError as exc:
        sys.stderr.write("stabctx: check failed: %s\n" % exc)
        return 1
