"""Command-line front end.

Exit status: 0 when every check passes, 2 when a verification check fails,
1 on usage, parse or bundle errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, suites
from .bundle import BundleError, available, load
from .expr import ParseError
from .ncpoly import OrientationError, RewriteBudgetExceeded

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def _nf(inst, args) -> suites.Report:
    rep = suites.Report("nf", inst.name)
    rep.values["input"] = args.expr
    rep.values["normal_form"] = str(inst.pres.parse(args.expr))
    return rep


COMMANDS = {
    "nf": _nf,
    "confluence": lambda inst, a: suites.confluence(inst, a.degree),
    "hilbert": lambda inst, a: suites.hilbert(inst, a.degree),
    "disc": lambda inst, a: suites.disc(inst, a.degree),
    "norm-different": lambda inst, a: suites.norm_different(inst, a.degree),
    "jacobian": lambda inst, a: suites.jacobian_report(inst, a.degree),
    "verify": lambda inst, a: suites.run(inst, a.suite, a.degree),
}


def _summary(rep: suites.Report) -> list[str]:
    if rep.command == "nf":
        return [rep.values["normal_form"]]
    if rep.command == "confluence":
        n = len(rep.values["unresolved"])
        lines = [f"{'OK' if n == 0 else 'FAIL'}: {n} unresolved"]
        lines += [f"  {c['word']}: {c['first']}  vs  {c['second']}" for c in rep.values["unresolved"]]
        return lines
    if rep.command == "hilbert":
        lines = [f"expected {rep.values['expected']}", f"actual   {rep.values['actual']}"]
        lines.append("OK: series matches" if rep.ok else f"FAIL: first mismatch in degree {rep.values['first_mismatch']}")
        return lines
    lines = [f"{rep.command} {rep.instance}"]
    for key in ("rank", "discriminant", "omega", "norm_of_different", "jacobian", "arrangement", "delta", "d_A"):
        if key in rep.values:
            lines.append(f"  {key} = {rep.values[key]}")
    if rep.command == "verify smash" and "discriminant" in rep.values:
        lines.append(f"  d(A#H, R) = {rep.values['discriminant']}")
    for probe in rep.values.get("probes", []):
        lines.append(
            f"  probe {probe['probe']}: tr = {probe['trace']}, t acting = {probe['t_acting']}, "
            f"exact {'holds' if probe['exact_equality'] else 'fails'}"
        )
    for name, ok in sorted(rep.checks.items()):
        lines.append(f"  [{'PASS' if ok else 'FAIL'}] {name}")
    lines.append("OK" if rep.ok else "FAIL")
    return lines


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncdisc", description="Discriminants of noncommutative algebras over central subalgebras.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("bundle", help="shipped instance name or path to a .toml bundle")
    common.add_argument("--degree", type=int, default=None, help="verification degree bound")
    common.add_argument("--out", type=Path, default=None, help="write the JSON report here")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")
    common.add_argument("--no-fast-path", action="store_true", help="multiply by rewriting even for skew polynomial rings")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON report")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list shipped instances")
    nf = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    nf.add_argument("expr")
    sub.add_parser("confluence", parents=[common], help="resolve overlap ambiguities up to --degree")
    sub.add_parser("hilbert", parents=[common], help="compare dimensions with the declared Hilbert series")
    sub.add_parser("disc", parents=[common], help="discriminant of the trace form")
    sub.add_parser("norm-different", parents=[common], help="different, Nakayama automorphism and its norm")
    sub.add_parser("jacobian", parents=[common], help="Jacobian, reflection arrangement and their product")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(suites.SUITES))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # allow `verify SUITE BUNDLE` as well as `verify BUNDLE SUITE`
    if len(argv) >= 3 and argv[0] == "verify" and argv[1] in suites.SUITES:
        argv[1], argv[2] = argv[2], argv[1]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    if args.command == "list":
        for name in available():
            print(name)
        return EXIT_OK
    try:
        inst = load(args.bundle, fast_path=not args.no_fast_path)
        rep = COMMANDS[args.command](inst, args)
    except (BundleError, ParseError, OrientationError, RewriteBudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    doc = rep.to_json(timings=args.timings)
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if args.out is not None:
        args.out.write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        print("\n".join(_summary(rep)))
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
