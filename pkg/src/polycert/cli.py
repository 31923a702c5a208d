"""Command line front end: verify traces, synthesize interpretations.

Exit codes are part of the contract: 0 certified (or interpretation
found), 1 parsed but not certified (or search gave up), 2 unreadable or
malformed input.  Reports are canonical structured text with a stable
key order so they diff cleanly; batch runs add a CSV summary and, on
request, a PNG figure next to the report.
"""

import argparse
import csv
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .checker import CertResult, CheckLimits, Proven, Unknown, certify
from .core import AFS
from .interp import VarNamer, atom_poly, render_poly
from .synth import SearchBounds, synthesize
from .trace import TraceError, elaborate, parse_trace, render_rule, render_trace

_EXIT = {"CERTIFIED": 0, "REJECTED": 1, "ERROR": 2}


@dataclass(frozen=True)
class FileOutcome:
    """Everything one verification run produced, buffered for ordered output."""
    path: Path
    verdict: str
    ms: int
    afs: Optional[AFS] = None
    cert: Optional[CertResult] = None
    error: Optional[str] = None


# ----------------------------------------------------------------- reports

def _header(input_path: str, verdict: str, ms: int) -> list[str]:
    return [
        "polycert-report: 1",
        f"tool-version: {__version__}",
        f"input: {input_path}",
        f"verdict: {verdict}",
        f"time-ms: {ms}",
    ]


def _rule_section(afs: AFS, rule: int, constraint, verdict) -> list[str]:
    namer = VarNamer(constraint.ctx)
    taken = {name for name, _ in afs.signature.symbols}
    lines = [
        f"  - rule: {render_rule(afs.rules[rule], taken)}",
        f"    constraint: {constraint.render()}",
    ]
    match verdict:
        case Proven(trace):
            lines.append("    verdict: proven")
            lines.append("    steps:")
            lines.append(f"      - cancel-common: {render_poly(trace.cancelled, namer)}")
            lines.append(f"      - lhs-residue: {render_poly(trace.lhs_residue, namer)}")
            lines.append(f"      - rhs-residue: {render_poly(trace.rhs_residue, namer)}")
            lines.append(f"      - merged-rhs: {render_poly(trace.merged_rhs, namer)}")
            for g in trace.comparisons:
                atoms = "*".join(
                    render_poly(atom_poly(a.head, a.args), namer) for a in g.atoms)
                lines.append(
                    f"      - dominance: {render_poly(g.lhs_coeff, namer)}"
                    f" >= {render_poly(g.rhs_coeff, namer)} over {atoms or '1'}")
            lines.append(
                f"      - strictness: {trace.lhs_residue.constant_part()}"
                f" > {trace.merged_rhs.constant_part()}")
        case Unknown(reason, detail, cex):
            lines.append("    verdict: unknown")
            lines.append(f"    reason: {reason}")
            lines.append(f"    detail: {detail}")
            shown = "none" if cex is None else cex.render(namer)
            lines.append(f"    counterexample: {shown}")
    return lines


def render_report(outcome: FileOutcome) -> str:
    lines = _header(str(outcome.path), outcome.verdict, outcome.ms)
    if outcome.error is not None:
        lines.append(f"error: {outcome.error}")
    else:
        cert = outcome.cert
        lines.append("obligations:")
        lines.extend(f"  - {ob}" for ob in cert.obligations)
        lines.append("rules:")
        for rr in cert.rule_reports:
            lines.extend(_rule_section(outcome.afs, rr.rule, rr.constraint, rr.verdict))
    return "\n".join(lines) + "\n"


def render_batch_report(dir_path: str, outcomes: list[FileOutcome], ms: int) -> str:
    tally = {v: sum(1 for o in outcomes if o.verdict == v)
             for v in ("CERTIFIED", "REJECTED", "ERROR")}
    lines = [
        "polycert-report: 1",
        f"tool-version: {__version__}",
        f"input: {dir_path}",
        "mode: batch",
        f"files: {len(outcomes)}",
        f"certified: {tally['CERTIFIED']}",
        f"rejected: {tally['REJECTED']}",
        f"errors: {tally['ERROR']}",
        f"time-ms: {ms}",
        "results:",
    ]
    for o in outcomes:
        lines.append(f"  - input: {o.path.name}")
        lines.append(f"    verdict: {o.verdict}")
        lines.append(f"    time-ms: {o.ms}")
    return "\n".join(lines) + "\n"


def _write_csv(path: Path, outcomes: list[FileOutcome]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["input", "verdict", "time_ms", "rules_proven", "rules_total"])
        for o in outcomes:
            reports = o.cert.rule_reports if o.cert is not None else ()
            proven = sum(1 for r in reports if isinstance(r.verdict, Proven))
            w.writerow([o.path.name, o.verdict, o.ms, proven, len(reports)])


# ------------------------------------------------------------ verification

def _verify_file(path: Path, limits: CheckLimits) -> FileOutcome:
    start = time.monotonic()

    def done(verdict, **kw) -> FileOutcome:
        ms = int((time.monotonic() - start) * 1000)
        return FileOutcome(path, verdict, ms, **kw)

    try:
        text = path.read_text()
    except OSError as e:
        return done("ERROR", error=str(e))
    try:
        afs, interp = elaborate(parse_trace(text))
    except TraceError as e:
        return done("ERROR", error=str(e))
    cert = certify(afs, interp, limits)
    if cert.error is not None:
        return done("ERROR", error=cert.error, afs=afs, cert=cert)
    verdict = "CERTIFIED" if cert.certified else "REJECTED"
    return done(verdict, afs=afs, cert=cert)


def _log_outcome(outcome: FileOutcome, quiet: bool) -> None:
    if outcome.error is not None:
        print(f"{outcome.path}: {outcome.error}", file=sys.stderr)
    if quiet:
        return
    if outcome.cert is not None:
        taken = {name for name, _ in outcome.afs.signature.symbols}
        for rr in outcome.cert.rule_reports:
            head = render_rule(outcome.afs.rules[rr.rule], taken)
            match rr.verdict:
                case Proven(_):
                    print(f"rule {rr.rule + 1}: {head}: proven")
                case Unknown(reason, detail, cex):
                    print(f"rule {rr.rule + 1}: {head}: unknown ({reason}) {detail}")
                    if cex is not None:
                        namer = VarNamer(rr.constraint.ctx)
                        print(f"  counterexample: {cex.render(namer)}")
    print(outcome.verdict)


def cmd_verify(args: argparse.Namespace) -> int:
    limits = CheckLimits(samples=args.samples, backtrack=args.backtrack,
                         seed=_env_seed())
    path = Path(args.path)
    if path.is_dir():
        return _verify_dir(path, args, limits)

    outcome = _verify_file(path, limits)
    _log_outcome(outcome, args.quiet)
    if args.report:
        Path(args.report).write_text(render_report(outcome))
    if args.figures and not args.quiet:
        print("figures are only rendered for directory runs", file=sys.stderr)
    return _EXIT[outcome.verdict]


def _verify_dir(path: Path, args: argparse.Namespace, limits: CheckLimits) -> int:
    files = sorted(path.glob("*.onijn"))
    if not files:
        print(f"{path}: no .onijn files", file=sys.stderr)
        return 2
    start = time.monotonic()
    with ThreadPoolExecutor(max_workers=min(8, len(files))) as pool:
        outcomes = list(pool.map(lambda f: _verify_file(f, limits), files))
    total_ms = int((time.monotonic() - start) * 1000)

    width = max(len(o.path.name) for o in outcomes)
    if not args.quiet:
        for o in outcomes:
            print(f"{o.path.name:<{width}}  {o.verdict:<9}  {o.ms} ms")
        tally = {v: sum(1 for o in outcomes if o.verdict == v)
                 for v in ("CERTIFIED", "REJECTED", "ERROR")}
        print(f"total: {len(outcomes)} files, {tally['CERTIFIED']} certified, "
              f"{tally['REJECTED']} rejected, {tally['ERROR']} error, {total_ms} ms")
    for o in outcomes:
        if o.error is not None:
            print(f"{o.path}: {o.error}", file=sys.stderr)

    if args.report:
        report = Path(args.report)
        report.write_text(render_batch_report(str(path), outcomes, total_ms))
        _write_csv(report.with_suffix(".csv"), outcomes)
        if args.figures:
            from .figures import render_figure
            rows = [(o.path.name, o.verdict, o.ms) for o in outcomes]
            render_figure(rows, str(report.with_suffix(".png")))
    elif args.figures:
        print("--figures requires --report", file=sys.stderr)
        return 2
    return max(_EXIT[o.verdict] for o in outcomes)


# --------------------------------------------------------------- synthesis

def cmd_synth(args: argparse.Namespace) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as e:
        print(str(e), file=sys.stderr)
        return 2
    try:
        afs, _ = elaborate(parse_trace(text, allow_missing_interpretation=True))
    except TraceError as e:
        print(str(e), file=sys.stderr)
        return 2

    bounds = SearchBounds(max_coeff=args.max_coeff, timeout_ms=args.timeout)
    result = synthesize(afs, bounds)
    if result.interpretation is None:
        why = "timeout" if result.timed_out else "search space exhausted"
        print(f"MAYBE ({why} after {result.tried} candidates)")
        return 1
    Path(args.output).write_text(render_trace(afs, result.interpretation))
    print(f"found after {result.tried} candidates: {args.output}")
    return 0


# --------------------------------------------------------------- entry point

def _env_seed() -> int:
    raw = os.environ.get("POLYCERT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        print(f"ignoring non-numeric POLYCERT_SEED={raw!r}", file=sys.stderr)
        return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polycert",
        description="certify or synthesize polynomial termination proofs")
    parser.add_argument("--version", action="version",
                        version=f"polycert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check a proof trace (or a directory)")
    v.add_argument("path", help=".onijn file or directory of them")
    v.add_argument("--report", metavar="PATH", help="write a report here")
    v.add_argument("--samples", type=int, default=500,
                   help="falsifier budget per failed constraint")
    v.add_argument("--backtrack", type=int, default=64,
                   help="hosting combinations tried per constraint")
    v.add_argument("--quiet", action="store_true", help="suppress the log")
    v.add_argument("--figures", action="store_true",
                   help="with --report on a directory: render a PNG summary")

    s = sub.add_parser("synth", help="search for an interpretation")
    s.add_argument("path", help=".onijn file; Interpretation section optional")
    s.add_argument("-o", "--output", required=True, metavar="PATH",
                   help="write the completed trace here")
    s.add_argument("--max-coeff", type=int, default=3,
                   help="largest template coefficient")
    s.add_argument("--timeout", type=int, default=120000, metavar="MS",
                   help="search budget in milliseconds")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_synth(args)


if __name__ == "__main__":
    sys.exit(main())
