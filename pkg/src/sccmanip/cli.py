"""Command-line interface: ``python3 -m sccmanip <command> ...``.

Exit status: 0 decided (and matching, where an expectation is given), 1 decided
but mismatching, 2 input or configuration error, 3 search bound refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

from sccmanip.axioms import AXIOMS, check_axiom, check_exclusions, reverify
from sccmanip.errors import BoundError, InputError
from sccmanip.extension import compare, parse_extension
from sccmanip.info import at_least_as_informative, parse_info
from sccmanip.manip import closed_form_states, is_E_manipulable, is_Omega_E_manipulable, verify_witness
from sccmanip.prefs import DEFAULT_MAX_STATES, alt_set, format_partial_profile, parse_order, parse_profile
from sccmanip.scc import parse_rule, winners
from sccmanip.suite import REPORT_COLUMNS, SUITES, run_suite

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--max-states", "--max-nm", dest="max_states", type=_nonneg, default=DEFAULT_MAX_STATES,
                   help="refuse searches over more than this many full profiles, (n!)^m")
    p.add_argument("--deterministic", action="store_true", help="omit timings so output is byte-identical")
    p.add_argument("--emit-witness", action="store_true", help="print witnesses as JSON in text mode")
    return p


def _rule_args(p: argparse.ArgumentParser, sizes: bool = True) -> None:
    p.add_argument("--scc", required=True, help="borda, plurality, negative-plurality, copeland, majority[:a], positional:w1,..,wn")
    p.add_argument("--weights", help="scoring vector for --scc positional, e.g. 3,1,0")
    p.add_argument("--alpha", help="threshold for --scc majority, e.g. 3/2")
    if sizes:
        p.add_argument("--n", type=int, required=True, help="number of alternatives")
        p.add_argument("--m", type=int, required=True, help="number of individuals")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="sccmanip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="winner set of a profile")
    _rule_args(p, sizes=False)
    p.add_argument("profile", help='e.g. "3 1 2;3 1 2;2 1 3"')

    p = sub.add_parser("compare", parents=[common], help="compare two sets under an extension rule")
    p.add_argument("--ext", required=True)
    p.add_argument("--order", required=True, help='sincere order, e.g. "1 2 3"')
    p.add_argument("--b", required=True, help='first set, e.g. "1 3"')
    p.add_argument("--c", required=True, help="second set")

    p = sub.add_parser("manip", parents=[common], help="decide (information-restricted) manipulability")
    _rule_args(p)
    p.add_argument("--ext", default="kelly")
    p.add_argument("--info", default="none", choices=("none", "complete", "zero", "winner"))
    p.add_argument("--expect", choices=("manipulable", "strategy-proof"))

    p = sub.add_parser("axiom", parents=[common], help="check wsm, sm, us, unanimity or their exclusions")
    p.add_argument("axiom", choices=(*AXIOMS, "exclusions"))
    _rule_args(p)
    p.add_argument("--expect", choices=("holds", "fails"))

    p = sub.add_parser("informativeness", parents=[common], help="is one information profile at least as informative as another")
    p.add_argument("--finer", required=True, choices=("complete", "zero", "winner"))
    p.add_argument("--coarser", required=True, choices=("complete", "zero", "winner"))
    _rule_args(p)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="claims")
    return parser


def _rule(args):
    return parse_rule(args.scc, args.weights, args.alpha)


def _ids(s) -> str:
    return " ".join(str(x) for x in sorted(s))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=False)


def cmd_eval(args) -> int:
    rule = _rule(args)
    out = winners(rule, parse_profile(args.profile))
    if args.format == "json":
        print(_dump({"rule": str(rule), "winners": sorted(out)}))
    else:
        print(_ids(out))
    return EXIT_OK


def cmd_compare(args) -> int:
    ext = parse_extension(args.ext)
    q = parse_order(args.order)
    n = len(q)
    B = alt_set(parse_order_set(args.b), n)
    C = alt_set(parse_order_set(args.c), n)
    rel = compare(ext, q, B, C)
    if args.format == "json":
        print(_dump({"ext": str(ext), "order": list(q), "b": sorted(B), "c": sorted(C), "relation": rel}))
    else:
        print(rel)
    return EXIT_OK


def parse_order_set(text: str) -> list[int]:
    tokens = text.replace(",", " ").split()
    if not tokens or not all(t.isdigit() for t in tokens):
        raise InputError(f"malformed alternative set {text!r}")
    return [int(t) for t in tokens]


def _witness_text(w) -> str:
    info = "" if w.info_kind is None else f" info={w.info_kind}"
    if w.info_outcome is not None:
        info += f" {{{_ids(w.info_outcome)}}}"
    return (
        f"i={w.individual} q=[{' '.join(map(str, w.sincere))}] q'=[{' '.join(map(str, w.misreport))}]{info}"
        f" gain_at={format_partial_profile(w.gain_at)}"
        f" F(q)={{{_ids(w.outcome_sincere)}}} F(q')={{{_ids(w.outcome_misreport)}}}"
    )


def cmd_manip(args) -> int:
    rule = _rule(args)
    ext = parse_extension(args.ext)
    opts = dict(max_states=args.max_states, workers=args.workers)
    if args.info == "none":
        info = None
        v = is_E_manipulable(rule, ext, args.n, args.m, **opts)
    else:
        info = parse_info(args.info, rule)
        v = is_Omega_E_manipulable(rule, ext, info, args.n, args.m, **opts)
    verdict = "manipulable" if v.holds else "strategy-proof"
    verified = verify_witness(rule, ext, info, v.witness) if v.holds else None
    closed = closed_form_states(args.n, args.m)
    timing = not args.deterministic
    if args.format == "json":
        payload = {
            "rule": str(rule), "ext": str(ext), "info": args.info, "n": args.n, "m": args.m,
            "verdict": verdict,
            "witness": v.witness.to_json() if v.witness else None,
            "verified": verified,
            "stats": {**v.stats.as_dict(timing), "closed_form": closed},
        }
        print(_dump(payload))
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        w.writerow([str(rule), str(ext), args.info, args.n, args.m, args.expect or "", verdict,
                    v.stats.states, round(v.stats.millis, 1) if timing else ""])
    else:
        print(f"{rule} {ext} {args.info} n={args.n} m={args.m}: {verdict}")
        if v.holds:
            print(f"witness: {_witness_text(v.witness)} ({'verified' if verified else 'NOT VERIFIED'})")
            if args.emit_witness:
                print(_dump(v.witness.to_json()))
        else:
            print(f"exhausted {v.stats.states} of {closed} states")
        if timing:
            print(f"millis: {v.stats.millis:.1f}")
    if verified is False:
        return EXIT_MISMATCH
    if args.expect and args.expect != verdict:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_axiom(args) -> int:
    rule = _rule(args)
    if args.axiom == "exclusions":
        v = check_exclusions(rule, args.n, args.m, args.max_states)
        holds, detail, instance, states = v.holds, v.note, v.counterexample, v.stats.states
        sound = True
    else:
        rep = check_axiom(args.axiom, rule, args.n, args.m, args.max_states)
        holds, detail, states = rep.holds, rep.note, rep.stats.states
        instance = rep.instance.to_json() if rep.instance else None
        if rep.instance:
            detail = str(rep.instance)
        sound = reverify(rule, rep)
    observed = "holds" if holds else "fails"
    if args.format == "json":
        payload = {"rule": str(rule), "axiom": args.axiom, "n": args.n, "m": args.m, "result": observed,
                   "instance": instance, "reverified": sound, "note": detail, "states": states}
        print(_dump(payload))
    else:
        print(f"{args.axiom} {rule} n={args.n} m={args.m}: {observed}")
        if detail:
            print(detail)
    if not sound:
        return EXIT_MISMATCH
    if args.axiom == "exclusions" and not holds:
        return EXIT_MISMATCH
    if args.expect and args.expect != observed:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_informativeness(args) -> int:
    rule = _rule(args)
    finer, coarser = parse_info(args.finer, rule), parse_info(args.coarser, rule)
    v = at_least_as_informative(finer, coarser, args.n, args.m, args.max_states)
    observed = "holds" if v.holds else "fails"
    if args.format == "json":
        cex = None
        if v.counterexample:
            i, q, cell = v.counterexample
            cex = {"individual": i, "sincere": list(q), "cell": cell}
        print(_dump({"finer": args.finer, "coarser": args.coarser, "rule": str(rule), "n": args.n, "m": args.m,
                     "result": observed, "counterexample": cex}))
    else:
        print(f"{args.finer} >= {args.coarser} ({rule}) n={args.n} m={args.m}: {observed}")
        if v.counterexample:
            print(f"counterexample: {v.counterexample}")
    return EXIT_OK


def cmd_verify(args) -> int:
    timing = not args.deterministic
    rows = []
    out = sys.stdout
    writer = None
    if args.format == "csv":
        writer = csv.DictWriter(out, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
    for r in run_suite(args.suite, max_states=args.max_states, workers=args.workers):
        rows.append(r)
        if writer:
            writer.writerow(r.row(timing))
        elif args.format == "text":
            flag = "PASS" if r.ok else "FAIL"
            ms = f" {r.millis:.0f}ms" if timing else ""
            print(f"{flag} {r.id}: expected {r.expected}, observed {r.observed} ({r.detail}; states={r.states}{ms})")
        out.flush()
    failed = [r for r in rows if not r.ok]
    if args.format == "json":
        payload = {
            "suite": args.suite,
            "passed": len(rows) - len(failed),
            "failed": len(failed),
            "rows": [{"id": r.id, **r.row(timing), "ok": r.ok, "detail": r.detail, "witness": r.witness} for r in rows],
        }
        print(_dump(payload))
    elif args.format == "text":
        print(f"{len(rows) - len(failed)}/{len(rows)} passed")
    return EXIT_MISMATCH if failed else EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "compare": cmd_compare,
    "manip": cmd_manip,
    "axiom": cmd_axiom,
    "informativeness": cmd_informativeness,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BoundError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
