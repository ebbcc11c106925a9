"""Command line interface.

Exit codes: 0 positive verdict / success, 1 negative verdict, 2 usage or
parse error, 3 unknown (cap or enumeration bound exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Optional, Sequence

from . import corpus
from .abelian import decide_additivity
from .algebra import AlgebraError, BoundExceeded, Relation
from .clone import DEFAULT_CAP, enumerate_term_operations, find_maltsev_witnesses, find_subtraction_witnesses
from .formats import FormatError, load_algebra, parse_relation_file, relation_to_dict
from .harness import replay_proof
from .matrices import builtin_matrix, extend_matrix, is_closed, m_closure, sweep_compatible_relations
from .report import (
    additivity_dict,
    build_report,
    closedness_dict,
    preferred_subtraction,
    search_dict,
    transcript_dict,
)

EXIT = {"yes": 0, "no": 1, "unknown": 3}


def _fmt_tuple(t):
    return "(" + ",".join(str(v) for v in t) + ")"


def _fmt_counterexample(c: dict) -> str:
    ce = c["counterexample"]
    assign = ", ".join(f"{k}={v}" for k, v in ce["assignment"].items())
    return f"counterexample {assign} missing {_fmt_tuple(ce['missing'])}"


def _matrix(args):
    M = builtin_matrix(args.matrix)
    for kind in args.extend or ():
        M = extend_matrix(M, kind)
    return M


def cmd_subtractive(args, alg):
    search = find_subtraction_witnesses(alg, args.cap)
    payload = search_dict(search)
    lines = [f"{alg.name}: subtractive {search.verdict}"]
    for w in payload["witnesses"]:
        lines.append(f"  witness {w['term']}  table={w['table']}  homomorphic={w['homomorphic']}")
    if search.exists is False and search.complete:
        clone = enumerate_term_operations(alg, 2, args.cap)
        if len(clone) <= 12:
            lines.append("  clone = {" + ", ".join(sorted(t.term_text() for t in clone)) + "}; search complete")
    lines.append(f"  search {'complete' if search.complete else 'incomplete'}; clone size {search.clone_size}")
    if search.note:
        lines.append(f"  note: {search.note}")
    return EXIT[search.verdict], payload, lines


def cmd_maltsev(args, alg):
    search = find_maltsev_witnesses(alg, args.cap)
    payload = search_dict(search)
    lines = [f"{alg.name}: maltsev {search.verdict}"]
    for w in payload["witnesses"][:5]:
        lines.append(f"  witness {w['term']}")
    if len(payload["witnesses"]) > 5:
        lines.append(f"  ... {len(payload['witnesses']) - 5} more")
    lines.append(f"  search {'complete' if search.complete else 'incomplete'}; clone size {search.clone_size}")
    if search.note:
        lines.append(f"  note: {search.note}")
    return EXIT[search.verdict], payload, lines


def cmd_additive(args, alg):
    verdict = decide_additivity(alg, args.cap)
    payload = additivity_dict(alg, verdict)
    lines = [f"{alg.name}: additive {verdict.answer}"]
    if payload["witness"]:
        lines.append(f"  homomorphic subtraction {payload['witness']['term']}")
        lines.append(f"  plus = {payload['abelian_structure']['plus']}, neg = {payload['abelian_structure']['neg']}")
    if verdict.note:
        lines.append(f"  note: {verdict.note}")
    return EXIT[verdict.answer], payload, lines


def _relation(args, alg) -> Relation:
    R = parse_relation_file(args.relation, alg.size)
    return R


def cmd_closed(args, alg):
    M = _matrix(args)
    R = _relation(args, alg)
    verdict = is_closed(alg, R, M)
    payload = closedness_dict(verdict)
    lines = [f"{alg.name}: relation {'is' if verdict.closed else 'is not'} closed under {args.matrix}"]
    if not verdict.closed:
        lines.append("  " + _fmt_counterexample(payload))
    return (0 if verdict.closed else 1), payload, lines


def cmd_closure(args, alg):
    M = _matrix(args)
    R = _relation(args, alg)
    C = m_closure(alg, R, M)
    payload = relation_to_dict(C)
    lines = [f"{alg.name}: closure has {len(C)} tuples (input {len(R)})"]
    lines += ["  " + _fmt_tuple(t) for t in sorted(C.tuples)]
    return 0, payload, lines


def cmd_sweep(args, alg):
    M = _matrix(args)
    swept = sweep_compatible_relations(alg, args.arity, M)
    rows = [{"relation": [list(t) for t in sorted(R.tuples)], **closedness_dict(v)} for R, v in swept]
    bad = [r for r in rows if not r["closed"]]
    payload = {"relations": rows, "count": len(rows), "not_closed": len(bad)}
    lines = [f"{alg.name}: {len(rows)} compatible {args.arity}-ary relations, {len(bad)} not closed under {args.matrix}"]
    for r in bad:
        lines.append("  {" + ", ".join(_fmt_tuple(t) for t in r["relation"]) + "}: " + _fmt_counterexample(r))
    return (0 if not bad else 1), payload, lines


def cmd_replay(args, alg):
    search = find_subtraction_witnesses(alg, args.cap)
    w = preferred_subtraction(search)
    tr = replay_proof(alg, w)
    payload = transcript_dict(tr)
    payload["subtraction"] = None if w is None else w.op.term_text()
    lines = [f"{alg.name}: replay {'passed' if tr.passed else 'broke at ' + tr.breaking_step}"]
    lines.append(f"  R has {len(tr.R)}/{alg.size ** 2} pairs; (0,a) in R for all a: {tr.zero_column}")
    if w is not None:
        lines.append(f"  s = {payload['subtraction']}")
        lines.append(f"  R' closed under proof3: {tr.R_prime_closed.closed}")
    if tr.chain_steps is not None:
        lines.append(f"  implication chain: {sum(c.ok for c in tr.chain_steps)}/{len(tr.chain_steps)} pairs")
    if tr.transport_checks:
        ok = sum(r for _, r in tr.transport_checks)
        lines.append(f"  transport along endomorphisms: {ok}/{len(tr.transport_checks)}")
    if w is None and search.exists is None:
        return 3, payload, lines
    return (0 if tr.passed else 1), payload, lines


def cmd_report(args, alg):
    report = build_report(alg, args.cap)
    payload = report.to_dict()
    v = payload["verdicts"]
    lines = [
        f"{alg.name} (size {alg.size}, zero {alg.zero})",
        f"  subtractive: {v['subtractive']['verdict']}",
        f"  maltsev:     {v['maltsev']['verdict']}",
        f"  additive:    {v['additive']['verdict']}",
        f"  proof replay: {'passed' if payload['proof']['passed'] else 'broke at ' + payload['proof']['breaking_step']}",
    ]
    for c in payload["counterexamples"]:
        lines.append(f"  {c['matrix']}: relation {c['relation']} not closed, " + _fmt_counterexample(c))
    lines.append(f"  time: {payload['wall_time_ms']:.1f} ms")
    if args.figures:
        from .harness import compute_R
        from .plotting import render_figures

        w = v["additive"]["witness"] or (v["subtractive"]["witnesses"] or [None])[0]
        paths = render_figures(alg, args.figures, witness_table=w["table"] if w else None, R=compute_R(alg))
        payload["figures"] = [str(p) for p in paths]
        lines += [f"  figure: {p}" for p in paths]
    return 0, payload, lines


COMMANDS = {
    "subtractive": (cmd_subtractive, "decide whether the generated variety is subtractive"),
    "maltsev": (cmd_maltsev, "search for a Mal'tsev term"),
    "additive": (cmd_additive, "decide whether the generated variety is abelian"),
    "closed": (cmd_closed, "check a relation for closedness under a matrix"),
    "closure": (cmd_closure, "least closed relation containing a relation"),
    "sweep": (cmd_sweep, "check every compatible relation of an arity"),
    "replay": (cmd_replay, "replay the subtractive + cosubtractive => additive argument"),
    "report": (cmd_report, "run everything"),
}


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommands must not reset options given before the subcommand name
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--cap",
        type=int,
        default=argparse.SUPPRESS if suppress else DEFAULT_CAP,
        help="max distinct tables per clone search (0 = unlimited)",
    )
    p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS if suppress else "text")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subtractive", description="Subtractivity, Mal'tsev and additivity checks for finite pointed algebras.",
        parents=[_common(False)],
    )
    parser.add_argument("--corpus", action="store_true", help="list bundled algebras and exit")
    sub = parser.add_subparsers(dest="command")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[_common(True)])
        p.add_argument("algebra", help="algebra JSON file or bundled algebra name")
        if name in ("closed", "closure", "sweep"):
            p.add_argument("--matrix", choices=("diag", "vars", "proof3"), required=True)
            p.add_argument("--extend", choices=("uu0", "v0v"), action="append")
        if name in ("closed", "closure"):
            p.add_argument("--relation", required=True)
        if name == "sweep":
            p.add_argument("--arity", type=int, required=True)
        if name == "report":
            p.add_argument("--figures", metavar="DIR", help="write PNG figures into DIR")
    return parser


def run_command(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.corpus:
        for name, factory in corpus.CORPUS.items():
            alg = factory()
            ops = ", ".join(f"{n}/{a}" for n, a in alg.signature) or "no operations"
            print(f"{name:10s} size {alg.size}  zero {alg.zero}  {ops}", file=out)
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    func = COMMANDS[args.command][0]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            alg = load_algebra(args.algebra)
            code, payload, lines = func(args, alg)
        except BoundExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 3
        except (FormatError, AlgebraError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    else:
        print("\n".join(lines), file=out)
    return code


def main() -> None:
    sys.exit(run_command())
