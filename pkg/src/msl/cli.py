"""Command line entry point: ``msl <subcommand> ...``.

Exit codes: 0 on a positive result, 1 on a negative or unknown result,
2 on usage errors and malformed input (reported with line and column).
"""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from msl.counting import CountingError, count_report
from msl.evaluator import Cover, Evaluator
from msl.formats import FormatError, format_model, format_model_set, parse_model_set, parse_perspective, parse_system, parse_weights
from msl.fo import EvaluationError
from msl.models import ChoiceFunction, Interpretation, ModelError, ModelSet
from msl.parser import ParseError, parse
from msl.perspectives import persp_eval, persp_eval_signed
from msl.printer import to_text
from msl.syntax import Formula, SignatureError
from msl.systems import SelectorViolation, SystemDefinitionError, run_system
from msl.translate import DEFAULT_D, SatStatus, TranslationError, bounded_fo_sat, bounded_lc_sat, translate
from msl.weights import AGGREGATORS, WeightError, full_value, intersect_then_weigh, value_of

OK, NEGATIVE, USAGE = 0, 1, 2


class InputError(Exception):
    """Malformed input; the message already carries the location."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: cannot read: {e.strerror or e}") from None


def _formula(args, sig=None) -> Formula:
    if args.expr is not None:
        text, source = args.expr, "<expr>"
    elif args.formula is not None:
        text, source = _read(args.formula), args.formula
    else:
        raise InputError("give --formula FILE or --expr TEXT")
    try:
        return parse(text, sig)
    except ParseError as e:
        raise InputError(f"{source}:{e.line}:{e.column}: {e.message}") from None


def _model_set(path: str):
    try:
        return parse_model_set(_read(path), path)
    except FormatError as e:
        raise InputError(str(e)) from None


def _flag(b: bool) -> str:
    return str(b).lower()


def _emit(args, pairs: list[tuple[str, object]], text: Optional[str] = None):
    if args.output == "tsv":
        for k, v in pairs:
            print(f"{k}\t{_flag(v) if isinstance(v, bool) else v}")
    else:
        print(text if text is not None else " ".join(f"{k}={_flag(v) if isinstance(v, bool) else v}" for k, v in pairs))


# -- subcommands ----------------------------------------------------------------


def cmd_eval(args) -> int:
    ms, sig = _model_set(args.models)
    f = _formula(args, sig)
    ev = Evaluator(fast_path=not args.no_fast_path, cover=args.cover)
    want = args.turnstile
    pairs = []
    if want in ("pos", "both"):
        pairs.append(("pos", ev.pos(ms, f)))
    if want in ("neg", "both"):
        pairs.append(("neg", ev.neg(ms, f)))
    _emit(args, pairs)
    if args.witness:
        for name, value in pairs:
            if value:
                _print_witness(name, ev.witness(ms, f, positive=name == "pos"), ms)
    result = dict(pairs)
    return OK if result.get("pos", result.get("neg")) else NEGATIVE


def _print_witness(name: str, w, ms: ModelSet):
    if w is None:
        print(f"{name} witness: none at the top-level node")
    elif isinstance(w, ChoiceFunction):
        kind = "constant choice" if w.constant else "choice"
        print(f"{name} witness: {kind} " + " ".join(str(v) for v in w.values))
    elif isinstance(w, Cover):
        print(f"{name} witness: cover")
        print("left:\n" + format_model_set(w.left), end="")
        print("right:\n" + format_model_set(w.right), end="")


def cmd_translate(args) -> int:
    f = _formula(args)
    print(to_text(translate(f, args.d_name)))
    return OK


def cmd_sat(args) -> int:
    f = _formula(args)
    if args.mode == "fo":
        res = bounded_fo_sat(f, args.max_domain)
    else:
        res = bounded_lc_sat(f, args.max_models, args.max_domain)
    _emit(args, [("status", res.status.value), ("examined", res.examined)])
    if res.witness is not None:
        if isinstance(res.witness, Interpretation):
            print(format_model(res.witness))
        else:
            print(format_model_set(res.witness), end="")
    return OK if res.status is SatStatus.SAT_WITHIN_BOUND else NEGATIVE


def cmd_count(args) -> int:
    f = _formula(args)
    rep = count_report(f, args.n, args.closed_form)
    if args.output == "tsv":
        print("n\tbrute\tclosed\tmatch")
        print(rep.tsv())
    else:
        print(rep.tsv().replace("\t", " ").rstrip())
    return NEGATIVE if rep.match is False else OK


def cmd_persp_eval(args) -> int:
    try:
        p, sig = parse_perspective(_read(args.perspective), args.perspective)
    except FormatError as e:
        raise InputError(str(e)) from None
    f = _formula(args, sig)
    if args.semantics == "first":
        holds = persp_eval(p, f)
        _emit(args, [("holds", holds)], _flag(holds))
        return OK if holds else NEGATIVE
    v = persp_eval_signed(p, f)
    _emit(args, [("pos", v.positive), ("neg", v.negative)])
    return OK if v.positive else NEGATIVE


def cmd_weigh(args) -> int:
    universe, _ = _model_set(args.universe)
    try:
        wu = parse_weights(_read(args.weights), universe, args.aggregator, args.weights)
    except FormatError as e:
        raise InputError(str(e)) from None
    wu.threshold = Fraction(args.threshold)
    names = [n for n in (args.props or "").split(",") if n]
    if args.full:
        value = full_value(wu)
    elif args.intersect:
        value = intersect_then_weigh(wu, names)
    else:
        value = value_of(wu, names)
    truth = wu.truth(value)
    _emit(args, [("value", value), ("true", truth)])
    return OK if truth else NEGATIVE


def cmd_simulate(args) -> int:
    try:
        sysm = parse_system(_read(args.system), args.system)
    except FormatError as e:
        raise InputError(str(e)) from None
    try:
        ev = run_system(sysm, args.start, args.steps)
    except SelectorViolation as e:
        print(f"violation: {e}")
        return NEGATIVE
    for j, (s, a) in enumerate(ev.steps):
        print(f"{j}\t{s}\t{','.join(a)}")
    print(f"{len(ev.steps)}\t{ev.final}")
    problems = ev.violations(sysm.base)
    for p in problems:
        print(f"violation: {p}")
    return NEGATIVE if problems else OK


def cmd_suite(args) -> int:
    from msl.suite import run_suite

    try:
        report = run_suite(args.seed, args.only)
    except KeyError as e:
        raise InputError(e.args[0]) from None
    print(report.text(), end="")
    return OK if report.ok else NEGATIVE


# -- argument parsing -------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="msl", description="Model-set logic toolkit.")
    ap.add_argument("--output", choices=("text", "tsv"), default="text", help="report format")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_formula(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--formula", metavar="FILE", help="file holding one formula")
        g.add_argument("--expr", metavar="TEXT", help="formula given inline")
        p.add_argument("--output", choices=("text", "tsv"), default=argparse.SUPPRESS)
        return p

    p = with_formula(sub.add_parser("eval", help="evaluate on a model set"))
    p.add_argument("--models", required=True, metavar="FILE")
    p.add_argument("--turnstile", choices=("pos", "neg", "both"), default="both")
    p.add_argument("--witness", action="store_true", help="print the witness of the top-level clause")
    p.add_argument("--no-fast-path", action="store_true", help="never evaluate first-order parts member by member")
    p.add_argument("--cover", choices=("three-way", "partition"), default="three-way")
    p.set_defaults(run=cmd_eval)

    p = with_formula(sub.add_parser("translate", help="rewrite C x into E x with a domain predicate"))
    p.add_argument("--d-name", default=DEFAULT_D)
    p.set_defaults(run=cmd_translate)

    p = with_formula(sub.add_parser("sat", help="bounded satisfiability search"))
    p.add_argument("--mode", choices=("fo", "lc"), default="fo")
    p.add_argument("--max-domain", type=_positive, default=3)
    p.add_argument("--max-models", type=_positive, default=1)
    p.add_argument("--deterministic", action="store_true", help="accepted for scripts; the search order is always fixed")
    p.set_defaults(run=cmd_sat)

    p = with_formula(sub.add_parser("count", help="count labelled models of size n"))
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--closed-form", choices=("sym", "anti-involutive"))
    p.set_defaults(run=cmd_count)

    p = with_formula(sub.add_parser("persp-eval", help="evaluate on a perspective"))
    p.add_argument("--perspective", required=True, metavar="FILE")
    p.add_argument("--semantics", choices=("first", "signed"), default="signed")
    p.set_defaults(run=cmd_persp_eval)

    p = sub.add_parser("weigh", help="value of a set of weighted properties")
    p.add_argument("--output", choices=("text", "tsv"), default=argparse.SUPPRESS)
    p.add_argument("--universe", required=True, metavar="FILE")
    p.add_argument("--weights", required=True, metavar="FILE")
    p.add_argument("--props", default="", help="comma separated property names")
    p.add_argument("--aggregator", choices=sorted(AGGREGATORS), default="sum")
    p.add_argument("--threshold", default="0", help="a value at or above this counts as true")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--full", action="store_true", help="aggregate every property")
    g.add_argument("--intersect", action="store_true", help="weigh the intersection of --props")
    p.set_defaults(run=cmd_weigh)

    p = sub.add_parser("simulate", help="run a system")
    p.add_argument("--system", required=True, metavar="FILE")
    p.add_argument("--start", required=True)
    p.add_argument("--steps", type=_natural, default=10)
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser("suite", help="seeded property suites")
    p.add_argument("--output", choices=("text", "tsv"), default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--only", action="append", metavar="NAMES", help="comma separated property names")
    p.add_argument("--deterministic", action="store_true", help="accepted for scripts; runs are always seeded")
    p.set_defaults(run=cmd_suite)
    return ap


_INPUT_ERRORS = (
    InputError,
    ModelError,
    SignatureError,
    EvaluationError,
    TranslationError,
    CountingError,
    WeightError,
    SystemDefinitionError,
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    buf = io.StringIO()
    try:
        with redirect_stdout(buf):
            code = args.run(args)
    except _INPUT_ERRORS as e:
        sys.stdout.write(buf.getvalue())
        print(f"msl: error: {e}", file=sys.stderr)
        return USAGE
    sys.stdout.write(buf.getvalue())
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
