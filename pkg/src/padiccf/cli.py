"""Command-line front end: ``padiccf expand|classify|approx|redei|jp``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import padic
from .algorithms import AlgorithmId, context_for, expand
from .analysis import Verdict, classify
from .cf import approximation_profile, consecutive_gap_valuations, evaluate_periodic, predicted_profile
from .errors import PadicError
from .mjp import jp_convergent_values, jp_expand, jp_recover, jp_strong_convergence_profile
from .padic import INF, Convention, PadicContext
from .redei import browkin2_of_root, browkin2_redei_match, polynomial_check, redei_expansion, same_terms

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

BUDGET_ENV = "PADIC_CF_BUDGET"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems share exit code 1 with every other input error
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return 10_000
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"{BUDGET_ENV} must be positive")
    return value


def _fmt_val(v) -> str:
    if v is None:
        return "-"
    if v == INF:
        return "inf"
    return str(v)


def _context(args, alg: AlgorithmId) -> PadicContext:
    return context_for(alg, args.p, step_budget=default_budget())


def cmd_expand(args) -> int:
    alg = AlgorithmId(args.algorithm)
    ctx = _context(args, alg)
    x = padic.parse_number(args.value)
    e = expand(x, alg, ctx, max_steps=args.max_steps)
    if args.format == "json":
        print(e.to_json())
    else:
        print(e.text())
        print(f"status: {e.status}")
    return EXIT_INCONCLUSIVE if e.status.kind.value == "truncated" else EXIT_OK


def cmd_classify(args) -> int:
    alg = AlgorithmId(args.algorithm)
    ctx = _context(args, alg)
    x = padic.parse_number(args.value)
    c = classify(x, alg, ctx, budget=args.budget)
    print(c.to_json())
    return EXIT_INCONCLUSIVE if c.verdict is Verdict.UNDETERMINED else EXIT_OK


def cmd_approx(args) -> int:
    alg = AlgorithmId(args.algorithm)
    ctx = _context(args, alg)
    x = padic.parse_number(args.value)
    if args.depth < 1:
        raise UsageError("--depth must be positive")
    e = expand(x, alg, ctx, max_steps=args.depth + 2)
    rows = args.depth
    if e.is_finite:
        rows = min(rows, len(e))
    upto = rows - 1
    observed = approximation_profile(e, x, upto)
    predicted = predicted_profile(e, upto)
    gaps = consecutive_gap_valuations(e, min(upto, len(e) - 2) if e.is_finite else upto)
    mismatches = 0
    rows_out = []
    for n in range(rows):
        ok = observed[n] == predicted[n]
        mismatches += not ok
        gap = gaps[n] if n < len(gaps) else None
        rows_out.append((n, gap, predicted[n], observed[n], ok))
    if args.format == "json":
        print(json.dumps({
            "rows": [{"n": n, "gap": _fmt_val(g), "predicted": _fmt_val(pv), "observed": _fmt_val(o), "ok": ok}
                     for n, g, pv, o, ok in rows_out],
            "mismatches": mismatches,
        }, sort_keys=True))
    else:
        print(f"{'n':>4}  {'v(BnBn+1)':>10}  {'predicted':>10}  {'observed':>10}")
        for n, g, pv, o, ok in rows_out:
            flag = "" if ok else "  MISMATCH"
            print(f"{n:>4}  {_fmt_val(g):>10}  {_fmt_val(pv):>10}  {_fmt_val(o):>10}{flag}")
        print(f"mismatches: {mismatches}")
    return EXIT_OK


def cmd_redei(args) -> int:
    ctx = PadicContext(args.p, Convention.BALANCED) if args.p else None
    e = redei_expansion(args.h, args.d, args.z, ctx)
    value = evaluate_periodic(e)
    check = polynomial_check(args.h, args.d, value)
    out = {
        "expansion": e.text(),
        "p": e.context.p,
        "value": padic.format_number(value),
        "check": "PASS" if check else "FAIL",
    }
    if args.match_p is not None:
        mctx = PadicContext(args.match_p, Convention.BALANCED, step_budget=default_budget())
        z = browkin2_redei_match(args.h, args.d, mctx)
        out["match"] = None if z is None else z
        if z is not None:
            own = browkin2_of_root(args.h, args.d, z, mctx)
            out["browkin2"] = own.text()
            out["agrees"] = same_terms(redei_expansion(args.h, args.d, z, mctx), own)
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        print(out["expansion"])
        print(f"p: {out['p']}")
        print(f"value: {out['value']}")
        print(f"check: {out['check']}")
        if "match" in out:
            print(f"match: {'none' if out['match'] is None else out['match']}")
            if out.get("browkin2"):
                print(f"browkin2: {out['browkin2']}")
                print(f"agrees: {'yes' if out['agrees'] else 'no'}")
    return EXIT_OK if check else EXIT_ERROR


def split_values(text: str) -> list[str]:
    """Split a comma-separated coordinate list, keeping ``quad:P,Q,D[,conjugate]`` together."""
    parts = [t.strip() for t in text.split(",")]
    out = []
    i = 0
    while i < len(parts):
        tok = parts[i]
        if tok.startswith("quad:"):
            group = parts[i : i + 3]
            i += 3
            if i < len(parts) and parts[i] == "conjugate":
                group.append(parts[i])
                i += 1
            out.append(",".join(group))
        else:
            out.append(tok)
            i += 1
    if not out or any(not t for t in out):
        raise UsageError(f"cannot parse coordinate list {text!r}")
    return out


def cmd_jp(args) -> int:
    ctx = PadicContext(args.p, Convention.BALANCED, step_budget=default_budget())
    xs = [padic.parse_number(t) for t in split_values(args.values)]
    e = jp_expand(xs, ctx, max_steps=args.max_steps)
    depth = args.depth if args.depth is not None else 50
    upto = min(depth, len(e) - 1) if not e.is_periodic else depth
    profile = jp_strong_convergence_profile(e, xs, upto)
    final = None
    recovered = None
    if e.is_finite:
        last = jp_convergent_values(e, len(e) - 1)[-1]
        final = None if last is None else [padic.format_number(v) for v in last]
        recovered = [padic.format_number(v) for v in jp_recover(e)]
    out = {
        "rows": e.to_dict()["rows"],
        "status": str(e.status),
        "final_convergent": final,
        "final_equals_input": final is not None and final == [padic.format_number(x) for x in xs],
        "recovered": recovered,
        "profile": [[_fmt_val(v) for v in seq] for seq in profile],
    }
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        print(e.text())
        print(f"status: {e.status}")
        if e.is_finite:
            print(f"final convergent: ({', '.join(final) if final else '-'})")
            print(f"final convergent equals input: {'yes' if out['final_equals_input'] else 'no'}")
            print(f"recovered from terminal row: ({', '.join(recovered)})")
        for i, seq in enumerate(profile, 1):
            print(f"profile[{i}]: " + " ".join(_fmt_val(v) for v in seq))
    return EXIT_INCONCLUSIVE if e.status.kind.value == "truncated" else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padiccf", description="p-adic continued fractions: expansion, classification and diagnostics.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    algs = [a.value for a in AlgorithmId]

    def common(sp, budget_flag):
        sp.add_argument("--p", type=int, required=True, help="odd prime")
        sp.add_argument("--algorithm", choices=algs, required=True)
        sp.add_argument("--value", required=True, help='"a/b", an integer, or "quad:P,Q,D[,conjugate]"')
        sp.add_argument(budget_flag, type=int, default=None, dest=budget_flag.lstrip("-").replace("-", "_"))
        sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("expand", help="expand a value")
    common(sp, "--max-steps")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("classify", help="finite / periodic / not periodic verdict")
    common(sp, "--budget")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("approx", help="table of approximation valuations")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--algorithm", choices=algs, required=True)
    sp.add_argument("--value", required=True)
    sp.add_argument("--depth", type=int, default=20)
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("redei", help="periodic expansion from a Redei identity")
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--z", type=int, required=True)
    sp.add_argument("--p", type=int, default=None, help="prime for the expansion context (default: chosen from z^2+hz-d)")
    sp.add_argument("--match-p", type=int, default=None, help="also test the Browkin II match at this prime")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.set_defaults(func=cmd_redei)

    sp = sub.add_parser("jp", help="p-adic Jacobi-Perron expansion of a tuple")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--values", required=True, help='comma-separated coordinates, e.g. "22/7,3/4"')
    sp.add_argument("--max-steps", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None, help="profile length (default 50)")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.set_defaults(func=cmd_jp)
    return ap


_VALUE_FLAGS = {"--value", "--values", "--h", "--d", "--z"}


def _attach_negative_values(argv: list[str]) -> list[str]:
    # argparse takes "-2/5" for an option; glue such values onto their flag
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"padiccf: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PadicError as exc:
        print(f"padiccf: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        print(f"padiccf: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
