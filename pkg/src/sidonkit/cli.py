"""Batch command-line interface.

Subcommands map onto the library operations: generate, verify, sum, tail,
ddc, search, crosscheck, cover, saturate.  Sequences are read from a file
argument or standard input in the shared text format (one integer per line,
strictly increasing); generate and saturate emit the same format so commands
compose.  Reports go to standard output as JSON (default) or an aligned
table; every numeric result carries lo/hi decimal strings with outward
rounding, never bare floats.

Exit codes: 0 success, 1 verification-false, 2 usage/format error,
3 resource or budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import construct, ddc, genfun, rigor, search, sequences
from .construct import GreedySpec, ResourceLimitError, saturate_default
from .enclosure import DEFAULT_BITS, Enclosure
from .rigor import TailRule
from .sequences import (IntegerSequence, PatternKind, SequenceFormatError,
                        find_violation)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _default_bits() -> int:
    raw = os.environ.get("SIDONKIT_BITS", "").strip()
    if not raw:
        return DEFAULT_BITS
    try:
        bits = int(raw)
        if bits < 16:
            raise ValueError
        return bits
    except ValueError:
        raise SystemExit(f"SIDONKIT_BITS must be an integer >= 16, "
                         f"got {raw!r}")


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _read_seq(path: Optional[str]) -> IntegerSequence:
    if path is None or path == "-":
        return sequences.read_sequence(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return sequences.read_sequence(fh)


def _pattern(args) -> PatternKind:
    return PatternKind.parse(args.pattern, getattr(args, "h", None),
                             getattr(args, "g", None))


def _tail_rule(args) -> TailRule:
    name = args.rule
    if name == "levine":
        return TailRule.levine()
    if args.n is None:
        raise SystemExit(f"--n is required for rule {name}")
    if name == "lindstrom-sharp":
        return TailRule.lindstrom_sharp(args.n, form=args.tail_form)
    if name == "lindstrom-weak":
        return TailRule.lindstrom_weak(args.n)
    return TailRule.offset_quadratic(args.n)


def _emit(args, envelope: dict) -> None:
    if args.format == "json":
        print(json.dumps(envelope, indent=2, sort_keys=True))
        return
    # aligned table: flat key/value walk
    rows: list[tuple[str, str]] = []

    def walk(prefix: str, node) -> None:
        if isinstance(node, dict):
            for k in sorted(node):
                walk(f"{prefix}.{k}" if prefix else k, node[k])
        elif isinstance(node, list) and node and all(
                isinstance(x, dict) for x in node):
            for i, x in enumerate(node):
                walk(f"{prefix}[{i}]", x)
        elif isinstance(node, list):
            rows.append((prefix, " ".join(str(x) for x in node)))
        else:
            rows.append((prefix, str(node)))

    walk("", envelope)
    width = max((len(k) for k, _ in rows), default=0)
    for k, v in rows:
        print(f"{k.ljust(width)}  {v}")


def _envelope(command: str, parameters: dict, results: dict,
              provenance: list[dict]) -> dict:
    return {"command": command, "parameters": parameters, "results": results,
            "provenance": provenance}


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_generate(args) -> int:
    if args.preset:
        seq = construct.preset(args.preset, args.count)
    else:
        pattern = _pattern(args)
        seed = _read_seq(args.seed) if args.seed else IntegerSequence(())
        forbidden = (_read_seq(args.forbidden) if args.forbidden
                     else IntegerSequence(()))
        spec = GreedySpec(pattern=pattern, seed=seed, count=args.count,
                          value_cap=args.value_cap, forbidden=forbidden)
        seq = construct.greedy(spec)
    sequences.write_sequence(seq, sys.stdout)
    return EXIT_OK


def _cmd_verify(args) -> int:
    seq = _read_seq(args.file)
    pattern = _pattern(args)
    witness = find_violation(seq, pattern)
    results = {"valid": witness is None, "pattern": str(pattern),
               "length": len(seq), "max_element": seq.max_element}
    if witness is not None:
        results["violation"] = witness
    _emit(args, _envelope("verify", {"pattern": str(pattern)}, results, [
        {"formula": "all pairwise sums distinct (Sidon) / representation "
                    "counts <= g (B_h[g]) / no x+y=z (sum-free)",
         "source": "pattern definitions"}]))
    return EXIT_OK if witness is None else EXIT_FALSE


def _cmd_sum(args) -> int:
    seq = _read_seq(args.file)
    k = args.k if args.k is not None else len(seq)
    if args.rule is None:
        enc = rigor.partial_power_sum(seq, args.alpha, k, args.bits)
        results = {"partial_sum": enc.to_json(args.digits), "terms": k,
                   "alpha": str(args.alpha)}
        prov = [{"formula": "sum of s^(-alpha) over the first k elements",
                 "source": "exact rational / enclosure summation"}]
    else:
        rule = _tail_rule(args)
        res = rigor.series_enclosure(seq, args.alpha, rule, args.bits)
        results = {
            "series": res.enclosure.to_json(args.digits),
            "partial": res.partial.to_json(args.digits),
            "tail_hi": res.tail.to_json(args.digits)["hi"],
            "gap_values": list(res.gap_values),
            "rule": rule.describe(),
            "terms": k,
        }
        prov = [{"formula": "prefix sum + still-extendable gap values + "
                            "tail bound over all Sidon extensions",
                 "source": rule.describe()}]
    _emit(args, _envelope("sum", {"alpha": str(args.alpha), "k": k},
                          results, prov))
    return EXIT_OK


def _cmd_tail(args) -> int:
    rule = _tail_rule(args)
    enc = rigor.tail_upper(rule, args.bits)
    results = {"tail": enc.to_json(args.digits),
               "hi_rendered": f"<= {enc.to_json(args.digits)['hi']}",
               "rule": rule.describe()}
    _emit(args, _envelope("tail", {"rule": args.rule, "n": args.n},
                          results, [{"formula": rule.describe(),
                                     "source": "proven tail bounds"}]))
    return EXIT_OK


def _cmd_ddc(args) -> int:
    witness = _read_seq(args.witness) if args.witness else None
    if args.mode == "differential":
        report = ddc.differential_report(args.c, args.bits, witness)
    else:
        report = ddc.self_contained_report(
            k=args.k, tail_start=args.tail_start, value_cap=args.value_cap,
            budget=args.budget, bits=args.bits, witness=witness)
    _emit(args, _envelope("ddc", {"mode": args.mode},
                          report.to_json(args.digits),
                          [{"formula": b.formula, "source": b.provenance}
                           for b in report.blocks]))
    return EXIT_OK


def _cmd_search(args) -> int:
    pattern = _pattern(args)
    if args.sweep:
        lo, hi = args.sweep
        print("n_cap,objective_lo,objective_hi,status,nodes,optimum_set")
        for n in range(lo, hi + 1):
            res = search.max_reciprocal_subset(n, pattern, args.alpha,
                                               budget=args.budget,
                                               workers=args.workers)
            enc = res.objective.to_json(args.digits)
            print(f"{n},{enc['lo']},{enc['hi']},{res.status.value},"
                  f"{res.nodes_explored},"
                  f"{' '.join(str(x) for x in res.optimum_set.elements)}")
        return EXIT_OK
    if args.oracle:
        res = search.brute_force_oracle(args.n_cap, pattern, args.alpha)
    elif args.k is not None:
        res = search.best_k_prefix(args.k, pattern, args.alpha,
                                   args.n_cap, budget=args.budget)
    else:
        res = search.max_reciprocal_subset(args.n_cap, pattern, args.alpha,
                                           budget=args.budget,
                                           workers=args.workers)
    _emit(args, _envelope(
        "search",
        {"n_cap": args.n_cap, "pattern": str(pattern),
         "alpha": str(args.alpha), "oracle": bool(args.oracle), "k": args.k},
        res.to_json(args.digits),
        [{"formula": "max of sum s^(-alpha) over pattern subsets",
          "source": "branch and bound with admissible-suffix pruning"
                    if not args.oracle else "exhaustive enumeration"}]))
    if res.status == search.SearchStatus.LOWER_BOUND_ONLY and args.budget:
        return EXIT_RESOURCE
    return EXIT_OK


def _cmd_crosscheck(args) -> int:
    seq = _read_seq(args.file)
    if args.kind == "mellin":
        rep = genfun.mellin_crosscheck(seq, args.alpha, args.tol)
        results = {
            "integral": f"{rep.integral:.15e}",
            "direct": f"{rep.direct:.15e}",
            "discrepancy": f"{rep.discrepancy:.3e}",
            "error_estimate": f"{rep.error_estimate:.3e}",
            "nodes": rep.nodes,
            "converged": rep.converged,
            "alpha": str(args.alpha),
        }
        prov = [{"formula": "sum s^(-alpha) = (1/Gamma(a)) * integral of "
                            "f(u) (-ln u)^(a-1) / u over (0,1)",
                 "source": "Gamma-integral identity, u = e^-x substitution"}]
        ok = rep.discrepancy <= max(args.tol * 100, 1e-6)
    elif args.kind == "envelope":
        grid = genfun.make_grid(args.grid)
        rep = genfun.envelope_check(seq, grid, g=args.g, bits=args.bits)
        worst = min(rep.rows, key=lambda r: r.slack)
        results = {
            "passed": rep.passed,
            "grid_points": len(grid),
            "min_slack": Enclosure.exact(rep.min_slack)
            .to_json(args.digits)["lo"],
            "worst_t": str(worst.t),
            "note": "grid pass is evidence, not proof",
        }
        prov = [{"formula": "f(t) <= sqrt(2 g t/(1-t)) on the grid",
                 "source": "coefficient cap of (f^2 + f(z^2))/2"}]
        ok = rep.passed
    elif args.kind == "lalpha":
        rep = genfun.lalpha_probe(seq, args.alpha)
        results = {
            "probe": f"{rep.value:.12e}",
            "error_estimate": f"{rep.error_estimate:.3e}",
            "ceiling": None if rep.ceiling is None else f"{rep.ceiling:.12e}",
            "within_ceiling": rep.within_ceiling,
            "alpha": str(args.alpha),
        }
        prov = [{"formula": "integral of f(t)^alpha over (0,1) vs "
                            "2/(1-alpha/2)",
                 "source": "pointwise envelope bound"}]
        ok = rep.within_ceiling
    else:  # wallis
        ratio = genfun.wallis_ratio(args.s)
        results = {"ratio": f"{ratio:.12f}", "s": args.s,
                   "target": "1 within 2% at s=10^4"}
        prov = [{"formula": "integral of t^s/sqrt(1-t) vs sqrt(pi/s)",
                 "source": "Wallis/beta asymptotics"}]
        ok = abs(ratio - 1) < 0.02
    _emit(args, _envelope("crosscheck", {"kind": args.kind}, results, prov))
    return EXIT_OK if ok else EXIT_FALSE


def _cmd_cover(args) -> int:
    seq = _read_seq(args.file)
    values = sequences.sumset_cover(seq, args.m_max)
    results = {"extendable": list(values), "m_max": args.m_max,
               "saturated": not values}
    _emit(args, _envelope("cover", {"m_max": args.m_max}, results, [
        {"formula": "m extendable iff m not in S, m+S misses S+S, "
                    "and 2m not in S+S",
         "source": "exact extendability predicate"}]))
    return EXIT_OK


def _cmd_saturate(args) -> int:
    seq = _read_seq(args.file)
    pattern = _pattern(args)
    if args.cap is not None:
        added = construct.saturate(seq, args.cap, pattern)
        cap = args.cap
    else:
        if pattern.kind != "sidon":
            raise SystemExit("--default-cap applies to the sidon pattern")
        result = saturate_default(seq, args.n)
        added, cap = result.added, result.cap
    if args.report:
        _emit(args, _envelope("saturate", {"cap": cap},
                              {"added": list(added.elements), "cap": cap},
                              [{"formula": "repeated minimal admissible "
                                           "insertion below the cap",
                                "source": "saturation procedure"}]))
    else:
        sequences.write_sequence(added, sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sidonkit",
        description="Sidon/B_h[g]/sum-free toolkit: constructors, certified "
                    "reciprocal sums, extremal search, DDC bounds")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"),
                        default="json")
    common.add_argument("--bits", type=int, default=None,
                        help="working precision in fractional bits "
                             "(default: SIDONKIT_BITS or 128)")
    common.add_argument("--digits", type=int, default=12,
                        help="decimal digits in rendered bounds")
    sub = p.add_subparsers(dest="cmd", required=True,
                           parser_class=lambda **kw: argparse.ArgumentParser(
                               parents=[common], **kw))

    def add_pattern_opts(sp):
        sp.add_argument("--pattern", default="sidon",
                        help="sidon | sumfree | bhg")
        sp.add_argument("--h", type=int, default=None)
        sp.add_argument("--g", type=int, default=None)

    sp = sub.add_parser("generate", help="greedy sequence construction")
    add_pattern_opts(sp)
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--value-cap", dest="value_cap", type=int, default=None)
    sp.add_argument("--seed", default=None, help="seed sequence file")
    sp.add_argument("--forbidden", default=None)
    sp.add_argument("--preset", choices=sorted(construct.PRESETS), default=None)
    sp.set_defaults(fn=_cmd_generate)

    sp = sub.add_parser("verify", help="check a sequence against a pattern")
    add_pattern_opts(sp)
    sp.add_argument("file", nargs="?", default=None)
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("sum", help="certified partial / series sums")
    sp.add_argument("--alpha", type=_parse_fraction, default=Fraction(1))
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--rule", default=None,
                    choices=(None,) + rigor.TAIL_RULES,
                    help="attach a tail rule to get a series enclosure")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--tail-form", dest="tail_form", default="integral",
                    choices=("integral", "certified"))
    sp.add_argument("file", nargs="?", default=None)
    sp.set_defaults(fn=_cmd_sum)

    sp = sub.add_parser("tail", help="proven tail upper bounds")
    sp.add_argument("--rule", required=True, choices=rigor.TAIL_RULES)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--tail-form", dest="tail_form", default="integral",
                    choices=("integral", "certified"))
    sp.set_defaults(fn=_cmd_tail)

    sp = sub.add_parser("ddc", help="distinct distance constant bounds")
    sp.add_argument("--mode", choices=("differential", "self-contained"),
                    default="self-contained")
    sp.add_argument("--c", type=_parse_fraction, default=Fraction("1.88"),
                    help="Taylor tail constant for differential mode")
    sp.add_argument("--k", type=int, default=12)
    sp.add_argument("--tail-start", dest="tail_start", type=int, default=1100)
    sp.add_argument("--value-cap", dest="value_cap", type=int, default=300)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--witness", default=None,
                    help="Sidon witness file for the lower bound")
    sp.set_defaults(fn=_cmd_ddc)

    sp = sub.add_parser("search", help="extremal subset search")
    add_pattern_opts(sp)
    sp.add_argument("--n-cap", dest="n_cap", type=int, default=None)
    sp.add_argument("--alpha", type=_parse_fraction, default=Fraction(1))
    sp.add_argument("--k", type=int, default=None,
                    help="exact set size (best-k mode; n-cap is the "
                         "value cap)")
    sp.add_argument("--oracle", action="store_true",
                    help="exhaustive enumeration (n_cap <= 26)")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--sweep", type=lambda s: tuple(int(x) for x in
                                                    s.split(":")),
                    default=None, metavar="LO:HI",
                    help="CSV sweep over an n_cap range")
    sp.set_defaults(fn=_cmd_search)

    sp = sub.add_parser("crosscheck", help="analytic cross-checks")
    sp.add_argument("--kind", choices=("mellin", "envelope", "lalpha",
                                       "wallis"), default="mellin")
    sp.add_argument("--alpha", type=_parse_fraction, default=Fraction(1))
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--grid", type=int, default=200)
    sp.add_argument("--g", type=int, default=1)
    sp.add_argument("--s", type=int, default=10 ** 4)
    sp.add_argument("file", nargs="?", default=None)
    sp.set_defaults(fn=_cmd_crosscheck)

    sp = sub.add_parser("cover", help="extendable values below a cap")
    sp.add_argument("--m-max", dest="m_max", type=int, required=True)
    sp.add_argument("file", nargs="?", default=None)
    sp.set_defaults(fn=_cmd_cover)

    sp = sub.add_parser("saturate", help="add all admissible values <= cap")
    add_pattern_opts(sp)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--n", type=int, default=None,
                    help="default-cap parameter (defaults to max element)")
    sp.add_argument("--report", action="store_true",
                    help="emit a JSON report instead of the sequence")
    sp.add_argument("file", nargs="?", default=None)
    sp.set_defaults(fn=_cmd_saturate)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.bits is None:
        args.bits = _default_bits()
    try:
        return args.fn(args)
    except SequenceFormatError as exc:
        print(f"sequence format error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except search.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, SystemExit) as exc:
        if isinstance(exc, SystemExit):
            code = exc.code
            if isinstance(code, int):
                return code
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
