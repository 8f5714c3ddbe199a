"""The ``iag`` command.

Exit codes: 0 success, 1 usage or validation error, 2 a resource cap was
exceeded, 3 an internal invariant failed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .complexity import DEFAULT_K_MAX, ComplexitySpec, max_certainty, test_complexity, xor_maximality_check
from .errors import ResourceLimitExceeded
from .formula import TruthTable, formula
from .game import (
    DEFAULT_STATE_CAP,
    GameSpec,
    first_moves,
    random_test_monte_carlo,
    random_test_value,
    render_strategy,
    solve,
    uniform_split_value,
)
from .prob import OutcomeCounts, best_action, parse_rational, posterior_formula, threshold
from .report import (
    fmt,
    parse_alpha,
    parse_grid,
    parse_observations,
    parse_payoffs,
    parse_prior,
    to_csv,
    to_json,
    xor_report_csv,
    xor_report_to_dict,
)
from .ri import JOBS_ENV, RULES, census, default_jobs, exhibits_ri, sample

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INTERNAL = 0, 1, 2, 3

RAW = argparse.RawDescriptionHelpFormatter

CSV_HELP = """\
CSV columns:
  census/sample: n,mode,total,ri,unknown,fraction,ci_low,ci_high,seed,witness_histogram
                 (witness_histogram packs "C:count" pairs separated by ';')
  complexity --all: table_bits,cpl with --keep-tables, otherwise cpl,count
"""
CSV_EPILOG = {"epilog": CSV_HELP, "formatter_class": RAW}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_formula(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("-f", "--formula", help='formula text, e.g. "v1|v2" (operators ! & ^ |, constants T F)')
    src.add_argument("--table", help="truth table as a bitstring, entry for assignment 0 first")
    p.add_argument("-n", "--num-vars", type=int, help="number of variables (default: largest vK mentioned)")


def _add_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prior", default="uniform", help="'uniform', one p, or p1,...,pn (default: uniform)")
    p.add_argument("--alpha", default="1/4", help="test accuracy, one value or a1,...,an in (0,1/2) (default: 1/4)")
    p.add_argument("--payoffs", default="1,-16", help="g,b with g > 0 > b (default: 1,-16)")


def _add_ri_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c-grid", help="comma-separated C values (default: 1/(2n),1/(4n),1/(8n),1/(16n))")
    p.add_argument("--closed-tminus", action="store_true", help="test emptiness of the closed T- regions")
    p.add_argument("--rule", choices=RULES, default="census", help="sufficiency rule (default: census)")


def _add_output(p: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
    p.add_argument("--format", choices=formats, default=formats[0], help=f"output format (default: {formats[0]})")
    p.add_argument("-o", "--output", help="write the report to this file instead of stdout")


def _add_jobs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, help=f"worker processes (default: ${JOBS_ENV} or the CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="iag",
        description="Information-acquisition games over noisy Boolean tests.",
        epilog=CSV_HELP,
        formatter_class=RAW,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("posterior", help="posterior of the formula after observations, and the best guess")
    _add_formula(p)
    _add_model(p)
    p.add_argument("--obs", default="", help='observations "v1:T,v2:F,v1:T*3" (default: none)')
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("solve", help="optimal value and strategy by backward induction")
    _add_formula(p)
    _add_model(p)
    p.add_argument("-k", "--budget", type=int, required=True, help="number of tests")
    p.add_argument("--heuristic", choices=("random", "uniform"), help="report a heuristic value instead")
    p.add_argument("--depth", type=int, default=3, help="strategy rendering depth (default: 3)")
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP, help="abort above this many states")
    p.add_argument("--monte-carlo", type=int, metavar="N", help="also estimate the random heuristic from N plays")
    p.add_argument("--seed", type=int, default=0, help="seed for --monte-carlo (default: 0)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("ri", help="rational-inattention verdict for one formula")
    _add_formula(p)
    _add_ri_options(p)
    p.add_argument("--explain", action="store_true", help="print per-LP diagnostics")
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format (default: text)")
    p.set_defaults(func=cmd_ri)

    p = sub.add_parser("census", help="RI verdicts over every truth table in n variables", **CSV_EPILOG)
    p.add_argument("-n", "--num-vars", type=int, required=True)
    _add_ri_options(p)
    _add_jobs(p)
    p.add_argument("--no-symmetry", action="store_true", help="judge every table instead of one per class")
    p.add_argument("--keep-verdicts", action="store_true", help="include per-table verdicts in JSON")
    _add_output(p, ("json", "csv"))
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("sample", help="RI verdicts over uniformly sampled truth tables", **CSV_EPILOG)
    p.add_argument("-n", "--num-vars", type=int, required=True)
    p.add_argument("--samples", type=int, default=4000, help="number of tables (default: 4000)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    _add_ri_options(p)
    _add_jobs(p)
    _add_output(p, ("json", "csv"))
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("complexity", help="test complexity of a formula, or of every table with --all", **CSV_EPILOG)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("-f", "--formula")
    src.add_argument("--table")
    src.add_argument("--all", action="store_true", help="every table in n variables, checking that XOR is hardest")
    p.add_argument("-n", "--num-vars", type=int)
    _add_model(p)
    p.add_argument("--q", help="threshold in (0,1/2] (default: derived from --payoffs)")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX, help=f"largest budget tried (default: {DEFAULT_K_MAX})")
    p.add_argument("--curve", action="store_true", help="also print the best certainty for each budget")
    p.add_argument("--keep-tables", action="store_true", help="with --all, report every table")
    p.add_argument("--no-symmetry", action="store_true")
    _add_jobs(p)
    _add_output(p, ("json", "csv"))
    p.set_defaults(func=cmd_complexity)
    return parser


def _table(args) -> TruthTable:
    if args.table is not None:
        tt = TruthTable.from_bitstring(args.table)
        if args.num_vars is not None and args.num_vars != tt.num_vars:
            raise ValueError(f"--table has {tt.num_vars} variables but -n is {args.num_vars}")
        return tt
    return formula(args.formula, args.num_vars)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _progress(done: int, total: int) -> None:
    print(f"\r{done}/{total}", end="" if done < total else "\n", file=sys.stderr, flush=True)


def cmd_posterior(args) -> int:
    tt = _table(args)
    n = tt.num_vars
    prior, alpha, payoffs = parse_prior(args.prior, n), parse_alpha(args.alpha, n), parse_payoffs(args.payoffs)
    counts = parse_observations(args.obs, n)
    p = posterior_formula(tt, prior, alpha, counts)
    action, value = best_action(p, payoffs)
    print(f"observations: {counts}")
    print(f"p={fmt(p)}")
    print(f"action={action}")
    print(f"value={fmt(value)}")
    print(f"threshold q={fmt(threshold(payoffs))}")
    return EXIT_OK


def cmd_solve(args) -> int:
    tt = _table(args)
    n = tt.num_vars
    game = GameSpec(tt, parse_prior(args.prior, n), args.budget, parse_alpha(args.alpha, n), parse_payoffs(args.payoffs))
    if args.heuristic == "random":
        print(f"random-test value={fmt(random_test_value(game))}")
    elif args.heuristic == "uniform":
        print(f"uniform-split value={fmt(uniform_split_value(game))}")
    else:
        report = solve(game, args.state_cap)
        print(f"optimal value={fmt(report.value)}")
        if game.k > 0 and n > 0:
            moves = first_moves(game, args.state_cap)
            chosen = report.strategy.test(OutcomeCounts.empty(n))
            print(f"first move=v{chosen + 1} (all optimal first moves: {{{','.join(f'v{i + 1}' for i in moves)}}})")
        print("strategy:")
        for line in render_strategy(game, report.strategy, args.depth):
            print(f"  {line}")
    if args.monte_carlo:
        est = random_test_monte_carlo(game, args.monte_carlo, args.seed)
        print(f"random-test estimate={est:.6f} (samples={args.monte_carlo}, seed={args.seed})")
    return EXIT_OK


def cmd_ri(args) -> int:
    tt = _table(args)
    grid = parse_grid(args.c_grid) if args.c_grid else None
    v = exhibits_ri(tt, grid, closed=args.closed_tminus, rule=args.rule, explain=args.explain)
    if args.format == "json":
        data = {
            "schema_version": 1,
            "table": tt.bitstring(),
            "verdict": str(v.verdict),
            "witness_c": None if v.witness_c is None else str(v.witness_c),
            "m_plus": None if v.m_plus is None else str(v.m_plus),
            "minimax": None if v.minimax is None else str(v.minimax),
            "reason": v.reason,
            "diagnostics": list(v.diagnostics),
        }
        sys.stdout.write(to_json(data))
        return EXIT_OK
    print(f"verdict={v.verdict}")
    print(f"witness C={fmt(v.witness_c)}")
    print(f"m+={fmt(v.m_plus)}")
    print(f"minimax power={fmt(v.minimax)}")
    if v.reason:
        print(f"reason: {v.reason}")
    for line in v.diagnostics:
        print(f"  {line}")
    return EXIT_OK


def _jobs(args) -> int:
    jobs = default_jobs() if args.jobs is None else args.jobs
    if jobs < 1:
        raise ValueError("--jobs must be positive")
    return jobs


def _write_census(report, args) -> int:
    text = report.to_json() if args.format == "json" else to_csv(report.csv_rows())
    _emit(text, args.output)
    print(f"n={report.n} ri={report.ri} unknown={report.unknown} runtime={report.runtime_s}s", file=sys.stderr)
    return EXIT_OK


def cmd_census(args) -> int:
    grid = parse_grid(args.c_grid) if args.c_grid else None
    report = census(
        args.num_vars,
        grid,
        jobs=_jobs(args),
        closed=args.closed_tminus,
        symmetry=not args.no_symmetry,
        rule=args.rule,
        keep_verdicts=args.keep_verdicts,
        progress=_progress,
    )
    return _write_census(report, args)


def cmd_sample(args) -> int:
    grid = parse_grid(args.c_grid) if args.c_grid else None
    report = sample(
        args.num_vars,
        args.samples,
        args.seed,
        grid,
        jobs=_jobs(args),
        closed=args.closed_tminus,
        rule=args.rule,
        progress=_progress,
    )
    return _write_census(report, args)


def _q(args, payoffs) -> Fraction:
    return parse_rational(args.q) if args.q is not None else threshold(payoffs)


def cmd_complexity(args) -> int:
    payoffs = parse_payoffs(args.payoffs)
    q = _q(args, payoffs)
    if args.all:
        if args.num_vars is None:
            raise ValueError("--all needs -n")
        alpha = parse_alpha(args.alpha, args.num_vars)
        if not alpha.is_uniform() or (args.prior or "uniform") != "uniform":
            raise ValueError("--all uses the uniform prior and a single accuracy")
        report = xor_maximality_check(
            args.num_vars,
            alpha.alpha[0],
            q,
            args.k_max,
            jobs=_jobs(args),
            symmetry=not args.no_symmetry,
            keep_tables=args.keep_tables,
        )
        text = to_json(xor_report_to_dict(report)) if args.format == "json" else xor_report_csv(report)
        _emit(text, args.output)
        print(f"cpl(XOR)={report.xor_cpl} cpl(not XOR)={report.xnor_cpl} maximal={report.maximal}", file=sys.stderr)
        if not report.maximal:
            print(f"XOR is not the hardest table: {report.violations[:10]}", file=sys.stderr)
            return EXIT_INTERNAL
        return EXIT_OK
    tt = _table(args)
    n = tt.num_vars
    prior, alpha = parse_prior(args.prior, n), parse_alpha(args.alpha, n)
    spec = ComplexitySpec(tt, prior, alpha, q, args.k_max)
    cpl = test_complexity(spec)
    print(f"q={fmt(q)}")
    print(f"cpl={cpl}")
    if args.curve:
        top = args.k_max if not isinstance(cpl, int) else cpl
        for k in range(top + 1):
            c, best = max_certainty(tt, prior, alpha, k)
            example = min(best.profiles)
            print(f"  k={k}: certainty={fmt(c)} e.g. {example}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitExceeded as exc:
        print(f"iag: resource limit exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except AssertionError as exc:
        print(f"iag: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, TypeError, IndexError, OSError) as exc:
        print(f"iag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
