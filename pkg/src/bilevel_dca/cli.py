"""Command-line interface: ``bilevel-dca {solve,radial-search,eval-cost,bench,check}``.

Exit codes: 0 success, 1 a self-check failed, 2 bad configuration or usage,
3 I/O error, 4 malformed input file, 5 numerical failure in the solver.
Every error is reported as a single ``error: ...`` line on stderr.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .continuation import PRESETS, ContinuationSchedule, solve
from .dataio import emit_report, format_report, load_dataset, load_points, parse_report
from .estimator import make_problem
from .exceptions import BilevelError, ConfigError, NumericalFailure, ParseError
from .initialization import StartSpec, multistart, profile, radial_search, random_start
from .postprocess import pick_total_center, tree_cost

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_IO, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3, 4, 5

BUNDLED = ("eil76", "ds18")
DEFAULT_K = {"eil76": 3, "ds18": 2, "pr1002": 6}
SCHEDULE_KEYS = ("lambda0", "mu0", "sigma1", "sigma2", "n_outer", "n_inner")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def resolve_input(name):
    """A file path, or the name of a bundled data set."""
    path = Path(name)
    if path.exists():
        return load_points(path)
    if name.lower() in BUNDLED:
        return load_dataset(name)
    raise FileNotFoundError(f"input file not found: {name}")


def build_schedule(args):
    """Preset, then explicit factors, then bound-derived factors."""
    base = PRESETS[args.preset] if args.preset else ContinuationSchedule()
    values = {k: getattr(base, k) for k in SCHEDULE_KEYS}
    for key in SCHEDULE_KEYS:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.lambda_max is not None or args.mu_min is not None:
        if args.sigma1 is not None or args.sigma2 is not None:
            raise ConfigError("give either sigma1/sigma2 or lambda_max/mu_min, not both")
        lmax = args.lambda_max if args.lambda_max is not None else values["lambda0"]
        mmin = args.mu_min if args.mu_min is not None else values["mu0"]
        return ContinuationSchedule.from_bounds(
            values["lambda0"], lmax, values["mu0"], mmin, values["n_outer"], values["n_inner"]
        )
    if args.sigma1_total is not None:
        if args.sigma1 is not None:
            raise ConfigError("give either sigma1 or sigma1_total, not both")
        return ContinuationSchedule.from_total_ratio(
            values["lambda0"], args.sigma1_total, values["mu0"], values["sigma2"], values["n_outer"], values["n_inner"]
        )
    return ContinuationSchedule(**values)


def _threads(args):
    return args.threads if args.threads else (os.cpu_count() or 1)


def _k(args, default=3):
    k = args.k if args.k is not None else DEFAULT_K.get(str(args.input).lower(), default)
    if k < 2:
        raise ConfigError("k must be >= 2")
    return k


def _write(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _finish(report, args, prof=None):
    if args.output in (None, "-"):
        sys.stdout.write(format_report(report, prof, include_time=args.timing))
    else:
        emit_report(report, args.output, prof, include_time=args.timing)
    print(
        f"model {report.model} k={report.k}: snapped cost {report.snapped_cost:.6f} "
        f"(nodes {list(report.snapped_centers)} + total {report.total_center}), "
        f"{report.wall_time:.2f}s",
        file=sys.stderr,
    )


def cmd_solve(args):
    A = resolve_input(args.input)
    problem = make_problem(A, _k(args), args.model)
    schedule = build_schedule(args)
    seeds = [args.seed + j for j in range(args.starts)]
    best, _ = multistart(problem, schedule, seeds, args.gamma, args.tol, _threads(args))
    _finish(best, args)
    return EXIT_OK


def cmd_radial_search(args):
    A = resolve_input(args.input)
    problem = make_problem(A, _k(args), args.model)
    spec = StartSpec(gamma=None, r0=args.r0, n_probes=args.n_probes, seed=args.seed)
    best, reports = radial_search(problem, build_schedule(args), spec, args.tol, _threads(args))
    failed = [r for r in reports if isinstance(r, Exception)]
    for exc in failed:
        print(f"warning: probe failed: {exc}", file=sys.stderr)
    _finish(best, args, profile(reports))
    return EXIT_OK


def cmd_eval_cost(args):
    A = resolve_input(args.input)
    if args.report:
        rep = parse_report(Path(args.report).read_text())
        centers, total = rep["cluster_centers"], rep["total_center"]
    elif args.centers:
        try:
            centers = tuple(int(c) for c in args.centers.split(","))
        except ValueError:
            raise ConfigError(f"--centers must be comma-separated node indices, got {args.centers!r}") from None
        total = args.total if args.total is not None else pick_total_center(centers, A)
    else:
        raise ConfigError("eval-cost needs --centers or --report")
    nodes = list(centers) + [total]
    if any(not 0 <= i < len(A) for i in nodes) or len(set(nodes)) != len(nodes):
        raise ConfigError(f"node indices must be distinct and in 0..{len(A) - 1}")
    cost = tree_cost((tuple(centers), int(total)), A)
    print(f"cost\t{cost!r}\tcenters\t{' '.join(map(str, centers))}\ttotal\t{total}")
    return EXIT_OK


def cmd_bench(args):
    threads = _threads(args)
    header = "dataset\tm\tn\tk\tseed\tCost1\tCost2\tTime1\tTime2\tIter1\tIter2"
    rows = [header]
    for name in args.datasets.split(","):
        A = resolve_input(name)
        key = Path(name).stem.lower()
        k = args.k if args.k is not None else DEFAULT_K.get(key, 3)
        sched = build_schedule(argparse.Namespace(**{**vars(args), "preset": args.preset or (key if key in PRESETS else None)}))
        seeds = [args.seed + r for r in range(args.repeats)]
        per_model = []
        for model in ("I", "II"):
            problem = make_problem(A, k, model)
            _, reports = multistart(problem, sched, seeds, args.gamma, args.tol, threads)
            per_model.append(reports)
        for seed, r1, r2 in zip(seeds, *per_model):
            rows.append(
                f"{key}\t{A.shape[0]}\t{A.shape[1]}\t{k}\t{seed}\t{r1.snapped_cost:.6f}\t{r2.snapped_cost:.6f}"
                f"\t{r1.wall_time:.3f}\t{r2.wall_time:.3f}\t{r1.total_inner_iterations}\t{r2.total_inner_iterations}"
            )
    _write("\n".join(rows) + "\n", args.output)
    return EXIT_OK


def cmd_check(args):
    from .checks import run_suites

    names = args.suites.split(",") if args.suites else None
    try:
        results = run_suites(names, seed=args.seed, quick=args.quick, mutation=args.inject_bug)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    for r in results:
        print(r.summary())
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"error: suite {failed[0].name} failed: {failed[0].first_failure}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _add_common(p, solver=True):
    p.add_argument("--config", help="JSON file of option defaults (keys as in --help, dashes as underscores)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    if not solver:
        return
    p.add_argument("--model", choices=["I", "II"], default="I")
    p.add_argument("--k", type=int, default=None, help="number of cluster centers")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None, help="named schedule")
    for key in SCHEDULE_KEYS:
        kind = int if key.startswith("n_") else float
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=kind, default=None)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=None, help="derive sigma1 from this bound")
    p.add_argument("--mu-min", dest="mu_min", type=float, default=None, help="derive sigma2 from this bound")
    p.add_argument("--sigma1-total", dest="sigma1_total", type=float, default=None,
                   help="total penalty ratio lambda_max/lambda0, spread over n_outer steps")
    p.add_argument("--tol", type=float, default=0.0, help="relative inner stopping tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=None, help="fixed start radius multiplier")
    p.add_argument("--timing", action="store_true", help="record wall time in the report (breaks byte-identity)")


def build_parser():
    parser = _Parser(prog="bilevel-dca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="multi-start solve; writes a report")
    p.add_argument("input", help="TSPLIB/CSV file or bundled name (eil76, ds18)")
    _add_common(p)
    p.add_argument("--starts", type=int, default=10, help="random starts, seeds seed..seed+starts-1")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("radial-search", help="solve from starts at radii i*r0; report plus profile")
    p.add_argument("input")
    _add_common(p)
    p.add_argument("--n-probes", dest="n_probes", type=int, default=10)
    p.add_argument("--r0", type=float, default=0.1)
    p.set_defaults(func=cmd_radial_search)

    p = sub.add_parser("eval-cost", help="tree cost of given center nodes")
    p.add_argument("input")
    _add_common(p, solver=False)
    p.add_argument("--centers", help="comma-separated 0-based node indices")
    p.add_argument("--total", type=int, default=None, help="total-center node (default: snapping rule)")
    p.add_argument("--report", help="take centers from a report file")
    p.set_defaults(func=cmd_eval_cost)

    p = sub.add_parser("bench", help="both models side by side over repeated seeds")
    p.add_argument("--datasets", default="eil76", help="comma-separated files or bundled names")
    p.add_argument("--repeats", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="run the property suites")
    _add_common(p, solver=False)
    p.add_argument("--suites", default=None, help="comma-separated subset")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-bug", dest="inject_bug", default=None, help="mutation hook for testing the harness")
    p.set_defaults(func=cmd_check)
    return parser


def _load_config(path, parser, argv):
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", exc.lineno) from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    defaults = vars(parser.parse_args(argv))
    unknown = sorted(set(cfg) - set(defaults) - {"command", "func"})
    if unknown:
        raise ConfigError(f"{path}: unknown config key(s): {', '.join(unknown)}")
    return cfg


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = _load_config(args.config, parser, argv)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        return args.func(args)
    except ParseError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericalFailure as exc:
        print(f"error: numerical failure: {exc}; try a larger mu0 or smaller sigma1", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, BilevelError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: invalid configuration: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
