"""Command-line verification harness.

    verify run [--config FILE] [--suite NAME]... [--seed N] [--grid N]
               [--report OUT.json] [--timings] [--threads N]
    verify study --check NAME --levels L1 L2 L3 ...

Exit code 0 iff every executed check passes.  Reports are byte-identical
for a fixed seed; runtimes are only written when --timings is given.
"""

import argparse
import json
import sys

from .suites import STUDIES, SUITES, SuiteConfig, convergence_study, run_suite


def parse_config_file(path) -> dict:
    """Plain key = value configuration; lists are comma separated."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = (p.strip() for p in line.split("=", 1))
            out[key] = val
    return out


def build_config(args) -> SuiteConfig:
    raw = parse_config_file(args.config) if args.config else {}
    tolerances = {}
    for key, val in raw.items():
        if key.startswith("tol_"):
            tolerances[key[4:]] = float(val)
    grids = tuple(int(x) for x in raw.get("grids", "8").split(","))
    if args.grid:
        grids = (args.grid,)
    epsilons = tuple(float(x) for x in raw.get("epsilons", "1e-2,5e-3,2.5e-3").split(","))
    seed = args.seed if args.seed is not None else int(raw.get("seed", 12345))
    suites = tuple(args.suite) if args.suite else tuple(
        s.strip() for s in raw.get("suites", "").split(",") if s.strip()
    )
    dense = int(raw.get("dense_grid", 4))
    return SuiteConfig(
        grids=grids, dense_grid=dense, epsilons=epsilons, seed=seed,
        tolerances=tolerances, suites=suites,
    )


def cmd_run(args) -> int:
    try:
        cfg = build_config(args)
    except (ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    if args.threads is not None:
        try:
            import numba

            numba.set_num_threads(max(1, args.threads))
        except ImportError:
            pass
    try:
        reports = run_suite(cfg)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    for rep in reports:
        status = "pass" if rep.passed else "FAIL"
        print(f"[{status}] {rep.name}  ({rep.runtime:.2f}s)  tol: {rep.tolerance}")
    doc = {
        "version": 1,
        "seed": cfg.seed,
        "checks": [r.as_json_dict(timings=args.timings) for r in reports],
    }
    payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(payload)
    failed = [r.name for r in reports if not r.passed]
    if failed:
        print(f"first failing check: {failed[0]}", file=sys.stderr)
        return 1
    return 0


def cmd_study(args) -> int:
    cfg = SuiteConfig(seed=args.seed if args.seed is not None else 12345)
    levels = [float(x) for x in args.levels]
    if all(float(x).is_integer() and x >= 4 for x in levels):
        levels = [int(x) for x in levels]
    try:
        result = convergence_study(args.check, levels, cfg)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(json.dumps(result, indent=2, sort_keys=True))
    if result["saturated"]:
        print("study saturated at the machine floor", file=sys.stderr)
    elif not result["monotone"]:
        print("warning: errors are not monotone across levels", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="verify", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run verification suites")
    runp.add_argument("--config", help="key = value configuration file")
    runp.add_argument("--suite", action="append", choices=sorted(SUITES),
                      help="suite to run (repeatable; default all)")
    runp.add_argument("--seed", type=int)
    runp.add_argument("--grid", type=int, help="override the main grid size")
    runp.add_argument("--report", help="write a JSON report here")
    runp.add_argument("--timings", action="store_true",
                      help="include runtimes in the report (non-deterministic bytes)")
    runp.add_argument("--threads", type=int, help="numba thread count (results unaffected)")
    runp.set_defaults(func=cmd_run)

    studyp = sub.add_parser("study", help="convergence study for a named check")
    studyp.add_argument("--check", required=True, choices=sorted(STUDIES))
    studyp.add_argument("--levels", nargs="+", required=True, type=float)
    studyp.add_argument("--seed", type=int)
    studyp.set_defaults(func=cmd_study)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
