"""Command-line entry point.

Three subcommands:

  cumulants  exact cumulant tables (sites, tree length, scaled sites, limits)
  simulate   replicate-level coupled-field output, deterministic under threads
  verify     named statistical verification suites, exit status 0 iff green

Flags override an optional JSON config file given with --config.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cumulants
from .coupling import GridSpec
from .simulate import RunConfig, render_rows, run_simulation
from .suites import DEFAULT_SEED, SUITES, run_suite

REPORT_COLUMNS = (
    "check_id", "target", "estimate", "se", "tolerance", "mode", "pass",
    "runtime_ms",
)


def _parse_grid(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclesites",
        description=(
            "Exact cumulants, coupled-field simulation and statistical "
            "verification for the permutation-cycle / segregating-sites "
            "coupling."
        ),
    )
    parser.add_argument(
        "--config", help="JSON file with defaults for any flag", default=None
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p_cum = sub.add_parser(
        "cumulants", parents=[common], help="exact cumulant tables"
    )
    p_cum.add_argument("--n", type=int, default=None)
    p_cum.add_argument("--t1", type=float, default=None)
    p_cum.add_argument("--order", type=int, default=None)

    p_sim = sub.add_parser(
        "simulate", parents=[common], help="replicate-level coupled fields"
    )
    p_sim.add_argument("--n", type=int, default=None)
    p_sim.add_argument("--replicates", type=int, default=None)
    p_sim.add_argument("--threads", type=int, default=None)
    p_sim.add_argument(
        "--t1-grid", type=_parse_grid, default=None,
        help="comma-separated ascending t1 grid containing 0 and 1",
    )
    p_sim.add_argument(
        "--t2-grid", type=_parse_grid, default=None,
        help="comma-separated ascending t2 grid containing 0 and 1",
    )

    p_ver = sub.add_parser(
        "verify", parents=[common], help="run a named verification suite"
    )
    p_ver.add_argument(
        "--suite", default=None,
        help=f"one of: all, {', '.join(sorted(SUITES))}",
    )
    return parser


_DEFAULTS = {
    "seed": DEFAULT_SEED,
    "format": "csv",
    "out": None,
    "n": 100,
    "t1": 1.0,
    "order": 6,
    "replicates": 1,
    "threads": 1,
    "t1_grid": (0.0, 0.25, 0.5, 0.75, 1.0),
    "t2_grid": (0.0, 0.25, 0.5, 0.75, 1.0),
    "suite": "all",
}


def _effective(args: argparse.Namespace, key: str):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if key in cfg:
            value = cfg[key]
            if key.endswith("_grid"):
                return tuple(float(v) for v in value)
            return value
    return _DEFAULTS[key]


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _cmd_cumulants(args: argparse.Namespace) -> int:
    n = _effective(args, "n")
    t1 = _effective(args, "t1")
    order = _effective(args, "order")
    if n < 1 or order < 1 or t1 < 0:
        print("invalid cumulant parameters", file=sys.stderr)
        return 1
    rows = []
    for i in range(1, order + 1):
        rows.append(("sites", i, cumulants.sites_cumulant(i, n, t1)))
    if n >= 2:
        for j in range(1, order + 1):
            rows.append(("tree_length", j, cumulants.tree_length_cumulant(j, n)))
        if t1 > 0:
            for j in range(1, order + 1):
                rows.append(
                    ("scaled_sites", j, cumulants.scaled_sites_cumulant(j, n, t1))
                )
    for j in range(2, order + 1):
        rows.append(
            ("tree_length_limit", j, cumulants.tree_length_cumulant_limit(j))
        )
    fmt = _effective(args, "format")
    if fmt == "csv":
        lines = ["subject,order,value"]
        lines += [f"{s},{o},{v!r}" for s, o, v in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            [{"subject": s, "order": o, "value": v} for s, o, v in rows],
            indent=2,
        ) + "\n"
    _emit(text, _effective(args, "out"))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = RunConfig(
            seed=_effective(args, "seed"),
            replicates=_effective(args, "replicates"),
            n=_effective(args, "n"),
            grid=GridSpec(_effective(args, "t1_grid"), _effective(args, "t2_grid")),
            output_format=_effective(args, "format"),
            output_path=_effective(args, "out"),
            threads=_effective(args, "threads"),
        )
    except ValueError as exc:
        print(f"invalid simulation config: {exc}", file=sys.stderr)
        return 1
    rows = run_simulation(config)
    _emit(render_rows(rows, config.output_format), config.output_path)
    return 0


def _render_report(records, fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(REPORT_COLUMNS)]
        for r in records:
            lines.append(
                f"{r.check_id},{r.target!r},{r.estimate!r},{r.se!r},"
                f"{r.tolerance!r},{r.mode},{str(r.passed).lower()},{r.runtime_ms}"
            )
        return "\n".join(lines) + "\n"
    return json.dumps(
        [
            {
                "check_id": r.check_id,
                "target": r.target,
                "estimate": r.estimate,
                "se": r.se,
                "tolerance": r.tolerance,
                "mode": r.mode,
                "pass": r.passed,
                "runtime_ms": r.runtime_ms,
            }
            for r in records
        ],
        indent=2,
    ) + "\n"


def _cmd_verify(args: argparse.Namespace) -> int:
    name = _effective(args, "suite")
    seed = _effective(args, "seed")
    names = sorted(SUITES) if name == "all" else [name]
    records = []
    try:
        for suite_name in names:
            records.extend(run_suite(suite_name, seed=seed))
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    _emit(_render_report(records, _effective(args, "format")), _effective(args, "out"))
    for r in records:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.check_id}", file=sys.stderr)
    return 0 if all(r.passed for r in records) else 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "cumulants":
        return _cmd_cumulants(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
