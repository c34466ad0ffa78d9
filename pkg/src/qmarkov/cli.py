"""Command-line front end for the verification campaigns."""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .harness import (
    ExperimentConfig,
    cmd_bk,
    cmd_counterexample,
    cmd_sweep,
    cmd_universal,
    cmd_verify,
)
from .states import load_state


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dims", default="2,2,2", help="dA,dB,dC (default 2,2,2)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--dm", action="store_true", help="also compute measured relative entropy")
    p.add_argument("--avg-nodes", type=int, default=41)
    p.add_argument("--avg-halfwidth", type=float, default=8.0)
    p.add_argument("--avg-weights", choices=["cosh", "uniform"], default="cosh")
    p.add_argument("--out", default=None, help="write JSON report to this path")


def _config(args: argparse.Namespace) -> ExperimentConfig:
    dims = tuple(int(x) for x in args.dims.split(","))
    if len(dims) != 3:
        raise SystemExit("--dims expects three comma-separated integers")
    return ExperimentConfig(
        dims=dims,  # type: ignore[arg-type]
        samples=args.samples,
        seed=args.seed,
        tolerance=args.tol,
        compute_dm=args.dm,
        avg_nodes=args.avg_nodes,
        avg_halfwidth=args.avg_halfwidth,
        avg_weights=args.avg_weights,
        out_path=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qmarkov",
        description="Empirical verification of recovery-map bounds on the "
        "conditional mutual information.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("verify", "universal", "bk"):
        sp = sub.add_parser(name)
        _add_common(sp)

    sp = sub.add_parser("counterexample")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("sweep")
    sp.add_argument("--state", required=True, help="state JSON file")
    sp.add_argument("--t-min", type=float, default=-5.0)
    sp.add_argument("--t-max", type=float, default=5.0)
    sp.add_argument("--steps", type=int, default=21)
    sp.add_argument("--out", default=None, help="write CSV table to this path")

    args = parser.parse_args(argv)

    if args.command == "counterexample":
        result = cmd_counterexample()
        print(f"fidelity of the given map:      {result['fid_given_map']:.6f}")
        print(f"transpose-map fidelity:         {result['fid_transpose']:.6f}")
        print(f"sqrt(transpose-map fidelity):   {result['sqrt_fid_transpose']:.6f}")
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(result, fh, indent=1, sort_keys=True)
        return 0

    if args.command == "sweep":
        rho = load_state(args.state)
        rows = cmd_sweep(rho, args.t_min, args.t_max, args.steps)
        writer = csv.DictWriter(
            open(args.out, "w", newline="") if args.out else sys.stdout,
            fieldnames=["t", "fid", "kind"],
        )
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return 0

    config = _config(args)
    runner = {"verify": cmd_verify, "universal": cmd_universal, "bk": cmd_bk}[args.command]
    report = runner(config)
    violations = report.violation_count(config.tolerance)
    agg = report.aggregate(config.tolerance)
    print(f"{report.name}: {agg['n_samples']} samples, {violations} violations")
    for k, v in agg["minima"].items():
        print(f"  {k} = {v:.3e}")
    if report.errors:
        print(f"  {len(report.errors)} per-sample errors recorded")
    if config.out_path:
        report.write(config.tolerance, config.out_path)
    return 0 if violations == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
