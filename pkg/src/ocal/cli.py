"""Command-line front end: benchmarks, grid search, the 2-d demo, data prep."""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import engine
from .bench import DEFAULT_NU_GRID, grid_search, run_benchmark
from .data import SplitView, gen_two_cluster, load_csv, make_folds
from .datasets import (
    BENCHMARK_NAMES,
    BENCHMARK_SETTINGS,
    load_benchmark_dataset,
    resolve_provenance,
    write_benchmark_csvs,
)
from .strategy import STRATEGY_KINDS, StrategyConfig

__all__ = ["main"]

STRATEGY_TOKENS = tuple(kind.replace("_", "-") for kind in STRATEGY_KINDS)


class UsageError(Exception):
    """Bad flag combination or token; reported with exit code 2."""


def _token_to_kind(token):
    kind = token.replace("-", "_")
    if kind != "initial" and kind not in STRATEGY_KINDS:
        raise UsageError(
            f"unknown strategy {token!r}; choose from: "
            + ", ".join(STRATEGY_TOKENS + ("initial", "all"))
        )
    return kind


def _parse_strategies(args):
    raw = args.strategies if args.strategies else args.strategy
    if raw is None:
        raise UsageError("provide --strategy or --strategies")
    tokens = [t.strip() for t in raw.split(",") if t.strip()]
    if not tokens:
        raise UsageError("empty strategy list")
    if "all" in tokens:
        return ["initial", *STRATEGY_KINDS]
    return [_token_to_kind(t) for t in tokens]


def _parse_grid(text, name):
    values = [t.strip() for t in text.split(",") if t.strip()]
    if not values:
        raise UsageError(f"{name} grid is empty")
    try:
        return tuple(float(v) for v in values)
    except ValueError:
        raise UsageError(f"{name} grid must be a comma-separated list of numbers") from None


def _parse_stop(args):
    if args.stop_thresholds is None:
        return engine.StoppingConfig()
    parts = args.stop_thresholds.split(",")
    if len(parts) != 2:
        raise UsageError("--stop-thresholds takes two comma-separated numbers: t,o")
    try:
        t_target, t_outlier = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError("--stop-thresholds takes two comma-separated numbers: t,o") from None
    return engine.StoppingConfig(t_target=t_target, t_outlier=t_outlier, enabled=True)


def _worker_count(args):
    workers = max(1, args.workers)
    cap = os.environ.get("OC_ACTIVE_THREADS")
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise UsageError(f"OC_ACTIVE_THREADS must be an integer, got {cap!r}") from None
    return workers


def _load_dataset_arg(args):
    spec = args.dataset
    path = Path(spec)
    if path.suffix == ".csv" or path.exists():
        return load_csv(path)
    if spec == "artificial":
        dataset, _ = gen_two_cluster(args.seed)
        return dataset
    if spec in BENCHMARK_NAMES:
        return load_benchmark_dataset(spec, data_dir=args.data_dir)
    raise UsageError(
        f"dataset {spec!r} is neither a CSV path nor a builtin name "
        f"({', '.join(BENCHMARK_NAMES)}, artificial)"
    )


def _write_json(path, doc):
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _resolve_hp(args, dataset):
    if args.nu is not None and args.gamma is not None:
        return float(args.nu), float(args.gamma), None
    if args.nu is not None or args.gamma is not None:
        raise UsageError("provide both --nu and --gamma to bypass the grid search")
    nu_grid = _parse_grid(args.nu_grid, "nu") if args.nu_grid else DEFAULT_NU_GRID
    gamma_grid = _parse_grid(args.gamma_grid, "gamma") if args.gamma_grid else None
    result = grid_search(dataset, nu_grid, gamma_grid, seed=args.seed)
    return result.nu, result.gamma, result


def cmd_bench(args):
    dataset = _load_dataset_arg(args)
    strategies = _parse_strategies(args)
    stop = _parse_stop(args)
    default_batch, default_iterations = BENCHMARK_SETTINGS.get(dataset.name, (1, 40))
    batch = args.batch if args.batch is not None else default_batch
    iterations = args.iterations if args.iterations is not None else default_iterations

    nu, gamma, _ = _resolve_hp(args, dataset)
    plan = make_folds(dataset, k=10, seed=args.seed)
    report = run_benchmark(
        dataset,
        plan,
        strategies,
        iterations,
        batch,
        (nu, gamma),
        seed=args.seed,
        stop=stop,
        lh_ensemble_size=args.lh_ensemble_size,
        n_workers=_worker_count(args),
    )

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table_path = out / f"{dataset.name}_table.csv"
    lines = ["dataset,strategy,mean_bacc,std_bacc"]
    for entry in report.entries:
        _write_json(out / f"{dataset.name}_{entry.strategy}.json", entry.to_json_dict())
        lines.append(
            f"{entry.dataset},{entry.strategy},{entry.mean_bacc!r},{entry.std_bacc!r}"
        )
        flag = "" if entry.complete else "  [incomplete]"
        print(
            f"{entry.dataset:>10s}  {entry.strategy:<16s} "
            f"BACC {entry.mean_bacc:.3f} (+/- {entry.std_bacc:.3f}){flag}"
        )
    table_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def cmd_grid(args):
    dataset = _load_dataset_arg(args)
    nu, gamma, result = _resolve_hp(args, dataset)
    doc = {
        "dataset": dataset.name,
        "nu": nu,
        "gamma": gamma,
        "seed": args.seed,
        "cells": [
            {"nu": c[0], "gamma": c[1], "bacc": c[2]} for c in (result.cells if result else ())
        ],
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / f"{dataset.name}_grid.json", doc)
    print(f"nu={nu} gamma={gamma}")
    return 0


def _demo_split(dataset, init_ids):
    # the demo measures accuracy on the full artificial dataset, so the test
    # view covers every sample while the pool holds everything not initial
    all_ids = np.arange(dataset.n)
    pool_ids = np.setdiff1d(all_ids, init_ids)
    return SplitView(
        rotation=0,
        init_ids=np.asarray(init_ids),
        pool_ids=pool_ids,
        test_ids=all_ids,
        dropped_ids=np.zeros(0, dtype=np.int64),
    )


def _boundary_grid(dataset, models, resolution):
    mins = dataset.features.min(axis=0)
    maxs = dataset.features.max(axis=0)
    margin = 0.10 * (maxs - mins)
    xs = np.linspace(mins[0] - margin[0], maxs[0] + margin[0], resolution)
    ys = np.linspace(mins[1] - margin[1], maxs[1] + margin[1], resolution)
    grid_x, grid_y = np.meshgrid(xs, ys)
    points = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    dvt = models.target.decision_values(points).reshape(resolution, resolution)
    if models.outlier is not None:
        dvo = models.outlier.decision_values(points).reshape(resolution, resolution)
    else:
        dvo = np.ones((resolution, resolution))
    return xs, ys, dvt, dvo


def cmd_demo(args):
    dataset, init_ids = gen_two_cluster(args.seed)
    strategies = _parse_strategies(args)
    if len(strategies) != 1 or strategies[0] == "initial":
        raise UsageError("demo runs exactly one query strategy")
    kind = strategies[0]
    snapshots = sorted(
        {int(t) for t in args.snapshots.split(",") if t.strip()}
    ) if args.snapshots else [1, 12, 27]
    if not snapshots:
        raise UsageError("snapshot list is empty")

    split = _demo_split(dataset, init_ids)
    cfg = StrategyConfig(kind=kind, seed=args.seed, lh_ensemble_size=args.lh_ensemble_size)
    if args.oracle == "interactive":
        oracle = engine.InteractiveOracle(dataset)
    else:
        oracle = engine.SimulatedOracle(dataset)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    wanted = set(snapshots)
    written = []

    def on_iteration(iteration, pools, state, models, queried):
        if iteration not in wanted:
            return
        xs, ys, dvt, dvo = _boundary_grid(dataset, models, args.resolution)
        doc = {
            "dataset": dataset.name,
            "strategy": kind,
            "iteration": iteration,
            "xs": xs.tolist(),
            "ys": ys.tolist(),
            "dvt": dvt.tolist(),
            "dvo": dvo.tolist(),
            "queried_ids": [q for q, _ in queried],
            "labels": [label for _, label in queried],
        }
        path = out / f"{dataset.name}_{kind}_iter{iteration:03d}.json"
        _write_json(path, doc)
        written.append(path)

    result = engine.run(
        split,
        dataset,
        (args.nu, args.gamma),
        cfg,
        args.iterations,
        args.batch,
        _parse_stop(args),
        oracle,
        on_iteration=on_iteration,
    )
    summary = {
        "dataset": dataset.name,
        "strategy": kind,
        "nu": args.nu,
        "gamma": args.gamma,
        "seed": args.seed,
        "bacc_curve": result.bacc_per_iteration,
        "queried": [[i, label] for i, label in result.queried],
        "outliers_shown": result.outliers_shown,
        "stopped_early": result.stopped_early,
        "complete": result.complete,
    }
    _write_json(out / f"{dataset.name}_{kind}.json", summary)
    final = result.bacc_per_iteration[-1]
    print(
        f"demo: {len(result.queried)} queries, {result.outliers_shown} outliers shown, "
        f"final BACC {final:.3f}, {len(written)} snapshot(s)"
    )
    return 0


def cmd_prepare_data(args):
    paths = write_benchmark_csvs(args.out, seed=args.seed)
    for path in paths:
        name = path.stem
        print(f"{path}  [{resolve_provenance(name)}]")
    return 0


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed")
    parser.add_argument("--out", default="out", help="output directory")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ocal",
        description="Active learning for one-class classification with two one-class SVMs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run the 10-rotation benchmark on a dataset")
    bench.add_argument("--dataset", required=True, help="CSV path or builtin name")
    bench.add_argument("--data-dir", default="data", help="directory of converted CSVs")
    bench.add_argument("--strategy", help="single strategy token")
    bench.add_argument("--strategies", help="comma list of strategy tokens, or 'all'")
    bench.add_argument("--iterations", type=int, default=None)
    bench.add_argument("--batch", type=int, default=None)
    bench.add_argument("--nu", type=float, default=None)
    bench.add_argument("--gamma", type=float, default=None)
    bench.add_argument("--nu-grid", help="comma list overriding the nu search grid")
    bench.add_argument("--gamma-grid", help="comma list overriding the gamma search grid")
    bench.add_argument("--stop-thresholds", help="enable the stopping rule: t,o")
    bench.add_argument("--lh-ensemble-size", type=int, default=10)
    bench.add_argument("--workers", type=int, default=1)
    _add_common(bench)
    bench.set_defaults(func=cmd_bench)

    grid = sub.add_parser("grid", help="grid-search (nu, gamma) for a dataset")
    grid.add_argument("--dataset", required=True)
    grid.add_argument("--data-dir", default="data")
    grid.add_argument("--nu", type=float, default=None)
    grid.add_argument("--gamma", type=float, default=None)
    grid.add_argument("--nu-grid")
    grid.add_argument("--gamma-grid")
    _add_common(grid)
    grid.set_defaults(func=cmd_grid)

    demo = sub.add_parser("demo", help="2-d demo with decision-boundary snapshots")
    demo.add_argument("--strategy", default="exploration")
    demo.add_argument("--strategies", help=argparse.SUPPRESS)
    demo.add_argument("--iterations", type=int, default=40)
    demo.add_argument("--batch", type=int, default=1)
    demo.add_argument("--nu", type=float, default=0.05)
    demo.add_argument("--gamma", type=float, default=0.3)
    demo.add_argument("--snapshots", default="1,12,27", help="iterations to snapshot")
    demo.add_argument("--resolution", type=int, default=200)
    demo.add_argument("--oracle", choices=("simulated", "interactive"), default="simulated")
    demo.add_argument("--stop-thresholds", help="enable the stopping rule: t,o")
    demo.add_argument("--lh-ensemble-size", type=int, default=10)
    _add_common(demo)
    demo.set_defaults(func=cmd_demo)

    prep = sub.add_parser("prepare-data", help="write the builtin benchmark CSVs")
    prep.add_argument("--seed", type=int, default=0)
    prep.add_argument("--out", default="data")
    prep.set_defaults(func=cmd_prepare_data)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
