"""Command-line front end.

Four subcommands cover the library's capabilities:

* ``encode``     dump a concrete assignment (who computes what) as JSON;
* ``enumerate``  tabulate successful score vectors per straggler type (CSV);
* ``simulate``   Monte Carlo completion time / message statistics (CSV + JSON);
* ``train``      linear-regression training under partial recovery (CSV).

Every output embeds the fully resolved config (seed included), so a result
file alone suffices to rerun the experiment.  All randomness flows from the
seed; rerunning a command reproduces its outputs byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .config import (
    ConfigError,
    ExperimentConfig,
    assignment_source,
    concrete_assignment,
    parse_config,
)
from .enumeration import success_table
from .regression import generate_dataset, train
from .simulate import monte_carlo

_DATA_TAG = 4294967294


def _config_comment(cfg: ExperimentConfig) -> str:
    return "# config: " + json.dumps(cfg.to_dict(), sort_keys=True)


def read_embedded_config(path: str | Path) -> dict:
    """Recover the resolved config embedded in an output file."""
    path = Path(path)
    if path.suffix == ".json":
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)["config"]
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
    prefix = "# config: "
    if not first.startswith(prefix):
        raise ValueError(f"{path} carries no embedded config")
    return json.loads(first[len(prefix) :])


def _write_csv(path: Path, cfg: ExperimentConfig, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_config_comment(cfg) + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_encode(cfg: ExperimentConfig, out_dir: Path) -> list[Path]:
    asn = concrete_assignment(cfg)
    workers = []
    for w in range(asn.n_workers):
        tasks = []
        for j, task in enumerate(asn.worker_tasks(w)):
            tasks.append(
                {
                    "order": j + 1,
                    "blocks": [b + 1 for b in task.support],
                    "coefficients": list(task.coefficients),
                }
            )
        workers.append({"worker": w + 1, "tasks": tasks})
    payload = {
        "config": cfg.to_dict(),
        "assignment": {
            "workers": asn.n_workers,
            "blocks": asn.k_total,
            "mode": asn.mode,
            "decode": asn.decode,
            "task_cost": asn.task_cost,
            "messages": [
                {"after_tasks": m.tasks_done, "orders": [o + 1 for o in m.orders]}
                for m in asn.messages
            ],
            "per_worker": workers,
        },
    }
    path = out_dir / "assignment.json"
    _write_json(path, payload)
    return [path]


def _cmd_enumerate(cfg: ExperimentConfig, out_dir: Path) -> list[Path]:
    asn = concrete_assignment(cfg)
    table = success_table(asn, cfg.q)
    header = [f"workers_at_{s}" for s in range(asn.max_score, -1, -1)]
    header += ["successful_vectors", "total_vectors"]
    rows = []
    for ctype, good, total in table:
        if good:
            rows.append(list(ctype.counts) + [good, total])
    path = out_dir / "success_counts.csv"
    _write_csv(path, cfg, header, rows)
    return [path]


def _cmd_simulate(cfg: ExperimentConfig, out_dir: Path) -> list[Path]:
    start = time.perf_counter()
    result = monte_carlo(
        assignment_source(cfg), cfg.q, cfg.model(), cfg.trials, cfg.seed
    )
    elapsed = time.perf_counter() - start
    rows = [
        [
            t,
            repr(float(result.times[t])),
            int(result.messages[t]),
            int(result.redundant[t]),
            int(result.recovered[t]),
            int(result.completed[t]),
        ]
        for t in range(result.trials)
    ]
    trials_path = out_dir / "trials.csv"
    _write_csv(
        trials_path,
        cfg,
        ["trial", "completion_time", "messages", "redundant", "recovered_blocks", "completed"],
        rows,
    )
    summary_path = out_dir / "summary.json"
    _write_json(summary_path, {"config": cfg.to_dict(), "results": result.summary()})
    print(
        f"simulate: {cfg.scheme} q={cfg.q} trials={cfg.trials} "
        f"mean_time={result.mean_time:.6f} mean_messages={result.mean_messages:.3f} "
        f"({elapsed:.1f}s)"
    )
    return [trials_path, summary_path]


def _cmd_train(cfg: ExperimentConfig, out_dir: Path) -> list[Path]:
    settings = cfg.train
    if settings is None:
        raise ConfigError(["train: section required for the train command"])
    data_rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, _DATA_TAG)))
    dataset = generate_dataset(
        settings.samples, settings.dim, data_rng, noise_std=settings.noise_std
    )
    result = train(
        dataset,
        assignment_source(cfg),
        cfg.q,
        cfg.model(),
        settings.eta,
        settings.iterations,
        cfg.seed,
    )
    rows = [
        [
            it + 1,
            repr(float(result.losses[it])),
            repr(float(result.times[it])),
            int(result.messages[it]),
            repr(float(result.recovered_fraction[it])),
        ]
        for it in range(settings.iterations)
    ]
    path = out_dir / "training.csv"
    _write_csv(
        path,
        cfg,
        ["iteration", "loss", "iteration_time", "messages", "recovered_fraction"],
        rows,
    )
    print(
        f"train: {cfg.scheme} q={cfg.q} iterations={settings.iterations} "
        f"final_loss={result.losses[-1]:.6e} total_time={result.total_time:.4f}"
    )
    return [path]


_COMMANDS = {
    "encode": _cmd_encode,
    "enumerate": _cmd_enumerate,
    "simulate": _cmd_simulate,
    "train": _cmd_train,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--scheme", help="override: scheme name")
    common.add_argument("--workers", type=int, help="override: number of workers")
    common.add_argument("--q", type=float, help="override: tolerance in [0, 1]")
    common.add_argument("--seed", type=int, help="override: base seed")
    common.add_argument("--trials", type=int, help="override: Monte Carlo trials")
    common.add_argument("--mu", type=float, help="override: straggling rate")
    common.add_argument("--alpha", type=float, help="override: per-unit setup time")
    common.add_argument("--degrees", help="override: comma-separated degrees, e.g. 1,2,3")
    common.add_argument("--load", type=int, help="override: per-worker load (uc-mmc / gc)")
    common.add_argument("--kbar", type=int, help="override: recovery threshold (mcc)")
    common.add_argument("--groups", type=int, help="override: block groups (rcs-general)")
    common.add_argument("--z", help="override: comma-separated row groups (rcs-general)")
    common.add_argument("--offsets", help="override: comma-separated 1-based shifts")
    common.add_argument("--eval-points", dest="eval_points", help="override: comma-separated points (mcc)")
    common.add_argument("--mode", help="override: computation | communication")
    common.add_argument(
        "--redraw",
        choices=["true", "false"],
        help="override: redraw randomized constructions every trial",
    )
    common.add_argument("--dim", type=int, help="override: train parameter dimension")
    common.add_argument("--samples", type=int, help="override: train sample count")
    common.add_argument("--eta", type=float, help="override: train step size")
    common.add_argument("--iterations", type=int, help="override: train iterations")

    parser = argparse.ArgumentParser(
        prog="codedcomp",
        description="Coded distributed computation with partial recovery",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("encode", parents=[common], help="dump a concrete assignment as JSON")
    sub.add_parser("enumerate", parents=[common], help="tabulate successful score vectors (CSV)")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo timing statistics (CSV + JSON)")
    sub.add_parser("train", parents=[common], help="regression training under partial recovery (CSV)")
    return parser


def _overrides_from(args: argparse.Namespace) -> dict:
    direct = {
        key: getattr(args, key)
        for key in (
            "scheme", "workers", "q", "seed", "trials", "mu", "alpha", "degrees",
            "load", "kbar", "groups", "z", "offsets", "eval_points", "mode", "redraw",
        )
        if getattr(args, key, None) is not None
    }
    train_over = {
        key: getattr(args, key)
        for key in ("dim", "samples", "eta", "iterations")
        if getattr(args, key, None) is not None
    }
    if train_over:
        direct["train"] = train_over
    return direct


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = _overrides_from(args)
    base: dict | str = args.config if args.config else {}
    if "train" in overrides and isinstance(base, dict):
        base = dict(base)
        base.setdefault("train", {})
    try:
        if isinstance(base, str):
            file_data = json.loads(Path(base).read_text(encoding="utf-8"))
            if "train" in overrides:
                merged_train = dict(file_data.get("train", {}))
                merged_train.update(overrides.pop("train"))
                overrides["train"] = merged_train
            cfg = parse_config(file_data, overrides)
        else:
            cfg = parse_config(base, overrides)
    except ConfigError as exc:
        print("invalid configuration:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  - {violation}", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        paths = _COMMANDS[args.command](cfg, out_dir)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"  - {violation}", file=sys.stderr)
        return 2
    for path in paths:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
