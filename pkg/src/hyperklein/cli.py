"""Command-line front end: train, eval, convert, bench, selftest.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error,
4 self-test failure.  All outputs are reproducible byte-for-byte given the
same configuration and seed; timing lives in metrics.json only, never in
the deterministic CSV streams.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import nn, verify
from .autodiff import NumericalError
from .data import DataError, Dataset, load_dataset, split
from .manifolds import Model, convert_point, make_point

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3
EXIT_SELFTEST = 4


@dataclass
class RunConfig:
    command: str
    flavor: Model = Model.KLEIN
    hidden: int = 16
    lr: float = 0.01
    epochs: int = 5000
    patience: int = 100
    seed: int = 42
    data_path: str = ""
    out_dir: str = "."

    def __post_init__(self):
        if self.lr <= 0.0:
            raise ValueError("learning rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit value")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="hyperklein", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_train_flags(p):
        p.add_argument("--data", required=True, help="dataset JSON file")
        p.add_argument("--model", choices=[m.value for m in Model], default="klein")
        p.add_argument("--hidden", type=int, default=16)
        p.add_argument("--lr", type=float, default=0.01)
        p.add_argument("--epochs", type=int, default=5000)
        p.add_argument("--patience", type=int, default=100)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--out", default=".", help="output directory")

    train_p = sub.add_parser("train", help="train one model and write metrics")
    add_train_flags(train_p)

    eval_p = sub.add_parser("eval", help="evaluate a checkpoint on a dataset split")
    eval_p.add_argument("--checkpoint", required=True)
    eval_p.add_argument("--data", required=True)
    eval_p.add_argument("--split", choices=["train", "val", "test", "all"], default="test")
    eval_p.add_argument("--seed", type=int, default=42, help="seed for splitting unsplit data")

    conv_p = sub.add_parser("convert", help="convert a CSV of points between models")
    conv_p.add_argument("--src", choices=[m.value for m in Model], required=True)
    conv_p.add_argument("--dst", choices=[m.value for m in Model], required=True)
    conv_p.add_argument("--input", required=True)
    conv_p.add_argument("--output", required=True)

    bench_p = sub.add_parser("bench", help="per-flavor epoch timings")
    bench_p.add_argument("--data", required=True)
    bench_p.add_argument("--epochs", type=int, default=50)
    bench_p.add_argument("--trials", type=int, default=3)
    bench_p.add_argument("--seed", type=int, default=42)
    bench_p.add_argument("--out", default=".", help="output directory")

    self_p = sub.add_parser("selftest", help="run every verification suite")
    self_p.add_argument("--samples", type=int, default=None, help="override per-suite sample count")
    self_p.add_argument("--seed", type=int, default=0)
    self_p.add_argument(
        "--inject-transport-defect",
        action="store_true",
        help=argparse.SUPPRESS,  # regression hook: swaps in the broken Klein transport
    )
    return parser


def _load_split_dataset(path, seed) -> Dataset:
    ds = load_dataset(path)
    if ds.train_idx.size == 0:
        ds = split(ds, (0.6, 0.2, 0.2), seed=seed)
    return ds


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_loss_csv(path, metrics):
    lines = ["epoch,train_loss,val_acc"]
    lines += [f"{m.epoch},{_fmt(m.train_loss)},{_fmt(m.val_acc)}" for m in metrics]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _principal_2d(tangents: np.ndarray) -> np.ndarray:
    centered = tangents - tangents.mean(axis=0, keepdims=True)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    comps = vt[:2] if vt.shape[0] >= 2 else np.vstack([vt, np.zeros((2 - vt.shape[0], vt.shape[1]))])
    # fix component signs so output does not depend on SVD sign conventions
    for row in comps:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    return centered @ comps.T


def _cmd_train(args) -> int:
    config = RunConfig(
        command="train",
        flavor=Model(args.model),
        hidden=args.hidden,
        lr=args.lr,
        epochs=args.epochs,
        patience=args.patience,
        seed=args.seed,
        data_path=args.data,
        out_dir=args.out,
    )
    ds = _load_split_dataset(config.data_path, config.seed)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    model = nn.init_model(config.flavor, ds.dim, config.hidden, ds.n_classes, config.seed)
    model, metrics = nn.train(
        model, ds, nn.TrainConfig(lr=config.lr, epochs=config.epochs, patience=config.patience)
    )
    test_acc = (
        nn.accuracy(model, ds.features[ds.test_idx], ds.labels[ds.test_idx])
        if ds.test_idx.size
        else float("nan")
    )
    best_val = max((m.val_acc for m in metrics), default=float("nan"))
    mean_seconds = float(np.mean([m.seconds for m in metrics])) if metrics else 0.0

    doc = {
        "flavor": config.flavor.value,
        "seed": config.seed,
        "best_val_acc": best_val,
        "test_acc": test_acc,
        "epochs_run": len(metrics),
        "mean_epoch_seconds": mean_seconds,
    }
    (out / "metrics.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    _write_loss_csv(out / "loss.csv", metrics)
    nn.save_model(
        model,
        out / "checkpoint.json",
        extra={
            "config": {
                "lr": config.lr,
                "epochs": config.epochs,
                "patience": config.patience,
                "hidden": config.hidden,
                "data": str(config.data_path),
            },
            "seed": config.seed,
        },
    )
    tangents = nn.hidden_tangent(model, ds.features)
    coords = _principal_2d(tangents)
    lines = ["pc1,pc2,label"]
    lines += [
        f"{_fmt(coords[i, 0])},{_fmt(coords[i, 1])},{int(ds.labels[i])}" for i in range(ds.n)
    ]
    (out / "features2d.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(json.dumps(doc))
    return EXIT_OK


def _cmd_eval(args) -> int:
    model, _ = nn.load_model(args.checkpoint)
    ds = _load_split_dataset(args.data, args.seed)
    if args.split == "all":
        idx = np.arange(ds.n)
    else:
        idx = {"train": ds.train_idx, "val": ds.val_idx, "test": ds.test_idx}[args.split]
    acc = nn.accuracy(model, ds.features[idx], ds.labels[idx]) if idx.size else float("nan")
    print(json.dumps({"split": args.split, "n": int(idx.size), "accuracy": acc}))
    return EXIT_OK


def _parse_point_rows(text: str):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append((lineno, [float(tok) for tok in line.split(",")]))
        except ValueError as err:
            raise DataError(f"row {lineno}: {err}") from err
    return rows


def _cmd_convert(args) -> int:
    src, dst = Model(args.src), Model(args.dst)
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as err:
        raise DataError(str(err)) from err
    out_lines = []
    for lineno, values in _parse_point_rows(text):
        try:
            point = make_point(src, np.asarray(values))
            if src is not Model.LORENTZ and np.linalg.norm(values) >= 1.0:
                raise ValueError("point lies outside the open unit ball")
        except ValueError as err:
            raise DataError(f"row {lineno}: {err}") from err
        converted = convert_point(point, dst)
        out_lines.append(",".join(_fmt(c) for c in converted.coords))
    Path(args.output).write_text(
        ("\n".join(out_lines) + "\n") if out_lines else "", encoding="utf-8"
    )
    return EXIT_OK


def _cmd_bench(args) -> int:
    ds = _load_split_dataset(args.data, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for flavor in (Model.KLEIN, Model.POINCARE, Model.LORENTZ):
        per_trial = []
        for trial in range(args.trials):
            model = nn.init_model(flavor, ds.dim, 16, ds.n_classes, args.seed + trial)
            _, metrics = nn.train(
                model, ds, nn.TrainConfig(lr=0.01, epochs=args.epochs, patience=max(args.epochs, 1))
            )
            per_trial.append(float(np.mean([m.seconds for m in metrics])))
        results[flavor.value] = {
            "mean_epoch_seconds": float(np.mean(per_trial)),
            "std_epoch_seconds": float(np.std(per_trial)),
            "trials": args.trials,
        }
    for flavor, row in results.items():
        print(
            f"{flavor:9s} {row['mean_epoch_seconds']:.6f} s/epoch "
            f"+- {row['std_epoch_seconds']:.6f} over {row['trials']} trials"
        )
    (out / "bench.json").write_text(json.dumps(results, indent=1) + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    kwargs = {"broken_transport": True} if args.inject_transport_defect else {}
    reports = verify.run_all(samples=args.samples, seed=args.seed, **kwargs)
    failed = []
    for report in reports:
        print(report.to_json())
        if not report.passed:
            failed.append(report.suite)
    if failed:
        print(f"FAILED suites: {', '.join(failed)}", file=sys.stderr)
        return EXIT_SELFTEST
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)
    handlers = {
        "train": _cmd_train,
        "eval": _cmd_eval,
        "convert": _cmd_convert,
        "bench": _cmd_bench,
        "selftest": _cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except DataError as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as err:
        print(f"numerical error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, json.JSONDecodeError) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
