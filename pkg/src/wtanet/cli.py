"""Command-line surface.

Subcommands: train, eval, predict, synth, kselect, lp, density.  Global
flags: --seed (overrides the config/run seed), --out-dir, --quiet.
Failures exit nonzero after printing one machine-parsable line of the
form ``error:<category>: <message>`` on stderr; categories are io,
config, data and internal (plus the experiment phase names train,
split, evaluate, write).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import bench, data as datamod
from .bench import PhaseError, RunConfig, config_digest, run_experiment
from .data import (
    CLASSIFICATION,
    gen_function,
    gen_mackey_glass,
    gen_noisy,
    load_csv,
    read_csv_matrix,
    series_to_csv,
    dataset_to_csv,
)
from .metrics import accuracy, confusion_matrix, mae, nrmse, rmse
from .model import load_model, predict_batch
from .select import kwta, solve_box_lp, solve_ksum_lp, solve_simplex_lp


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wtanet",
        description="Winner-take-all network benchmarks and tools",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="override the run seed")
    parser.add_argument("--out-dir", default=None,
                        help="directory for output files")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress progress chatter")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run one experiment from a config file")
    p.add_argument("config", help="run config JSON")

    p = sub.add_parser("eval", help="evaluate a saved model on a CSV file")
    p.add_argument("model", help="model JSON")
    p.add_argument("data", help="data CSV")
    p.add_argument("--target-column", type=int, default=-1)
    p.add_argument("--header", action="store_true")

    p = sub.add_parser("predict", help="write predictions for a CSV file")
    p.add_argument("model", help="model JSON")
    p.add_argument("data", help="data CSV")
    p.add_argument("--target-column", type=int, default=None,
                   help="column to drop before predicting (default: none)")
    p.add_argument("--header", action="store_true")
    p.add_argument("-o", "--output", default="predictions.csv")

    p = sub.add_parser("synth", help="emit a generated dataset as CSV")
    p.add_argument("generator", choices=["f1", "f2", "mackey-glass"])
    p.add_argument("output", help="output CSV path")
    p.add_argument("--n", type=int, default=100, help="sample count (f1/f2)")
    p.add_argument("--length", type=int, default=1500, help="series length")
    p.add_argument("--noise", type=float, default=None,
                   help="constant noise sigma (f1/f2)")
    p.add_argument("--noise-slope", type=float, default=None,
                   help="heteroscedastic noise slope sigma0 (f1/f2)")
    p.add_argument("--csv-header", action="store_true")

    p = sub.add_parser("kselect", help="k-winners-take-all on an instance file")
    p.add_argument("instance", help="CSV (one row or column) or JSON {'x', 'k'?}")
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("lp", help="solve a WTA-reducible linear program")
    p.add_argument("instance",
                   help="CSV or JSON {'c', 'lower'?, 'upper'?, 'k'?}")
    p.add_argument("--form", choices=["simplex", "box", "ksum"], required=True)
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("density", help="basis-growth (density) check")
    p.add_argument("config", help="run config JSON with a 'density' section")

    return parser


def _load_vector_instance(path) -> dict:
    if str(path).endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if isinstance(doc, list):
            return {"x": doc}
        return doc
    rows = read_csv_matrix(path)
    values = [[float(cell) for cell in row] for row in rows]
    if len(values) == 1:
        return {"rows": values, "x": values[0]}
    if all(len(row) == 1 for row in values):
        return {"rows": values, "x": [row[0] for row in values]}
    return {"rows": values, "x": values[0]}


def _read_config(path) -> RunConfig:
    try:
        return RunConfig.from_file(path)
    except json.JSONDecodeError:
        raise
    except ValueError as exc:
        raise PhaseError("config", str(exc)) from exc


def _cmd_train(args) -> int:
    config = _read_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    result = run_experiment(config, out_dir=args.out_dir)
    if not args.quiet:
        metrics = " ".join(
            f"{k}={v:.6g}" for k, v in sorted(result.report.metrics.items())
        )
        print(f"run {config_digest(config)[:12]} {metrics}")
    return 0


def _load_eval_dataset(args, model):
    return load_csv(
        args.data,
        target_column=args.target_column,
        mode=model.mode,
        header=args.header,
    )


def _remap_labels(dataset, model):
    # align the file's first-appearance label ids with the model's order
    if model.mode != CLASSIFICATION or model.class_names is None \
            or dataset.label_names is None:
        return dataset.targets
    position = {name: i for i, name in enumerate(model.class_names)}
    unknown = [n for n in dataset.label_names if n not in position]
    if unknown:
        raise ValueError(f"labels {unknown} are not known to the model")
    lookup = np.array([position[name] for name in dataset.label_names])
    return lookup[dataset.targets]


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    dataset = _load_eval_dataset(args, model)
    targets = _remap_labels(dataset, model)
    outputs = [p.output for p in predict_batch(model, dataset.inputs)]
    if model.mode == CLASSIFICATION:
        doc = {
            "accuracy": accuracy(outputs, targets),
            "confusion": confusion_matrix(
                outputs, targets, n_classes=len(model.class_names)
                if model.class_names else None
            ).tolist(),
        }
    else:
        doc = {"rmse": rmse(outputs, dataset.targets),
               "mae": mae(outputs, dataset.targets)}
        if float(np.std(dataset.targets)) > 0:
            doc["nrmse"] = nrmse(outputs, dataset.targets)
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    rows = read_csv_matrix(args.data, header=args.header)
    width = len(rows[0])
    drop = None
    if args.target_column is not None:
        drop = args.target_column if args.target_column >= 0 \
            else width + args.target_column
    feature_cols = [c for c in range(width) if c != drop]
    raw = np.array(
        [[float(row[c]) for c in feature_cols] for row in rows], dtype=np.float64
    )
    lo = raw.min(axis=0)
    span = raw.max(axis=0) - lo
    span[span == 0] = 1.0
    normalized = (raw - lo) / span
    predictions = predict_batch(model, normalized)
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row, pred in zip(rows, predictions):
            out = pred.output
            if model.mode == CLASSIFICATION and model.class_names is not None:
                out = model.class_names[int(out)]
            writer.writerow([row[c] for c in feature_cols] + [out])
    if not args.quiet:
        print(f"wrote {len(predictions)} predictions to {args.output}")
    return 0


def _cmd_synth(args) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.generator == "mackey-glass":
        series = gen_mackey_glass(args.length)
        series_to_csv(series, args.output, header=args.csv_header)
        count = len(series)
    else:
        if args.noise is not None and args.noise_slope is not None:
            raise ValueError("choose either --noise or --noise-slope, not both")
        if args.noise is not None:
            dataset = gen_noisy(args.generator, args.noise, args.n, seed,
                                noise=datamod.NOISE_CONSTANT)
        elif args.noise_slope is not None:
            dataset = gen_noisy(args.generator, args.noise_slope, args.n, seed,
                                noise=datamod.NOISE_LINEAR)
        else:
            dataset = gen_function(args.generator, args.n, seed)
        dataset_to_csv(dataset, args.output, header=args.csv_header)
        count = dataset.n_samples
    if not args.quiet:
        print(f"wrote {count} rows to {args.output}")
    return 0


def _cmd_kselect(args) -> int:
    doc = _load_vector_instance(args.instance)
    x = doc["x"]
    k = args.k if args.k is not None else doc.get("k")
    if k is None:
        raise ValueError("k is required (use --k or put 'k' in the JSON instance)")
    result = kwta(x, int(k))
    print(json.dumps(
        {"winners": list(result.winners), "values": list(result.values)}
    ))
    return 0


def _cmd_lp(args) -> int:
    doc = _load_vector_instance(args.instance)
    c = doc.get("c", doc.get("x"))
    if args.form == "simplex":
        solution = solve_simplex_lp(c)
    elif args.form == "ksum":
        k = args.k if args.k is not None else doc.get("k")
        if k is None:
            raise ValueError("ksum form requires k (use --k or the JSON field)")
        solution = solve_ksum_lp(c, int(k))
    else:
        rows = doc.get("rows")
        lower = doc.get("lower")
        upper = doc.get("upper")
        if lower is None and rows is not None and len(rows) >= 3:
            c, lower, upper = rows[0], rows[1], rows[2]
        if lower is None or upper is None:
            raise ValueError(
                "box form needs c, lower, upper (JSON fields or three CSV rows)"
            )
        solution = solve_box_lp(c, lower, upper)
    print(json.dumps({
        "x": [float(v) for v in solution.x],
        "objective": solution.objective,
        "certificate": solution.certificate,
    }))
    return 0


def _cmd_density(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        doc = json.load(fh)
    density = doc.get("density")
    if not density:
        raise PhaseError("config", "config is missing the 'density' section")
    try:
        config = RunConfig.from_dict(doc)
    except ValueError as exc:
        raise PhaseError("config", str(exc)) from exc
    if args.seed is not None:
        config = config.with_seed(args.seed)
    dataset = bench._resolve_dataset(config)
    report = bench.density_check(
        dataset,
        density["k_values"],
        int(config.model["units"]),
        config.ga.with_seed(config.seed + bench.GA_SEED_OFFSET),
        density["seeds"],
        slack=float(density.get("slack", 0.02)),
        include_oracle=bool(density.get("include_oracle", True)),
    )
    out_dir = args.out_dir if args.out_dir is not None \
        else config.output.get("dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, config.output.get("density", "density.json"))
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    if not args.quiet:
        status = "non-increasing" if report.non_increasing else "NOT non-increasing"
        print(f"density: {status} within slack {report.slack}; wrote {out_path}")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "eval": _cmd_eval,
    "predict": _cmd_predict,
    "synth": _cmd_synth,
    "kselect": _cmd_kselect,
    "lp": _cmd_lp,
    "density": _cmd_density,
}


def _fail(category: str, message: str) -> int:
    print(f"error:{category}: {message}", file=sys.stderr)
    return 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PhaseError as exc:
        return _fail(exc.phase, exc.message)
    except FileNotFoundError as exc:
        return _fail("io", str(exc))
    except OSError as exc:
        return _fail("io", str(exc))
    except json.JSONDecodeError as exc:
        return _fail("config", str(exc))
    except (KeyError, TypeError) as exc:
        return _fail("config", f"bad config or instance: {exc}")
    except ValueError as exc:
        return _fail("data", str(exc))


if __name__ == "__main__":
    sys.exit(main())
