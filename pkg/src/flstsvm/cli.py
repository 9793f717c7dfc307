"""Command-line front end: train / predict / cv / bench / gen-xor.

Every artifact embeds the fully resolved configuration and seed, and the
machine-readable outputs contain no timestamps, so a repeated command with
the same seed reproduces its outputs byte for byte.

Exit codes: 0 success; 2 bad command line; 3 missing input file; 4
malformed data or model file; 5 argument-contract violation reported by a
component; 6 model/training failure; 1 unexpected error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import model_io
from .core import ClassSplit, TrainConfig, train_lstsvm, predict_twin
from .data import CsvSchema, Dataset, generate_xor, load_csv, load_manifest, load_matrix
from .errors import DataFormatError, ModelError
from .evaluate import (
    ALGORITHMS,
    TrainerSpec,
    benchmark,
    decision_grid,
    grid_search,
    kfold_cv,
    records_to_jsonl,
)
from .m1 import assign_memberships, train_m1
from .m2 import M2Config, predict_m2, train_m2
from .svm import SvmConfig, predict_svm, train_linear_svm

OUT_DIR_ENV = "FLSTSVM_OUT"

EXIT_CODES = """\
exit codes:
  0  success
  2  bad command line (unknown flag or invalid value)
  3  a referenced input file does not exist
  4  an input file exists but cannot be parsed
  5  an argument contract was violated (bad shapes, labels, grid, ...)
  6  training or prediction failed on a degenerate model
  1  unexpected internal error

Flag values override manifest values, which override built-in defaults.
The default output directory is $FLSTSVM_OUT (falling back to the current
directory).
"""


def _out_dir(args) -> Path:
    base = getattr(args, "out", None) or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _out_file(args, default_name: str) -> Path:
    if getattr(args, "out", None):
        path = Path(args.out)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        return path
    return Path(os.environ.get(OUT_DIR_ENV) or ".") / default_name


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _config_header(args, command: str) -> str:
    resolved = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in ("func", "command") and value is not None
    }
    return f"# flstsvm {command} config = {json.dumps(resolved, sort_keys=True)}\n"


def _schema_from_args(args) -> CsvSchema:
    return CsvSchema(
        label_column=args.label_column,
        label_map={args.positive_label: 1, args.negative_label: -1},
        delimiter=args.delimiter,
        has_header=args.has_header,
    )


def _load_dataset(args) -> Dataset:
    return load_csv(args.data, _schema_from_args(args))


def _memberships_for(args, split: ClassSplit):
    if args.membership != "user":
        return assign_memberships(split, args.membership)
    if not (args.mu_a and args.mu_b):
        raise ValueError("--membership user requires --mu-a and --mu-b files")
    mu_a = load_matrix(args.mu_a).ravel()
    mu_b = load_matrix(args.mu_b).ravel()
    return assign_memberships(split, "user", (mu_a, mu_b))


def _cmd_gen_xor(args) -> int:
    ds = generate_xor(args.seed)
    lines = [_config_header(args, "gen-xor"), "x1,x2,label\n"]
    for row, label in zip(ds.x, ds.y):
        lines.append(f"{float(row[0])!r},{float(row[1])!r},{int(label)}\n")
    path = _out_file(args, f"xor_seed{args.seed}.csv")
    _write_text(path, "".join(lines))
    print(f"wrote {ds.n_samples} samples to {path}")
    return 0


def _cmd_train(args) -> int:
    ds = _load_dataset(args)
    split = ds.class_split()
    if args.algo == "svm":
        model = train_linear_svm(split, SvmConfig(C=args.C))
    elif args.algo == "lstsvm":
        model = train_lstsvm(split, TrainConfig(p1=args.p1, p2=args.p2))
    elif args.algo == "m1":
        mu_a, mu_b = _memberships_for(args, split)
        model = train_m1(
            split, mu_a, mu_b, TrainConfig(p1=args.p1, p2=args.p2), strategy=args.membership
        )
    else:
        mu_a, mu_b = _memberships_for(args, split)
        model = train_m2(split, mu_a, mu_b, M2Config(p1=args.p1, p2=args.p2, vagueness=args.M))
    path = _out_file(args, f"{args.algo}_{ds.name}.model")
    _write_text(path, _config_header(args, "train") + model_io.dumps(model))
    print(f"trained {args.algo} on {ds.n_samples} samples; model written to {path}")
    return 0


def _cmd_predict(args) -> int:
    model = model_io.load_model(args.model)
    x = load_matrix(args.data, delimiter=args.delimiter, has_header=args.has_header)
    if args.label_column is not None:
        keep = [i for i in range(x.shape[1]) if i != args.label_column % x.shape[1]]
        x = x[:, keep]
    lines = [_config_header(args, "predict")]
    if isinstance(model, model_io.M2Model):
        labels, mu1, mu2 = predict_m2(model, x)
        lines.append("index,label,mu1,mu2\n")
        for i, (lab, m1v, m2v) in enumerate(zip(np.atleast_1d(labels), np.atleast_1d(mu1), np.atleast_1d(mu2))):
            lines.append(f"{i},{int(lab)},{float(m1v)!r},{float(m2v)!r}\n")
    else:
        if isinstance(model, model_io.SvmModel):
            labels = predict_svm(model.plane, x)
        else:
            labels = predict_twin(model, x)
        lines.append("index,label\n")
        for i, lab in enumerate(np.atleast_1d(labels)):
            lines.append(f"{i},{int(lab)}\n")
    path = _out_file(args, "predictions.csv")
    _write_text(path, "".join(lines))
    print(f"wrote {x.shape[0]} predictions to {path}")
    return 0


def _spec_from_args(args) -> TrainerSpec:
    if args.algo == "svm":
        params = {"C": args.C}
    elif args.algo == "m2":
        params = {"p1": args.p1, "p2": args.p2, "vagueness": args.M}
    else:
        params = {"p1": args.p1, "p2": args.p2}
    if args.membership == "user":
        raise ValueError("user memberships are not supported for cross-validation commands")
    return TrainerSpec(args.algo, params, args.membership)


def _cmd_cv(args) -> int:
    ds = _load_dataset(args)
    report = kfold_cv(ds, _spec_from_args(args), k=args.k, seed=args.seed, normalize=args.normalize)
    out = _out_dir(args)
    stem = f"cv_{args.algo}_{ds.name}_seed{args.seed}"
    header = _config_header(args, "cv")
    text = [header]
    for fold in report.folds:
        text.append(f"fold {fold.fold}: accuracy {fold.accuracy:.4f} {fold.confusion}\n")
    text.append(f"mean accuracy {report.mean_accuracy:.4f}\n")
    _write_text(out / f"{stem}.txt", "".join(text))
    config_record = {"type": "config", "command": "cv", "seed": args.seed, "algorithm": args.algo}
    _write_text(out / f"{stem}.jsonl", records_to_jsonl([config_record] + report.records()))
    print(f"mean accuracy {report.mean_accuracy:.4f}; reports in {out}")
    return 0


def _cmd_bench(args) -> int:
    datasets = []
    normalize_by_dataset = {}
    if args.manifest:
        for entry in load_manifest(args.manifest):
            ds = entry.load()
            datasets.append(ds)
            normalize_by_dataset[ds.name] = entry.normalize
    if args.data:
        datasets.append(_load_dataset(args))
    if not datasets:
        raise ValueError("bench needs --manifest and/or --data")
    algos = tuple(args.algos.split(",")) if args.algos else ALGORITHMS
    grid = None
    if args.quick_grid:
        grid = {"p": [0.25, 1.0, 4.0], "C": [0.25, 1.0, 4.0], "M": [0.1, 1.0, 10.0]}
    result = benchmark(
        datasets,
        algorithms=algos,
        grid=grid,
        k=args.k,
        inner_k=args.inner_k,
        seed=args.seed,
        membership=args.membership,
        normalize_by_dataset=normalize_by_dataset,
    )
    out = _out_dir(args)
    header = _config_header(args, "bench")
    _write_text(out / "bench.txt", header + result.render_text())
    config_record = {"type": "config", "command": "bench", "seed": args.seed}
    _write_text(out / "bench.jsonl", records_to_jsonl([config_record] + result.records()))
    _write_boundaries(result, datasets, out, args.membership)
    print(result.render_text())
    print(f"benchmark artifacts in {out}")
    return 0


def _write_boundaries(result, datasets, out: Path, membership: str) -> None:
    """Decision-map CSVs for every two-feature dataset in the benchmark."""
    for ds in datasets:
        if ds.n_features != 2:
            continue
        lo = ds.x.min(axis=0) - 0.1
        hi = ds.x.max(axis=0) + 0.1
        for algo in result.algorithms:
            cell = result.cell(ds.name, algo)
            if cell.error is not None:
                continue
            spec = TrainerSpec(algo, cell.best_params, membership)
            model = spec.fit(ds.class_split())
            rows = decision_grid(
                lambda pts: spec.predict(model, pts),
                xlim=(lo[0], hi[0]),
                ylim=(lo[1], hi[1]),
            )
            lines = ["x1,x2,label\n"] + [
                f"{float(r[0])!r},{float(r[1])!r},{int(r[2])}\n" for r in rows
            ]
            _write_text(out / f"boundary_{ds.name}_{algo}.csv", "".join(lines))


def _add_data_flags(parser, label_optional: bool = False) -> None:
    parser.add_argument("--data", required=not label_optional, help="csv dataset path")
    parser.add_argument("--label-column", type=int, default=-1,
                        help="index of the label column (default: last)")
    parser.add_argument("--positive-label", default="1", help="token mapped to class +1")
    parser.add_argument("--negative-label", default="-1", help="token mapped to class -1")
    parser.add_argument("--delimiter", default=None, help="field delimiter (default: sniff , vs ;)")
    parser.add_argument("--has-header", action="store_true", help="skip the first data line")


def _add_model_flags(parser) -> None:
    parser.add_argument("--algo", choices=ALGORITHMS, default="lstsvm")
    parser.add_argument("--p1", type=float, default=1.0, help="plane-1 slack penalty")
    parser.add_argument("--p2", type=float, default=1.0, help="plane-2 slack penalty")
    parser.add_argument("--C", type=float, default=1.0, help="svm soft-margin penalty")
    parser.add_argument("--M", type=float, default=1.0, help="m2 vagueness control weight")
    parser.add_argument("--membership", choices=("uniform", "centroid", "user"),
                        default="centroid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flstsvm",
        description="Twin least-squares classifiers with fuzzy extensions.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-xor", help="write the synthetic xor dataset as csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output csv path")
    p.set_defaults(func=_cmd_gen_xor)

    p = sub.add_parser("train", help="train one model and serialize it")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--mu-a", help="file of user memberships for class +1 (one per line)")
    p.add_argument("--mu-b", help="file of user memberships for class -1 (one per line)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output model path")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="apply a serialized model to feature rows")
    p.add_argument("--model", required=True, help="model file from 'train'")
    p.add_argument("--data", required=True, help="csv of feature rows")
    p.add_argument("--label-column", type=int, default=None,
                   help="drop this column before predicting (default: none)")
    p.add_argument("--delimiter", default=None)
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--out", help="output predictions path")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("cv", help="stratified k-fold cross-validation")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", choices=("minmax", "zscore", "none"), default="minmax")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("bench", help="grid-searched benchmark over datasets x algorithms")
    _add_data_flags(p, label_optional=True)
    p.add_argument("--manifest", help="toml manifest of benchmark datasets")
    p.add_argument("--algos", help="comma-separated subset of svm,lstsvm,m1,m2")
    p.add_argument("--membership", choices=("uniform", "centroid"), default="centroid")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--inner-k", type=int, default=10,
                   help="folds for the nested hyperparameter selection")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick-grid", action="store_true",
                   help="use a 3-point penalty grid instead of the full sweep")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code or 0)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 6
    except Exception as exc:  # pragma: no cover - defensive
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
