"""Cross-validation, grid search, and benchmark-table assembly.

Folds are stratified and seeded; normalization statistics and
hyperparameter selection only ever see the training portion of a fold, so
held-out samples cannot leak into either. Everything is deterministic for
a fixed (data, grid, seed) triple.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .core import ClassSplit, TrainConfig, train_lstsvm, predict_twin
from .data import Dataset, fit_normalization
from .m1 import assign_memberships, train_m1
from .m2 import M2Config, train_m2, predict_m2
from .svm import SvmConfig, train_linear_svm, predict_svm

ALGORITHMS = ("svm", "lstsvm", "m1", "m2")

# Published single-table accuracies (percent) the benchmark annotates for
# context; they are expectation bands, not assertions.
REFERENCE_ACCURACY = {
    ("xor", "svm"): 53.0,
    ("xor", "lstsvm"): 65.0,
    ("xor", "m2"): 73.0,
    ("heart-statlog", "svm"): 84.1,
    ("heart-statlog", "lstsvm"): 85.5,
    ("heart-statlog", "m2"): 87.9,
    ("australian", "svm"): 85.5,
    ("australian", "lstsvm"): 86.6,
    ("australian", "m2"): 90.7,
    ("liver", "svm"): 58.3,
    ("liver", "lstsvm"): 70.9,
    ("liver", "m2"): 73.2,
    ("breast-cancer", "svm"): 79.9,
    ("breast-cancer", "lstsvm"): 83.8,
    ("breast-cancer", "m2"): 98.2,
}


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def accuracy(counts: ConfusionCounts) -> float:
    """Fraction of correct assignments, ``(tp + tn) / total``."""
    if counts.total == 0:
        raise ValueError("accuracy is undefined for zero evaluated samples")
    return (counts.tp + counts.tn) / counts.total


def count_confusion(y_true, y_pred) -> ConfusionCounts:
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if y_true.shape != y_pred.shape:
        raise ValueError("prediction/label length mismatch")
    return ConfusionCounts(
        tp=int(np.sum((y_true == 1) & (y_pred == 1))),
        tn=int(np.sum((y_true == -1) & (y_pred == -1))),
        fp=int(np.sum((y_true == -1) & (y_pred == 1))),
        fn=int(np.sum((y_true == 1) & (y_pred == -1))),
    )


@dataclass(frozen=True)
class TrainerSpec:
    """An algorithm tag plus the hyperparameters and membership strategy to use."""

    algorithm: str
    params: dict = field(default_factory=dict)
    membership: str = "centroid"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")

    def fit(self, split: ClassSplit):
        p = self.params
        if self.algorithm == "svm":
            return train_linear_svm(split, SvmConfig(C=p.get("C", 1.0)))
        if self.algorithm == "lstsvm":
            return train_lstsvm(split, TrainConfig(p1=p.get("p1", 1.0), p2=p.get("p2", 1.0)))
        mu_a, mu_b = assign_memberships(split, self.membership)
        if self.algorithm == "m1":
            return train_m1(
                split, mu_a, mu_b,
                TrainConfig(p1=p.get("p1", 1.0), p2=p.get("p2", 1.0)),
                strategy=self.membership,
            )
        return train_m2(
            split, mu_a, mu_b,
            M2Config(
                p1=p.get("p1", 1.0), p2=p.get("p2", 1.0),
                vagueness=p.get("vagueness", 1.0),
            ),
        )

    def predict(self, model, x):
        if self.algorithm == "svm":
            return predict_svm(model.plane, x)
        if self.algorithm == "m2":
            return predict_m2(model, x)[0]
        return predict_twin(model, x)


@dataclass(frozen=True)
class FoldResult:
    fold: int
    confusion: ConfusionCounts
    accuracy: float
    params: dict


@dataclass(frozen=True)
class CVReport:
    algorithm: str
    dataset: str
    seed: int
    k: int
    normalize: str
    membership: str
    params: dict
    folds: tuple

    @property
    def fold_accuracies(self) -> list:
        return [f.accuracy for f in self.folds]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))

    def records(self) -> list:
        """Machine-readable rows: one per fold plus a summary row."""
        rows = []
        base = {
            "algorithm": self.algorithm,
            "dataset": self.dataset,
            "seed": self.seed,
            "k": self.k,
            "normalize": self.normalize,
            "membership": self.membership,
        }
        for f in self.folds:
            rows.append(
                dict(
                    base,
                    type="fold",
                    fold=f.fold,
                    tp=f.confusion.tp,
                    tn=f.confusion.tn,
                    fp=f.confusion.fp,
                    fn=f.confusion.fn,
                    accuracy=f.accuracy,
                    params=f.params,
                )
            )
        rows.append(dict(base, type="summary", params=self.params, mean_accuracy=self.mean_accuracy))
        return rows


def records_to_jsonl(records: list) -> str:
    """Render records as line-delimited JSON with deterministic key order."""
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def stratified_folds(y, k: int, seed: int) -> list:
    """Seeded stratified partition; returns one test-index array per fold.

    Indices of each class are shuffled with the seed and dealt round-robin,
    so per-fold class counts differ by at most one. Raises when a class is
    too small for every training portion to keep both classes.
    """
    y = np.asarray(y, dtype=int)
    n = y.shape[0]
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} samples")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    # The deal position carries over between classes so folds fill evenly
    # even when a class count is below k (and in the leave-one-out limit).
    offset = 0
    for cls in (1, -1):
        idx = np.flatnonzero(y == cls)
        idx = idx[rng.permutation(idx.shape[0])]
        for i, sample in enumerate(idx.tolist()):
            folds[(offset + i) % k].append(sample)
        offset = (offset + idx.shape[0]) % k
    test_sets = [np.array(sorted(f), dtype=int) for f in folds]
    for f, test_idx in enumerate(test_sets):
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        train_labels = y[train_mask]
        if not (np.any(train_labels == 1) and np.any(train_labels == -1)):
            raise ValueError(
                f"a class is too small for {k}-fold stratification (fold {f} training "
                "portion lost a class)"
            )
    return test_sets


def _evaluate_fold(ds: Dataset, train_idx, test_idx, spec: TrainerSpec, normalize: str):
    """Train on the training indices, score the held-out ones.

    Normalization statistics come from the training portion only.
    """
    stats = fit_normalization(ds.x[train_idx], normalize)
    x_train = stats.apply(ds.x[train_idx])
    y_train = ds.y[train_idx]
    split = ClassSplit(a=x_train[y_train == 1], b=x_train[y_train == -1])
    model = spec.fit(split)
    y_pred = spec.predict(model, stats.apply(ds.x[test_idx]))
    return count_confusion(ds.y[test_idx], y_pred)


def kfold_cv(
    ds: Dataset,
    spec: TrainerSpec,
    k: int = 10,
    seed: int = 0,
    normalize: str = "minmax",
) -> CVReport:
    """Stratified k-fold cross-validation of one trainer configuration."""
    test_sets = stratified_folds(ds.y, k, seed)
    all_idx = np.arange(ds.n_samples)
    folds = []
    for f, test_idx in enumerate(test_sets):
        train_idx = np.setdiff1d(all_idx, test_idx)
        confusion = _evaluate_fold(ds, train_idx, test_idx, spec, normalize)
        folds.append(
            FoldResult(fold=f, confusion=confusion, accuracy=accuracy(confusion), params=spec.params)
        )
    return CVReport(
        algorithm=spec.algorithm,
        dataset=ds.name,
        seed=seed,
        k=k,
        normalize=normalize,
        membership=spec.membership,
        params=spec.params,
        folds=tuple(folds),
    )


def default_grid() -> dict:
    """Powers-of-two sweep for the penalties, a small sweep for vagueness."""
    return {
        "p": [float(2.0**i) for i in range(-8, 9)],
        "C": [float(2.0**i) for i in range(-8, 9)],
        "M": [0.1, 1.0, 10.0],
    }


def expand_grid(algorithm: str, grid: dict | None = None) -> list:
    """Materialize an algorithm's config list in canonical (ascending) order.

    ``grid`` may define ``p`` (tied p1 = p2), explicit ``p1``/``p2`` lists,
    ``C``, and ``M``. Duplicates collapse; ordering is by sorted parameter
    tuples so ties later resolve toward smaller penalties.
    """
    grid = grid if grid is not None else default_grid()
    if algorithm == "svm":
        configs = [{"C": float(c)} for c in grid.get("C", [1.0])]
    else:
        if "p1" in grid or "p2" in grid:
            pairs = itertools.product(grid.get("p1", [1.0]), grid.get("p2", [1.0]))
            penalty_configs = [{"p1": float(a), "p2": float(b)} for a, b in pairs]
        else:
            penalty_configs = [{"p1": float(p), "p2": float(p)} for p in grid.get("p", [1.0])]
        if algorithm == "m2":
            configs = [
                dict(pc, vagueness=float(m))
                for pc, m in itertools.product(penalty_configs, grid.get("M", [1.0]))
            ]
        else:
            configs = penalty_configs
    unique = {tuple(sorted(c.items())): c for c in configs}
    ordered = sorted(unique)
    if not ordered:
        raise ValueError(f"empty hyperparameter grid for algorithm {algorithm!r}")
    return [unique[key] for key in ordered]


def select_config(
    train_ds: Dataset,
    algorithm: str,
    configs: list,
    inner_k: int,
    seed: int,
    membership: str,
    normalize: str,
) -> dict:
    """Pick the config with the best inner-CV mean accuracy on ``train_ds``.

    Sees only the supplied (training) data. Ties keep the earliest config
    in canonical order. When a class is too small for an inner split, the
    score falls back to training accuracy, still leakage-free.
    """
    if not configs:
        raise ValueError("empty hyperparameter grid")
    counts = [int(np.sum(train_ds.y == 1)), int(np.sum(train_ds.y == -1))]
    k_eff = min(inner_k, min(counts))
    best_idx, best_score = 0, -1.0
    for idx, params in enumerate(configs):
        spec = TrainerSpec(algorithm, params, membership)
        score = _inner_score(train_ds, spec, k_eff, seed, normalize)
        if score > best_score + 1e-15:
            best_idx, best_score = idx, score
    return configs[best_idx]


def _inner_score(train_ds, spec, k_eff, seed, normalize) -> float:
    if k_eff >= 2:
        try:
            return kfold_cv(train_ds, spec, k=k_eff, seed=seed, normalize=normalize).mean_accuracy
        except ValueError:
            pass
    all_idx = np.arange(train_ds.n_samples)
    confusion = _evaluate_fold(train_ds, all_idx, all_idx, spec, normalize)
    return accuracy(confusion)


@dataclass(frozen=True)
class GridSearchResult:
    best_params: dict
    report: CVReport


def grid_search(
    ds: Dataset,
    algorithm: str,
    grid: dict | None = None,
    k: int = 10,
    inner_k: int = 10,
    seed: int = 0,
    membership: str = "centroid",
    normalize: str = "minmax",
) -> GridSearchResult:
    """Nested cross-validation: per outer fold, pick a config by inner CV
    on the training portion, then score the held-out fold with it.

    The headline ``best_params`` is the config selected most often across
    outer folds (ties toward canonical order), and the report's per-fold
    rows record each fold's own selection.
    """
    configs = expand_grid(algorithm, grid)
    test_sets = stratified_folds(ds.y, k, seed)
    all_idx = np.arange(ds.n_samples)
    folds = []
    selected = []
    for f, test_idx in enumerate(test_sets):
        train_idx = np.setdiff1d(all_idx, test_idx)
        chosen = select_config(
            ds.subset(train_idx), algorithm, configs, inner_k, seed, membership, normalize
        )
        selected.append(chosen)
        spec = TrainerSpec(algorithm, chosen, membership)
        confusion = _evaluate_fold(ds, train_idx, test_idx, spec, normalize)
        folds.append(
            FoldResult(fold=f, confusion=confusion, accuracy=accuracy(confusion), params=chosen)
        )
    keys = [tuple(sorted(c.items())) for c in selected]
    ranked = sorted(set(keys), key=lambda key: (-keys.count(key), configs.index(dict(key))))
    best = dict(ranked[0])
    report = CVReport(
        algorithm=algorithm,
        dataset=ds.name,
        seed=seed,
        k=k,
        normalize=normalize,
        membership=membership,
        params=best,
        folds=tuple(folds),
    )
    return GridSearchResult(best_params=best, report=report)


@dataclass(frozen=True)
class BenchmarkCell:
    dataset: str
    algorithm: str
    mean_accuracy: float | None
    best_params: dict | None
    report: CVReport | None
    error: str | None = None


@dataclass(frozen=True)
class BenchmarkResult:
    datasets: tuple
    algorithms: tuple
    cells: tuple
    seed: int

    def cell(self, dataset: str, algorithm: str) -> BenchmarkCell:
        for c in self.cells:
            if c.dataset == dataset and c.algorithm == algorithm:
                return c
        raise KeyError((dataset, algorithm))

    def records(self) -> list:
        rows = []
        for c in self.cells:
            if c.error is not None:
                rows.append(
                    {
                        "type": "error",
                        "dataset": c.dataset,
                        "algorithm": c.algorithm,
                        "message": c.error,
                        "seed": self.seed,
                    }
                )
            else:
                rows.extend(c.report.records())
        return rows

    def render_text(self) -> str:
        """Human-readable accuracy matrix (percent) with reference notes."""
        width = 17
        header = ["dataset".ljust(16)] + [a.rjust(width) for a in self.algorithms]
        lines = [" ".join(header), "-" * (16 + (width + 1) * len(self.algorithms))]
        for ds_name in self.datasets:
            row = [ds_name.ljust(16)]
            for algo in self.algorithms:
                c = self.cell(ds_name, algo)
                if c.error is not None:
                    row.append("error".rjust(width))
                else:
                    text = f"{100.0 * c.mean_accuracy:.1f}"
                    ref = REFERENCE_ACCURACY.get((ds_name.lower(), algo))
                    if ref is not None:
                        text += f" (ref {ref:.1f})"
                    row.append(text.rjust(width))
            lines.append(" ".join(row))
        return "\n".join(lines) + "\n"


def benchmark(
    datasets: list,
    algorithms=ALGORITHMS,
    grid: dict | None = None,
    k: int = 10,
    inner_k: int = 10,
    seed: int = 0,
    membership: str = "centroid",
    normalize_by_dataset: dict | None = None,
) -> BenchmarkResult:
    """Grid-searched CV accuracy for every (dataset, algorithm) pair.

    Component failures are captured per cell rather than aborting the run.
    ``normalize_by_dataset`` overrides the minmax default per dataset name.
    """
    algorithms = tuple(algorithms)
    for algo in algorithms:
        if algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")
    normalize_by_dataset = normalize_by_dataset or {}
    cells = []
    for ds in datasets:
        method = normalize_by_dataset.get(ds.name, "minmax")
        for algo in algorithms:
            try:
                result = grid_search(
                    ds, algo, grid=grid, k=k, inner_k=inner_k, seed=seed,
                    membership=membership, normalize=method,
                )
                cells.append(
                    BenchmarkCell(
                        dataset=ds.name,
                        algorithm=algo,
                        mean_accuracy=result.report.mean_accuracy,
                        best_params=result.best_params,
                        report=result.report,
                    )
                )
            except (ValueError, RuntimeError) as exc:
                cells.append(
                    BenchmarkCell(
                        dataset=ds.name,
                        algorithm=algo,
                        mean_accuracy=None,
                        best_params=None,
                        report=None,
                        error=str(exc),
                    )
                )
    return BenchmarkResult(
        datasets=tuple(ds.name for ds in datasets),
        algorithms=algorithms,
        cells=tuple(cells),
        seed=seed,
    )


def decision_grid(predict_rows, xlim=(-1.1, 1.1), ylim=(-1.1, 1.1), steps: int = 61) -> np.ndarray:
    """Plot-ready decision map for a two-feature classifier.

    Evaluates ``predict_rows`` on a ``steps x steps`` lattice and returns
    rows ``(x, y, label)`` suitable for a delimited file.
    """
    xs = np.linspace(xlim[0], xlim[1], steps)
    ys = np.linspace(ylim[0], ylim[1], steps)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([gx.ravel(), gy.ravel()])
    labels = np.asarray(predict_rows(points), dtype=float)
    return np.column_stack([points, labels])
