"""Dataset ingestion, normalization, and the synthetic XOR generator.

Datasets are immutable ``(X, y)`` pairs with labels in {+1, -1}. CSV
loading maps raw label tokens to classes through an explicit schema and
rejects malformed rows with row-indexed diagnostics. Normalization is
always fitted on a training portion and returns its statistics so held-out
folds can be transformed without leakage.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import ClassSplit, POSITIVE, NEGATIVE, _freeze
from .errors import DataFormatError

XOR_GRID_SIDE = 11
XOR_JITTER = 0.05

NORMALIZATION_METHODS = ("minmax", "zscore", "none")


@dataclass(frozen=True)
class Dataset:
    """Immutable labeled dataset: features ``x`` (n x d), labels ``y`` in {+1, -1}."""

    x: np.ndarray
    y: np.ndarray
    name: str = ""
    provenance: str = ""

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if x.ndim != 2 or x.shape[0] < 2:
            raise ValueError(f"dataset needs at least 2 samples, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("dataset features contain non-finite values")
        if y.shape != (x.shape[0],):
            raise ValueError("labels must be one per sample")
        if not np.all(np.isin(y, (POSITIVE, NEGATIVE))):
            raise ValueError("labels must be +1 or -1")
        object.__setattr__(self, "x", _freeze(x))
        yy = np.array(y, dtype=int, copy=True)
        yy.setflags(write=False)
        object.__setattr__(self, "y", yy)

    @property
    def n_samples(self) -> int:
        return self.x.shape[0]

    @property
    def n_features(self) -> int:
        return self.x.shape[1]

    def class_split(self) -> ClassSplit:
        """Arrange the dataset as positive/negative class matrices."""
        pos = self.x[self.y == POSITIVE]
        neg = self.x[self.y == NEGATIVE]
        if pos.shape[0] == 0 or neg.shape[0] == 0:
            raise ValueError(f"dataset {self.name!r} must contain both classes for training")
        return ClassSplit(a=pos, b=neg)

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.x[idx], self.y[idx], name=self.name, provenance=self.provenance)


@dataclass(frozen=True)
class CsvSchema:
    """Column roles and label mapping for a delimited text file.

    ``label_column`` indexes the label column (negative indices count from
    the end). ``label_map`` sends raw tokens to +1/-1. ``delimiter=None``
    sniffs comma vs semicolon. Lines starting with '#' are skipped.
    ``drop_columns`` removes non-feature columns (ids, timestamps) by
    index before parsing; ``drop_bad_rows`` turns unparseable-row errors
    into row-indexed warnings that skip the row (for raw benchmark files
    with missing values).
    """

    label_column: int = -1
    label_map: dict = field(default_factory=lambda: {"1": POSITIVE, "-1": NEGATIVE})
    delimiter: str | None = None
    has_header: bool = False
    drop_columns: tuple = ()
    drop_bad_rows: bool = False


def _sniff_delimiter(sample_line: str) -> str:
    return ";" if sample_line.count(";") > sample_line.count(",") else ","


def _data_lines(path: Path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def load_csv(path, schema: CsvSchema | None = None, name: str = "") -> Dataset:
    """Parse a delimited text file into a labeled dataset.

    Raises ``FileNotFoundError`` for a missing file and ``DataFormatError``
    (naming the offending row) for inconsistent column counts, unparseable
    numeric fields, or label tokens outside the schema's mapping.
    """
    schema = schema or CsvSchema()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"dataset file not found: {path}")

    rows = list(_data_lines(path))
    if not rows:
        raise DataFormatError(f"{path}: file contains no data rows")
    delimiter = schema.delimiter or _sniff_delimiter(rows[0][1])
    if schema.has_header:
        rows = rows[1:]
        if not rows:
            raise DataFormatError(f"{path}: file contains only a header")

    features = []
    labels = []
    n_cols = None
    dropped = []
    for lineno, line in rows:
        if delimiter.isspace():
            fields = line.split()
        else:
            fields = next(csv.reader(io.StringIO(line), delimiter=delimiter))
            fields = [f.strip() for f in fields]
        if n_cols is None:
            n_cols = len(fields)
            if n_cols < 2:
                raise DataFormatError(f"{path}: row {lineno}: need at least 2 columns")
        elif len(fields) != n_cols:
            raise DataFormatError(
                f"{path}: row {lineno}: expected {n_cols} columns, found {len(fields)}"
            )
        label_idx = schema.label_column % n_cols
        skip = {label_idx} | {c % n_cols for c in schema.drop_columns}
        token = fields[label_idx]
        if token not in schema.label_map:
            raise DataFormatError(f"{path}: row {lineno}: unmapped label value {token!r}")
        try:
            features.append([float(f) for k, f in enumerate(fields) if k not in skip])
        except ValueError as exc:
            if schema.drop_bad_rows:
                dropped.append(lineno)
                continue
            raise DataFormatError(f"{path}: row {lineno}: non-numeric feature ({exc})") from None
        labels.append(schema.label_map[token])

    if dropped:
        warnings.warn(
            f"{path}: dropped {len(dropped)} unparseable row(s): {dropped}", stacklevel=2
        )
    return Dataset(
        np.array(features, dtype=float),
        np.array(labels, dtype=int),
        name=name or path.stem,
        provenance=str(path),
    )


def load_matrix(path, delimiter: str | None = None, has_header: bool = False) -> np.ndarray:
    """Parse a delimited file of pure numeric features (no label column)."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"feature file not found: {path}")
    rows = list(_data_lines(path))
    if not rows:
        raise DataFormatError(f"{path}: file contains no data rows")
    delim = delimiter or _sniff_delimiter(rows[0][1])
    if has_header:
        rows = rows[1:]
    out = []
    width = None
    for lineno, line in rows:
        fields = line.split() if delim.isspace() else [f.strip() for f in line.split(delim)]
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise DataFormatError(
                f"{path}: row {lineno}: expected {width} columns, found {len(fields)}"
            )
        try:
            out.append([float(f) for f in fields])
        except ValueError as exc:
            raise DataFormatError(f"{path}: row {lineno}: non-numeric value ({exc})") from None
    return np.array(out, dtype=float)


def generate_xor(seed: int) -> Dataset:
    """Synthetic two-feature XOR layout with 121 points.

    An 11x11 grid over [-1, 1]^2; a point is positive when its coordinate
    signs agree (zero counting as positive). Seeded uniform jitter of
    amplitude 0.05 is added after labeling, so the grid lines at zero
    produce class overlap near the axes. Bit-deterministic per seed.
    """
    axis = np.linspace(-1.0, 1.0, XOR_GRID_SIDE)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    points = np.column_stack([xx.ravel(), yy.ravel()])
    agree = (points[:, 0] >= 0.0) == (points[:, 1] >= 0.0)
    labels = np.where(agree, POSITIVE, NEGATIVE)
    rng = np.random.default_rng(seed)
    jitter = rng.uniform(-XOR_JITTER, XOR_JITTER, size=points.shape)
    return Dataset(
        points + jitter,
        labels,
        name="xor",
        provenance=f"synthetic 11x11 xor grid, jitter {XOR_JITTER}, seed {seed}",
    )


@dataclass(frozen=True)
class NormalizationStats:
    """Per-feature affine transform fitted on a training portion.

    The transform is ``(x - shift) / scale`` with ``scale`` forced to 1 for
    constant features (which therefore map to 0); those features are listed
    in ``constant_features``.
    """

    method: str
    shift: np.ndarray
    scale: np.ndarray
    constant_features: tuple = ()

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.shift) / self.scale


def fit_normalization(x: np.ndarray, method: str = "minmax") -> NormalizationStats:
    """Fit normalization statistics on ``x`` only (no held-out data)."""
    if method not in NORMALIZATION_METHODS:
        raise ValueError(f"unknown normalization {method!r}; expected {NORMALIZATION_METHODS}")
    x = np.asarray(x, dtype=float)
    if method == "none":
        return NormalizationStats("none", np.zeros(x.shape[1]), np.ones(x.shape[1]))
    if method == "minmax":
        lo = x.min(axis=0)
        hi = x.max(axis=0)
        span = hi - lo
        constant = span == 0.0
        return NormalizationStats(
            "minmax",
            shift=lo,
            scale=np.where(constant, 1.0, span),
            constant_features=tuple(int(i) for i in np.flatnonzero(constant)),
        )
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    constant = std == 0.0
    return NormalizationStats(
        "zscore",
        shift=mean,
        scale=np.where(constant, 1.0, std),
        constant_features=tuple(int(i) for i in np.flatnonzero(constant)),
    )


def normalize(ds: Dataset, method: str = "minmax") -> tuple[Dataset, NormalizationStats]:
    """Normalize a dataset and return the statistics for held-out reuse."""
    stats = fit_normalization(ds.x, method)
    return (
        Dataset(stats.apply(ds.x), ds.y, name=ds.name, provenance=ds.provenance),
        stats,
    )


@dataclass(frozen=True)
class BenchmarkEntry:
    """One benchmark dataset declared in a manifest."""

    name: str
    path: str
    schema: CsvSchema
    expected_shape: tuple | None = None
    normalize: str = "minmax"

    def load(self) -> Dataset:
        ds = load_csv(self.path, self.schema, name=self.name)
        if self.expected_shape is not None:
            expected = tuple(self.expected_shape)
            if (ds.n_samples, ds.n_features) != expected:
                warnings.warn(
                    f"dataset {self.name!r}: shape {(ds.n_samples, ds.n_features)} "
                    f"differs from expected {expected}",
                    stacklevel=2,
                )
        return ds


def load_manifest(path) -> list[BenchmarkEntry]:
    """Read a TOML benchmark manifest.

    Each ``[datasets.<name>]`` table names a csv path plus schema fields:
    ``label_column``, ``labels`` (token -> +1/-1 mapping), optional
    ``delimiter``, ``has_header``, ``expected_rows``/``expected_cols``, and
    ``normalize``. Relative paths resolve against the manifest location.
    """
    import tomli

    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"manifest not found: {path}")
    try:
        with open(path, "rb") as fh:
            doc = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise DataFormatError(f"{path}: invalid manifest ({exc})") from None

    tables = doc.get("datasets")
    if not isinstance(tables, dict) or not tables:
        raise DataFormatError(f"{path}: manifest must define a [datasets.*] table")

    entries = []
    for name, spec in tables.items():
        if "path" not in spec:
            raise DataFormatError(f"{path}: dataset {name!r} is missing 'path'")
        label_map = {
            str(token): int(cls) for token, cls in spec.get("labels", {"1": 1, "-1": -1}).items()
        }
        if any(cls not in (POSITIVE, NEGATIVE) for cls in label_map.values()):
            raise DataFormatError(f"{path}: dataset {name!r}: label classes must be +1/-1")
        schema = CsvSchema(
            label_column=int(spec.get("label_column", -1)),
            label_map=label_map,
            delimiter=spec.get("delimiter"),
            has_header=bool(spec.get("has_header", False)),
            drop_columns=tuple(int(c) for c in spec.get("drop_columns", ())),
            drop_bad_rows=bool(spec.get("drop_bad_rows", False)),
        )
        expected = None
        if "expected_rows" in spec and "expected_cols" in spec:
            expected = (int(spec["expected_rows"]), int(spec["expected_cols"]))
        entries.append(
            BenchmarkEntry(
                name=name,
                path=str((path.parent / spec["path"]).resolve()),
                schema=schema,
                expected_shape=expected,
                normalize=spec.get("normalize", "minmax"),
            )
        )
    return entries
