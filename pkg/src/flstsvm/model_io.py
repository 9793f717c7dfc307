"""Plain-text model serialization shared by all four classifier kinds.

The document is versioned, line oriented (``key = value``), and uses
shortest round-trip float formatting, so save/load is lossless at full
double precision and byte-deterministic for a given model.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import Hyperplane, TrainConfig, TwinModel
from .errors import DataFormatError
from .m1 import M1Model
from .m2 import FuzzyHyperplane, M2Config, M2Model
from .svm import SvmConfig, SvmModel

FORMAT_TAG = "flstsvm-model/1"


def _fmt_float(value: float) -> str:
    return repr(float(value))


def _fmt_vector(values) -> str:
    return " ".join(_fmt_float(v) for v in np.asarray(values, dtype=float))


def _fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def dumps(model) -> str:
    """Serialize a trained model to the key-value document."""
    lines = [("format", FORMAT_TAG)]
    if isinstance(model, SvmModel):
        lines += [
            ("kind", "svm"),
            ("features", str(model.plane.w.shape[0])),
            ("C", _fmt_float(model.config.C)),
            ("max_iterations", str(model.config.max_iterations)),
            ("tolerance", _fmt_float(model.config.tolerance)),
            ("converged", _fmt_bool(model.converged)),
            ("iterations", str(model.iterations)),
            ("plane.w", _fmt_vector(model.plane.w)),
            ("plane.b", _fmt_float(model.plane.b)),
        ]
    elif isinstance(model, M2Model):
        lines += [
            ("kind", "m2"),
            ("features", str(model.n_features)),
            ("p1", _fmt_float(model.config.p1)),
            ("p2", _fmt_float(model.config.p2)),
            ("vagueness", _fmt_float(model.config.vagueness)),
        ]
        for tag, plane, reg, proj in (
            ("plane1", model.h1, model.regularized[0], model.projected[0]),
            ("plane2", model.h2, model.regularized[1], model.projected[1]),
        ):
            lines += [
                (f"{tag}.w", _fmt_vector(plane.w)),
                (f"{tag}.c", _fmt_vector(plane.c)),
                (f"{tag}.b", _fmt_float(plane.b)),
                (f"{tag}.d", _fmt_float(plane.d)),
                (f"{tag}.regularized", _fmt_bool(reg)),
                (f"{tag}.projected", _fmt_bool(proj)),
            ]
    elif isinstance(model, M1Model):
        lines += [
            ("kind", "m1"),
            ("features", str(model.n_features)),
            ("p1", _fmt_float(model.config.p1)),
            ("p2", _fmt_float(model.config.p2)),
            ("membership.strategy", model.strategy),
            ("membership.a", _fmt_vector(model.mu_a)),
            ("membership.b", _fmt_vector(model.mu_b)),
        ]
        lines += _twin_plane_lines(model)
    elif isinstance(model, TwinModel):
        lines += [
            ("kind", "lstsvm"),
            ("features", str(model.n_features)),
            ("p1", _fmt_float(model.config.p1)),
            ("p2", _fmt_float(model.config.p2)),
        ]
        lines += _twin_plane_lines(model)
    else:
        raise TypeError(f"cannot serialize object of type {type(model).__name__}")
    return "".join(f"{key} = {value}\n" for key, value in lines)


def _twin_plane_lines(model):
    return [
        ("plane1.w", _fmt_vector(model.plane1.w)),
        ("plane1.b", _fmt_float(model.plane1.b)),
        ("plane1.regularized", _fmt_bool(model.regularized[0])),
        ("plane2.w", _fmt_vector(model.plane2.w)),
        ("plane2.b", _fmt_float(model.plane2.b)),
        ("plane2.regularized", _fmt_bool(model.regularized[1])),
    ]


def save_model(model, path) -> None:
    Path(path).write_text(dumps(model), encoding="utf-8", newline="\n")


def _parse_document(text: str) -> dict:
    doc = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataFormatError(f"model document line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        doc[key.strip()] = value.strip()
    return doc


class _Reader:
    def __init__(self, doc: dict):
        self.doc = doc

    def get(self, key: str) -> str:
        if key not in self.doc:
            raise DataFormatError(f"model document is missing key {key!r}")
        return self.doc[key]

    def number(self, key: str) -> float:
        try:
            return float(self.get(key))
        except ValueError:
            raise DataFormatError(f"model document key {key!r} is not a number") from None

    def integer(self, key: str) -> int:
        try:
            return int(self.get(key))
        except ValueError:
            raise DataFormatError(f"model document key {key!r} is not an integer") from None

    def flag(self, key: str) -> bool:
        value = self.get(key)
        if value not in ("true", "false"):
            raise DataFormatError(f"model document key {key!r} must be true/false")
        return value == "true"

    def vector(self, key: str, length: int) -> np.ndarray:
        try:
            values = np.array([float(v) for v in self.get(key).split()], dtype=float)
        except ValueError:
            raise DataFormatError(f"model document key {key!r} is not a number list") from None
        if values.shape[0] != length:
            raise DataFormatError(
                f"model document key {key!r}: expected {length} values, found {values.shape[0]}"
            )
        return values


def loads(text: str):
    """Deserialize a model document produced by :func:`dumps`."""
    reader = _Reader(_parse_document(text))
    if reader.get("format") != FORMAT_TAG:
        raise DataFormatError(
            f"unsupported model format {reader.get('format')!r}; expected {FORMAT_TAG!r}"
        )
    kind = reader.get("kind")
    d = reader.integer("features")
    if kind == "svm":
        return SvmModel(
            plane=Hyperplane(reader.vector("plane.w", d), reader.number("plane.b")),
            config=SvmConfig(
                C=reader.number("C"),
                max_iterations=reader.integer("max_iterations"),
                tolerance=reader.number("tolerance"),
            ),
            converged=reader.flag("converged"),
            iterations=reader.integer("iterations"),
        )
    if kind == "lstsvm":
        return TwinModel(
            plane1=Hyperplane(reader.vector("plane1.w", d), reader.number("plane1.b")),
            plane2=Hyperplane(reader.vector("plane2.w", d), reader.number("plane2.b")),
            config=TrainConfig(p1=reader.number("p1"), p2=reader.number("p2")),
            regularized=(reader.flag("plane1.regularized"), reader.flag("plane2.regularized")),
        )
    if kind == "m1":
        mu_a = reader.get("membership.a").split()
        mu_b = reader.get("membership.b").split()
        return M1Model(
            plane1=Hyperplane(reader.vector("plane1.w", d), reader.number("plane1.b")),
            plane2=Hyperplane(reader.vector("plane2.w", d), reader.number("plane2.b")),
            config=TrainConfig(p1=reader.number("p1"), p2=reader.number("p2")),
            mu_a=reader.vector("membership.a", len(mu_a)),
            mu_b=reader.vector("membership.b", len(mu_b)),
            strategy=reader.get("membership.strategy"),
            regularized=(reader.flag("plane1.regularized"), reader.flag("plane2.regularized")),
        )
    if kind == "m2":
        planes = []
        for tag in ("plane1", "plane2"):
            planes.append(
                FuzzyHyperplane(
                    w=reader.vector(f"{tag}.w", d),
                    c=reader.vector(f"{tag}.c", d),
                    b=reader.number(f"{tag}.b"),
                    d=reader.number(f"{tag}.d"),
                )
            )
        return M2Model(
            h1=planes[0],
            h2=planes[1],
            config=M2Config(
                p1=reader.number("p1"),
                p2=reader.number("p2"),
                vagueness=reader.number("vagueness"),
            ),
            regularized=(reader.flag("plane1.regularized"), reader.flag("plane2.regularized")),
            projected=(reader.flag("plane1.projected"), reader.flag("plane2.projected")),
        )
    raise DataFormatError(f"unknown model kind {kind!r}")


def load_model(path):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"model file not found: {path}")
    return loads(path.read_text(encoding="utf-8"))
