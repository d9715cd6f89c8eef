"""Single-layer competitive model with excitatory/inhibitory unit pairs.

M units compete over the expanded input pattern.  Each unit holds an
excitatory weight vector ``v`` (drives the competition) and an
inhibitory weight vector ``w`` (damps the elicited response).  A hard
winner-take-all step picks the unit with the largest excitatory
activation; the winner's excitatory-minus-inhibitory response becomes
the output (regression) or selects the unit's class label
(classification).  Models are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .expansion import ExpansionSpec, expand, expansion_dim

MODEL_FORMAT_VERSION = 1

IDENTITY = "identity"
LOGISTIC = "logistic"
_ACTIVATIONS = (IDENTITY, LOGISTIC)

REGRESSION = "regression"
CLASSIFICATION = "classification"


def logistic(x):
    """Numerically stable logistic function."""
    arr = np.asarray(x, dtype=np.float64)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr)
    out = np.empty_like(flat)
    pos = flat >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-flat[pos]))
    ex = np.exp(flat[~pos])
    out[~pos] = ex / (1.0 + ex)
    return float(out[0]) if scalar else out


def apply_activation(name: str, r):
    if name == IDENTITY:
        return r
    if name == LOGISTIC:
        return logistic(r)
    raise ValueError(f"unknown activation {name!r}; expected one of {_ACTIVATIONS}")


@dataclass(frozen=True)
class EmotionalUnit:
    """One competing unit: excitatory weights ``v``, inhibitory ``w``."""

    v: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.v, dtype=np.float64)
        w = np.asarray(self.w, dtype=np.float64)
        if v.ndim != 1 or w.ndim != 1 or v.shape != w.shape:
            raise ValueError(
                f"v and w must be equal-length vectors, got {v.shape} and {w.shape}"
            )
        if not (np.isfinite(v).all() and np.isfinite(w).all()):
            raise ValueError("unit weights must be finite")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class Prediction:
    """Outcome of one forward pass.

    ``winner`` is the smallest index attaining the maximal excitatory
    activation; ``excitation`` holds all per-unit activations; ``output``
    is the activated winner response (regression) or the winner's class
    label (classification).
    """

    winner: int
    excitation: np.ndarray
    output: float | int


class WtaModel:
    """Immutable winner-take-all model over an expanded input pattern.

    Args:
        spec: input expansion shape.
        excitatory: (M, m) matrix, row j is unit j's excitatory weights.
        inhibitory: (M, m) matrix, row j is unit j's inhibitory weights.
        mode: "regression" or "classification".
        output_activation: "identity" or "logistic" (regression only).
        class_of_unit: class label per unit (classification only).
        class_names: optional original label strings, index = dense label.
    """

    def __init__(self, spec: ExpansionSpec, excitatory, inhibitory,
                 *, mode: str = REGRESSION, output_activation: str = IDENTITY,
                 class_of_unit=None, class_names=None):
        excitatory = np.array(excitatory, dtype=np.float64, copy=True)
        inhibitory = np.array(inhibitory, dtype=np.float64, copy=True)
        m = expansion_dim(spec)
        if excitatory.ndim != 2 or excitatory.shape[1] != m:
            raise ValueError(
                f"excitatory weights must have shape (M, {m}), "
                f"got {excitatory.shape}"
            )
        if inhibitory.shape != excitatory.shape:
            raise ValueError(
                f"inhibitory shape {inhibitory.shape} does not match "
                f"excitatory {excitatory.shape}"
            )
        if excitatory.shape[0] < 1:
            raise ValueError("model needs at least one unit")
        if not (np.isfinite(excitatory).all() and np.isfinite(inhibitory).all()):
            raise ValueError("model weights must be finite")
        if mode not in (REGRESSION, CLASSIFICATION):
            raise ValueError(f"unknown mode {mode!r}")
        if output_activation not in _ACTIVATIONS:
            raise ValueError(f"unknown activation {output_activation!r}")
        if mode == CLASSIFICATION:
            if class_of_unit is None:
                raise ValueError("classification mode requires class_of_unit")
            class_of_unit = tuple(int(c) for c in class_of_unit)
            if len(class_of_unit) != excitatory.shape[0]:
                raise ValueError(
                    f"class_of_unit length {len(class_of_unit)} does not match "
                    f"{excitatory.shape[0]} units"
                )
        elif class_of_unit is not None:
            raise ValueError("class_of_unit is meaningful in classification mode only")

        excitatory.setflags(write=False)
        inhibitory.setflags(write=False)
        self.spec = spec
        self.excitatory = excitatory
        self.inhibitory = inhibitory
        self.mode = mode
        self.output_activation = output_activation
        self.class_of_unit = class_of_unit
        self.class_names = tuple(class_names) if class_names is not None else None

    @property
    def n_units(self) -> int:
        return self.excitatory.shape[0]

    @property
    def units(self) -> tuple[EmotionalUnit, ...]:
        return tuple(
            EmotionalUnit(v=self.excitatory[j], w=self.inhibitory[j])
            for j in range(self.n_units)
        )

    @classmethod
    def from_units(cls, spec: ExpansionSpec, units, **kwargs) -> "WtaModel":
        excitatory = np.stack([np.asarray(u.v, dtype=np.float64) for u in units])
        inhibitory = np.stack([np.asarray(u.w, dtype=np.float64) for u in units])
        return cls(spec, excitatory, inhibitory, **kwargs)


def forward(model: WtaModel, s) -> Prediction:
    """Run one winner-take-all forward pass.

    The expanded pattern p is scored by every unit's excitatory weights;
    the winner (ties to the smallest index) responds with its excitatory
    activation minus its inhibitory one, passed through the output
    activation.  In classification mode the output is the winner's class
    label instead.
    """
    p = expand(model.spec, s)
    excitation = model.excitatory @ p
    winner = int(np.argmax(excitation))
    response = float(excitation[winner] - model.inhibitory[winner] @ p)
    if model.mode == CLASSIFICATION:
        output: float | int = model.class_of_unit[winner]
    else:
        output = float(apply_activation(model.output_activation, response))
    excitation.setflags(write=False)
    return Prediction(winner=winner, excitation=excitation, output=output)


def predict_batch(model: WtaModel, inputs) -> list[Prediction]:
    """Forward every input in order; the first invalid input aborts."""
    predictions = []
    for i, s in enumerate(inputs):
        try:
            predictions.append(forward(model, s))
        except ValueError as exc:
            raise ValueError(f"input {i}: {exc}") from None
    return predictions


def model_to_dict(model: WtaModel) -> dict:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "spec": model.spec.to_dict(),
        "mode": model.mode,
        "output_activation": model.output_activation,
        "units": [
            {"v": model.excitatory[j].tolist(), "w": model.inhibitory[j].tolist()}
            for j in range(model.n_units)
        ],
    }
    if model.class_of_unit is not None:
        doc["class_of_unit"] = list(model.class_of_unit)
    if model.class_names is not None:
        doc["class_names"] = list(model.class_names)
    return doc


def model_from_dict(doc: dict) -> WtaModel:
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(
            f"unsupported model format_version {doc.get('format_version')!r}"
        )
    spec = ExpansionSpec.from_dict(doc["spec"])
    units = doc["units"]
    excitatory = np.array([u["v"] for u in units], dtype=np.float64)
    inhibitory = np.array([u["w"] for u in units], dtype=np.float64)
    return WtaModel(
        spec,
        excitatory,
        inhibitory,
        mode=doc["mode"],
        output_activation=doc["output_activation"],
        class_of_unit=doc.get("class_of_unit"),
        class_names=doc.get("class_names"),
    )


def save_model(model: WtaModel, path) -> None:
    """Write the model as JSON; floats keep full round-trip precision."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> WtaModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
