"""Dataset ingestion, normalization, splitting, windowing and generators.

Every :class:`Dataset` stores features min-max normalized to the unit
box (the domain the trigonometric expansion is calibrated to) with the
per-feature (min, max) pairs recorded so the raw values can be
recovered.  Targets are kept on their raw scale.  All generators are
pure functions of their parameters and seed (numpy PCG64 streams).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

REGRESSION = "regression"
CLASSIFICATION = "classification"
_MODES = (REGRESSION, CLASSIFICATION)

GENERATOR_F1 = "f1"  # y = sin(2*pi*x),        x uniform on [0,1]
GENERATOR_F2 = "f2"  # y = x1*x2 + sin(pi*x1), x uniform on [0,1]^2

NOISE_CONSTANT = "constant"  # sigma(x) = sigma0
NOISE_LINEAR = "linear"      # sigma(x) = sigma0 * x_1  (zero at the origin)


def _check_mode(mode: str) -> str:
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    return mode


@dataclass
class Dataset:
    """Supervised samples with recorded normalization and provenance.

    ``inputs`` is an (N, n) float64 matrix of normalized features,
    ``targets`` an (N,) vector of raw regression values or dense class
    labels 0..C-1, ``normalization`` an (n, 2) matrix of per-feature
    (min, max) pairs, and ``label_names`` the original class labels in
    first-appearance order (classification only).
    """

    inputs: np.ndarray
    targets: np.ndarray
    mode: str
    normalization: np.ndarray
    provenance: str
    label_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        # own copies so freezing them cannot affect caller-held arrays
        self.inputs = np.array(self.inputs, dtype=np.float64, copy=True)
        _check_mode(self.mode)
        if self.mode == CLASSIFICATION:
            self.targets = np.array(self.targets, dtype=np.int64, copy=True)
        else:
            self.targets = np.array(self.targets, dtype=np.float64, copy=True)
        self.normalization = np.array(self.normalization, dtype=np.float64, copy=True)
        if self.inputs.ndim != 2:
            raise ValueError(f"inputs must be 2-D, got shape {self.inputs.shape}")
        if len(self.inputs) != len(self.targets):
            raise ValueError(
                f"inputs/targets length mismatch: "
                f"{len(self.inputs)} vs {len(self.targets)}"
            )
        if len(self.inputs) == 0:
            raise ValueError("dataset is empty")
        if self.normalization.shape != (self.inputs.shape[1], 2):
            raise ValueError(
                f"normalization must have shape ({self.inputs.shape[1]}, 2), "
                f"got {self.normalization.shape}"
            )
        for arr in (self.inputs, self.targets, self.normalization):
            arr.setflags(write=False)

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_features(self) -> int:
        return self.inputs.shape[1]

    @property
    def n_classes(self) -> int:
        if self.mode != CLASSIFICATION:
            raise ValueError("n_classes is defined for classification datasets only")
        if self.label_names is not None:
            return len(self.label_names)
        return int(self.targets.max()) + 1

    def denormalized_inputs(self) -> np.ndarray:
        """Recover raw feature values from the recorded (min, max) pairs."""
        lo = self.normalization[:, 0]
        hi = self.normalization[:, 1]
        return lo + self.inputs * (hi - lo)

    def replace_samples(self, idx: np.ndarray, *, provenance_note: str) -> "Dataset":
        """New dataset restricted to ``idx``, same normalization and labels."""
        return Dataset(
            inputs=self.inputs[idx],
            targets=self.targets[idx],
            mode=self.mode,
            normalization=self.normalization.copy(),
            provenance=f"{self.provenance}|{provenance_note}",
            label_names=self.label_names,
        )


@dataclass(frozen=True)
class SplitSpec:
    """Train/test partition parameters.

    ``stratified=None`` resolves to True for classification datasets and
    False for regression.
    """

    train_fraction: float = 0.7
    stratified: bool | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(
                f"train_fraction must be in (0, 1), got {self.train_fraction}"
            )

    def to_dict(self) -> dict:
        return {
            "train_fraction": self.train_fraction,
            "stratified": self.stratified,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SplitSpec":
        return cls(
            train_fraction=float(d.get("train_fraction", 0.7)),
            stratified=d.get("stratified"),
            seed=int(d.get("seed", 0)),
        )


def _normalize_features(raw: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Min-max normalize columns; constant columns map to 0.0."""
    lo = raw.min(axis=0)
    hi = raw.max(axis=0)
    span = hi - lo
    constant = [int(i) for i in np.nonzero(span == 0)[0]]
    safe_span = np.where(span == 0, 1.0, span)
    normalized = (raw - lo) / safe_span
    if constant:
        normalized[:, constant] = 0.0
    return normalized, np.column_stack([lo, hi]), constant


def _constant_note(constant: list[int]) -> str:
    if not constant:
        return ""
    return f"|warning:constant-features{constant}-normalized-to-0.0"


def read_csv_matrix(path, *, header: bool = False) -> list[list[str]]:
    """Read a CSV file into a list of string rows (header row dropped)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if header and rows:
        rows = rows[1:]
    if not rows:
        raise ValueError(f"no data rows in {path}")
    width = len(rows[0])
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                f"ragged CSV: row {r + 1} has {len(row)} cells, expected {width}"
            )
    return rows


def _parse_cell(cell: str, row: int, col: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ValueError(
            f"unparseable cell at row {row + 1}, column {col + 1}: {cell!r}"
        ) from None


def load_csv(path, *, target_column: int = -1, mode: str,
             header: bool = False) -> Dataset:
    """Load a UCI-style CSV file into a normalized Dataset.

    Numeric features are parsed as 64-bit floats and min-max normalized.
    Classification targets are mapped to dense labels 0..C-1 in
    first-appearance order; the original labels are kept in
    ``label_names``.  Row/column numbers in diagnostics are 1-based over
    the data rows.

    Args:
        path: CSV file (RFC-4180-style, comma separated, UTF-8).
        target_column: index of the target column (negative wraps).
        mode: "regression" or "classification".
        header: whether a single header row precedes the data.
    """
    _check_mode(mode)
    rows = read_csv_matrix(path, header=header)
    width = len(rows[0])
    target = target_column if target_column >= 0 else width + target_column
    if not 0 <= target < width:
        raise ValueError(
            f"target_column {target_column} out of range for {width} columns"
        )
    feature_cols = [c for c in range(width) if c != target]
    if not feature_cols:
        raise ValueError("no feature columns left after removing the target")

    raw = np.empty((len(rows), len(feature_cols)), dtype=np.float64)
    for r, row in enumerate(rows):
        for j, c in enumerate(feature_cols):
            raw[r, j] = _parse_cell(row[c], r, c)

    if mode == CLASSIFICATION:
        label_names: list[str] = []
        label_ids = {}
        targets = np.empty(len(rows), dtype=np.int64)
        for r, row in enumerate(rows):
            name = row[target].strip()
            if name not in label_ids:
                label_ids[name] = len(label_names)
                label_names.append(name)
            targets[r] = label_ids[name]
        names: tuple[str, ...] | None = tuple(label_names)
    else:
        targets = np.array(
            [_parse_cell(row[target], r, target) for r, row in enumerate(rows)]
        )
        names = None

    normalized, norm, constant = _normalize_features(raw)
    return Dataset(
        inputs=normalized,
        targets=targets,
        mode=mode,
        normalization=norm,
        provenance=f"csv:{path}{_constant_note(constant)}",
        label_names=names,
    )


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _train_count(total: int, fraction: float) -> int:
    k = _round_half_up(fraction * total)
    return min(max(k, 1), total - 1)


def split_dataset(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Deterministic train/test split.

    Stratified splits (classification) preserve class proportions to
    within one sample per class; every class needs at least 2 samples.
    """
    stratified = spec.stratified
    if stratified is None:
        stratified = dataset.mode == CLASSIFICATION
    if stratified and dataset.mode != CLASSIFICATION:
        raise ValueError("stratified split requires a classification dataset")
    if dataset.n_samples < 2:
        raise ValueError("need at least 2 samples to split")

    rng = np.random.default_rng(spec.seed)
    if stratified:
        train_idx: list[int] = []
        test_idx: list[int] = []
        for label in range(dataset.n_classes):
            members = np.nonzero(dataset.targets == label)[0]
            if members.size < 2:
                name = (
                    dataset.label_names[label]
                    if dataset.label_names is not None
                    else str(label)
                )
                raise ValueError(
                    f"class {name!r} has {members.size} sample(s); "
                    "stratified split needs at least 2 per class"
                )
            perm = members[rng.permutation(members.size)]
            k = _train_count(members.size, spec.train_fraction)
            train_idx.extend(perm[:k])
            test_idx.extend(perm[k:])
        train_sel = np.sort(np.asarray(train_idx))
        test_sel = np.sort(np.asarray(test_idx))
    else:
        perm = rng.permutation(dataset.n_samples)
        k = _train_count(dataset.n_samples, spec.train_fraction)
        train_sel = np.sort(perm[:k])
        test_sel = np.sort(perm[k:])

    note = f"split(frac={spec.train_fraction},stratified={stratified},seed={spec.seed})"
    return (
        dataset.replace_samples(train_sel, provenance_note=f"{note}:train"),
        dataset.replace_samples(test_sel, provenance_note=f"{note}:test"),
    )


def window_series(series, window: int, horizon: int = 1,
                  *, provenance: str = "series") -> Dataset:
    """Embed a scalar series as a supervised regression set.

    Sample i has raw input ``series[i : i+window]`` and target
    ``series[i + window + horizon - 1]``; the sample count is
    ``len(series) - window - horizon + 1``.  Features are min-max
    normalized like every Dataset; targets stay raw.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 1:
        raise ValueError(f"series must be 1-D, got shape {series.shape}")
    if window < 1 or horizon < 1:
        raise ValueError(f"window and horizon must be >= 1, got {window}, {horizon}")
    minimum = window + horizon
    if series.size < minimum:
        raise ValueError(
            f"series too short: length {series.size}, need at least {minimum}"
        )
    count = series.size - window - horizon + 1
    raw = np.empty((count, window), dtype=np.float64)
    for i in range(count):
        raw[i] = series[i:i + window]
    targets = series[window + horizon - 1:window + horizon - 1 + count].copy()

    normalized, norm, constant = _normalize_features(raw)
    return Dataset(
        inputs=normalized,
        targets=targets,
        mode=REGRESSION,
        normalization=norm,
        provenance=(
            f"window(w={window},h={horizon})"
            f"|{provenance}{_constant_note(constant)}"
        ),
    )


_IDENTITY_NORM = {1: np.array([[0.0, 1.0]]), 2: np.array([[0.0, 1.0]] * 2)}


def _generator_samples(which: str, n_samples: int,
                       rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    if which == GENERATOR_F1:
        x = rng.uniform(0.0, 1.0, size=(n_samples, 1))
        y = np.sin(2.0 * np.pi * x[:, 0])
    elif which == GENERATOR_F2:
        x = rng.uniform(0.0, 1.0, size=(n_samples, 2))
        y = x[:, 0] * x[:, 1] + np.sin(np.pi * x[:, 0])
    else:
        raise ValueError(
            f"unknown generator {which!r}; expected {GENERATOR_F1!r} or {GENERATOR_F2!r}"
        )
    return x, y


def gen_function(which: str, n_samples: int, seed: int) -> Dataset:
    """Noiseless samples of one of the two benchmark target functions.

    Inputs are drawn uniformly from the unit box, so they are already
    normalized and the recorded (min, max) pairs are the identity (0, 1).
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    rng = np.random.default_rng(seed)
    x, y = _generator_samples(which, n_samples, rng)
    return Dataset(
        inputs=x,
        targets=y,
        mode=REGRESSION,
        normalization=_IDENTITY_NORM[x.shape[1]].copy(),
        provenance=f"generator:{which}(n_samples={n_samples},seed={seed})",
    )


def gen_noisy(which: str, sigma: float, n_samples: int, seed: int,
              *, noise: str = NOISE_CONSTANT) -> Dataset:
    """Benchmark function samples with additive Gaussian noise.

    Constant noise adds eps ~ Normal(0, sigma^2); linear
    (heteroscedastic) noise scales the deviation with the first input
    component, sigma(x) = sigma * x_1, so it vanishes at the origin.
    Draw order is fixed (inputs first, then the noise vector), so
    ``sigma=0`` reproduces :func:`gen_function` bit-for-bit.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if noise not in (NOISE_CONSTANT, NOISE_LINEAR):
        raise ValueError(
            f"noise must be {NOISE_CONSTANT!r} or {NOISE_LINEAR!r}, got {noise!r}"
        )
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    rng = np.random.default_rng(seed)
    x, y = _generator_samples(which, n_samples, rng)
    eps = rng.standard_normal(n_samples)
    if noise == NOISE_CONSTANT:
        y = y + sigma * eps
    else:
        y = y + sigma * x[:, 0] * eps
    return Dataset(
        inputs=x,
        targets=y,
        mode=REGRESSION,
        normalization=_IDENTITY_NORM[x.shape[1]].copy(),
        provenance=(
            f"generator:{which}+noise:{noise}"
            f"(sigma={sigma},n_samples={n_samples},seed={seed})"
        ),
    )


def gen_mackey_glass(length: int, *, tau: int = 17, beta: float = 0.2,
                     gamma: float = 0.1, exponent: float = 10.0,
                     dt: float = 1.0, initial: float = 1.2) -> np.ndarray:
    """Euler-discretized Mackey-Glass delay series.

    The first ``tau`` values are held at ``initial``; afterwards
    ``x[t] = x[t-1] + dt*(beta*x[t-tau]/(1 + x[t-tau]**exponent)
    - gamma*x[t-1])``.  Deterministic: no randomness is involved.
    """
    if length < tau + 1:
        raise ValueError(f"length must be >= tau+1 ({tau + 1}), got {length}")
    x = np.empty(length, dtype=np.float64)
    x[:tau] = initial
    for t in range(tau, length):
        delayed = x[t - tau]
        x[t] = x[t - 1] + dt * (
            beta * delayed / (1.0 + delayed ** exponent) - gamma * x[t - 1]
        )
    return x


def dataset_to_csv(dataset: Dataset, path, *, header: bool = False) -> None:
    """Write a dataset as CSV: raw-scale features, target column last."""
    raw = dataset.denormalized_inputs()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow(
                [f"x{i}" for i in range(dataset.n_features)] + ["target"]
            )
        for i in range(dataset.n_samples):
            row = [repr(float(v)) for v in raw[i]]
            if dataset.mode == CLASSIFICATION and dataset.label_names is not None:
                row.append(dataset.label_names[int(dataset.targets[i])])
            elif dataset.mode == CLASSIFICATION:
                row.append(str(int(dataset.targets[i])))
            else:
                row.append(repr(float(dataset.targets[i])))
            writer.writerow(row)


def series_to_csv(series, path, *, header: bool = False) -> None:
    """Write a scalar series as a one-column CSV."""
    series = np.asarray(series, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow(["value"])
        for v in series:
            writer.writerow([repr(float(v))])


def load_series_csv(path, *, column: int = 0, header: bool = False) -> np.ndarray:
    """Read one numeric column of a CSV file as a scalar series."""
    rows = read_csv_matrix(path, header=header)
    width = len(rows[0])
    col = column if column >= 0 else width + column
    if not 0 <= col < width:
        raise ValueError(f"column {column} out of range for {width} columns")
    return np.array([_parse_cell(row[col], r, col) for r, row in enumerate(rows)])
