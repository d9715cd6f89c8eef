"""Evaluation metrics for regression and classification runs."""

from __future__ import annotations

import numpy as np


def _paired(predictions, targets) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: predictions {p.shape} vs targets {t.shape}")
    if p.size == 0:
        raise ValueError("empty metric inputs")
    return p, t


def rmse(predictions, targets) -> float:
    p, t = _paired(predictions, targets)
    err = p - t
    return float(np.sqrt(np.mean(err * err)))


def mae(predictions, targets) -> float:
    p, t = _paired(predictions, targets)
    return float(np.mean(np.abs(p - t)))


def nrmse(predictions, targets) -> float:
    """RMSE divided by the standard deviation of the targets."""
    _, t = _paired(predictions, targets)
    std = float(np.std(t))
    if std == 0.0:
        raise ValueError("nrmse undefined for constant targets (zero variance)")
    return rmse(predictions, targets) / std


def accuracy(predictions, targets) -> float:
    p = np.asarray(predictions)
    t = np.asarray(targets)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: predictions {p.shape} vs targets {t.shape}")
    if p.size == 0:
        raise ValueError("empty metric inputs")
    return float(np.mean(p == t))


def confusion_matrix(predictions, targets, n_classes: int | None = None) -> np.ndarray:
    """Counts indexed [true class, predicted class]; rows sum to per-class counts."""
    p = np.asarray(predictions, dtype=np.int64)
    t = np.asarray(targets, dtype=np.int64)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: predictions {p.shape} vs targets {t.shape}")
    if p.size == 0:
        raise ValueError("empty metric inputs")
    if n_classes is None:
        n_classes = int(max(p.max(), t.max())) + 1
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    for true, pred in zip(t, p):
        counts[true, pred] += 1
    return counts
