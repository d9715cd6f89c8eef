"""Winner-take-all selection and the linear programs it solves exactly.

The competition is used standalone here: ``wta`` picks the single
maximal entry, ``kwta`` selects the k highest by iterative mask-and-select,
and the three LP forms below are exactly the problems a WTA / k-WTA
device solves.  Ties always break to the smallest index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KwtaResult:
    """k winners in selection order together with their scores."""

    winners: tuple[int, ...]
    values: tuple[float, ...]


@dataclass(frozen=True)
class LpSolution:
    """Solution of one of the WTA-reducible LP forms.

    ``certificate`` names the solved form: "simplex", "ksum" or "box".
    """

    x: np.ndarray
    objective: float
    certificate: str


def _check_scores(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"expected a non-empty 1-D score vector, got shape {x.shape}")
    bad = np.nonzero(~np.isfinite(x))[0]
    if bad.size:
        raise ValueError(f"non-finite score at index {int(bad[0])}")
    return x


def wta(x) -> int:
    """Index of the maximal entry; ties break to the smallest index."""
    return int(np.argmax(_check_scores(x)))


def kwta(x, k: int) -> KwtaResult:
    """Select the k highest-scoring indices by repeated masked WTA.

    Each round the current winner is recorded and masked to a -inf
    sentinel (excluded from legal inputs, so masked entries can never
    win again).  Selection order is descending score with the smallest
    index winning equal scores.
    """
    x = _check_scores(x)
    if not 1 <= k <= x.size:
        raise ValueError(f"k must be in [1, {x.size}], got {k}")
    work = x.copy()
    winners = []
    for _ in range(k):
        i = int(np.argmax(work))
        winners.append(i)
        work[i] = -np.inf
    return KwtaResult(
        winners=tuple(winners),
        values=tuple(float(x[i]) for i in winners),
    )


def solve_simplex_lp(c) -> LpSolution:
    """Maximize c.x subject to sum(x) = 1, x >= 0.

    The optimum sits on a unit-coordinate vertex, so WTA solves it: the
    solution is the indicator of the winning index.
    """
    c = _check_scores(c)
    i = int(np.argmax(c))
    x = np.zeros_like(c)
    x[i] = 1.0
    return LpSolution(x=x, objective=float(np.dot(c, x)), certificate="simplex")


def solve_ksum_lp(c, k: int) -> LpSolution:
    """Maximize c.x subject to sum(x) = k, 0 <= x <= 1.

    Solved by k-WTA: the solution is the indicator of the k winners.
    """
    c = _check_scores(c)
    result = kwta(c, k)
    x = np.zeros_like(c)
    x[list(result.winners)] = 1.0
    return LpSolution(x=x, objective=float(np.dot(c, x)), certificate="ksum")


def solve_box_lp(c, lower, upper) -> LpSolution:
    """Maximize c.x subject to lower <= x <= upper (componentwise).

    Each coordinate is independent: x_i = upper_i when c_i > 0, else
    lower_i (the c_i = 0 convention is lower_i).
    """
    c = _check_scores(c)
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    if lower.shape != c.shape or upper.shape != c.shape:
        raise ValueError(
            f"bound shapes {lower.shape}/{upper.shape} do not match c {c.shape}"
        )
    for name, arr in (("lower", lower), ("upper", upper)):
        bad = np.nonzero(~np.isfinite(arr))[0]
        if bad.size:
            raise ValueError(f"non-finite {name} bound at index {int(bad[0])}")
    bad = np.nonzero(lower > upper)[0]
    if bad.size:
        i = int(bad[0])
        raise ValueError(
            f"lower bound exceeds upper bound at index {i}: "
            f"{lower[i]} > {upper[i]}"
        )
    x = np.where(c > 0, upper, lower)
    return LpSolution(x=x, objective=float(np.dot(c, x)), certificate="box")
