import numpy as np
import pytest


def write_iris_like_csv(path, seed=7):
    """Iris-format fixture: 150 rows, 4 numeric features, 3 string classes.

    Three Gaussian clusters with cm-like scales and Iris-like overlap
    (first class well separated, the other two close).
    """
    rng = np.random.default_rng(seed)
    means = np.array([
        [5.0, 3.4, 1.5, 0.2],
        [5.9, 2.8, 4.3, 1.3],
        [6.6, 3.0, 5.6, 2.0],
    ])
    stds = np.array([
        [0.35, 0.38, 0.17, 0.10],
        [0.52, 0.31, 0.47, 0.20],
        [0.64, 0.32, 0.55, 0.27],
    ])
    names = ["setosa-like", "versicolor-like", "virginica-like"]
    rows = []
    for c in range(3):
        x = rng.normal(means[c], stds[c], size=(50, 4))
        for r in x:
            rows.append([f"{v:.2f}" for v in r] + [names[c]])
    order = rng.permutation(len(rows))
    with open(path, "w", encoding="utf-8") as fh:
        for i in order:
            fh.write(",".join(rows[i]) + "\n")
    return path


@pytest.fixture
def iris_like_csv(tmp_path):
    return write_iris_like_csv(tmp_path / "iris_like.csv")
