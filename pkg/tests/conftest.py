import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

# value pools with lots of repetition provoke threshold ties and duplicate
# rows, the hard cases for the split search and dedup
VALUE_POOL = np.array([0.0, 1.0, 2.0, 3.0, -1.5, 0.5, 7.25, 1e-9])


def random_dataset(rng, n_max=50, d_max=5, c_max=4, n_min=2):
    n = int(rng.integers(n_min, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    nc = int(rng.integers(2, c_max + 1))
    X = rng.choice(VALUE_POOL, size=(n, d)).astype(np.float64)
    y1 = rng.integers(0, nc, size=n).astype(np.int64)
    y2 = rng.integers(0, nc, size=n).astype(np.int64)
    if rng.random() < 0.08:
        y1[:] = y1[0]  # occasionally pure, to hit the base conditions
    if rng.random() < 0.08:
        y2[:] = y2[0]
    return X, y1, y2, nc


def correlated_dataset(rng, n_max=60, d_max=4, n_min=8):
    """Labels derived from thresholds on the features, so the two models
    genuinely share structure and joint trees have meaningful shared
    prefixes."""
    n = int(rng.integers(n_min, n_max + 1))
    d = int(rng.integers(2, d_max + 1))
    X = rng.choice(VALUE_POOL, size=(n, d)).astype(np.float64)
    f1, f2 = rng.integers(0, d, size=2)
    t1 = float(rng.choice(VALUE_POOL))
    t2 = float(rng.choice(VALUE_POOL))
    y1 = (X[:, f1] < t1).astype(np.int64)
    y2 = ((X[:, f1] < t1) ^ (X[:, f2] >= t2)).astype(np.int64)
    flip1 = rng.random(n) < 0.1
    flip2 = rng.random(n) < 0.1
    y1 = np.where(flip1, 1 - y1, y1)
    y2 = np.where(flip2, 1 - y2, y2)
    return X, y1, y2, 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def write_models_csv(path, n=240, seed=11, categorical=False):
    """Synthetic two-model prediction file: three numeric features, two
    noisy threshold models with overlapping structure, string class labels.
    Used by the CLI and acceptance tests."""
    import csv

    rng = np.random.default_rng(seed)
    f = rng.uniform(-3, 3, size=(n, 3))
    noise1 = rng.random(n) < 0.07
    noise2 = rng.random(n) < 0.07
    m1 = ((f[:, 0] < 0.4) ^ (f[:, 1] >= 0.9)).astype(int)
    m2 = ((f[:, 0] < -0.2) ^ (f[:, 1] >= 0.9) ^ (f[:, 2] < 1.2)).astype(int)
    m1 = np.where(noise1, 1 - m1, m1)
    m2 = np.where(noise2, 1 - m2, m2)
    names = np.array(["neg", "pos"])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        header = ["f0", "f1", "f2"] + (["kind"] if categorical else []) + ["p1", "p2"]
        w.writerow(header)
        kinds = rng.choice(["a", "b", "c"], size=n)
        for i in range(n):
            row = [repr(v) for v in f[i].tolist()]
            if categorical:
                row.append(kinds[i])
            row += [names[m1[i]], names[m2[i]]]
            w.writerow(row)
    return path
