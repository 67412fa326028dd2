"""Split-search backend selection and the feature-loop wrappers.

The compiled kernel (jstdiff._split_cy) is preferred when importable; the
pure-Python kernel is the fallback. Both implement the same floating-point
contract, so results are bit-identical either way. Override with
JSTDIFF_BACKEND=py (force pure Python) or JSTDIFF_BACKEND=cy (require the
compiled kernel).

All wrappers share the tie-break order: strictly lower objective first, then
lower feature index, then lower threshold. Candidate thresholds are the
distinct observed values of each feature; a candidate equal to the feature's
minimum would leave an empty side and is skipped by the scan itself.
"""

from __future__ import annotations

import importlib
import os

import numpy as np


def load_kernel(name: str):
    """Return the kernel module for 'cy' or 'py' (used by benchmarks/tests)."""
    if name == "cy":
        return importlib.import_module("jstdiff._split_cy")
    if name == "py":
        return importlib.import_module("jstdiff._split_py")
    raise ValueError(f"unknown kernel {name!r}")


def _select():
    requested = os.environ.get("JSTDIFF_BACKEND", "").strip().lower()
    if requested in ("py", "python", "pure"):
        return load_kernel("py"), "python"
    if requested in ("cy", "c", "compiled"):
        return load_kernel("cy"), "compiled"
    if requested:
        raise ValueError(f"JSTDIFF_BACKEND={requested!r} (expected 'py' or 'cy')")
    try:
        return load_kernel("cy"), "compiled"
    except ImportError:
        return load_kernel("py"), "python"


_kernel, BACKEND = _select()


def _sorted_column(X: np.ndarray, idx: np.ndarray, f: int):
    vals = X[idx, f]
    order = np.argsort(vals, kind="stable")
    return vals[order], order


def best_split_arrays(X, idx, y, n_classes):
    """argmin over features x observed thresholds of the weighted-entropy
    objective for one label vector; (feature, threshold, objective) or None."""
    yi = y[idx]
    best = None
    for f in range(X.shape[1]):
        vs, order = _sorted_column(X, idx, f)
        r = _kernel.scan_single(vs, yi[order], n_classes)
        if r is not None and (best is None or r[1] < best[2]):
            best = (f, r[0], r[1])
    return best


def best_split_pair(X, idx, y1, c1, y2, c2):
    """Separate per-label argmins computed in one pass over the data.

    Equivalent to (best_split_arrays(..., y1), best_split_arrays(..., y2)),
    bit for bit, but sorts each feature column only once.
    """
    ya = y1[idx]
    yb = y2[idx]
    best1 = None
    best2 = None
    for f in range(X.shape[1]):
        vs, order = _sorted_column(X, idx, f)
        r1, r2 = _kernel.scan_dual(vs, ya[order], c1, yb[order], c2)
        if r1 is not None and (best1 is None or r1[1] < best1[2]):
            best1 = (f, r1[0], r1[1])
        if r2 is not None and (best2 is None or r2[1] < best2[2]):
            best2 = (f, r2[0], r2[1])
    return best1, best2


def best_split_joint_arrays(X, idx, y1, c1, y2, c2):
    """argmin of the summed objective over the shared candidate set."""
    ya = y1[idx]
    yb = y2[idx]
    best = None
    for f in range(X.shape[1]):
        vs, order = _sorted_column(X, idx, f)
        r = _kernel.scan_joint(vs, ya[order], c1, yb[order], c2)
        if r is not None and (best is None or r[1] < best[2]):
            best = (f, r[0], r[1])
    return best
