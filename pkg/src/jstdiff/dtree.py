"""Greedy entropy decision trees.

Split semantics are fixed throughout the package: a condition `feature < t`
sends rows with value strictly below t to the true child and everything else
to the false child. Candidate thresholds are the distinct observed values of
each feature at the node, so reported thresholds are always data values.
Determinism: ties resolve by lower objective, then lower feature index, then
lower threshold; majority-label ties resolve to the smallest class id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import inf, log2
from typing import Iterator, Sequence

import numpy as np

from ._split_backend import best_split_arrays
from .errors import (
    DimensionMismatch,
    EmptyHistogram,
    EmptyInput,
    EmptySide,
    LengthMismatch,
    UnknownNode,
)
from .tabular import Dataset, LabelVector


@dataclass(frozen=True)
class SplitCondition:
    feature: int
    threshold: float

    def goes_true(self, x) -> bool:
        return x[self.feature] < self.threshold


@dataclass(frozen=True)
class Leaf:
    label: int
    histogram: tuple[int, ...]
    n_samples: int


@dataclass(frozen=True)
class SplitNode:
    condition: SplitCondition
    true_child: int
    false_child: int


@dataclass(frozen=True)
class DecisionTree:
    """Binary tree stored as an arena; node ids are preorder positions."""

    nodes: tuple
    root: int
    max_depth: int

    def node(self, node_id: int):
        if not 0 <= node_id < len(self.nodes):
            raise UnknownNode(f"node {node_id} not in tree")
        return self.nodes[node_id]

    def leaves(self) -> Iterator[tuple[int, Leaf]]:
        for i, nd in enumerate(self.nodes):
            if isinstance(nd, Leaf):
                yield i, nd

    def predict(self, x):
        return predict(self, x)

    def to_json(self) -> str:
        return json.dumps(tree_payload(self), sort_keys=True, indent=2)


@dataclass(frozen=True)
class PathCondition:
    """Conjunction of half-open per-feature intervals [lower, upper).

    Features absent from `bounds` are unconstrained. lower defaults to -inf
    (closed side), upper to +inf (open side).
    """

    bounds: tuple[tuple[int, float, float], ...] = ()

    @staticmethod
    def from_dict(d: dict[int, tuple[float, float]]) -> "PathCondition":
        return PathCondition(tuple((f, lo, hi) for f, (lo, hi) in sorted(d.items())))

    def as_dict(self) -> dict[int, tuple[float, float]]:
        return {f: (lo, hi) for f, lo, hi in self.bounds}

    def is_empty(self) -> bool:
        return any(lo >= hi for _, lo, hi in self.bounds)

    def contains(self, x) -> bool:
        return all(lo <= x[f] < hi for f, lo, hi in self.bounds)

    def intersect(self, other: "PathCondition") -> "PathCondition | None":
        merged = self.as_dict()
        for f, lo, hi in other.bounds:
            plo, phi = merged.get(f, (-inf, inf))
            merged[f] = (max(plo, lo), min(phi, hi))
        out = PathCondition.from_dict(merged)
        return None if out.is_empty() else out

    def with_true(self, cond: SplitCondition) -> "PathCondition":
        d = self.as_dict()
        lo, hi = d.get(cond.feature, (-inf, inf))
        d[cond.feature] = (lo, min(hi, cond.threshold))
        return PathCondition.from_dict(d)

    def with_false(self, cond: SplitCondition) -> "PathCondition":
        d = self.as_dict()
        lo, hi = d.get(cond.feature, (-inf, inf))
        d[cond.feature] = (max(lo, cond.threshold), hi)
        return PathCondition.from_dict(d)


def as_matrix(X) -> np.ndarray:
    if isinstance(X, Dataset):
        return X.values
    arr = np.ascontiguousarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch("feature matrix must be 2-d")
    return arr


def as_labels(y, n_classes: int | None = None) -> tuple[np.ndarray, int]:
    if isinstance(y, LabelVector):
        return y.labels, y.num_classes
    arr = np.ascontiguousarray(y, dtype=np.int64)
    if arr.ndim != 1:
        raise LengthMismatch("labels must be one-dimensional")
    if n_classes is None:
        n_classes = int(arr.max()) + 1 if arr.size else 1
    return arr, n_classes


def entropy(hist: Sequence[int]) -> float:
    """Shannon entropy in bits of the class distribution given by counts."""
    total = 0
    for k in hist:
        total += int(k)
    if total <= 0:
        raise EmptyHistogram("histogram has no samples")
    ent = 0.0
    for k in hist:
        k = int(k)
        if k:
            p = k / total
            ent -= p * log2(p)
    return ent


def split_objective(feature: int, threshold: float, X, y) -> float:
    """Weighted entropy of the two sides of the split `feature < threshold`.

    Reference (unoptimized) evaluation; best_split reports objectives that
    are bit-identical to this formula.
    """
    mat = as_matrix(X)
    labels, nc = as_labels(y)
    if labels.shape[0] != mat.shape[0]:
        raise LengthMismatch(f"{labels.shape[0]} labels for {mat.shape[0]} rows")
    mask = mat[:, feature] < threshold
    n = mat.shape[0]
    n_left = int(mask.sum())
    if n_left == 0 or n_left == n:
        raise EmptySide(f"split {feature} < {threshold} leaves an empty side")
    hist_left = np.bincount(labels[mask], minlength=nc)
    hist_right = np.bincount(labels[~mask], minlength=nc)
    n_right = n - n_left
    return (n_left / n) * entropy(hist_left) + (n_right / n) * entropy(hist_right)


def best_split(X, y) -> tuple[SplitCondition, float] | None:
    """Exhaustive greedy search over features and observed thresholds.

    Returns None when every feature is constant (no candidate leaves both
    sides non-empty).
    """
    mat = as_matrix(X)
    labels, nc = as_labels(y)
    if mat.shape[0] != labels.shape[0]:
        raise LengthMismatch(f"{labels.shape[0]} labels for {mat.shape[0]} rows")
    idx = np.arange(mat.shape[0], dtype=np.int64)
    found = best_split_arrays(mat, idx, labels, nc)
    if found is None:
        return None
    f, t, obj = found
    return SplitCondition(int(f), float(t)), float(obj)


def _majority(hist: np.ndarray) -> int:
    # np.argmax returns the first maximum: ties go to the smallest class id
    return int(np.argmax(hist))


def _hist(labels: np.ndarray, idx: np.ndarray, nc: int) -> np.ndarray:
    return np.bincount(labels[idx], minlength=nc)


class _Builder:
    def __init__(self, mat, labels, nc, max_depth):
        self.mat = mat
        self.labels = labels
        self.nc = nc
        self.max_depth = max_depth
        self.nodes: list = []

    def leaf(self, nid, hist, n):
        self.nodes[nid] = Leaf(_majority(hist), tuple(int(k) for k in hist), int(n))

    def grow(self, idx: np.ndarray, depth: int) -> int:
        nid = len(self.nodes)
        self.nodes.append(None)
        hist = _hist(self.labels, idx, self.nc)
        if int((hist > 0).sum()) <= 1 or depth >= self.max_depth:
            self.leaf(nid, hist, idx.size)
            return nid
        found = best_split_arrays(self.mat, idx, self.labels, self.nc)
        if found is None:
            self.leaf(nid, hist, idx.size)
            return nid
        f, t, _ = found
        self.split(nid, idx, depth, SplitCondition(int(f), float(t)))
        return nid

    def split(self, nid, idx, depth, cond):
        mask = self.mat[idx, cond.feature] < cond.threshold
        true_child = self.grow(idx[mask], depth + 1)
        false_child = self.grow(idx[~mask], depth + 1)
        self.nodes[nid] = SplitNode(cond, true_child, false_child)


def fit(X, y, max_depth: int) -> DecisionTree:
    """Recursive greedy fit; stops at pure labels, the depth bound, or when
    no valid split exists."""
    mat = as_matrix(X)
    labels, nc = as_labels(y)
    if mat.shape[0] == 0:
        raise EmptyInput("cannot fit a tree on zero rows")
    if mat.shape[0] != labels.shape[0]:
        raise LengthMismatch(f"{labels.shape[0]} labels for {mat.shape[0]} rows")
    if max_depth < 0:
        raise EmptyInput("max_depth must be >= 0")
    b = _Builder(mat, labels, nc, max_depth)
    b.grow(np.arange(mat.shape[0], dtype=np.int64), 0)
    return DecisionTree(tuple(b.nodes), 0, max_depth)


def fit_subset(mat, idx, labels, nc, max_depth: int) -> DecisionTree:
    """fit() restricted to the rows in idx (used by the joint builder)."""
    if idx.size == 0:
        raise EmptyInput("cannot fit a tree on zero rows")
    b = _Builder(mat, labels, nc, max_depth)
    b.grow(idx, 0)
    return DecisionTree(tuple(b.nodes), 0, max_depth)


def fit_forced(mat, idx, labels, nc, cond: SplitCondition, max_depth: int) -> DecisionTree:
    """Tree whose root split is forced to `cond`; children grow greedily
    under the remaining budget. Requires max_depth >= 1 and both sides
    non-empty."""
    if max_depth < 1:
        raise EmptyInput("forced split needs a depth budget of at least 1")
    b = _Builder(mat, labels, nc, max_depth)
    b.nodes.append(None)
    b.split(0, idx, 0, cond)
    return DecisionTree(tuple(b.nodes), 0, max_depth)


def predict(tree: DecisionTree, x) -> int:
    """Label of the unique leaf whose path condition x satisfies."""
    nd = tree.nodes[tree.root]
    while isinstance(nd, SplitNode):
        if nd.condition.feature >= len(x):
            raise DimensionMismatch(
                f"row has {len(x)} features, tree needs {nd.condition.feature + 1}"
            )
        nd = tree.nodes[nd.true_child if nd.condition.goes_true(x) else nd.false_child]
    return nd.label


def predict_batch(tree: DecisionTree, X) -> np.ndarray:
    """Vectorized predict over the rows of X."""
    mat = as_matrix(X)
    out = np.empty(mat.shape[0], dtype=np.int64)

    def route(nid: int, idx: np.ndarray):
        nd = tree.nodes[nid]
        if isinstance(nd, Leaf):
            out[idx] = nd.label
            return
        if nd.condition.feature >= mat.shape[1]:
            raise DimensionMismatch(
                f"matrix has {mat.shape[1]} features, "
                f"tree needs {nd.condition.feature + 1}"
            )
        mask = mat[idx, nd.condition.feature] < nd.condition.threshold
        route(nd.true_child, idx[mask])
        route(nd.false_child, idx[~mask])

    route(tree.root, np.arange(mat.shape[0], dtype=np.int64))
    return out


def path_condition(tree: DecisionTree, node_id: int) -> PathCondition:
    """Interval conjunction of the edge conditions from the root to node_id."""
    tree.node(node_id)
    found: list[PathCondition] = []

    def walk(nid: int, pc: PathCondition):
        if nid == node_id:
            found.append(pc)
            return
        nd = tree.nodes[nid]
        if isinstance(nd, SplitNode):
            walk(nd.true_child, pc.with_true(nd.condition))
            walk(nd.false_child, pc.with_false(nd.condition))

    walk(tree.root, PathCondition())
    if not found:
        raise UnknownNode(f"node {node_id} unreachable from root")
    return found[0]


def _aggregate_histograms(tree: DecisionTree) -> dict[int, np.ndarray]:
    hists: dict[int, np.ndarray] = {}

    def walk(nid: int) -> np.ndarray:
        nd = tree.nodes[nid]
        if isinstance(nd, Leaf):
            h = np.asarray(nd.histogram, dtype=np.int64)
        else:
            h = walk(nd.true_child) + walk(nd.false_child)
        hists[nid] = h
        return h

    walk(tree.root)
    return hists


def feature_importance(tree: DecisionTree, n_features: int | None = None) -> np.ndarray:
    """Total weighted impurity decrease per split feature, normalized to sum
    to 1 when any decrease is positive."""
    if n_features is None:
        n_features = 0
        for nd in tree.nodes:
            if isinstance(nd, SplitNode):
                n_features = max(n_features, nd.condition.feature + 1)
    imp = np.zeros(n_features, dtype=np.float64)
    hists = _aggregate_histograms(tree)
    n_root = int(hists[tree.root].sum())
    for nid, nd in enumerate(tree.nodes):
        if not isinstance(nd, SplitNode):
            continue
        h = hists[nid]
        ht = hists[nd.true_child]
        hf = hists[nd.false_child]
        n_v = int(h.sum())
        n_t = int(ht.sum())
        objective = (n_t / n_v) * entropy(ht) + ((n_v - n_t) / n_v) * entropy(hf)
        imp[nd.condition.feature] += (n_v / n_root) * (entropy(h) - objective)
    total = imp.sum()
    if total > 0:
        imp /= total
    return imp


def training_errors(tree: DecisionTree, X, y) -> int:
    labels, _ = as_labels(y)
    return int((predict_batch(tree, X) != labels).sum())


def node_payload(nid: int, nd, kind_prefix: str = "") -> dict:
    if isinstance(nd, Leaf):
        return {
            "id": nid,
            "kind": kind_prefix + "leaf",
            "label": nd.label,
            "histogram": list(nd.histogram),
            "n": nd.n_samples,
        }
    return {
        "id": nid,
        "kind": kind_prefix + "split",
        "feature": nd.condition.feature,
        "threshold": nd.condition.threshold,
        "children": [nd.true_child, nd.false_child],
    }


def tree_payload(tree: DecisionTree) -> dict:
    return {
        "schema_version": 1,
        "kind": "decision_tree",
        "max_depth": tree.max_depth,
        "root": tree.root,
        "nodes": [node_payload(i, nd) for i, nd in enumerate(tree.nodes)],
    }
