"""Joint surrogate trees: two conjoined decision-tree surrogates.

The tree shares split conditions between the two surrogates for as long as
the divergence criterion allows, then forks at an or-node into two
model-specific subtrees. A shared leaf is the degenerate case where both
sides would be single leaves; it still records one label per model so
disagreement at a shared leaf stays representable.

Depth accounting counts decision edges only: or-edges are free, and the two
subtrees hanging off an or-node at depth q are grown with budget
max_depth - q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import dtree
from ._split_backend import best_split_joint_arrays, best_split_pair
from .dtree import (
    DecisionTree,
    Leaf,
    SplitCondition,
    SplitNode,
    as_labels,
    as_matrix,
)
from .errors import DimensionMismatch, EmptyInput, LengthMismatch, SchemaError
from .tabular import Dataset


@dataclass(frozen=True)
class SharedSplit:
    condition: SplitCondition
    true_child: int
    false_child: int
    n: int


@dataclass(frozen=True)
class OrNode:
    child_1: int
    child_2: int
    n: int


@dataclass(frozen=True)
class SharedLeaf:
    label_1: int
    label_2: int
    histogram_1: tuple[int, ...]
    histogram_2: tuple[int, ...]
    n: int


@dataclass(frozen=True)
class ModelSplit:
    model: int
    condition: SplitCondition
    true_child: int
    false_child: int


@dataclass(frozen=True)
class ModelLeaf:
    model: int
    label: int
    histogram: tuple[int, ...]
    n: int


@dataclass(frozen=True)
class JointSurrogateTree:
    nodes: tuple
    root: int
    max_depth: int
    alpha: float | None  # None selects the simplified zero-impurity criterion
    num_classes: int
    provenance: dict = field(default_factory=dict)

    @property
    def mode(self) -> str:
        return "simplified" if self.alpha is None else f"alpha={self.alpha!r}"

    def or_nodes(self) -> Iterator[tuple[int, OrNode]]:
        for i, nd in enumerate(self.nodes):
            if isinstance(nd, OrNode):
                yield i, nd

    def to_json(self) -> str:
        return json.dumps(jst_payload(self), sort_keys=True, indent=2)


def joint_best_split(X, y1, y2) -> tuple[SplitCondition, float] | None:
    """Best common split: argmin over the shared candidate set of the sum of
    the two per-model weighted-entropy objectives."""
    mat = as_matrix(X)
    l1, c1 = as_labels(y1)
    l2, c2 = as_labels(y2)
    if l1.shape[0] != mat.shape[0] or l2.shape[0] != mat.shape[0]:
        raise LengthMismatch("label vectors must match the row count")
    idx = np.arange(mat.shape[0], dtype=np.int64)
    found = best_split_joint_arrays(mat, idx, l1, c1, l2, c2)
    if found is None:
        return None
    f, t, obj = found
    return SplitCondition(int(f), float(t)), float(obj)


def should_diverge(
    imp1: float,
    imp2: float,
    joint_imp: float | None = None,
    alpha: float | None = None,
) -> bool:
    """Divergence criterion.

    Simplified form (alpha is None): diverge when either minimum impurity is
    exactly zero; joint_imp may be omitted. Alpha form: diverge when
    imp1 + imp2 <= alpha * joint_imp, evaluated literally.
    """
    if alpha is None:
        return imp1 == 0.0 or imp2 == 0.0
    if joint_imp is None:
        raise ValueError("alpha mode needs the joint impurity")
    return imp1 + imp2 <= alpha * joint_imp


class _JstBuilder:
    def __init__(self, mat, y1, c1, y2, c2, max_depth, alpha):
        self.mat = mat
        self.y1 = y1
        self.y2 = y2
        self.c1 = c1
        self.c2 = c2
        self.nc = max(c1, c2)
        self.max_depth = max_depth
        self.alpha = alpha
        self.nodes: list = []

    def graft(self, tree: DecisionTree, model: int) -> int:
        def copy(nid: int) -> int:
            nd = tree.nodes[nid]
            out = len(self.nodes)
            self.nodes.append(None)
            if isinstance(nd, Leaf):
                self.nodes[out] = ModelLeaf(model, nd.label, nd.histogram, nd.n_samples)
            else:
                t = copy(nd.true_child)
                f = copy(nd.false_child)
                self.nodes[out] = ModelSplit(model, nd.condition, t, f)
            return out

        return copy(tree.root)

    def fork(self, nid: int, idx: np.ndarray, depth: int):
        """Divergence outcome of the base conditions: grow both surrogates
        independently under the remaining budget; collapse to a shared leaf
        when both come out as single leaves."""
        budget = self.max_depth - depth
        t1 = dtree.fit_subset(self.mat, idx, self.y1, self.nc, budget)
        t2 = dtree.fit_subset(self.mat, idx, self.y2, self.nc, budget)
        l1 = t1.nodes[t1.root]
        l2 = t2.nodes[t2.root]
        if isinstance(l1, Leaf) and isinstance(l2, Leaf):
            self.nodes[nid] = SharedLeaf(
                l1.label, l2.label, l1.histogram, l2.histogram, int(idx.size)
            )
        else:
            a = self.graft(t1, 1)
            b = self.graft(t2, 2)
            self.nodes[nid] = OrNode(a, b, int(idx.size))

    def grow(self, idx: np.ndarray, depth: int) -> int:
        nid = len(self.nodes)
        self.nodes.append(None)
        h1 = np.bincount(self.y1[idx], minlength=self.nc)
        h2 = np.bincount(self.y2[idx], minlength=self.nc)
        pure1 = int((h1 > 0).sum()) <= 1
        pure2 = int((h2 > 0).sum()) <= 1
        if pure1 or pure2 or depth >= self.max_depth:
            self.fork(nid, idx, depth)
            return nid
        r1, r2 = best_split_pair(self.mat, idx, self.y1, self.c1, self.y2, self.c2)
        if r1 is None or r2 is None:
            # every feature is constant here: no split exists for either model
            self.fork(nid, idx, depth)
            return nid
        imp1 = r1[2]
        imp2 = r2[2]
        if self.alpha is None:
            diverge = should_diverge(imp1, imp2)
            joint = None
            if not diverge:  # lazy: the joint argmin is only needed to share
                joint = best_split_joint_arrays(
                    self.mat, idx, self.y1, self.c1, self.y2, self.c2
                )
        else:
            joint = best_split_joint_arrays(
                self.mat, idx, self.y1, self.c1, self.y2, self.c2
            )
            diverge = should_diverge(imp1, imp2, joint[2], self.alpha)
        if diverge:
            budget = self.max_depth - depth
            cond1 = SplitCondition(int(r1[0]), float(r1[1]))
            cond2 = SplitCondition(int(r2[0]), float(r2[1]))
            t1 = dtree.fit_forced(self.mat, idx, self.y1, self.nc, cond1, budget)
            t2 = dtree.fit_forced(self.mat, idx, self.y2, self.nc, cond2, budget)
            a = self.graft(t1, 1)
            b = self.graft(t2, 2)
            self.nodes[nid] = OrNode(a, b, int(idx.size))
            return nid
        cond = SplitCondition(int(joint[0]), float(joint[1]))
        mask = self.mat[idx, cond.feature] < cond.threshold
        true_child = self.grow(idx[mask], depth + 1)
        false_child = self.grow(idx[~mask], depth + 1)
        self.nodes[nid] = SharedSplit(cond, true_child, false_child, int(idx.size))
        return nid


def build(
    X,
    y1,
    y2,
    max_depth: int,
    alpha: float | None = None,
    provenance: dict | None = None,
) -> JointSurrogateTree:
    """Construct a joint surrogate tree for two label vectors over X.

    alpha=None uses the simplified divergence criterion (either model
    perfectly separable by one split); a float alpha uses the relative
    criterion imp1 + imp2 <= alpha * joint. alpha=1.0 reduces to two
    independently fitted surrogates under a root or-node.
    """
    mat = as_matrix(X)
    l1, c1 = as_labels(y1)
    l2, c2 = as_labels(y2)
    if mat.shape[0] == 0:
        raise EmptyInput("cannot build a joint tree on zero rows")
    if l1.shape[0] != mat.shape[0] or l2.shape[0] != mat.shape[0]:
        raise LengthMismatch("label vectors must match the row count")
    if max_depth < 0:
        raise EmptyInput("max_depth must be >= 0")
    prov = dict(provenance or {})
    if isinstance(X, Dataset):
        prov.setdefault("fingerprint", X.fingerprint())
        prov.setdefault("columns", list(X.columns))
    b = _JstBuilder(mat, l1, c1, l2, c2, max_depth, alpha)
    b.grow(np.arange(mat.shape[0], dtype=np.int64), 0)
    return JointSurrogateTree(
        tuple(b.nodes), 0, max_depth, alpha, b.nc, prov
    )


def surrogate_predict(jst: JointSurrogateTree, model_index: int, x) -> int:
    """Prediction of the model_index surrogate at a single row."""
    if model_index not in (1, 2):
        raise DimensionMismatch("model_index must be 1 or 2")
    nd = jst.nodes[jst.root]
    while True:
        if isinstance(nd, SharedLeaf):
            return nd.label_1 if model_index == 1 else nd.label_2
        if isinstance(nd, ModelLeaf):
            return nd.label
        if isinstance(nd, OrNode):
            nd = jst.nodes[nd.child_1 if model_index == 1 else nd.child_2]
            continue
        cond = nd.condition
        if cond.feature >= len(x):
            raise DimensionMismatch(
                f"row has {len(x)} features, tree needs {cond.feature + 1}"
            )
        nd = jst.nodes[nd.true_child if cond.goes_true(x) else nd.false_child]


def surrogate_predict_batch(jst: JointSurrogateTree, model_index: int, X) -> np.ndarray:
    """Vectorized surrogate predictions over the rows of X."""
    if model_index not in (1, 2):
        raise DimensionMismatch("model_index must be 1 or 2")
    mat = as_matrix(X)
    out = np.empty(mat.shape[0], dtype=np.int64)

    def route(nid: int, idx: np.ndarray):
        if idx.size == 0:
            return
        nd = jst.nodes[nid]
        if isinstance(nd, SharedLeaf):
            out[idx] = nd.label_1 if model_index == 1 else nd.label_2
        elif isinstance(nd, ModelLeaf):
            out[idx] = nd.label
        elif isinstance(nd, OrNode):
            route(nd.child_1 if model_index == 1 else nd.child_2, idx)
        else:
            cond = nd.condition
            if cond.feature >= mat.shape[1]:
                raise DimensionMismatch(
                    f"matrix has {mat.shape[1]} features, "
                    f"tree needs {cond.feature + 1}"
                )
            mask = mat[idx, cond.feature] < cond.threshold
            route(nd.true_child, idx[mask])
            route(nd.false_child, idx[~mask])

    route(jst.root, np.arange(mat.shape[0], dtype=np.int64))
    return out


def restrict(jst: JointSurrogateTree, model_index: int) -> DecisionTree:
    """The decision tree obtained by taking branch model_index at every
    or-node (the surrogate for that model)."""
    if model_index not in (1, 2):
        raise DimensionMismatch("model_index must be 1 or 2")
    nodes: list = []

    def copy(nid: int) -> int:
        nd = jst.nodes[nid]
        if isinstance(nd, OrNode):
            return copy(nd.child_1 if model_index == 1 else nd.child_2)
        out = len(nodes)
        nodes.append(None)
        if isinstance(nd, SharedLeaf):
            lab = nd.label_1 if model_index == 1 else nd.label_2
            h = nd.histogram_1 if model_index == 1 else nd.histogram_2
            nodes[out] = Leaf(lab, h, nd.n)
        elif isinstance(nd, ModelLeaf):
            nodes[out] = Leaf(nd.label, nd.histogram, nd.n)
        else:
            t = copy(nd.true_child)
            f = copy(nd.false_child)
            nodes[out] = SplitNode(nd.condition, t, f)
        return out

    copy(jst.root)
    return DecisionTree(tuple(nodes), 0, jst.max_depth)


def leaf_samples(jst: JointSurrogateTree, X) -> dict[int, np.ndarray]:
    """Row indices of X reaching each leaf node (SharedLeaf or ModelLeaf).

    Or-nodes forward all of their rows to both subtrees, so the two
    surrogates partition the same sample set independently.
    """
    mat = as_matrix(X)
    out: dict[int, np.ndarray] = {}

    def route(nid: int, idx: np.ndarray):
        nd = jst.nodes[nid]
        if isinstance(nd, (SharedLeaf, ModelLeaf)):
            out[nid] = idx
        elif isinstance(nd, OrNode):
            route(nd.child_1, idx)
            route(nd.child_2, idx)
        else:
            mask = mat[idx, nd.condition.feature] < nd.condition.threshold
            route(nd.true_child, idx[mask])
            route(nd.false_child, idx[~mask])

    route(jst.root, np.arange(mat.shape[0], dtype=np.int64))
    return out


def max_decision_depth(jst: JointSurrogateTree) -> int:
    """Largest number of decision edges on any root-to-leaf path (or-edges
    do not count)."""

    def walk(nid: int) -> int:
        nd = jst.nodes[nid]
        if isinstance(nd, (SharedLeaf, ModelLeaf)):
            return 0
        if isinstance(nd, OrNode):
            return max(walk(nd.child_1), walk(nd.child_2))
        return 1 + max(walk(nd.true_child), walk(nd.false_child))

    return walk(jst.root)


def jst_payload(jst: JointSurrogateTree) -> dict:
    nodes = []
    for i, nd in enumerate(jst.nodes):
        if isinstance(nd, SharedSplit):
            nodes.append(
                {
                    "id": i,
                    "kind": "shared",
                    "feature": nd.condition.feature,
                    "threshold": nd.condition.threshold,
                    "children": [nd.true_child, nd.false_child],
                    "n": nd.n,
                }
            )
        elif isinstance(nd, OrNode):
            nodes.append(
                {
                    "id": i,
                    "kind": "or",
                    "children": [nd.child_1, nd.child_2],
                    "n": nd.n,
                }
            )
        elif isinstance(nd, SharedLeaf):
            nodes.append(
                {
                    "id": i,
                    "kind": "shared_leaf",
                    "label_1": nd.label_1,
                    "label_2": nd.label_2,
                    "histogram_1": list(nd.histogram_1),
                    "histogram_2": list(nd.histogram_2),
                    "n": nd.n,
                }
            )
        elif isinstance(nd, ModelSplit):
            nodes.append(
                {
                    "id": i,
                    "kind": f"m{nd.model}_split",
                    "feature": nd.condition.feature,
                    "threshold": nd.condition.threshold,
                    "children": [nd.true_child, nd.false_child],
                }
            )
        else:
            nodes.append(
                {
                    "id": i,
                    "kind": f"m{nd.model}_leaf",
                    "label": nd.label,
                    "histogram": list(nd.histogram),
                    "n": nd.n,
                }
            )
    return {
        "schema_version": 1,
        "kind": "jst",
        "max_depth": jst.max_depth,
        "alpha": jst.alpha,
        "num_classes": jst.num_classes,
        "root": jst.root,
        "provenance": jst.provenance,
        "nodes": nodes,
    }


def jst_from_payload(payload: dict) -> JointSurrogateTree:
    """Inverse of jst_payload; validates just enough to walk safely."""
    try:
        if payload.get("kind") != "jst":
            raise SchemaError("not a jst document")
        raw = payload["nodes"]
        nodes: list = [None] * len(raw)
        for entry in raw:
            i = entry["id"]
            kind = entry["kind"]
            if kind == "shared":
                nodes[i] = SharedSplit(
                    SplitCondition(entry["feature"], entry["threshold"]),
                    entry["children"][0],
                    entry["children"][1],
                    entry["n"],
                )
            elif kind == "or":
                nodes[i] = OrNode(entry["children"][0], entry["children"][1], entry["n"])
            elif kind == "shared_leaf":
                nodes[i] = SharedLeaf(
                    entry["label_1"],
                    entry["label_2"],
                    tuple(entry["histogram_1"]),
                    tuple(entry["histogram_2"]),
                    entry["n"],
                )
            elif kind in ("m1_split", "m2_split"):
                nodes[i] = ModelSplit(
                    int(kind[1]),
                    SplitCondition(entry["feature"], entry["threshold"]),
                    entry["children"][0],
                    entry["children"][1],
                )
            elif kind in ("m1_leaf", "m2_leaf"):
                nodes[i] = ModelLeaf(
                    int(kind[1]),
                    entry["label"],
                    tuple(entry["histogram"]),
                    entry["n"],
                )
            else:
                raise SchemaError(f"unknown node kind {kind!r}")
        if any(nd is None for nd in nodes):
            raise SchemaError("node ids are not contiguous")
        return JointSurrogateTree(
            tuple(nodes),
            payload["root"],
            payload["max_depth"],
            payload["alpha"],
            payload["num_classes"],
            dict(payload.get("provenance", {})),
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise SchemaError(f"malformed jst document: {exc}") from exc


_LEAF_FILL = (
    "#faebd7",  # label 0
    "#e0ffff",  # label 1
    "#d8f8d8",
    "#f6d8f8",
    "#f8f3d8",
    "#d8e2f8",
    "#f8d8d8",
)
_MODEL_FILL = {1: "#ffb6c1", 2: "#ffa07a"}


def _fill_for_label(label: int) -> str:
    return _LEAF_FILL[label % len(_LEAF_FILL)]


def _fmt_threshold(t: float) -> str:
    return f"{t:g}"


def _feature_name(names, f: int) -> str:
    if names is not None and f < len(names):
        return names[f]
    return f"x{f}"


def export_dot(
    jst: JointSurrogateTree,
    names: list[str] | None = None,
    hide_agreeing: bool = False,
) -> str:
    """Graphviz DOT rendering.

    Shared decision nodes are white ovals, or-nodes dashed circles, the two
    model subtrees are filled with distinct colors, and leaves are rectangles
    colored by label. With hide_agreeing, maximal subtrees that contribute no
    diff rule collapse into one gray box.
    """
    from .diffrules import extract

    if names is None:
        names = jst.provenance.get("columns")

    keep: set[int] = set()
    if hide_agreeing:
        rules = extract(jst)
        anchors = {r.provenance["or_node"] for r in rules.rules}

        def mark(nid: int) -> bool:
            nd = jst.nodes[nid]
            hit = nid in anchors
            if isinstance(nd, (SharedSplit, ModelSplit)):
                left = mark(nd.true_child)
                right = mark(nd.false_child)
                hit = hit or left or right
            elif isinstance(nd, OrNode):
                a = mark(nd.child_1)
                b = mark(nd.child_2)
                hit = hit or a or b
            if hit:
                keep.add(nid)
            return hit

        mark(jst.root)

    lines = [
        "digraph jst {",
        '  node [fontname="Helvetica"];',
        '  edge [fontname="Helvetica"];',
    ]

    def node_line(nid: int) -> None:
        nd = jst.nodes[nid]
        if hide_agreeing and nid not in keep:
            lines.append(
                f'  n{nid} [shape=box, style="filled,rounded", '
                f'fillcolor="#e8e8e8", label="no diff"];'
            )
            return
        if isinstance(nd, SharedSplit):
            lbl = f"{_feature_name(names, nd.condition.feature)} < " \
                  f"{_fmt_threshold(nd.condition.threshold)}"
            lines.append(f'  n{nid} [shape=ellipse, label="{lbl}"];')
        elif isinstance(nd, OrNode):
            lines.append(f'  n{nid} [shape=circle, style=dashed, label="or"];')
        elif isinstance(nd, SharedLeaf):
            fill = _fill_for_label(nd.label_1)
            lines.append(
                f'  n{nid} [shape=box, style=filled, fillcolor="{fill}", '
                f'label="{nd.label_1} | {nd.label_2}\\nn={nd.n}"];'
            )
        elif isinstance(nd, ModelSplit):
            fill = _MODEL_FILL[nd.model]
            lbl = f"{_feature_name(names, nd.condition.feature)} < " \
                  f"{_fmt_threshold(nd.condition.threshold)}"
            lines.append(
                f'  n{nid} [shape=ellipse, style=filled, '
                f'fillcolor="{fill}", label="{lbl}"];'
            )
        else:
            fill = _fill_for_label(nd.label)
            lines.append(
                f'  n{nid} [shape=box, style=filled, fillcolor="{fill}", '
                f'label="{nd.label}\\nn={nd.n}"];'
            )

    def walk(nid: int) -> None:
        node_line(nid)
        if hide_agreeing and nid not in keep:
            return
        nd = jst.nodes[nid]
        if isinstance(nd, (SharedSplit, ModelSplit)):
            walk(nd.true_child)
            walk(nd.false_child)
            lines.append(f'  n{nid} -> n{nd.true_child} [label="T"];')
            lines.append(f'  n{nid} -> n{nd.false_child} [label="F"];')
        elif isinstance(nd, OrNode):
            walk(nd.child_1)
            walk(nd.child_2)
            lines.append(f"  n{nid} -> n{nd.child_1} [style=dashed];")
            lines.append(f"  n{nid} -> n{nd.child_2} [style=dashed];")

    walk(jst.root)
    lines.append("}")
    return "\n".join(lines) + "\n"
