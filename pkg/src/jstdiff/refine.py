"""Selective refinement: split impure leaves that participate in diff rules.

One iteration extracts the current diff rules, collects every leaf named in
a rule's provenance whose samples are impure with respect to its own model's
labels, and splits each such leaf once. Leaves outside diff regions are
never touched, and shared decision nodes are never restructured.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from ._split_backend import best_split_arrays
from .diffrules import extract
from .dtree import SplitCondition, as_labels, as_matrix
from .errors import StaleInputs
from .jst import (
    JointSurrogateTree,
    ModelLeaf,
    ModelSplit,
    OrNode,
    SharedLeaf,
    SharedSplit,
    leaf_samples,
)
from .tabular import Dataset


@dataclass(frozen=True)
class RefinementReport:
    iteration: int
    leaves_split: int
    rules_before: int
    rules_after: int
    split_leaf_ids: tuple[int, ...] = ()

    def to_payload(self) -> dict:
        d = asdict(self)
        d["split_leaf_ids"] = list(self.split_leaf_ids)
        return d


def _check_provenance(jst: JointSurrogateTree, X) -> None:
    want = jst.provenance.get("fingerprint")
    if want is None:
        return
    if isinstance(X, Dataset):
        have = X.fingerprint()
        if have != want:
            raise StaleInputs(
                "dataset fingerprint does not match the tree's provenance"
            )


def _split_leaf_plan(mat, idx, labels, nc):
    """Best single split of a leaf's samples, or None. Returns the condition
    plus the two majority-label child leaves."""
    if idx.size < 2:
        return None
    found = best_split_arrays(mat, idx, labels, nc)
    if found is None:
        return None
    f, t, _ = found
    cond = SplitCondition(int(f), float(t))
    mask = mat[idx, cond.feature] < cond.threshold
    out = []
    for side in (idx[mask], idx[~mask]):
        hist = np.bincount(labels[side], minlength=nc)
        out.append((int(np.argmax(hist)), tuple(int(k) for k in hist), int(side.size)))
    return cond, out[0], out[1]


def refine_once(
    jst: JointSurrogateTree, X, y1, y2
) -> tuple[JointSurrogateTree, RefinementReport]:
    """One refinement pass; returns a new tree and a report.

    X, y1, y2 must be the exact inputs the tree was built from (checked
    against the stored dataset fingerprint when available).
    """
    _check_provenance(jst, X)
    mat = as_matrix(X)
    l1, c1 = as_labels(y1)
    l2, c2 = as_labels(y2)
    nc = jst.num_classes
    labels_of = {1: l1, 2: l2}

    before = extract(jst)
    sample_of = leaf_samples(jst, mat)

    # (node_id, model) -> leaf to consider; a leaf shared by many rules is
    # split at most once
    candidates: dict[tuple[int, int], None] = {}
    for rule in before.rules:
        prov = rule.provenance
        nid1 = prov["leaf_1"]
        nid2 = prov["leaf_2"]
        candidates.setdefault((nid1, 1), None)
        candidates.setdefault((nid2, 2), None)

    plans: dict[tuple[int, int], tuple] = {}
    for nid, model in candidates:
        labels = labels_of[model]
        idx = sample_of.get(nid)
        if idx is None or idx.size == 0:
            continue
        hist = np.bincount(labels[idx], minlength=nc)
        if int((hist > 0).sum()) <= 1:
            continue  # pure for this model: nothing to refine
        plan = _split_leaf_plan(mat, idx, labels, nc)
        if plan is not None:
            plans[(nid, model)] = plan

    nodes: list = []

    def emit_leaf_or_split(model: int, nid: int, label, hist, n) -> int:
        out = len(nodes)
        nodes.append(None)
        plan = plans.get((nid, model))
        if plan is None:
            nodes[out] = ModelLeaf(model, label, hist, n)
            return out
        cond, (lab_t, hist_t, n_t), (lab_f, hist_f, n_f) = plan
        t = len(nodes)
        nodes.append(ModelLeaf(model, lab_t, hist_t, n_t))
        f = len(nodes)
        nodes.append(ModelLeaf(model, lab_f, hist_f, n_f))
        nodes[out] = ModelSplit(model, cond, t, f)
        return out

    def copy(nid: int) -> int:
        nd = jst.nodes[nid]
        if isinstance(nd, ModelLeaf):
            return emit_leaf_or_split(nd.model, nid, nd.label, nd.histogram, nd.n)
        if isinstance(nd, SharedLeaf):
            split1 = (nid, 1) in plans
            split2 = (nid, 2) in plans
            if not split1 and not split2:
                out = len(nodes)
                nodes.append(nd)
                return out
            # degenerate or-node: fork so one side can grow
            out = len(nodes)
            nodes.append(None)
            a = emit_leaf_or_split(1, nid, nd.label_1, nd.histogram_1, nd.n)
            b = emit_leaf_or_split(2, nid, nd.label_2, nd.histogram_2, nd.n)
            nodes[out] = OrNode(a, b, nd.n)
            return out
        out = len(nodes)
        nodes.append(None)
        if isinstance(nd, SharedSplit):
            t = copy(nd.true_child)
            f = copy(nd.false_child)
            nodes[out] = SharedSplit(nd.condition, t, f, nd.n)
        elif isinstance(nd, OrNode):
            a = copy(nd.child_1)
            b = copy(nd.child_2)
            nodes[out] = OrNode(a, b, nd.n)
        else:
            t = copy(nd.true_child)
            f = copy(nd.false_child)
            nodes[out] = ModelSplit(nd.model, nd.condition, t, f)
        return out

    copy(jst.root)
    refined = JointSurrogateTree(
        tuple(nodes),
        0,
        jst.max_depth,
        jst.alpha,
        jst.num_classes,
        dict(jst.provenance),
    )
    after = extract(refined)
    report = RefinementReport(
        iteration=0,
        leaves_split=len(plans),
        rules_before=len(before),
        rules_after=len(after),
        split_leaf_ids=tuple(sorted({nid for nid, _ in plans})),
    )
    return refined, report


def refine(
    jst: JointSurrogateTree, X, y1, y2, iterations: int
) -> tuple[JointSurrogateTree, list[RefinementReport]]:
    """Apply refine_once up to `iterations` times, stopping early at a
    fixpoint (no leaf split)."""
    reports: list[RefinementReport] = []
    current = jst
    for it in range(iterations):
        current, rep = refine_once(current, X, y1, y2)
        rep = RefinementReport(
            iteration=it,
            leaves_split=rep.leaves_split,
            rules_before=rep.rules_before,
            rules_after=rep.rules_after,
            split_leaf_ids=rep.split_leaf_ids,
        )
        reports.append(rep)
        if rep.leaves_split == 0:
            break
    return current, reports
