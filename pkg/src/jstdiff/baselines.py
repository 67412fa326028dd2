"""Comparison methods sharing the diff-ruleset representation.

direct_dt_rules relabels rows as diff/non-diff and fits one tree on that;
separate_rules fits one unaligned surrogate per model and crosses their
leaves. Both emit the same canonical rule form as the joint pipeline.
"""

from __future__ import annotations

import numpy as np

from . import dtree
from .diffrules import DiffRule, DiffRuleset, predicates_from_box
from .dtree import PathCondition, as_labels, as_matrix
from .errors import EmptyInput


def _leaf_boxes(tree: dtree.DecisionTree):
    out = []

    def walk(nid: int, pc: PathCondition):
        nd = tree.nodes[nid]
        if isinstance(nd, dtree.Leaf):
            out.append((nid, nd, pc))
        else:
            walk(nd.true_child, pc.with_true(nd.condition))
            walk(nd.false_child, pc.with_false(nd.condition))

    walk(tree.root, PathCondition())
    return out


def direct_dt_rules(X, y1, y2, max_depth: int) -> DiffRuleset:
    """Fit a tree on the 0/1 disagreement labels; one rule per diff leaf."""
    mat = as_matrix(X)
    l1, _ = as_labels(y1)
    l2, _ = as_labels(y2)
    if mat.shape[0] == 0:
        raise EmptyInput("cannot fit on zero rows")
    diff = (l1 != l2).astype(np.int64)
    tree = dtree.fit(mat, dtree.as_labels(diff, 2)[0], max_depth)
    rules = []
    for nid, leaf, box in _leaf_boxes(tree):
        if leaf.label == 1:
            rules.append(
                DiffRule(
                    predicates_from_box(box),
                    {"or_node": None, "leaf_1": nid, "leaf_2": None,
                     "label_1": None, "label_2": None},
                )
            )
    return DiffRuleset(tuple(rules), "direct")


def direct_dt_tree(X, y1, y2, max_depth: int) -> dtree.DecisionTree:
    """The underlying diff/non-diff tree of direct_dt_rules."""
    mat = as_matrix(X)
    l1, _ = as_labels(y1)
    l2, _ = as_labels(y2)
    diff = (l1 != l2).astype(np.int64)
    return dtree.fit(mat, diff, max_depth)


def separate_rules(X, y1, y2, max_depth: int) -> DiffRuleset:
    """Fit one surrogate per model independently and emit every satisfiable
    cross pair of differently-labeled leaves."""
    mat = as_matrix(X)
    l1, c1 = as_labels(y1)
    l2, c2 = as_labels(y2)
    if mat.shape[0] == 0:
        raise EmptyInput("cannot fit on zero rows")
    nc = max(c1, c2)
    t1 = dtree.fit_subset(mat, np.arange(mat.shape[0], dtype=np.int64), l1, nc, max_depth)
    t2 = dtree.fit_subset(mat, np.arange(mat.shape[0], dtype=np.int64), l2, nc, max_depth)
    rules = []
    for lid1, leaf1, box1 in _leaf_boxes(t1):
        for lid2, leaf2, box2 in _leaf_boxes(t2):
            if leaf1.label == leaf2.label:
                continue
            merged = box1.intersect(box2)
            if merged is None:
                continue
            rules.append(
                DiffRule(
                    predicates_from_box(merged),
                    {"or_node": None, "leaf_1": lid1, "leaf_2": lid2,
                     "label_1": leaf1.label, "label_2": leaf2.label},
                )
            )
    return DiffRuleset(tuple(rules), "separate")


def separate_trees(X, y1, y2, max_depth: int) -> tuple[dtree.DecisionTree, dtree.DecisionTree]:
    """The two independent surrogates of separate_rules."""
    mat = as_matrix(X)
    l1, c1 = as_labels(y1)
    l2, c2 = as_labels(y2)
    nc = max(c1, c2)
    idx = np.arange(mat.shape[0], dtype=np.int64)
    return (
        dtree.fit_subset(mat, idx, l1, nc, max_depth),
        dtree.fit_subset(mat, idx, l2, nc, max_depth),
    )
