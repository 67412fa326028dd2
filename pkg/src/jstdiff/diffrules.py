"""Diff rules: axis-aligned boxes where the two surrogates disagree.

Extraction pairs differently-labeled leaves under each or-node (a shared
leaf with two different labels acts as a degenerate or-node) and keeps the
pairs whose combined path condition is geometrically satisfiable. Rules are
simplified to at most one ">=" and one "<" predicate per feature and
canonically ordered, so rulesets compare as plain lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import inf
from typing import Sequence

import numpy as np

from .dtree import PathCondition, as_matrix
from .errors import DimensionMismatch, SchemaError
from .jst import (
    JointSurrogateTree,
    ModelLeaf,
    OrNode,
    SharedLeaf,
    SharedSplit,
)

OPS = ("<", ">=")


@dataclass(frozen=True)
class Predicate:
    feature: int
    op: str  # "<" or ">="
    threshold: float

    def __post_init__(self):
        if self.op not in OPS:
            raise SchemaError(f"bad predicate op {self.op!r}")

    def holds(self, x) -> bool:
        v = x[self.feature]
        return v < self.threshold if self.op == "<" else v >= self.threshold

    def key(self) -> tuple[int, str, float]:
        return (self.feature, self.op, self.threshold)


@dataclass(frozen=True)
class DiffRule:
    predicates: tuple[Predicate, ...]
    provenance: dict = field(default_factory=dict)

    def key(self) -> tuple:
        return tuple(p.key() for p in self.predicates)

    def satisfied(self, x) -> bool:
        return all(p.holds(x) for p in self.predicates)


@dataclass(frozen=True)
class DiffRuleset:
    rules: tuple[DiffRule, ...]
    source: str = "jst"  # jst | separate | direct

    def __len__(self) -> int:
        return len(self.rules)

    def canonical(self) -> tuple:
        """Provenance-free comparable form: sorted unique predicate tuples."""
        return tuple(sorted(set(r.key() for r in self.rules)))

    def to_json(self) -> str:
        return json.dumps(ruleset_payload(self), sort_keys=True, indent=2)


def intersect(pc1: PathCondition, pc2: PathCondition) -> PathCondition | None:
    """Per-feature interval intersection; None when any interval collapses."""
    return pc1.intersect(pc2)


def predicates_from_box(pc: PathCondition) -> tuple[Predicate, ...]:
    preds = []
    for f, lo, hi in pc.bounds:  # bounds are kept sorted by feature
        if lo > -inf:
            preds.append(Predicate(f, ">=", lo))
        if hi < inf:
            preds.append(Predicate(f, "<", hi))
    return tuple(preds)


def _leaf_boxes(jst: JointSurrogateTree, root: int, base: PathCondition):
    """Leaves under a model subtree with their absolute path conditions."""
    out: list[tuple[int, ModelLeaf, PathCondition]] = []

    def walk(nid: int, pc: PathCondition):
        nd = jst.nodes[nid]
        if isinstance(nd, ModelLeaf):
            out.append((nid, nd, pc))
        else:
            walk(nd.true_child, pc.with_true(nd.condition))
            walk(nd.false_child, pc.with_false(nd.condition))

    walk(root, base)
    return out


def extract(jst: JointSurrogateTree) -> DiffRuleset:
    """All satisfiable cross pairs of differently-labeled leaves, grouped by
    or-node in preorder, leaf pairs in (leaf_1, leaf_2) id order."""
    rules: list[DiffRule] = []

    def visit(nid: int, pc: PathCondition):
        nd = jst.nodes[nid]
        if isinstance(nd, SharedSplit):
            visit(nd.true_child, pc.with_true(nd.condition))
            visit(nd.false_child, pc.with_false(nd.condition))
            return
        if isinstance(nd, SharedLeaf):
            if nd.label_1 != nd.label_2 and not pc.is_empty():
                rules.append(
                    DiffRule(
                        predicates_from_box(pc),
                        {
                            "or_node": nid,
                            "leaf_1": nid,
                            "leaf_2": nid,
                            "label_1": nd.label_1,
                            "label_2": nd.label_2,
                        },
                    )
                )
            return
        assert isinstance(nd, OrNode)
        side1 = _leaf_boxes(jst, nd.child_1, pc)
        side2 = _leaf_boxes(jst, nd.child_2, pc)
        for lid1, l1, box1 in side1:
            for lid2, l2, box2 in side2:
                if l1.label == l2.label:
                    continue
                merged = box1.intersect(box2)
                if merged is None:
                    continue
                rules.append(
                    DiffRule(
                        predicates_from_box(merged),
                        {
                            "or_node": nid,
                            "leaf_1": lid1,
                            "leaf_2": lid2,
                            "label_1": l1.label,
                            "label_2": l2.label,
                        },
                    )
                )

    visit(jst.root, PathCondition())
    return DiffRuleset(tuple(rules), "jst")


def rule_satisfied(rule: DiffRule, x) -> bool:
    """Conjunction of the rule's predicates at one row."""
    return rule.satisfied(x)


def _rule_mask(rule: DiffRule, mat: np.ndarray) -> np.ndarray:
    mask = np.ones(mat.shape[0], dtype=bool)
    for p in rule.predicates:
        if p.feature >= mat.shape[1]:
            raise DimensionMismatch(
                f"rule uses feature {p.feature}, matrix has {mat.shape[1]}"
            )
        col = mat[:, p.feature]
        mask &= (col < p.threshold) if p.op == "<" else (col >= p.threshold)
    return mask


def ruleset_predict(rs: DiffRuleset, X) -> np.ndarray:
    """Row-wise disjunction over all rules."""
    mat = as_matrix(X)
    out = np.zeros(mat.shape[0], dtype=bool)
    for rule in rs.rules:
        out |= _rule_mask(rule, mat)
    return out


def rules_with_support(rs: DiffRuleset, X) -> DiffRuleset:
    """Optional filter: keep only rules satisfied by at least one row of X.

    Off by default everywhere; geometric satisfiability is the primary
    non-emptiness notion.
    """
    mat = as_matrix(X)
    kept = tuple(r for r in rs.rules if bool(_rule_mask(r, mat).any()))
    return DiffRuleset(kept, rs.source)


def count_rules_and_predicates(rs: DiffRuleset) -> tuple[int, int]:
    """(#rules, #distinct predicate triples across the whole ruleset)."""
    distinct = {p.key() for r in rs.rules for p in r.predicates}
    return len(rs.rules), len(distinct)


def per_rule_predicate_sum(rs: DiffRuleset) -> int:
    """Alternative predicate count: per-rule distinct predicates, summed."""
    return sum(len(set(p.key() for p in r.predicates)) for r in rs.rules)


def ruleset_payload(rs: DiffRuleset, names: Sequence[str] | None = None) -> dict:
    num_rules, num_global = count_rules_and_predicates(rs)

    def name_of(f: int) -> str:
        if names is not None and f < len(names):
            return names[f]
        return f"x{f}"

    return {
        "schema_version": 1,
        "kind": "diff_ruleset",
        "source": rs.source,
        "rules": [
            {
                "predicates": [
                    {
                        "feature": p.feature,
                        "name": name_of(p.feature),
                        "op": p.op,
                        "threshold": p.threshold,
                    }
                    for p in r.predicates
                ],
                "provenance": r.provenance,
            }
            for r in rs.rules
        ],
        "counts": {
            "num_rules": num_rules,
            "num_predicates_global": num_global,
            "num_predicates_per_rule_sum": per_rule_predicate_sum(rs),
        },
    }


def ruleset_from_payload(payload: dict) -> DiffRuleset:
    try:
        if payload.get("kind") != "diff_ruleset":
            raise SchemaError("not a diff_ruleset document")
        rules = []
        for entry in payload["rules"]:
            preds = tuple(
                Predicate(p["feature"], p["op"], float(p["threshold"]))
                for p in entry["predicates"]
            )
            rules.append(DiffRule(preds, dict(entry.get("provenance", {}))))
        return DiffRuleset(tuple(rules), payload.get("source", "jst"))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed ruleset document: {exc}") from exc


def format_rule(rule: DiffRule, names: Sequence[str] | None = None) -> str:
    def name_of(f: int) -> str:
        if names is not None and f < len(names):
            return names[f]
        return f"x{f}"

    if not rule.predicates:
        return "TRUE"
    return " AND ".join(
        f"{name_of(p.feature)} {p.op} {p.threshold:g}" for p in rule.predicates
    )
