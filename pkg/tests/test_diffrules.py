import numpy as np

from jstdiff import diffrules, jst
from jstdiff.diffrules import DiffRule, DiffRuleset, Predicate
from jstdiff.dtree import PathCondition, SplitCondition
from jstdiff.jst import (
    JointSurrogateTree,
    ModelLeaf,
    ModelSplit,
    OrNode,
    SharedSplit,
)
from conftest import correlated_dataset, random_dataset
from oracles import oracle_rule_membership


def box(d):
    return PathCondition.from_dict(d)


class TestIntersect:
    def test_identity(self):
        pc = box({0: (2.0, 5.0)})
        assert diffrules.intersect(PathCondition(), pc) == pc

    def test_half_open_boundary(self):
        assert diffrules.intersect(box({0: (2.0, 5.0)}), box({0: (5.0, 7.0)})) is None

    def test_overlap(self):
        got = diffrules.intersect(box({0: (2.0, 5.0)}), box({0: (3.0, 9.0)}))
        assert got == box({0: (3.0, 5.0)})

    def test_multi_feature(self):
        a = box({0: (0.0, 4.0), 1: (-1.0, float("inf"))})
        b = box({0: (2.0, 9.0), 2: (float("-inf"), 3.0)})
        got = diffrules.intersect(a, b)
        assert got.as_dict() == {
            0: (2.0, 4.0),
            1: (-1.0, float("inf")),
            2: (float("-inf"), 3.0),
        }


def figure_style_jst():
    """Handcrafted tree mirroring the shape of a published example: a shared
    root on feature 22, the false branch (f22 >= 116.05) an or-node whose
    model-1 side splits twice and model-2 side predicts all 0."""
    n0 = SharedSplit(SplitCondition(22, 116.05), 1, 2, 100)
    n1 = jst.SharedLeaf(0, 0, (10, 0), (10, 0), 10)  # agreeing left side
    n2 = OrNode(3, 8, 90)
    # model 1: f22 < 118.85 ? (f29 < 0.1 ? 1 : 0) : 0
    n3 = ModelSplit(1, SplitCondition(22, 118.85), 4, 7)
    n4 = ModelSplit(1, SplitCondition(29, 0.1), 5, 6)
    n5 = ModelLeaf(1, 1, (0, 5), 5)
    n6 = ModelLeaf(1, 0, (5, 0), 5)
    n7 = ModelLeaf(1, 0, (80, 0), 80)
    # model 2: all zero
    n8 = ModelLeaf(2, 0, (90, 0), 90)
    nodes = (n0, n1, n2, n3, n4, n5, n6, n7, n8)
    return JointSurrogateTree(nodes, 0, 6, None, 2, {})


class TestExtract:
    def test_identical_labels_empty(self, rng):
        X, y1, _, _ = random_dataset(rng, n_max=25, d_max=3)
        tree = jst.build(X, y1, y1, 3)
        assert diffrules.extract(tree).rules == ()

    def test_figure_style_region(self):
        rules = diffrules.extract(figure_style_jst())
        assert len(rules) == 1
        rule = rules.rules[0]
        # 116.05 <= f22 < 118.85 and f29 < 0.1
        assert rule.key() == (
            (22, ">=", 116.05),
            (22, "<", 118.85),
            (29, "<", 0.1),
        )
        assert rule.provenance["or_node"] == 2
        assert rule.provenance["label_1"] == 1
        assert rule.provenance["label_2"] == 0

    def test_unsatisfiable_pairs_dropped(self):
        # both subtrees split the same feature at the same threshold with
        # opposite labels: only the aligned cross pairs are satisfiable
        n0 = OrNode(1, 4, 10)
        n1 = ModelSplit(1, SplitCondition(0, 5.0), 2, 3)
        n2 = ModelLeaf(1, 0, (5, 0), 5)
        n3 = ModelLeaf(1, 1, (0, 5), 5)
        n4 = ModelSplit(2, SplitCondition(0, 5.0), 5, 6)
        n5 = ModelLeaf(2, 1, (0, 5), 5)
        n6 = ModelLeaf(2, 0, (5, 0), 5)
        tree = JointSurrogateTree((n0, n1, n2, n3, n4, n5, n6), 0, 6, None, 2, {})
        rules = diffrules.extract(tree)
        assert {r.key() for r in rules.rules} == {
            ((0, "<", 5.0),),
            ((0, ">=", 5.0),),
        }

    def test_pointwise_equivalence_on_grid(self, rng):
        for _ in range(30):
            X, y1, y2, _ = correlated_dataset(rng, d_max=2)
            tree = jst.build(X, y1, y2, int(rng.integers(1, 4)),
                             alpha=rng.choice([None, 0.7, 1.0]))
            rules = diffrules.extract(tree)
            lo = X.min(axis=0) - 1.0
            hi = X.max(axis=0) + 1.0
            g0 = np.linspace(lo[0], hi[0], 23)
            g1 = np.linspace(lo[1 % X.shape[1]], hi[1 % X.shape[1]], 23)
            grid = np.array([[a, b] for a in g0 for b in g1])
            if X.shape[1] > 2:
                pad = np.tile(X[0, 2:], (grid.shape[0], 1))
                grid = np.hstack([grid, pad])
            member = diffrules.ruleset_predict(rules, grid)
            disagree = jst.surrogate_predict_batch(
                tree, 1, grid
            ) != jst.surrogate_predict_batch(tree, 2, grid)
            assert member.tolist() == disagree.tolist()

    def test_extract_deterministic_order(self, rng):
        X, y1, y2, _ = correlated_dataset(rng)
        tree = jst.build(X, y1, y2, 3)
        a = diffrules.extract(tree)
        b = diffrules.extract(tree)
        assert [r.key() for r in a.rules] == [r.key() for r in b.rules]
        assert [r.provenance for r in a.rules] == [r.provenance for r in b.rules]

    def test_rules_satisfiable(self, rng):
        for _ in range(20):
            X, y1, y2, _ = correlated_dataset(rng)
            tree = jst.build(X, y1, y2, 4)
            for rule in diffrules.extract(tree).rules:
                by_feature = {}
                for p in rule.predicates:
                    lo, hi = by_feature.get(p.feature, (float("-inf"), float("inf")))
                    if p.op == ">=":
                        lo = max(lo, p.threshold)
                    else:
                        hi = min(hi, p.threshold)
                    by_feature[p.feature] = (lo, hi)
                assert all(lo < hi for lo, hi in by_feature.values())


class TestRuleEvaluation:
    def test_empty_rule_true_everywhere(self):
        rule = DiffRule(())
        assert diffrules.rule_satisfied(rule, [1.0, 2.0])

    def test_strict_less(self):
        rule = DiffRule((Predicate(0, "<", 5.0),))
        assert not diffrules.rule_satisfied(rule, [5.0])
        assert diffrules.rule_satisfied(rule, [4.999])

    def test_conjunction(self):
        rule = DiffRule((Predicate(0, ">=", 2.0), Predicate(0, "<", 5.0)))
        assert diffrules.rule_satisfied(rule, [3.7])
        assert not diffrules.rule_satisfied(rule, [1.0])
        assert not diffrules.rule_satisfied(rule, [5.0])

    def test_ruleset_empty_all_false(self):
        rs = DiffRuleset((), "jst")
        out = diffrules.ruleset_predict(rs, np.zeros((4, 2)))
        assert out.tolist() == [False] * 4

    def test_tautological_rule_all_true(self):
        rs = DiffRuleset((DiffRule(()),), "jst")
        out = diffrules.ruleset_predict(rs, np.zeros((4, 2)))
        assert out.tolist() == [True] * 4

    def test_matches_naive_double_loop(self, rng):
        for _ in range(20):
            d = int(rng.integers(1, 4))
            rules = []
            for _ in range(int(rng.integers(0, 5))):
                preds = tuple(
                    Predicate(
                        int(rng.integers(0, d)),
                        rng.choice(["<", ">="]),
                        float(rng.choice([-1.0, 0.0, 1.0, 2.5])),
                    )
                    for _ in range(int(rng.integers(0, 3)))
                )
                rules.append(DiffRule(preds))
            rs = DiffRuleset(tuple(rules), "jst")
            X = rng.uniform(-3, 4, size=(30, d))
            got = diffrules.ruleset_predict(rs, X)
            keys = [r.key() for r in rs.rules]
            want = [oracle_rule_membership(keys, row) for row in X]
            assert got.tolist() == want

    def test_simplification_soundness(self, rng):
        # simplified predicates accept exactly the points of the raw
        # three-way conjunction
        for _ in range(20):
            X, y1, y2, _ = correlated_dataset(rng, d_max=3)
            tree = jst.build(X, y1, y2, 3)
            rules = diffrules.extract(tree)
            pts = rng.uniform(X.min() - 1, X.max() + 1, size=(50, X.shape[1]))
            for rule in rules.rules:
                for row in pts:
                    raw = all(p.holds(row) for p in rule.predicates)
                    assert diffrules.rule_satisfied(rule, row) == raw


class TestCounts:
    def test_empty(self):
        assert diffrules.count_rules_and_predicates(DiffRuleset((), "jst")) == (0, 0)

    def test_shared_predicate_counted_once(self):
        a = DiffRule((Predicate(0, "<", 5.0), Predicate(1, ">=", 1.0)))
        b = DiffRule((Predicate(0, "<", 5.0), Predicate(2, "<", 0.0)))
        rs = DiffRuleset((a, b), "jst")
        assert diffrules.count_rules_and_predicates(rs) == (2, 3)
        assert diffrules.per_rule_predicate_sum(rs) == 4

    def test_matches_recount(self, rng):
        for _ in range(20):
            rules = []
            for _ in range(int(rng.integers(0, 6))):
                preds = tuple(
                    Predicate(int(f), op, float(t))
                    for f, op, t in zip(
                        rng.integers(0, 3, size=3),
                        rng.choice(["<", ">="], size=3),
                        rng.choice([0.0, 1.0], size=3),
                    )
                )
                rules.append(DiffRule(preds))
            rs = DiffRuleset(tuple(rules), "jst")
            nr, np_ = diffrules.count_rules_and_predicates(rs)
            assert nr == len(rules)
            recount = set()
            for r in rules:
                for p in r.predicates:
                    recount.add((p.feature, p.op, p.threshold))
            assert np_ == len(recount)


class TestPayload:
    def test_roundtrip(self, rng):
        X, y1, y2, _ = correlated_dataset(rng)
        tree = jst.build(X, y1, y2, 3)
        rs = diffrules.extract(tree)
        payload = diffrules.ruleset_payload(rs, [f"c{i}" for i in range(X.shape[1])])
        back = diffrules.ruleset_from_payload(payload)
        assert back.canonical() == rs.canonical()
        assert payload["counts"]["num_rules"] == len(rs)

    def test_support_filter(self):
        rule_hit = DiffRule((Predicate(0, "<", 1.0),))
        rule_miss = DiffRule((Predicate(0, ">=", 100.0),))
        rs = DiffRuleset((rule_hit, rule_miss), "jst")
        X = np.zeros((3, 1))
        kept = diffrules.rules_with_support(rs, X)
        assert [r.key() for r in kept.rules] == [rule_hit.key()]
