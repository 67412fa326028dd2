"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Every tolerance is pinned here; all comparisons are exact unless a
criterion states otherwise.
"""

import time

import numpy as np

from jstdiff import baselines, cli, diffrules, dtree, jst, metrics
from jstdiff.refine import refine_once
from conftest import correlated_dataset, random_dataset, write_models_csv
from oracles import oracle_best_splits
from test_refine import assert_untouched_outside_splits, surrogate_errors


def _announce(name):
    print(f"\nACCEPTANCE: {name}: PASS")


def test_oracle_equivalence_split_search():
    """best_split and joint_best_split equal an exhaustive brute-force
    argmin (tie-break order included) on >= 1000 fuzzed datasets within a
    minute."""
    rng = np.random.default_rng(1234)
    started = time.monotonic()
    n_checked = 0
    for trial in range(1000):
        X, y1, y2, nc = random_dataset(rng, n_max=50, d_max=5, c_max=4)
        if trial % 2 == 0:
            # continuous values: every observed value is a distinct candidate
            X = rng.uniform(-5, 5, size=X.shape)
        want1, want2, wantj = oracle_best_splits(
            X.tolist(), y1.tolist(), nc, y2.tolist(), nc
        )
        got1 = dtree.best_split(X, dtree.as_labels(y1, nc)[0])
        gotj = jst.joint_best_split(X, y1, y2)
        if want1 is None:
            assert got1 is None and gotj is None
        else:
            cond, imp = got1
            assert (cond.feature, cond.threshold, imp) == want1
            cond, imp = gotj
            assert (cond.feature, cond.threshold, imp) == wantj
            got2 = dtree.best_split(X, y2)
            cond, imp = got2
            assert (cond.feature, cond.threshold, imp) == want2
        n_checked += 1
    elapsed = time.monotonic() - started
    assert n_checked >= 1000
    assert elapsed < 60.0, f"split-search oracle check took {elapsed:.1f}s"
    _announce(f"oracle equivalence ({n_checked} datasets, {elapsed:.1f}s)")


def test_pointwise_diff_equivalence():
    """Ruleset membership equals surrogate disagreement on every training
    row of >= 200 fuzzed JSTs, and on a 50x50 grid for the 2-d cases."""
    rng = np.random.default_rng(4321)
    n_trees = 0
    n_grids = 0
    while n_trees < 200:
        if n_trees % 2 == 0:
            X, y1, y2, _ = correlated_dataset(rng)
        else:
            X, y1, y2, _ = random_dataset(rng, n_max=40, d_max=4)
        depth = int(rng.integers(0, 5))
        alpha = rng.choice([None, -1.0, 0.0, 0.3, 0.7, 1.0])
        tree = jst.build(X, y1, y2, depth, alpha=alpha)
        rules = diffrules.extract(tree)

        member = diffrules.ruleset_predict(rules, X)
        disagree = jst.surrogate_predict_batch(
            tree, 1, X
        ) != jst.surrogate_predict_batch(tree, 2, X)
        assert member.tolist() == disagree.tolist()

        if X.shape[1] == 2:
            lo = X.min(axis=0) - 1.0
            hi = X.max(axis=0) + 1.0
            g0 = np.linspace(lo[0], hi[0], 50)
            g1 = np.linspace(lo[1], hi[1], 50)
            grid = np.stack(np.meshgrid(g0, g1), axis=-1).reshape(-1, 2)
            gm = diffrules.ruleset_predict(rules, grid)
            gd = jst.surrogate_predict_batch(
                tree, 1, grid
            ) != jst.surrogate_predict_batch(tree, 2, grid)
            assert gm.tolist() == gd.tolist()
            n_grids += 1
        n_trees += 1
    assert n_grids >= 20  # enough 2-d cases exercised the grid oracle
    _announce(f"pointwise diff equivalence ({n_trees} trees, {n_grids} grids)")


def test_alpha_one_reduction():
    """The alpha=1 joint pipeline's canonical ruleset equals the
    separate-surrogates baseline, exactly, on every fuzzed instance."""
    rng = np.random.default_rng(555)
    for trial in range(200):
        if trial % 2 == 0:
            X, y1, y2, _ = correlated_dataset(rng)
        else:
            X, y1, y2, _ = random_dataset(rng, n_max=40, d_max=4)
        k = int(rng.integers(0, 5))
        via_jst = diffrules.extract(jst.build(X, y1, y2, k, alpha=1.0))
        direct = baselines.separate_rules(X, y1, y2, k)
        assert via_jst.canonical() == direct.canonical()
    _announce("alpha=1 reduction (200 instances)")


def test_negative_alpha_no_divergence_at_root():
    """With alpha=-1 the root stays a shared decision node whenever no base
    condition fires there (checked on instances with positive joint
    impurity, where the criterion is decisive)."""
    rng = np.random.default_rng(777)
    n_checked = 0
    while n_checked < 100:
        X, y1, y2, _ = correlated_dataset(rng)
        if (y1 == y1[0]).all() or (y2 == y2[0]).all():
            continue  # base condition: a pure label vector
        joint = jst.joint_best_split(X, y1, y2)
        if joint is None or joint[1] == 0.0:
            continue  # unsplittable, or the zero corner where Eq. 4 fires
        tree = jst.build(X, y1, y2, 4, alpha=-1.0)
        assert isinstance(tree.nodes[tree.root], jst.SharedSplit)
        n_checked += 1
    _announce(f"alpha<0 no-divergence ({n_checked} instances)")


def test_refinement_monotonicity():
    """refine_once never increases either surrogate's training-error count
    and leaves outside diff regions are structurally unchanged, on >= 200
    fuzzed instances."""
    rng = np.random.default_rng(888)
    for trial in range(200):
        if trial % 2 == 0:
            X, y1, y2, _ = correlated_dataset(rng)
        else:
            X, y1, y2, _ = random_dataset(rng, n_max=40, d_max=4)
        depth = int(rng.integers(0, 4))
        tree = jst.build(X, y1, y2, depth)
        e1 = surrogate_errors(tree, X, y1, 1)
        e2 = surrogate_errors(tree, X, y2, 2)
        out, report = refine_once(tree, X, y1, y2)
        assert surrogate_errors(out, X, y1, 1) <= e1
        assert surrogate_errors(out, X, y2, 2) <= e2
        assert_untouched_outside_splits(tree, out, set(report.split_leaf_ids))
    _announce("refinement monotonicity (200 instances)")


def test_metrics_identities():
    """F1 identity holds exactly on fuzzed evaluations, and the all-true
    trivial model has precision exactly equal to the diff rate."""
    rng = np.random.default_rng(999)
    for _ in range(500):
        n = int(rng.integers(1, 60))
        y1 = rng.integers(0, 4, size=n)
        y2 = rng.integers(0, 4, size=n)
        pred = rng.random(n) < rng.random()
        pr, re, f1, rate = metrics.evaluate(pred, y1, y2)
        if pr + re > 0:
            assert f1 == 2 * pr * re / (pr + re)
        else:
            assert f1 == 0.0
        pr_t, re_t, _, rate_t = metrics.evaluate(np.ones(n, dtype=bool), y1, y2)
        assert pr_t == rate_t
        assert re_t == 1.0
    _announce("metrics identities (500 draws)")


def test_cli_determinism(tmp_path):
    """Two cmd_build + cmd_eval runs on the same fixture produce
    byte-identical JSON and DOT artifacts."""
    data = write_models_csv(tmp_path / "models.csv")
    outs = []
    for name in ("run_a", "run_b"):
        out = tmp_path / name
        code = cli.main([
            "build", "--data", str(data), "--pred1", "p1", "--pred2", "p2",
            "--max-depth", "6", "--refine", "1", "--seed", "7",
            "--out", str(out),
        ])
        assert code == 0
        code = cli.main([
            "eval", "--rules", str(out / "rules.json"),
            "--data", str(out / "test.csv"),
            "--pred1", "p1", "--pred2", "p2", "--out", str(out),
        ])
        assert code == 0
        outs.append(out)
    for name in ("jst.json", "rules.json", "jst.dot", "metrics.json",
                 "refinement.json", "encoding.json"):
        a = (outs[0] / name).read_bytes()
        b = (outs[1] / name).read_bytes()
        assert a == b, f"{name} differs between runs"
    _announce("cmd_build/cmd_eval determinism")
