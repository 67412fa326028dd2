"""Command-line interface.

Commands: build, refine, eval, baseline {direct-dt|separate}, sweep,
export-dot, importance. All JSON artifacts carry schema_version and are
byte-deterministic for a fixed config and input file. Verbosity comes from
the JSTDIFF_LOG environment variable (debug/info/warning).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import baselines, diffrules, jst, metrics, tabular
from ._split_backend import BACKEND
from .refine import refine as run_refine
from .dtree import feature_importance
from .errors import JstdiffError, SchemaError
from .tabular import Dataset, LabelVector, SplitSpec

log = logging.getLogger("jstdiff")


def _setup_logging():
    level = os.environ.get("JSTDIFF_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _write_text(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_dataset_csv(path: Path, ds: Dataset, labels, label_names) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(ds.columns) + list(label_names))
        for i in range(ds.n):
            row = [repr(v) for v in ds.values[i].tolist()]
            row += [lv.classes[lv.labels[i]] for lv in labels]
            w.writerow(row)


def _parse_categorical(arg: str | None) -> list[str]:
    if not arg:
        return []
    return [c for c in (s.strip() for s in arg.split(",")) if c]


def _mode_of(args) -> float | None:
    if getattr(args, "alpha", None) is not None and getattr(args, "simplified", False):
        raise SchemaError("--alpha and --simplified are mutually exclusive")
    return getattr(args, "alpha", None)


def _load_predictions(path, pred1, pred2, ignore_arg, categorical=()):
    """Load a predictions CSV; columns named in --ignore are read as label
    columns (so they may hold arbitrary strings) and then dropped."""
    ignored = [c for c in _parse_categorical(ignore_arg)
               if c not in (pred1, pred2)]
    ds, labels = tabular.load_csv(path, [pred1, pred2] + ignored, categorical)
    return ds, labels[:2]


def _prepare(args):
    categorical = _parse_categorical(args.categorical)
    ds, labels = _load_predictions(
        args.data, args.pred1, args.pred2, getattr(args, "ignore", ""),
        categorical,
    )
    ds, labels = tabular.preprocess_labeled(ds, labels, categorical)
    spec = SplitSpec(args.train_fraction, args.seed)
    (train, test) = tabular.split(ds, labels, spec)
    return train, test, labels[0].classes


def _run_payload(args, extra: dict | None = None) -> dict:
    payload = {
        "schema_version": 1,
        "kind": "run_config",
        "data": str(args.data),
        "pred_columns": [args.pred1, args.pred2],
        "categorical": _parse_categorical(args.categorical),
        "max_depth": args.max_depth,
        "alpha": getattr(args, "alpha", None),
        "refine": getattr(args, "refine", 0),
        "train_fraction": args.train_fraction,
        "seed": args.seed,
    }
    payload.update(extra or {})
    return payload


def _export_bundle(out: Path, args, train, test, classes) -> None:
    ds_tr, labels_tr = train
    ds_te, labels_te = test
    label_names = [args.pred1, args.pred2]
    _write_text(out / "run.json", _dump_json(_run_payload(args)))
    _write_text(
        out / "encoding.json",
        _dump_json(
            {
                "schema_version": 1,
                "kind": "class_encoding",
                "classes": list(classes),
                "label_columns": label_names,
            }
        ),
    )
    _write_dataset_csv(out / "train.csv", ds_tr, labels_tr, label_names)
    _write_dataset_csv(out / "test.csv", ds_te, labels_te, label_names)


def cmd_build(args) -> int:
    alpha = _mode_of(args)
    train, test, classes = _prepare(args)
    ds_tr, labels_tr = train
    out = Path(args.out)
    _export_bundle(out, args, train, test, classes)

    provenance = {
        "fingerprint": ds_tr.fingerprint(),
        "columns": list(ds_tr.columns),
        "pred_columns": [args.pred1, args.pred2],
        "classes": list(classes),
    }
    tree = jst.build(ds_tr, labels_tr[0], labels_tr[1], args.max_depth,
                     alpha=alpha, provenance=provenance)
    reports = []
    if args.refine > 0:
        tree, reports = run_refine(
            tree, ds_tr, labels_tr[0], labels_tr[1], args.refine
        )
    rules = diffrules.extract(tree)

    _write_text(out / "jst.json", _dump_json(jst.jst_payload(tree)))
    _write_text(
        out / "rules.json",
        _dump_json(diffrules.ruleset_payload(rules, ds_tr.columns)),
    )
    _write_text(out / "jst.dot", jst.export_dot(tree, list(ds_tr.columns),
                                                args.hide_agreeing))
    if reports:
        _write_text(
            out / "refinement.json",
            _dump_json(
                {
                    "schema_version": 1,
                    "kind": "refinement",
                    "refinement": [r.to_payload() for r in reports],
                }
            ),
        )
    log.info("built jst (%s backend): %d nodes, %d rules",
             BACKEND, len(tree.nodes), len(rules))
    return 0


def cmd_baseline(args) -> int:
    train, test, classes = _prepare(args)
    ds_tr, labels_tr = train
    out = Path(args.out)
    _export_bundle(out, args, train, test, classes)
    if args.method == "direct-dt":
        rules = baselines.direct_dt_rules(
            ds_tr, labels_tr[0], labels_tr[1], args.max_depth
        )
    else:
        rules = baselines.separate_rules(
            ds_tr, labels_tr[0], labels_tr[1], args.max_depth
        )
    _write_text(
        out / "rules.json",
        _dump_json(diffrules.ruleset_payload(rules, ds_tr.columns)),
    )
    return 0


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def _encode_against(lv: LabelVector, classes) -> LabelVector:
    names = [lv.classes[i] for i in lv.labels.tolist()]
    return tabular.labels_from_strings([names], classes)[0]


def cmd_eval(args) -> int:
    payload = _load_json(args.rules)
    rules = diffrules.ruleset_from_payload(payload)
    ds, (y1, y2) = _load_predictions(
        args.data, args.pred1, args.pred2, getattr(args, "ignore", "")
    )

    tree = None
    jst_path = args.jst
    if jst_path is None:
        sibling = Path(args.rules).parent / "jst.json"
        if sibling.exists() and rules.source == "jst":
            jst_path = sibling
    if jst_path is not None:
        tree = jst.jst_from_payload(_load_json(jst_path))
        stored = tree.provenance.get("classes")
        if stored:
            y1 = _encode_against(y1, stored)
            y2 = _encode_against(y2, stored)

    predicted = diffrules.ruleset_predict(rules, ds)
    fid1 = fid2 = None
    if tree is not None:
        fid1 = metrics.fidelity(jst.surrogate_predict_batch(tree, 1, ds), y1)
        fid2 = metrics.fidelity(jst.surrogate_predict_batch(tree, 2, ds), y2)
    num_rules, num_preds = diffrules.count_rules_and_predicates(rules)
    report = metrics.build_report(predicted, y1, y2, num_rules, num_preds, fid1, fid2)

    payload = report.to_payload()
    payload["source"] = rules.source
    ref_path = args.refinement
    if ref_path is None:
        sibling = Path(args.rules).parent / "refinement.json"
        if sibling.exists():
            ref_path = sibling
    if ref_path is not None:
        payload["refinement"] = _load_json(ref_path).get("refinement", [])
    out = Path(args.out) if args.out else Path(args.rules).parent
    _write_text(out / "metrics.json", _dump_json(payload))
    print(report.summary_line())
    return 0


def cmd_refine(args) -> int:
    d = Path(args.dir)
    tree = jst.jst_from_payload(_load_json(d / "jst.json"))
    pred_cols = tree.provenance.get("pred_columns")
    classes = tree.provenance.get("classes")
    if not pred_cols:
        raise SchemaError("jst.json lacks prediction-column provenance")
    ds, labels = tabular.load_csv(d / "train.csv", pred_cols)
    y1, y2 = labels
    if classes:
        y1 = _encode_against(y1, classes)
        y2 = _encode_against(y2, classes)
    tree, reports = run_refine(tree, ds, y1, y2, args.iterations)
    rules = diffrules.extract(tree)
    _write_text(d / "jst.json", _dump_json(jst.jst_payload(tree)))
    _write_text(
        d / "rules.json", _dump_json(diffrules.ruleset_payload(rules, ds.columns))
    )
    _write_text(d / "jst.dot", jst.export_dot(tree, list(ds.columns),
                                              args.hide_agreeing))
    _write_text(
        d / "refinement.json",
        _dump_json(
            {
                "schema_version": 1,
                "kind": "refinement",
                "refinement": [r.to_payload() for r in reports],
            }
        ),
    )
    for r in reports:
        print(
            f"iteration {r.iteration}: split {r.leaves_split} leaves, "
            f"rules {r.rules_before} -> {r.rules_after}"
        )
    return 0


def cmd_export_dot(args) -> int:
    tree = jst.jst_from_payload(_load_json(args.jst))
    dot = jst.export_dot(tree, tree.provenance.get("columns"), args.hide_agreeing)
    if args.out:
        _write_text(Path(args.out), dot)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_importance(args) -> int:
    tree = jst.jst_from_payload(_load_json(args.jst))
    columns = tree.provenance.get("columns") or []
    n_features = len(columns) or None
    payload = {
        "schema_version": 1,
        "kind": "feature_importance",
        "columns": list(columns),
    }
    for i in (1, 2):
        sub = jst.restrict(tree, i)
        imp = feature_importance(sub, n_features)
        payload[f"model_{i}"] = [float(v) for v in imp]
    if args.out:
        _write_text(Path(args.out), _dump_json(payload))
    else:
        sys.stdout.write(_dump_json(payload))
    return 0


def _sweep_cell(task) -> dict:
    (values, columns, y1, y2, nc, classes, method, depth, alpha, steps,
     fraction, seed) = task
    ds = Dataset(tuple(columns), values)
    l1 = LabelVector(y1, nc, tuple(classes))
    l2 = LabelVector(y2, nc, tuple(classes))
    (ds_tr, labels_tr), (ds_te, labels_te) = tabular.split(
        ds, [l1, l2], SplitSpec(fraction, seed)
    )
    fid1 = fid2 = None
    if method == "jst":
        tree = jst.build(ds_tr, labels_tr[0], labels_tr[1], depth, alpha=alpha)
        if steps:
            tree, _ = run_refine(tree, ds_tr, labels_tr[0], labels_tr[1], steps)
        rules = diffrules.extract(tree)
        fid1 = metrics.fidelity(
            jst.surrogate_predict_batch(tree, 1, ds_te), labels_te[0]
        )
        fid2 = metrics.fidelity(
            jst.surrogate_predict_batch(tree, 2, ds_te), labels_te[1]
        )
    elif method == "separate":
        rules = baselines.separate_rules(ds_tr, labels_tr[0], labels_tr[1], depth)
    else:
        rules = baselines.direct_dt_rules(ds_tr, labels_tr[0], labels_tr[1], depth)
    predicted = diffrules.ruleset_predict(rules, ds_te)
    num_rules, num_preds = diffrules.count_rules_and_predicates(rules)
    report = metrics.build_report(
        predicted, labels_te[0], labels_te[1], num_rules, num_preds, fid1, fid2
    )
    mode = "simplified" if alpha is None else repr(alpha)
    return {
        "method": method,
        "max_depth": depth,
        "mode": mode if method == "jst" else "",
        "refine_steps": steps,
        "seed": seed,
        "n_train": ds_tr.n,
        "n_test": ds_te.n,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "diff_rate": report.diff_rate,
        "num_rules": report.num_rules,
        "num_predicates": report.num_predicates,
        "fidelity_1": "" if fid1 is None else fid1,
        "fidelity_2": "" if fid2 is None else fid2,
    }


_SWEEP_FIELDS = [
    "method", "max_depth", "mode", "refine_steps", "seed", "n_train", "n_test",
    "precision", "recall", "f1", "diff_rate", "num_rules", "num_predicates",
    "fidelity_1", "fidelity_2",
]
_AGG_FIELDS = ["precision", "recall", "f1", "diff_rate", "num_rules",
               "num_predicates"]


def _parse_alphas(arg: str) -> list[float | None]:
    out: list[float | None] = []
    for tok in arg.split(","):
        tok = tok.strip()
        if not tok:
            continue
        out.append(None if tok == "simplified" else float(tok))
    if not out:
        raise SchemaError("empty --alphas grid")
    return out


def _parse_ints(arg: str, flag: str) -> list[int]:
    try:
        out = [int(t) for t in arg.split(",") if t.strip()]
    except ValueError as exc:
        raise SchemaError(f"bad {flag} value: {exc}") from exc
    if not out:
        raise SchemaError(f"empty {flag} grid")
    return out


def cmd_sweep(args) -> int:
    categorical = _parse_categorical(args.categorical)
    ds, labels = _load_predictions(
        args.data, args.pred1, args.pred2, getattr(args, "ignore", ""),
        categorical,
    )
    ds, labels = tabular.preprocess_labeled(ds, labels, categorical)
    depths = _parse_ints(args.depths, "--depths")
    alphas = _parse_alphas(args.alphas)
    steps_grid = _parse_ints(args.refine_steps, "--refine-steps")
    seeds = _parse_ints(args.seeds, "--seeds")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in ("jst", "separate", "direct-dt"):
            raise SchemaError(f"unknown sweep method {m!r}")

    tasks = []
    for method in methods:
        m_alphas = alphas if method == "jst" else [None]
        m_steps = steps_grid if method == "jst" else [0]
        for depth in depths:
            for alpha in m_alphas:
                for steps in m_steps:
                    for seed in seeds:
                        tasks.append(
                            (
                                ds.values, list(ds.columns),
                                labels[0].labels, labels[1].labels,
                                labels[0].num_classes, list(labels[0].classes),
                                method, depth, alpha, steps,
                                args.train_fraction, seed,
                            )
                        )

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=_SWEEP_FIELDS)
        w.writeheader()
        w.writerows(rows)

    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (row["method"], row["max_depth"], row["mode"], row["refine_steps"])
        groups.setdefault(key, []).append(row)
    summary_fields = ["method", "max_depth", "mode", "refine_steps", "n_seeds"]
    for f in _AGG_FIELDS:
        summary_fields += [f"{f}_mean", f"{f}_std"]
    with open(out / "sweep_summary.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=summary_fields)
        w.writeheader()
        for key in groups:  # insertion order follows the task grid
            rows_k = groups[key]
            entry = {
                "method": key[0], "max_depth": key[1], "mode": key[2],
                "refine_steps": key[3], "n_seeds": len(rows_k),
            }
            for f in _AGG_FIELDS:
                vals = np.asarray([float(r[f]) for r in rows_k])
                entry[f"{f}_mean"] = repr(float(vals.mean()))
                entry[f"{f}_std"] = repr(float(vals.std()))
            w.writerow(entry)
    return 0


def _add_data_flags(p, with_depth=True):
    p.add_argument("--data", required=True, help="input CSV (header row required)")
    p.add_argument("--pred1", required=True, help="first prediction column")
    p.add_argument("--pred2", required=True, help="second prediction column")
    p.add_argument("--categorical", default="",
                   help="comma-separated categorical feature columns")
    p.add_argument("--ignore", default="",
                   help="comma-separated columns to drop (e.g. other "
                        "models' prediction columns)")
    if with_depth:
        p.add_argument("--max-depth", type=int, default=6)
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jstdiff",
        description="Joint surrogate trees for differencing two classifiers",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a joint surrogate tree + diff rules")
    _add_data_flags(p)
    p.add_argument("--alpha", type=float, default=None,
                   help="divergence threshold; omit for the simplified criterion")
    p.add_argument("--simplified", action="store_true",
                   help="force the simplified divergence criterion (default)")
    p.add_argument("--refine", type=int, default=0,
                   help="refinement iterations after building")
    p.add_argument("--hide-agreeing", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("baseline", help="build a baseline diff ruleset")
    p.add_argument("method", choices=["direct-dt", "separate"])
    _add_data_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("eval", help="evaluate a ruleset against held-out data")
    p.add_argument("--rules", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--pred1", required=True)
    p.add_argument("--pred2", required=True)
    p.add_argument("--ignore", default="")
    p.add_argument("--jst", default=None,
                   help="jst.json for fidelity (default: sibling of --rules)")
    p.add_argument("--refinement", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("refine", help="refine a previously built tree in place")
    p.add_argument("--dir", required=True,
                   help="output directory of a previous build")
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--hide-agreeing", action="store_true")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("sweep", help="grid of configurations -> CSV of metrics")
    _add_data_flags(p, with_depth=False)
    p.add_argument("--depths", default="6")
    p.add_argument("--alphas", default="simplified",
                   help="comma list of alpha values and/or 'simplified'")
    p.add_argument("--refine-steps", default="0")
    p.add_argument("--seeds", default="0")
    p.add_argument("--methods", default="jst",
                   help="comma list from jst,separate,direct-dt")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export-dot", help="render jst.json as Graphviz DOT")
    p.add_argument("--jst", required=True)
    p.add_argument("--hide-agreeing", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("importance", help="per-feature importances of the surrogates")
    p.add_argument("--jst", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_importance)

    return ap


def main(argv=None) -> int:
    _setup_logging()
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except JstdiffError as exc:
        print(f"jstdiff: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"jstdiff: error: FileNotFound: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
