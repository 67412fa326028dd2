"""pymodels command line: train the zoo and export jstdiff-ready CSVs.

    pymodels export --dataset mushroom --models KN1,GNB --out out/
    pymodels pairs --report out/mushroom_accuracy.json
    pymodels datasets
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings


def cmd_export(args) -> int:
    from .export import train_and_export

    models = [m.strip() for m in args.models.split(",") if m.strip()]
    payload = train_and_export(
        args.dataset, models, args.out, cache=args.cache,
        split_seed=args.seed,
    )
    for abbr in models:
        acc = payload["models"][abbr]["accuracy"]
        print(f"{args.dataset} {abbr}: test accuracy {acc * 100:.2f}%")
    if "max_gap_pair" in payload:
        print(f"max gap pair: {'-'.join(payload['max_gap_pair'])}")
        print(f"min gap pair: {'-'.join(payload['min_gap_pair'])}")
    if payload["categorical"]:
        print(f"categorical columns: {','.join(payload['categorical'])}")
    return 0


def cmd_pairs(args) -> int:
    from .export import select_pairs

    with open(args.report, encoding="utf-8") as fh:
        payload = json.load(fh)
    report = payload.get("models", payload)
    max_pair, min_pair = select_pairs(report)
    print(f"max gap pair: {'-'.join(max_pair)}")
    print(f"min gap pair: {'-'.join(min_pair)}")
    return 0


def cmd_datasets(args) -> int:
    from .datasets import REGISTRY, cache_dir, dataset_available

    cache = cache_dir(args.cache)
    print(f"cache directory: {cache}")
    for name in sorted(REGISTRY):
        spec = REGISTRY[name]
        status = "available" if dataset_available(name, args.cache) else "missing"
        print(f"  {name:>10}: {status:>9}  {spec.urls[0] if spec.urls else ''}")
    return 0


def main(argv=None) -> int:
    warnings.filterwarnings("ignore")  # sklearn convergence chatter
    ap = argparse.ArgumentParser(prog="pymodels", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export", help="train models, export predictions CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--models", required=True,
                   help="comma list, e.g. KN1,GNB,LR")
    p.add_argument("--out", required=True)
    p.add_argument("--cache", default=None)
    p.add_argument("--seed", type=int, default=0,
                   help="random_state of the model-training split")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("pairs", help="max/min accuracy-gap pairs from a report")
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("datasets", help="list the registry and cache status")
    p.add_argument("--cache", default=None)
    p.set_defaults(func=cmd_datasets)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single diagnostic line contract
        print(f"pymodels: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
