"""Benchmark dataset registry: documented source URLs, cached local copies,
and per-dataset categorical column lists.

Files are cached under $PYMODELS_DATA (default ~/.cache/pymodels). A file's
sha256 is recorded next to it on first fetch and verified on later loads
(trust on first use); environments without network access can place the
documented file into the cache directory by hand. The breast-cancer table
ships with scikit-learn and needs no network at all.
"""

from __future__ import annotations

import hashlib
import os
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import pandas as pd


class DatasetNotFound(RuntimeError):
    pass


def cache_dir(override: str | None = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get("PYMODELS_DATA")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "pymodels"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _fetch(url: str, dest: Path) -> Path:
    """Return the cached file, downloading and recording its digest if
    needed; verify the digest on later loads."""
    digest_file = dest.with_suffix(dest.suffix + ".sha256")
    if dest.exists():
        if digest_file.exists():
            want = digest_file.read_text().strip()
            have = _sha256(dest)
            if have != want:
                raise DatasetNotFound(
                    f"{dest} does not match its recorded sha256 "
                    f"({have} != {want}); delete both to re-fetch"
                )
        return dest
    dest.parent.mkdir(parents=True, exist_ok=True)
    try:
        with urllib.request.urlopen(url, timeout=60) as resp:
            data = resp.read()
    except OSError as exc:
        raise DatasetNotFound(
            f"{dest.name} is not cached and {url} is unreachable ({exc}); "
            f"place the file at {dest} by hand"
        ) from exc
    dest.write_bytes(data)
    digest_file.write_text(_sha256(dest) + "\n")
    return dest


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    loader: Callable[[Path], tuple[pd.DataFrame, pd.Series]]
    categorical: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()
    notes: str = ""


def _csv_loader(filename, url, columns, label, sep=",", header=None,
                skiprows=0, strip=False):
    def load(cache: Path):
        path = _fetch(url, cache / filename)
        df = pd.read_csv(path, sep=sep, header=header, skiprows=skiprows,
                         names=columns if header is None else None,
                         skipinitialspace=True)
        if strip:
            for c in df.columns:
                if df[c].dtype == object:
                    df[c] = df[c].str.strip(" .")
        y = df[label].astype(str)
        return df.drop(columns=[label]), y

    return load


def _keel_dat_loader(filename, url, columns, label):
    """KEEL .dat files: '@' header lines followed by CSV rows."""

    def load(cache: Path):
        path = _fetch(url, cache / filename)
        rows = [ln for ln in path.read_text().splitlines()
                if ln and not ln.startswith("@")]
        from io import StringIO

        df = pd.read_csv(StringIO("\n".join(rows)), header=None, names=columns,
                         skipinitialspace=True)
        y = df[label].astype(str).str.strip()
        return df.drop(columns=[label]), y

    return load


def _openml_loader(data_id, drop=()):
    def load(cache: Path):
        from sklearn.datasets import fetch_openml

        try:
            bunch = fetch_openml(
                data_id=data_id, as_frame=True, data_home=str(cache),
                parser="auto",
            )
        except Exception as exc:  # network or cache failure
            raise DatasetNotFound(
                f"OpenML data_id={data_id} is not cached under {cache} and "
                f"could not be fetched ({exc})"
            ) from exc
        df = bunch.frame
        y = df[bunch.target_names[0]].astype(str)
        feats = df.drop(columns=list(bunch.target_names) + list(drop),
                        errors="ignore")
        return feats, y

    return load


def _bc_loader(cache: Path):
    from sklearn.datasets import load_breast_cancer

    bunch = load_breast_cancer(as_frame=True)
    return bunch.data, bunch.target.map({0: "malignant", 1: "benign"}).astype(str)


def _heloc_loader(cache: Path):
    path = cache / "heloc_dataset_v1.csv"
    if not path.exists():
        raise DatasetNotFound(
            "the HELOC table is gated behind the FICO community; download "
            f"heloc_dataset_v1.csv there and place it at {path}"
        )
    df = pd.read_csv(path)
    y = df["RiskPerformance"].astype(str)
    return df.drop(columns=["RiskPerformance"]), y


_UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

_ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]
_ADULT_CATEGORICAL = (
    "workclass", "education", "marital-status", "occupation",
    "relationship", "race", "sex", "native-country",
)

_MUSHROOM_COLUMNS = [
    "class", "cap-shape", "cap-surface", "cap-color", "bruises", "odor",
    "gill-attachment", "gill-spacing", "gill-size", "gill-color",
    "stalk-shape", "stalk-root", "stalk-surface-above-ring",
    "stalk-surface-below-ring", "stalk-color-above-ring",
    "stalk-color-below-ring", "veil-type", "veil-color", "ring-number",
    "ring-type", "spore-print-color", "population", "habitat",
]

_TTT_COLUMNS = [
    "top-left", "top-middle", "top-right", "middle-left", "middle-middle",
    "middle-right", "bottom-left", "bottom-middle", "bottom-right", "class",
]

_PIMA_COLUMNS = ["Preg", "Plas", "Pres", "Skin", "Insu", "Mass", "Pedi",
                 "Age", "class"]

_MAGIC_COLUMNS = ["fLength", "fWidth", "fSize", "fConc", "fConc1", "fAsym",
                  "fM3Long", "fM3Trans", "fAlpha", "fDist", "class"]

_BANKNOTE_COLUMNS = ["variance", "skewness", "curtosis", "entropy", "class"]


def _adult_loader(cache: Path):
    url = f"{_UCI}/adult/adult.data"
    url_test = f"{_UCI}/adult/adult.test"
    p1 = _fetch(url, cache / "adult.data")
    p2 = _fetch(url_test, cache / "adult.test")
    frames = []
    for path, skip in ((p1, 0), (p2, 1)):  # adult.test has a comment line
        df = pd.read_csv(path, header=None, names=_ADULT_COLUMNS,
                         skiprows=skip, skipinitialspace=True)
        frames.append(df)
    df = pd.concat(frames, ignore_index=True)
    df["income"] = df["income"].astype(str).str.strip(" .")
    df = df.drop(columns=["fnlwgt"])
    y = df["income"]
    return df.drop(columns=["income"]), y


def _wine_loader(filename, url):
    def load(cache: Path):
        path = _fetch(url, cache / filename)
        df = pd.read_csv(path, sep=";")
        y = df["quality"].astype(str)
        return df.drop(columns=["quality"]), y

    return load


REGISTRY: dict[str, DatasetSpec] = {
    "adult": DatasetSpec(
        "adult", _adult_loader, _ADULT_CATEGORICAL,
        (f"{_UCI}/adult/adult.data", f"{_UCI}/adult/adult.test"),
        "fnlwgt dropped; train+test concatenated; '?' kept as a category",
    ),
    "bankm": DatasetSpec(
        "bankm", _openml_loader(44126), (),
        ("https://www.openml.org/d/44126",),
        "balanced numeric bank-marketing variant (10578 x 7)",
    ),
    "banknote": DatasetSpec(
        "banknote",
        _csv_loader("data_banknote_authentication.txt",
                    f"{_UCI}/00267/data_banknote_authentication.txt",
                    _BANKNOTE_COLUMNS, "class"),
        (),
        (f"{_UCI}/00267/data_banknote_authentication.txt",),
    ),
    "diabetes": DatasetSpec(
        "diabetes",
        _keel_dat_loader("pima.dat",
                         "https://sci2s.ugr.es/keel/dataset/data/classification/pima.zip",
                         _PIMA_COLUMNS, "class"),
        (),
        ("https://sci2s.ugr.es/keel/dataset/data/classification/pima.zip",),
        "KEEL pima table; place the unzipped pima.dat in the cache",
    ),
    "magic": DatasetSpec(
        "magic",
        _csv_loader("magic04.data", f"{_UCI}/magic/magic04.data",
                    _MAGIC_COLUMNS, "class"),
        (),
        (f"{_UCI}/magic/magic04.data",),
    ),
    "heloc": DatasetSpec(
        "heloc", _heloc_loader, (),
        ("https://community.fico.com/s/explainable-machine-learning-challenge",),
        "gated download; manual placement required",
    ),
    "mushroom": DatasetSpec(
        "mushroom",
        _csv_loader("agaricus-lepiota.data",
                    f"{_UCI}/mushroom/agaricus-lepiota.data",
                    _MUSHROOM_COLUMNS, "class"),
        tuple(c for c in _MUSHROOM_COLUMNS if c != "class"),
        (f"{_UCI}/mushroom/agaricus-lepiota.data",),
        "all 22 features categorical",
    ),
    "tictactoe": DatasetSpec(
        "tictactoe",
        _csv_loader("tic-tac-toe.data", f"{_UCI}/tic-tac-toe/tic-tac-toe.data",
                    _TTT_COLUMNS, "class"),
        tuple(c for c in _TTT_COLUMNS if c != "class"),
        (f"{_UCI}/tic-tac-toe/tic-tac-toe.data",),
    ),
    "bc": DatasetSpec(
        "bc", _bc_loader, (),
        ("https://archive.ics.uci.edu/dataset/17",),
        "ships with scikit-learn; no network needed",
    ),
    "waveform": DatasetSpec(
        "waveform", _openml_loader(60), (),
        ("https://www.openml.org/d/60",),
    ),
    "eye": DatasetSpec(
        "eye", _openml_loader(1044, drop=("lineNo",)), (),
        ("https://www.openml.org/d/1044",),
        "lineNo identifier column dropped",
    ),
    "whitewine": DatasetSpec(
        "whitewine",
        _wine_loader("winequality-white.csv",
                     f"{_UCI}/wine-quality/winequality-white.csv"),
        (),
        (f"{_UCI}/wine-quality/winequality-white.csv",),
    ),
    "redwine": DatasetSpec(
        "redwine",
        _wine_loader("winequality-red.csv",
                     f"{_UCI}/wine-quality/winequality-red.csv"),
        (),
        (f"{_UCI}/wine-quality/winequality-red.csv",),
    ),
}


def load_dataset(name: str, cache: str | None = None):
    """(features DataFrame, label Series, categorical column names).

    Duplicate feature rows are dropped (first occurrence kept) and rows
    with missing numeric values removed; categorical NaNs become the
    literal category "?".
    """
    try:
        spec = REGISTRY[name]
    except KeyError:
        raise DatasetNotFound(
            f"unknown dataset {name!r}; known: {', '.join(sorted(REGISTRY))}"
        ) from None
    feats, y = spec.loader(cache_dir(cache))
    for c in spec.categorical:
        feats[c] = feats[c].astype(str).fillna("?")
    numeric = [c for c in feats.columns if c not in spec.categorical]
    feats[numeric] = feats[numeric].apply(pd.to_numeric)
    keep = ~feats[numeric].isna().any(axis=1)
    feats, y = feats[keep], y[keep]
    dup = feats.duplicated(keep="first")
    feats, y = feats[~dup], y[~dup]
    return feats.reset_index(drop=True), y.reset_index(drop=True), spec.categorical


def dataset_available(name: str, cache: str | None = None) -> bool:
    try:
        load_dataset(name, cache)
        return True
    except DatasetNotFound:
        return False
