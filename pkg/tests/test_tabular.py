import numpy as np
import pytest

from jstdiff import tabular
from jstdiff.errors import (
    DegenerateSplit,
    EmptyDataset,
    MissingColumn,
    ParseError,
)
from conftest import random_dataset


def write_csv(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestLoadCsv:
    def test_basic_shape(self, tmp_path):
        p = write_csv(tmp_path, "a,b,p1,p2\n1,2,x,y\n3,4,x,x\n5,6,y,y\n")
        ds, labels = tabular.load_csv(p, ["p1", "p2"])
        assert ds.columns == ("a", "b")
        assert (ds.n, ds.d) == (3, 2)
        assert len(labels) == 2
        assert len(labels[0]) == 3 and len(labels[1]) == 3

    def test_shared_label_encoding(self, tmp_path):
        # ids must be comparable across the two prediction columns
        p = write_csv(tmp_path, "a,p1,p2\n1,x,y\n2,y,x\n3,x,x\n")
        _, (l1, l2) = tabular.load_csv(p, ["p1", "p2"])
        assert l1.classes == l2.classes == ("x", "y")
        assert l1.labels.tolist() == [0, 1, 0]
        assert l2.labels.tolist() == [1, 0, 0]
        assert (l1.labels != l2.labels).tolist() == [True, True, False]

    def test_missing_label_column(self, tmp_path):
        p = write_csv(tmp_path, "a,b\n1,2\n")
        with pytest.raises(MissingColumn):
            tabular.load_csv(p, ["p9"])

    def test_parse_error_names_cell(self, tmp_path):
        p = write_csv(tmp_path, "a,b,p\n1,2,u\n1,x,v\n")
        with pytest.raises(ParseError) as err:
            tabular.load_csv(p, ["p"])
        assert err.value.row == 1
        assert err.value.col == "b"

    def test_categorical_column_accepts_strings(self, tmp_path):
        p = write_csv(tmp_path, "a,c,p\n1,red,u\n2,green,v\n3,red,u\n")
        ds, _ = tabular.load_csv(p, ["p"], categorical=["c"])
        assert ds.categorical_levels["c"] == ("red", "green")
        assert ds.values[:, 1].tolist() == [0.0, 1.0, 0.0]

    def test_empty_file(self, tmp_path):
        p = write_csv(tmp_path, "a,p\n")
        with pytest.raises(EmptyDataset):
            tabular.load_csv(p, ["p"])


class TestPreprocess:
    def test_dedup_keeps_first(self):
        ds = tabular.Dataset(("a",), np.array([[1.0], [1.0], [2.0]]))
        out = tabular.preprocess(ds)
        assert out.values.tolist() == [[1.0], [2.0]]

    def test_one_hot_two_values(self, tmp_path):
        p = write_csv(tmp_path, "c,p\nr,u\ng,v\n")
        ds, _ = tabular.load_csv(p, ["p"], categorical=["c"])
        out = tabular.preprocess(ds, ["c"])
        assert out.columns == ("c=r", "c=g")
        assert out.values.tolist() == [[1.0, 0.0], [0.0, 1.0]]

    def test_one_hot_indicators_sum_to_one(self, rng):
        n = 40
        codes = rng.integers(0, 5, size=n).astype(np.float64)
        other = rng.normal(size=n)
        ds = tabular.Dataset(("c", "z"), np.column_stack([codes, other]))
        out = tabular.encode_one_hot(ds, ["c"])
        ind = [j for j, c in enumerate(out.columns) if c.startswith("c=")]
        assert np.allclose(out.values[:, ind].sum(axis=1), 1.0)
        # non-categorical column untouched
        z = out.columns.index("z")
        assert np.array_equal(out.values[:, z], other)

    def test_one_hot_width_is_total_distinct_count(self, rng):
        n = 60
        cols = {}
        distinct = 0
        for name, k in (("c1", 3), ("c2", 5), ("c3", 2)):
            cols[name] = rng.integers(0, k, size=n).astype(np.float64)
            distinct += len(set(cols[name].tolist()))
        ds = tabular.Dataset(tuple(cols), np.column_stack(list(cols.values())))
        out = tabular.encode_one_hot(ds, list(cols))
        assert out.d == distinct

    def test_dedup_idempotent(self, rng):
        for trial in range(25):
            X, *_ = random_dataset(np.random.default_rng(trial), n_max=30, d_max=3)
            ds = tabular.Dataset(tuple(f"x{i}" for i in range(X.shape[1])), X)
            once = tabular.preprocess(ds)
            twice = tabular.preprocess(once)
            assert once.values.tolist() == twice.values.tolist()
            assert once.columns == twice.columns

    def test_labels_stay_aligned(self):
        ds = tabular.Dataset(("a",), np.array([[1.0], [1.0], [2.0]]))
        lv = tabular.LabelVector(np.array([0, 1, 1]), 2, ("n", "y"))
        out, (kept,) = tabular.preprocess_labeled(ds, [lv])
        assert out.n == 2
        # first occurrence kept: row 0 and row 2
        assert kept.labels.tolist() == [0, 1]


class TestSplit:
    def test_sizes_and_partition(self):
        ds = tabular.Dataset(("a",), np.arange(10, dtype=np.float64)[:, None])
        lv = tabular.LabelVector(np.arange(10) % 2, 2)
        (tr, ltr), (te, lte) = tabular.split(ds, [lv], tabular.SplitSpec(0.7, 1))
        assert tr.n == 7 and te.n == 3
        got = sorted(tr.values[:, 0].tolist() + te.values[:, 0].tolist())
        assert got == list(range(10))
        # labels follow their rows
        assert ltr[0].labels.tolist() == [int(v) % 2 for v in tr.values[:, 0]]

    def test_deterministic(self):
        ds = tabular.Dataset(("a",), np.arange(20, dtype=np.float64)[:, None])
        lv = tabular.LabelVector(np.arange(20) % 3, 3)
        a = tabular.split(ds, [lv], tabular.SplitSpec(0.7, 7))
        b = tabular.split(ds, [lv], tabular.SplitSpec(0.7, 7))
        assert a[0][0].values.tolist() == b[0][0].values.tolist()
        assert a[1][0].values.tolist() == b[1][0].values.tolist()
        c = tabular.split(ds, [lv], tabular.SplitSpec(0.7, 8))
        assert a[0][0].values.tolist() != c[0][0].values.tolist()

    def test_degenerate(self):
        ds = tabular.Dataset(("a",), np.array([[1.0]]))
        with pytest.raises(DegenerateSplit):
            tabular.split(ds, [], tabular.SplitSpec(0.7, 0))
        with pytest.raises(DegenerateSplit):
            tabular.SplitSpec(1.5, 0)
