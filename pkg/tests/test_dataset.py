"""Dataset loading, validation, binarization, and split views."""

import numpy as np
import pytest

from hamfex.dataset import (
    FeatureMatrix,
    LabeledDataset,
    SplitView,
    binarize,
    fit_view,
    load_labeled_csv,
    save_labeled_csv,
)
from hamfex.errors import ValidationError


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoad:
    def test_smallest_well_formed(self, tmp_path):
        path = write(tmp_path, "f1,f2,label\n1,0.5,0\n0,1.5,1\n2,2.5,1\n")
        ds = load_labeled_csv(path, "label")
        assert ds.features.column_names == ["f1", "f2"]
        assert ds.n_rows == 3
        assert list(ds.labels) == [0, 1, 1]
        assert ds.split is None

    def test_kind_inference(self, tmp_path):
        path = write(
            tmp_path,
            "b,c,r,label\n0,0,0.5,0\n1,3,1.25,1\n0,1,-2.0,0\n1,0,7,1\n",
        )
        ds = load_labeled_csv(path, "label")
        assert ds.features.column_kinds == ["binary", "count", "continuous"]

    def test_non_binary_label_names_row(self, tmp_path):
        rows = "\n".join(f"{i},0" for i in range(4)) + "\n3,2\n"
        path = write(tmp_path, "f1,label\n" + rows)
        with pytest.raises(ValidationError, match="row 5"):
            load_labeled_csv(path, "label")

    def test_unparseable_cell_names_row_and_column(self, tmp_path):
        path = write(tmp_path, "f1,label\n1,0\nnan,1\n")
        with pytest.raises(ValidationError, match="row 2.*'f1'"):
            load_labeled_csv(path, "label")

    def test_missing_label_column(self, tmp_path):
        path = write(tmp_path, "f1,f2\n1,2\n")
        with pytest.raises(ValidationError, match="'y'"):
            load_labeled_csv(path, "y")

    def test_bad_split_tag(self, tmp_path):
        path = write(tmp_path, "f1,label,split\n1,0,train\n2,1,holdout\n")
        with pytest.raises(ValidationError, match="row 2"):
            load_labeled_csv(path, "label", "split")

    def test_id_column_carried(self, tmp_path):
        path = write(tmp_path, "id,f1,label\nmol_a,1,0\nmol_b,0,1\n")
        ds = load_labeled_csv(path, "label")
        assert ds.ids == ["mol_a", "mol_b"]
        assert ds.features.column_names == ["f1"]

    def test_ragged_row_rejected(self, tmp_path):
        path = write(tmp_path, "f1,f2,label\n1,2,0\n1,0\n")
        with pytest.raises(ValidationError, match="row 2"):
            load_labeled_csv(path, "label")


class TestRoundTrip:
    def test_save_load_bit_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        values = np.column_stack([
            rng.integers(0, 2, 20).astype(float),
            rng.integers(0, 9, 20).astype(float),
            rng.standard_normal(20) * 1e-7,
            rng.standard_normal(20) * 1e9,
        ])
        features = FeatureMatrix.from_values(["a", "b", "c", "d"], values)
        split = np.array(
            ["train"] * 12 + ["valid"] * 4 + ["test"] * 4, dtype=object
        )
        ds = LabeledDataset(features, rng.integers(0, 2, 20), split,
                            [f"m{i}" for i in range(20)])
        path = tmp_path / "round.csv"
        save_labeled_csv(ds, path)
        back = load_labeled_csv(path, "label", "split")
        assert np.array_equal(back.features.values, ds.features.values)
        assert back.features.column_names == ds.features.column_names
        assert np.array_equal(back.labels, ds.labels)
        assert list(back.split) == list(ds.split)
        assert back.ids == ds.ids

    def test_row_order_preserved(self, tmp_path):
        path = write(tmp_path, "f1,label\n9,1\n1,0\n5,1\n")
        ds = load_labeled_csv(path, "label")
        assert list(ds.features.values[:, 0]) == [9.0, 1.0, 5.0]


class TestBinarize:
    def test_presence_threshold(self):
        m = FeatureMatrix.from_values(["c"], np.array([[0.0], [3.0], [1.0], [0.0]]))
        out = binarize(m, [0])
        assert list(out.values[:, 0]) == [0.0, 1.0, 1.0, 0.0]
        assert out.column_kinds == ["binary"]

    def test_idempotent(self):
        m = FeatureMatrix.from_values(
            ["a", "b"], np.array([[0.0, 2.5], [5.0, 0.0], [1.0, -3.0]])
        )
        once = binarize(m, [0, 1])
        twice = binarize(once, [0, 1])
        assert np.array_equal(once.values, twice.values)

    def test_negative_continuous_maps_to_zero(self):
        m = FeatureMatrix.from_values(["a"], np.array([[0.0], [2.5], [-1.0]]))
        assert list(binarize(m, [0]).values[:, 0]) == [0.0, 1.0, 0.0]

    def test_untouched_columns_keep_values(self):
        m = FeatureMatrix.from_values(["a", "b"], np.array([[2.0, 7.0]]))
        out = binarize(m, [0])
        assert out.values[0, 1] == 7.0
        assert out.column_kinds[1] == m.column_kinds[1]

    def test_out_of_range_index(self):
        m = FeatureMatrix.from_values(["a"], np.array([[1.0]]))
        with pytest.raises(ValidationError):
            binarize(m, [3])


class TestMatrixInvariants:
    def test_nan_rejected(self):
        with pytest.raises(ValidationError, match="non-finite"):
            FeatureMatrix.from_values(["a"], np.array([[np.nan]]))

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValidationError, match="unique"):
            FeatureMatrix.from_values(["a", "a"], np.zeros((2, 2)))

    def test_kind_tag_enforced(self):
        with pytest.raises(ValidationError, match="binary"):
            FeatureMatrix(["a"], np.array([[2.0]]), ["binary"])

    def test_values_read_only(self):
        m = FeatureMatrix.from_values(["a"], np.array([[1.0]]))
        with pytest.raises(ValueError):
            m.values[0, 0] = 5.0


class TestSplitView:
    def make(self):
        features = FeatureMatrix.from_values(
            ["f"], np.arange(10, dtype=float).reshape(-1, 1)
        )
        split = np.array(
            ["train"] * 6 + ["valid"] * 2 + ["test"] * 2, dtype=object
        )
        return LabeledDataset(features, np.tile([0, 1], 5), split)

    def test_fit_view_is_train_plus_valid(self):
        view = fit_view(self.make())
        assert view.n_rows == 8
        assert list(view.row_indices) == list(range(8))

    def test_all_train(self):
        ds = self.make()
        ds = LabeledDataset(
            ds.features, ds.labels, np.array(["train"] * 10, dtype=object)
        )
        assert fit_view(ds).n_rows == 10

    def test_no_split_tags_errors(self):
        ds = self.make()
        ds = LabeledDataset(ds.features, ds.labels, None)
        with pytest.raises(ValidationError, match="split"):
            fit_view(ds)

    def test_test_only_split_errors(self):
        ds = self.make()
        ds = LabeledDataset(
            ds.features, ds.labels, np.array(["test"] * 10, dtype=object)
        )
        with pytest.raises(ValidationError, match="empty"):
            fit_view(ds)

    def test_view_values_and_labels_align(self):
        view = fit_view(self.make())
        assert list(view.column_values(0)) == list(range(8))
        assert list(view.labels()) == [0, 1] * 4

    def test_binary_column_binarizes(self):
        view = fit_view(self.make())
        assert list(view.binary_column(0)) == [0.0] + [1.0] * 7
