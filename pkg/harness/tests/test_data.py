"""Split cache behavior: layout, validation, honest unavailability."""

import pytest

from admetbench.data import (
    data_available,
    fetch_benchmark,
    read_split_csv,
    split_dir,
    write_split_csv,
)
from admetbench.errors import DataUnavailableError, HarnessError


class TestCache:
    def test_fetch_served_from_cache(self, mini_data_dir):
        splits = fetch_benchmark("HIA_Hou", mini_data_dir, seeds=(1, 2))
        assert sorted(splits) == [1, 2]
        files = splits[1]
        assert files.train.exists()
        assert files.valid.exists()
        assert files.test.exists()

    def test_repeated_fetch_identical_bytes(self, mini_data_dir):
        first = fetch_benchmark("HIA_Hou", mini_data_dir, seeds=(1,))[1]
        before = first.train.read_bytes()
        second = fetch_benchmark("HIA_Hou", mini_data_dir, seeds=(1,))[1]
        assert second.train.read_bytes() == before

    def test_data_available(self, mini_data_dir, tmp_path):
        assert data_available("HIA_Hou", mini_data_dir, seeds=(1, 2))
        assert not data_available("HIA_Hou", tmp_path)
        assert not data_available("NotATask", mini_data_dir)

    def test_round_trip(self, tmp_path):
        rows = [("m1", "CCO", 1), ("m2", "C", 0)]
        path = tmp_path / "train.csv"
        write_split_csv(path, rows)
        assert read_split_csv(path) == rows


class TestValidation:
    def test_unknown_benchmark_lists_tasks(self, mini_data_dir):
        with pytest.raises(HarnessError, match="BBB_Martins"):
            fetch_benchmark("Mystery", mini_data_dir)

    def test_missing_columns_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,structure\n1,CC\n")
        with pytest.raises(HarnessError, match="expected columns"):
            read_split_csv(path)

    def test_non_binary_label_names_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,smiles,label\nm1,CC,1\nm2,CC,2\n")
        with pytest.raises(HarnessError, match="row 2"):
            read_split_csv(path)


class TestUnavailable:
    def test_missing_cache_without_tdc_is_explicit(self, tmp_path):
        # the tdc package is not installed here, so the download branch
        # must explain how to provision the cache instead of fabricating
        with pytest.raises(DataUnavailableError, match="tdc"):
            fetch_benchmark("AMES", tmp_path)

    def test_split_dir_layout(self, tmp_path):
        assert split_dir(tmp_path, "AMES", 3) == tmp_path / "AMES" / "seed3"
