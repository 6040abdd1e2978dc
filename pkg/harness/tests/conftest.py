"""Shared fixtures: a fabricated miniature benchmark cache.

The real benchmarks need the TDC data loader; these tests run offline, so
a tiny task with the same on-disk layout stands in. The label is simply
"molecule contains nitrogen", which plain descriptors can learn, keeping
GBDT fits quick and metrics well defined.
"""

import csv
import random

import pytest

CARBON_PARTS = ["CC", "CCC", "C(C)C", "CCO", "c1ccccc1", "CCl", "C=C", "CCOC"]
NITRO_PARTS = ["CN", "CCN", "c1ccncc1", "NCC", "N(C)C", "CC(N)C", "NCCO",
               "Nc1ccccc1"]
SPLIT_SIZES = (("train", 48), ("valid", 12), ("test", 20))


def make_mini_task(data_dir, task="HIA_Hou", seeds=(1, 2, 3, 4, 5),
                   split_sizes=SPLIT_SIZES):
    """Write split CSVs in the cache layout for a synthetic task."""
    for seed in seeds:
        rng = random.Random(100 + seed)
        for name, count in split_sizes:
            directory = data_dir / task / f"seed{seed}"
            directory.mkdir(parents=True, exist_ok=True)
            with open(directory / f"{name}.csv", "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["id", "smiles", "label"])
                for i in range(count):
                    label = rng.randint(0, 1)
                    pool = NITRO_PARTS if label else CARBON_PARTS
                    smiles = rng.choice(pool) + rng.choice(["", "C", "CC"])
                    writer.writerow([f"{name}{seed}_{i}", smiles, label])
    return data_dir


@pytest.fixture(scope="session")
def mini_data_dir(tmp_path_factory):
    return make_mini_task(tmp_path_factory.mktemp("mini_data"))
