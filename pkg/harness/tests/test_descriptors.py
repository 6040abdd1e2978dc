"""Descriptor block contracts: dimensions, order, determinism, exclusion."""

import pytest

from admetbench.descriptors import (
    AVALON_BITS,
    DESCRIPTOR_VERSION,
    ECFP_BITS,
    ERG_BITS,
    PROPERTY_COUNT,
    circular_bits,
    descriptor_names,
    erg_histogram,
    maplight_descriptors,
    path_bits,
    property_names,
)
from admetbench.smiles import parse_smiles

CAFFEINE = "Cn1cnc2c1c(=O)n(C)c(=O)n2C"


class TestDimensions:
    def test_exactly_2563_columns(self):
        names = descriptor_names()
        assert len(names) == 2563
        assert ECFP_BITS + AVALON_BITS + ERG_BITS + PROPERTY_COUNT == 2563

    def test_block_order_and_prefixes(self):
        names = descriptor_names()
        assert names[0] == "ecfp_0"
        assert names[1023] == "ecfp_1023"
        assert names[1024] == "avalon_0"
        assert names[2047] == "avalon_1023"
        assert names[2048] == "erg_0"
        assert names[2362] == "erg_314"
        assert all(n.startswith("prop_") for n in names[2363:])
        assert len(names[2363:]) == PROPERTY_COUNT

    def test_erg_block_is_21_pairs_by_15_distances(self):
        assert ERG_BITS == 21 * 15

    def test_names_are_unique(self):
        names = descriptor_names()
        assert len(set(names)) == len(names)


class TestDescription:
    def test_methane_mostly_zeros(self):
        result = maplight_descriptors(["C"])
        row = result.rows[0]
        assert len(row) == 2563
        nonzero = sum(1 for v in row if v != 0.0)
        assert nonzero < 2563 * 0.02

    def test_methane_weight(self):
        result = maplight_descriptors(["C"])
        prop = dict(zip(result.names[2363:], result.rows[0][2363:]))
        assert prop["prop_mol_weight"] == pytest.approx(16.043, abs=0.01)
        assert prop["prop_heavy_atoms"] == 1
        assert prop["prop_hydrogens"] == 4

    def test_benzene_ring_properties(self):
        result = maplight_descriptors(["c1ccccc1"])
        prop = dict(zip(result.names[2363:], result.rows[0][2363:]))
        assert prop["prop_ring_count"] == 1
        assert prop["prop_rings_size_6"] == 1
        assert prop["prop_aromatic_atoms"] == 6
        assert prop["prop_aromatic_bonds"] == 6

    def test_erg_records_donor_pair_distance(self):
        # OCCO: two hydroxyls three bonds apart; donor-donor is pair 0,
        # so distance 3 lands in slot 0*15 + 2
        erg = erg_histogram(parse_smiles("OCCO"))
        assert erg[2] >= 1.0

    def test_fingerprints_differ_between_molecules(self):
        result = maplight_descriptors(["CCO", CAFFEINE])
        assert result.rows[0][:2048] != result.rows[1][:2048]

    def test_row_order_matches_input(self):
        result = maplight_descriptors([CAFFEINE, "C"])
        solo = maplight_descriptors(["C"])
        assert result.rows[1] == solo.rows[0]


class TestDeterminism:
    def test_repeat_calls_identical(self):
        first = maplight_descriptors(["CCO", CAFFEINE, "c1ccccc1O"])
        second = maplight_descriptors(["CCO", CAFFEINE, "c1ccccc1O"])
        assert first.rows == second.rows
        assert first.names == second.names

    def test_version_recorded(self):
        result = maplight_descriptors(["C"])
        assert result.version == DESCRIPTOR_VERSION

    def test_bit_functions_are_pure(self):
        mol = parse_smiles(CAFFEINE)
        assert circular_bits(mol) == circular_bits(mol)
        assert path_bits(mol) == path_bits(mol)


class TestExclusion:
    def test_invalid_row_reported_not_dropped_silently(self):
        result = maplight_descriptors(["C", "xx(", "CCO"])
        assert len(result.rows) == 2
        assert result.kept_indices == [0, 2]
        assert len(result.excluded) == 1
        index, smiles, reason = result.excluded[0]
        assert index == 1
        assert smiles == "xx("
        assert reason

    def test_all_invalid_gives_empty_rows(self):
        result = maplight_descriptors(["(", ")"])
        assert not result.rows
        assert len(result.excluded) == 2

    def test_property_names_stable(self):
        assert property_names() == property_names()
        assert len(property_names()) == PROPERTY_COUNT
