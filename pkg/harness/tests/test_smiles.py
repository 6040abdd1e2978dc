"""Parser unit tests: graphs, hydrogens, rings, distances, rejects."""

import pytest

from admetbench.errors import SmilesError
from admetbench.smiles import (
    parse_smiles,
    ring_info,
    topological_distances,
)


class TestAtomAndBondParsing:
    def test_methane(self):
        mol = parse_smiles("C")
        assert len(mol.atoms) == 1
        assert not mol.bonds
        assert mol.implicit_hydrogens(0) == 4

    def test_ethanol_chain(self):
        mol = parse_smiles("CCO")
        assert [a.symbol for a in mol.atoms] == ["C", "C", "O"]
        assert len(mol.bonds) == 2
        assert [mol.implicit_hydrogens(i) for i in range(3)] == [3, 2, 1]

    def test_branching(self):
        mol = parse_smiles("CC(C)C")
        assert mol.heavy_degree(1) == 3
        assert mol.implicit_hydrogens(1) == 1

    def test_double_and_triple_bonds(self):
        ethene = parse_smiles("C=C")
        assert ethene.bonds[0].order == 2
        assert ethene.implicit_hydrogens(0) == 2
        nitrile = parse_smiles("C#N")
        assert nitrile.bonds[0].order == 3
        assert nitrile.implicit_hydrogens(1) == 0

    def test_two_letter_organic_atoms(self):
        mol = parse_smiles("ClCBr")
        assert [a.symbol for a in mol.atoms] == ["Cl", "C", "Br"]

    def test_aromatic_ring(self):
        mol = parse_smiles("c1ccccc1")
        assert len(mol.atoms) == 6
        assert len(mol.bonds) == 6
        assert all(a.aromatic for a in mol.atoms)
        assert all(b.order == 1.5 for b in mol.bonds)
        # each aromatic CH carries one hydrogen
        assert all(mol.implicit_hydrogens(i) == 1 for i in range(6))

    def test_pyridine_nitrogen_has_no_hydrogen(self):
        mol = parse_smiles("c1ccncc1")
        nitrogen = next(i for i, a in enumerate(mol.atoms) if a.symbol == "N")
        assert mol.implicit_hydrogens(nitrogen) == 0

    def test_stereo_markers_ignored(self):
        mol = parse_smiles("F/C=C/F")
        assert len(mol.atoms) == 4
        assert sorted(b.order for b in mol.bonds) == [1, 1, 2]

    def test_dot_separates_fragments(self):
        mol = parse_smiles("CC.CC")
        assert len(mol.atoms) == 4
        assert len(mol.bonds) == 2


class TestBracketAtoms:
    def test_ammonium(self):
        atom = parse_smiles("[NH4+]").atoms[0]
        assert (atom.symbol, atom.charge, atom.explicit_h) == ("N", 1, 4)

    def test_isotope(self):
        assert parse_smiles("[13CH4]").atoms[0].isotope == 13

    def test_anion_without_h_spec_gets_none(self):
        mol = parse_smiles("[O-]C")
        assert mol.atoms[0].charge == -1
        assert mol.implicit_hydrogens(0) == 0

    def test_general_two_letter_element(self):
        assert parse_smiles("[Se]").atoms[0].symbol == "Se"

    def test_bad_bracket(self):
        with pytest.raises(SmilesError):
            parse_smiles("[]")


class TestRingClosures:
    def test_cyclohexane(self):
        mol = parse_smiles("C1CCCCC1")
        assert len(mol.bonds) == 6
        atoms, sizes = ring_info(mol)
        assert atoms == set(range(6))
        assert sizes == [6]

    def test_percent_closure(self):
        mol = parse_smiles("C%10CCCCC%10")
        assert len(mol.bonds) == 6

    def test_naphthalene_two_fused_six_rings(self):
        atoms, sizes = ring_info(parse_smiles("c1ccc2ccccc2c1"))
        assert len(atoms) == 10
        assert sizes == [6, 6]

    def test_chain_has_no_rings(self):
        atoms, sizes = ring_info(parse_smiles("CCCC"))
        assert not atoms
        assert not sizes


class TestDistances:
    def test_butane_end_to_end(self):
        table = topological_distances(parse_smiles("CCCC"))
        assert table[0][3] == 3
        assert table[0][0] == 0

    def test_disconnected_is_minus_one(self):
        table = topological_distances(parse_smiles("CC.CC"))
        assert table[0][2] == -1

    def test_ring_takes_shorter_way_around(self):
        table = topological_distances(parse_smiles("C1CCCCC1"))
        assert table[0][3] == 3
        assert table[0][5] == 1


class TestRejects:
    @pytest.mark.parametrize("bad", [
        "", "C1CC", "C(C", "C)", "t", "C=", "[C", "C%1",
    ])
    def test_malformed_input(self, bad):
        with pytest.raises(SmilesError):
            parse_smiles(bad)

    def test_unknown_bracket_element_is_accepted(self):
        # brackets are explicit; reject only malformed tokens, not
        # elements outside the organic subset (real data has [Se], [As])
        assert parse_smiles("[Zz]").atoms[0].symbol == "Zz"

    def test_error_names_position(self):
        with pytest.raises(SmilesError, match="position"):
            parse_smiles("CCtCC")
