"""Molecular descriptor blocks: 1,024 + 1,024 + 315 + 200 = 2,563 columns.

The four blocks mirror the usual fingerprint families in spirit:

- ``ecfp_0..1023``: hashed circular substructure bits, radius 2.
- ``avalon_0..1023``: hashed linear-path bits, paths of 1-7 bonds.
- ``erg_0..314``: pharmacophore pair histogram — 21 unordered pairs of six
  pharmacophore types, by topological distance 1-15 (21 x 15 = 315).
- ``prop_<name>`` (200): named scalar properties plus hashed
  atom-environment counts padding the block to exactly 200 columns.

All hashing is version-pinned BLAKE2 (no Python hash randomization), so
a fixed input list reproduces byte-identical output. rdkit-style toolkit
fingerprints are deliberately not a dependency: the benchmark contract
needs stable, deterministic columns, not any particular toolkit's bits.
"""

import hashlib
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .errors import SmilesError
from .smiles import (
    AROMATIC_ORDER,
    Molecule,
    parse_smiles,
    ring_info,
    topological_distances,
)

DESCRIPTOR_VERSION = "admetbench-descriptors-1"

ECFP_BITS = 1024
AVALON_BITS = 1024
ERG_TYPES = ("donor", "acceptor", "aromatic", "aliphatic_ring",
             "positive", "negative")
ERG_MAX_DISTANCE = 15
ERG_BITS = len(list(combinations_with_replacement(ERG_TYPES, 2))) * ERG_MAX_DISTANCE
PROPERTY_COUNT = 200

_ELEMENTS = ("C", "N", "O", "S", "P", "F", "Cl", "Br", "I", "B")
_ATOMIC_MASS = {"C": 12.011, "N": 14.007, "O": 15.999, "S": 32.06,
                "P": 30.974, "F": 18.998, "Cl": 35.45, "Br": 79.904,
                "I": 126.904, "B": 10.81, "H": 1.008}
_ELECTRONEGATIVITY = {"C": 2.55, "N": 3.04, "O": 3.44, "S": 2.58,
                      "P": 2.19, "F": 3.98, "Cl": 3.16, "Br": 2.96,
                      "I": 2.66, "B": 2.04, "H": 2.20}


def _hash_bit(parts, n_bits: int) -> int:
    digest = hashlib.blake2b(
        "|".join(str(p) for p in parts).encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little") % n_bits


def _atom_invariant(mol: Molecule, i: int) -> str:
    atom = mol.atoms[i]
    return (f"{atom.symbol};{int(atom.aromatic)};{atom.charge};"
            f"{mol.heavy_degree(i)};{mol.implicit_hydrogens(i)}")


def circular_bits(mol: Molecule, n_bits: int = ECFP_BITS,
                  radius: int = 2) -> set[int]:
    """Morgan-style environment hashing: each atom's identifier is
    iteratively combined with its sorted neighbor identifiers."""
    identifiers = {i: _atom_invariant(mol, i) for i in range(len(mol.atoms))}
    bits = {_hash_bit(("ecfp", 0, ident), n_bits)
            for ident in identifiers.values()}
    for layer in range(1, radius + 1):
        updated = {}
        for i in range(len(mol.atoms)):
            env = sorted(
                f"{order}:{identifiers[j]}" for j, order in mol.neighbors(i)
            )
            updated[i] = hashlib.blake2b(
                (identifiers[i] + "&" + "&".join(env)).encode("utf-8"),
                digest_size=8,
            ).hexdigest()
        identifiers = updated
        bits |= {_hash_bit(("ecfp", layer, ident), n_bits)
                 for ident in identifiers.values()}
    return bits


def path_bits(mol: Molecule, n_bits: int = AVALON_BITS,
              max_length: int = 7) -> set[int]:
    """Linear-path hashing: every simple bond path of 1..max_length bonds,
    canonicalized by taking the lexicographically smaller direction."""
    labels = {i: _atom_invariant(mol, i).split(";")[0]
              + ("a" if mol.atoms[i].aromatic else "")
              for i in range(len(mol.atoms))}
    order_tag = {1.0: "-", 2.0: "=", 3.0: "#", AROMATIC_ORDER: ":"}
    order_map = {}
    for bond in mol.bonds:
        tag = order_tag.get(bond.order, "-")
        order_map[(bond.a, bond.b)] = tag
        order_map[(bond.b, bond.a)] = tag
    bits: set[int] = set()

    def reversed_string(path):
        parts = [labels[path[-1]]]
        for a, b in zip(reversed(path[1:]), reversed(path[:-1])):
            parts.append(order_map[(a, b)])
            parts.append(labels[b])
        return "".join(parts)

    def walk(path, path_str):
        depth = len(path) - 1
        if depth:
            bits.add(_hash_bit(
                ("path", min(path_str, reversed_string(path))), n_bits
            ))
        if depth == max_length:
            return
        last = path[-1]
        for nxt, order in mol.neighbors(last):
            if nxt in path:
                continue
            walk(path + [nxt],
                 path_str + order_tag.get(order, "-") + labels[nxt])

    for start in range(len(mol.atoms)):
        walk([start], labels[start])
    return bits


def _pharmacophore_types(mol: Molecule) -> dict[int, set[str]]:
    ring_atoms, _ = ring_info(mol)
    types: dict[int, set[str]] = {}
    for i, atom in enumerate(mol.atoms):
        tags = set()
        hydrogens = mol.implicit_hydrogens(i)
        if atom.symbol in {"N", "O", "S"} and hydrogens > 0:
            tags.add("donor")
        if atom.symbol in {"N", "O"} and atom.charge <= 0:
            tags.add("acceptor")
        if atom.aromatic:
            tags.add("aromatic")
        elif i in ring_atoms:
            tags.add("aliphatic_ring")
        if atom.charge > 0:
            tags.add("positive")
        if atom.charge < 0:
            tags.add("negative")
        if tags:
            types[i] = tags
    return types


def erg_histogram(mol: Molecule) -> list[float]:
    """21 pharmacophore-type pairs x topological distances 1..15,
    flattened pair-major in combinations_with_replacement order."""
    pair_index = {
        pair: k for k, pair in
        enumerate(combinations_with_replacement(ERG_TYPES, 2))
    }
    rank = {name: k for k, name in enumerate(ERG_TYPES)}
    values = [0.0] * ERG_BITS
    types = _pharmacophore_types(mol)
    tagged = sorted(types)
    distances = topological_distances(mol)
    for pos_a in range(len(tagged)):
        for pos_b in range(pos_a + 1, len(tagged)):
            i, j = tagged[pos_a], tagged[pos_b]
            d = distances[i][j]
            if not 1 <= d <= ERG_MAX_DISTANCE:
                continue
            for type_a in types[i]:
                for type_b in types[j]:
                    # canonical order is ERG_TYPES rank, matching pair_index
                    pair = (type_a, type_b)
                    if rank[type_a] > rank[type_b]:
                        pair = (type_b, type_a)
                    slot = pair_index[pair] * ERG_MAX_DISTANCE + (d - 1)
                    values[slot] += 1.0
    return values


def _named_properties(mol: Molecule) -> list[tuple[str, float]]:
    ring_atoms, ring_sizes = ring_info(mol)
    n = len(mol.atoms)
    hydrogens = [mol.implicit_hydrogens(i) for i in range(n)]
    degrees = [mol.heavy_degree(i) for i in range(n)]
    weight = sum(_ATOMIC_MASS.get(a.symbol, 0.0) for a in mol.atoms)
    weight += sum(hydrogens) * _ATOMIC_MASS["H"]

    props: list[tuple[str, float]] = []
    props.append(("mol_weight", weight))
    props.append(("heavy_atoms", float(n)))
    props.append(("hydrogens", float(sum(hydrogens))))
    props.append(("bonds", float(len(mol.bonds))))
    for element in _ELEMENTS:
        count = sum(1 for a in mol.atoms if a.symbol == element)
        props.append((f"count_{element}", float(count)))
        props.append((f"frac_{element}", count / n))
    hetero = sum(1 for a in mol.atoms if a.symbol not in {"C", "H"})
    props.append(("heteroatoms", float(hetero)))
    props.append(("hetero_fraction", hetero / n))
    for d in range(5):
        count = sum(1 for deg in degrees if deg == d)
        props.append((f"degree_{d}_atoms", float(count)))
    props.append(("degree_sum", float(sum(degrees))))
    props.append(("zagreb_index", float(sum(d * d for d in degrees))))
    orders = [b.order for b in mol.bonds]
    props.append(("single_bonds", float(sum(1 for o in orders if o == 1.0))))
    props.append(("double_bonds", float(sum(1 for o in orders if o == 2.0))))
    props.append(("triple_bonds", float(sum(1 for o in orders if o == 3.0))))
    props.append(("aromatic_bonds",
                  float(sum(1 for o in orders if o == AROMATIC_ORDER))))
    props.append(("aromatic_atoms",
                  float(sum(1 for a in mol.atoms if a.aromatic))))
    props.append(("ring_atoms", float(len(ring_atoms))))
    props.append(("ring_count", float(len(ring_sizes))))
    for size in range(3, 9):
        props.append((f"rings_size_{size}",
                      float(sum(1 for s in ring_sizes if s == size))))
    props.append(("rings_large",
                  float(sum(1 for s in ring_sizes if s > 8))))
    donors = acceptors = 0
    for i, atom in enumerate(mol.atoms):
        if atom.symbol in {"N", "O"} and hydrogens[i] > 0:
            donors += 1
        if atom.symbol in {"N", "O"} and atom.charge <= 0:
            acceptors += 1
    props.append(("hbd", float(donors)))
    props.append(("hba", float(acceptors)))
    charges = [a.charge for a in mol.atoms]
    props.append(("charge_total", float(sum(charges))))
    props.append(("charge_positive",
                  float(sum(c for c in charges if c > 0))))
    props.append(("charge_negative",
                  float(-sum(c for c in charges if c < 0))))
    props.append(("charged_atoms",
                  float(sum(1 for c in charges if c != 0))))
    rotatable = sum(
        1 for b in mol.bonds
        if b.order == 1.0
        and mol.heavy_degree(b.a) > 1 and mol.heavy_degree(b.b) > 1
        and not (b.a in ring_atoms and b.b in ring_atoms)
    )
    props.append(("rotatable_bonds", float(rotatable)))
    electro = [_ELECTRONEGATIVITY.get(a.symbol, 2.5) for a in mol.atoms]
    props.append(("electronegativity_mean", sum(electro) / n))
    props.append(("electronegativity_max", max(electro)))
    # crude size/shape numbers from the distance table
    distances = topological_distances(mol)
    finite = [d for row in distances for d in row if d > 0]
    props.append(("wiener_index", float(sum(finite) / 2)))
    props.append(("diameter", float(max(finite, default=0))))
    props.append(("mean_distance",
                  sum(finite) / len(finite) if finite else 0.0))
    components = _component_count(mol)
    props.append(("fragments", float(components)))
    sp3_like = sum(
        1 for i, a in enumerate(mol.atoms)
        if a.symbol == "C" and not a.aromatic
        and all(order == 1.0 for _, order in mol.neighbors(i))
    )
    props.append(("carbon_sp3_like", float(sp3_like)))
    props.append(("carbon_sp3_fraction",
                  sp3_like / max(1, sum(1 for a in mol.atoms
                                        if a.symbol == "C"))))
    props.append(("isotope_atoms",
                  float(sum(1 for a in mol.atoms if a.isotope))))
    props.append(("log_heavy_atoms", math.log(n)))
    props.append(("tpsa_like",
                  sum(20.0 for a in mol.atoms if a.symbol in {"N", "O"})
                  + sum(25.0 for a in mol.atoms if a.symbol == "S")))
    return props


def _component_count(mol: Molecule) -> int:
    parent = list(range(len(mol.atoms)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for bond in mol.bonds:
        ra, rb = find(bond.a), find(bond.b)
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(len(mol.atoms))})


def _property_block(mol: Molecule) -> list[tuple[str, float]]:
    """Exactly PROPERTY_COUNT (name, value) pairs: the named scalars first,
    then hashed atom-environment counts to fill the block."""
    named = _named_properties(mol)
    pad = PROPERTY_COUNT - len(named)
    if pad < 0:
        raise AssertionError(
            f"named property list grew past {PROPERTY_COUNT}; trim it"
        )
    env_counts = [0.0] * pad
    for i in range(len(mol.atoms)):
        slot = _hash_bit(("env", _atom_invariant(mol, i)), pad)
        env_counts[slot] += 1.0
    named += [(f"env_{k:03d}", env_counts[k]) for k in range(pad)]
    return named


def property_names() -> list[str]:
    """Stable names of the 200-column property block."""
    benzene = parse_smiles("c1ccccc1")
    return [f"prop_{name}" for name, _ in _property_block(benzene)]


def descriptor_names() -> list[str]:
    names = [f"ecfp_{i}" for i in range(ECFP_BITS)]
    names += [f"avalon_{i}" for i in range(AVALON_BITS)]
    names += [f"erg_{i}" for i in range(ERG_BITS)]
    names += property_names()
    return names


@dataclass(frozen=True)
class DescriptorResult:
    names: list[str]
    rows: list[list[float]]
    kept_indices: list[int]
    excluded: list[tuple[int, str, str]]  # input row, smiles, reason
    version: str = DESCRIPTOR_VERSION


def describe_molecule(smiles: str) -> list[float]:
    mol = parse_smiles(smiles)
    row = [0.0] * ECFP_BITS
    for bit in circular_bits(mol):
        row[bit] = 1.0
    avalon = [0.0] * AVALON_BITS
    for bit in path_bits(mol):
        avalon[bit] = 1.0
    row += avalon
    row += erg_histogram(mol)
    row += [value for _, value in _property_block(mol)]
    return row


def maplight_descriptors(smiles_list) -> DescriptorResult:
    """Descriptor matrix for a list of SMILES.

    Unparseable entries are excluded from the output rows and reported in
    ``excluded`` as (row index, smiles, reason) — never silently dropped.
    Row order follows the input order of the kept molecules.
    """
    names = descriptor_names()
    rows: list[list[float]] = []
    kept: list[int] = []
    excluded: list[tuple[int, str, str]] = []
    for idx, smiles in enumerate(smiles_list):
        try:
            row = describe_molecule(smiles)
        except SmilesError as exc:
            excluded.append((idx, smiles, str(exc)))
            continue
        rows.append(row)
        kept.append(idx)
    return DescriptorResult(names, rows, kept, excluded)
