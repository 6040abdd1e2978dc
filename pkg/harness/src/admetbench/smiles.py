"""A small SMILES reader producing a molecular graph.

Covers the subset that ADMET benchmark molecules actually use: the
organic-subset atoms plus bracket atoms with charge/isotope/explicit
hydrogens, single/double/triple/aromatic bonds, branches, two-digit ring
closures, and dot-separated fragments. Stereochemistry markers (/, \\, @)
are read and discarded; the descriptors built on top of this graph are
constitution-only. This is not a full SMILES implementation and does not
kekulize; aromatic bonds keep a 1.5 order tag.
"""

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import SmilesError

ORGANIC_SUBSET = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"}
AROMATIC_SYMBOLS = {"b", "c", "n", "o", "p", "s"}

# default valences used to fill implicit hydrogens
_VALENCE = {"B": 3, "C": 4, "N": 3, "O": 2, "P": 3, "S": 2,
            "F": 1, "Cl": 1, "Br": 1, "I": 1}

AROMATIC_ORDER = 1.5


@dataclass
class Atom:
    symbol: str
    aromatic: bool = False
    charge: int = 0
    explicit_h: int | None = None
    isotope: int = 0
    index: int = -1


@dataclass
class Bond:
    a: int
    b: int
    order: float


@dataclass
class Molecule:
    atoms: list[Atom] = field(default_factory=list)
    bonds: list[Bond] = field(default_factory=list)

    def neighbors(self, i: int) -> list[tuple[int, float]]:
        out = []
        for bond in self.bonds:
            if bond.a == i:
                out.append((bond.b, bond.order))
            elif bond.b == i:
                out.append((bond.a, bond.order))
        return out

    def implicit_hydrogens(self, i: int) -> int:
        atom = self.atoms[i]
        if atom.explicit_h is not None:
            return atom.explicit_h
        default = _VALENCE.get(atom.symbol)
        if default is None:
            return 0
        used = sum(order for _, order in self.neighbors(i))
        return max(0, default + atom.charge - math.ceil(used))

    def heavy_degree(self, i: int) -> int:
        return len(self.neighbors(i))


_TWO_LETTER = ("Cl", "Br")


def _parse_bracket(text: str, start: int) -> tuple[Atom, int]:
    """Parse a [...] atom beginning at text[start] == '['; returns the atom
    and the index one past the closing bracket."""
    end = text.find("]", start)
    if end < 0:
        raise SmilesError(f"unclosed bracket atom at position {start}")
    body = text[start + 1:end]
    pos = 0
    isotope = 0
    while pos < len(body) and body[pos].isdigit():
        isotope = isotope * 10 + int(body[pos])
        pos += 1
    aromatic = False
    symbol = None
    for cand in ("Cl", "Br"):
        if body.startswith(cand, pos):
            symbol = cand
            pos += 2
            break
    if symbol is None and pos < len(body):
        ch = body[pos]
        nxt = body[pos + 1] if pos + 1 < len(body) else ""
        if ch.isupper() and nxt.islower() and nxt not in "hrs@+-0123456789":
            # two-letter element like Se, Na, Si, Sn, As
            symbol = ch + nxt
            pos += 2
        elif ch.isupper():
            symbol = ch
            pos += 1
        elif ch in AROMATIC_SYMBOLS or ch in {"se", "as"} or ch.islower():
            if body.startswith("se", pos) or body.startswith("as", pos):
                symbol = body[pos:pos + 2].capitalize()
                pos += 2
            else:
                symbol = ch.upper()
                pos += 1
            aromatic = True
    if symbol is None:
        raise SmilesError(f"cannot read element in bracket atom [{body}]")
    # skip chirality markers
    while pos < len(body) and body[pos] == "@":
        pos += 1
    explicit_h = None
    if pos < len(body) and body[pos] == "H":
        pos += 1
        count = 0
        while pos < len(body) and body[pos].isdigit():
            count = count * 10 + int(body[pos])
            pos += 1
        explicit_h = count if count else 1
    charge = 0
    while pos < len(body) and body[pos] in "+-":
        sign = 1 if body[pos] == "+" else -1
        pos += 1
        if pos < len(body) and body[pos].isdigit():
            magnitude = 0
            while pos < len(body) and body[pos].isdigit():
                magnitude = magnitude * 10 + int(body[pos])
                pos += 1
            charge += sign * magnitude
        else:
            charge += sign
    if pos != len(body):
        # atom-map numbers like :1
        if body[pos] == ":":
            pos += 1
            while pos < len(body) and body[pos].isdigit():
                pos += 1
        if pos != len(body):
            raise SmilesError(f"trailing characters in bracket atom [{body}]")
    if explicit_h is None:
        # bracket atoms without an H count have exactly zero hydrogens
        explicit_h = 0
    return Atom(symbol, aromatic, charge, explicit_h, isotope), end + 1


def parse_smiles(text: str) -> Molecule:
    """Parse one SMILES string into a Molecule.

    Raises SmilesError on anything outside the supported subset; never
    returns a partial molecule.
    """
    if not text or text != text.strip():
        raise SmilesError("empty or whitespace-padded SMILES")
    mol = Molecule()
    stack: list[int] = []
    previous: int | None = None
    pending_order: float | None = None
    ring_openings: dict[int, tuple[int, float | None]] = {}
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in "/\\":
            i += 1
            continue
        if ch == ".":
            previous = None
            pending_order = None
            i += 1
            continue
        if ch == "(":
            if previous is None:
                raise SmilesError(f"branch with no attachment at position {i}")
            stack.append(previous)
            i += 1
            continue
        if ch == ")":
            if not stack:
                raise SmilesError(f"unmatched ')' at position {i}")
            previous = stack.pop()
            i += 1
            continue
        if ch in "-=#:":
            pending_order = {"-": 1.0, "=": 2.0, "#": 3.0,
                             ":": AROMATIC_ORDER}[ch]
            i += 1
            continue
        if ch.isdigit() or ch == "%":
            if ch == "%":
                if i + 2 >= n or not text[i + 1:i + 3].isdigit():
                    raise SmilesError(f"bad %nn ring closure at position {i}")
                label = int(text[i + 1:i + 3])
                i += 3
            else:
                label = int(ch)
                i += 1
            if previous is None:
                raise SmilesError("ring closure before any atom")
            if label in ring_openings:
                partner, opening_order = ring_openings.pop(label)
                order = pending_order or opening_order
                if order is None:
                    both_aromatic = (mol.atoms[partner].aromatic
                                     and mol.atoms[previous].aromatic)
                    order = AROMATIC_ORDER if both_aromatic else 1.0
                if partner == previous:
                    raise SmilesError(f"ring bond {label} closes on itself")
                mol.bonds.append(Bond(partner, previous, order))
            else:
                ring_openings[label] = (previous, pending_order)
            pending_order = None
            continue

        atom = None
        if ch == "[":
            atom, i = _parse_bracket(text, i)
        elif text.startswith(_TWO_LETTER, i):
            atom = Atom(text[i:i + 2])
            i += 2
        elif ch.isupper():
            if ch not in ORGANIC_SUBSET:
                raise SmilesError(
                    f"element {ch!r} needs brackets at position {i}"
                )
            atom = Atom(ch)
            i += 1
        elif ch in AROMATIC_SYMBOLS:
            atom = Atom(ch.upper(), aromatic=True)
            i += 1
        else:
            raise SmilesError(f"unexpected character {ch!r} at position {i}")

        atom.index = len(mol.atoms)
        mol.atoms.append(atom)
        if previous is not None:
            order = pending_order
            if order is None:
                both_aromatic = (mol.atoms[previous].aromatic and atom.aromatic)
                order = AROMATIC_ORDER if both_aromatic else 1.0
            mol.bonds.append(Bond(previous, atom.index, order))
        previous = atom.index
        pending_order = None

    if stack:
        raise SmilesError("unclosed branch: missing ')'")
    if ring_openings:
        raise SmilesError(
            f"unclosed ring bond(s): {sorted(ring_openings)}"
        )
    if pending_order is not None:
        raise SmilesError("dangling bond symbol at end of input")
    if not mol.atoms:
        raise SmilesError("no atoms found")
    seen = set()
    for bond in mol.bonds:
        key = (min(bond.a, bond.b), max(bond.a, bond.b))
        if key in seen:
            raise SmilesError(f"duplicate bond between atoms {key}")
        seen.add(key)
    return mol


def ring_info(mol: Molecule) -> tuple[set[int], list[int]]:
    """Ring-membership atom set and a list of small-ring sizes.

    An edge is a ring edge when its endpoints stay connected without it;
    ring sizes come from the shortest cycle through each ring edge,
    deduplicated by atom set (a lightweight stand-in for SSSR that is
    exact for the fused bicyclics common in drug-like molecules).
    """
    adj: dict[int, list[int]] = {i: [] for i in range(len(mol.atoms))}
    for bond in mol.bonds:
        adj[bond.a].append(bond.b)
        adj[bond.b].append(bond.a)

    def shortest_path_avoiding(src, dst, banned_edge):
        prev = {src: None}
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            if cur == dst:
                path = [cur]
                while prev[cur] is not None:
                    cur = prev[cur]
                    path.append(cur)
                return path
            for nxt in adj[cur]:
                if {cur, nxt} == banned_edge or nxt in prev:
                    continue
                prev[nxt] = cur
                queue.append(nxt)
        return None

    ring_atoms: set[int] = set()
    cycles: set[frozenset[int]] = set()
    for bond in mol.bonds:
        path = shortest_path_avoiding(bond.a, bond.b, {bond.a, bond.b})
        if path is not None:
            cycle = frozenset(path)
            ring_atoms |= cycle
            cycles.add(cycle)
    return ring_atoms, sorted(len(c) for c in cycles)


def topological_distances(mol: Molecule) -> list[list[int]]:
    """All-pairs bond-count distances; -1 marks disconnected pairs."""
    n = len(mol.atoms)
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for bond in mol.bonds:
        adj[bond.a].append(bond.b)
        adj[bond.b].append(bond.a)
    table = [[-1] * n for _ in range(n)]
    for src in range(n):
        table[src][src] = 0
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            for nxt in adj[cur]:
                if table[src][nxt] < 0:
                    table[src][nxt] = table[src][cur] + 1
                    queue.append(nxt)
    return table
