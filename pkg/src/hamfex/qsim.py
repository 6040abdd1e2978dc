"""Exact state-vector simulation of diagonal Pauli-Z Hamiltonians.

Basis convention: qubit q is bit q of the basis index (index 0 is the least
significant bit), so basis state |b⟩ assigns qubit q the bit (b >> q) & 1.
The Z eigenvalue of qubit q on |b⟩ is s_q = 1 - 2*bit, and a Z-product term
over a mask evaluates to (-1)^popcount(b & mask).

Everything here is a dense pass over 2^n amplitudes: evolution is
elementwise phase application (Theta(T*2^n) for T terms), mixing is the fast
Walsh-Hadamard butterfly (Theta(n*2^n)). The hard qubit cap is 28.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .selection import CouplingTable

QUBIT_CAP = 28
_NORM_TOL = 1e-12
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _basis_indices(n_qubits: int) -> np.ndarray:
    return np.arange(1 << n_qubits, dtype=np.uint32)


def _term_signs(basis: np.ndarray, mask: int) -> np.ndarray:
    """Z-product eigenvalues (-1)^popcount(b & mask) over all basis states."""
    parity = np.bitwise_count(basis & np.uint32(mask)) & 1
    return 1.0 - 2.0 * parity


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        if not 0 <= self.n_qubits <= QUBIT_CAP:
            raise ValidationError(
                f"{self.n_qubits} qubits exceeds the hard cap of {QUBIT_CAP}"
            )
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise ValidationError(
                f"amplitude count {amps.shape} does not match "
                f"{self.n_qubits} qubits"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValidationError(f"state norm {norm} is not 1")
        object.__setattr__(self, "amplitudes", amps)
        self.amplitudes.flags.writeable = False

    def norm_error(self) -> float:
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Diagonal Hamiltonian: linear, pair, and triad Z-product terms."""

    n_qubits: int
    linear_terms: tuple  # of (qubit, coefficient)
    pair_terms: tuple  # of (qubit_i, qubit_j, coefficient)
    triad_terms: tuple  # of (qubit_i, qubit_j, qubit_k, coefficient)
    time: float
    trotter_steps: int

    def __post_init__(self):
        if self.trotter_steps < 1:
            raise ValidationError("trotter_steps must be >= 1")
        if not np.isfinite(self.time):
            raise ValidationError("evolution time must be finite")
        seen_supports = set()
        for terms, arity in ((self.linear_terms, 1), (self.pair_terms, 2),
                             (self.triad_terms, 3)):
            for term in terms:
                support, coeff = tuple(term[:arity]), term[arity]
                if len(set(support)) != arity:
                    raise ValidationError(f"repeated qubit in term {term}")
                for q in support:
                    if not 0 <= q < self.n_qubits:
                        raise ValidationError(
                            f"qubit {q} out of range for {self.n_qubits} qubits"
                        )
                key = (arity, tuple(sorted(support)))
                if key in seen_supports:
                    raise ValidationError(f"duplicate term support {support}")
                seen_supports.add(key)
                if not np.isfinite(coeff):
                    raise ValidationError(f"non-finite coefficient in term {term}")

    def masks_and_coefficients(self) -> list[tuple[int, float]]:
        """Every term as (bit mask over qubits, coefficient), in term order."""
        out = []
        for q, c in self.linear_terms:
            out.append((1 << q, float(c)))
        for qi, qj, c in self.pair_terms:
            out.append(((1 << qi) | (1 << qj), float(c)))
        for qi, qj, qk, c in self.triad_terms:
            out.append(((1 << qi) | (1 << qj) | (1 << qk), float(c)))
        return out

    def energies(self) -> np.ndarray:
        """E(b) for every basis index, accumulated term by term."""
        basis = _basis_indices(self.n_qubits)
        energy = np.zeros(basis.size, dtype=np.float64)
        for mask, coeff in self.masks_and_coefficients():
            energy += coeff * _term_signs(basis, mask)
        return energy


def build_hamiltonian(bits, couplings: CouplingTable, qubit_map: dict,
                      t: float, steps: int) -> HamiltonianSpec:
    """Per-molecule Hamiltonian: linear coefficients are the molecule's bit
    values, pair/triad coefficients come from the task-level coupling table.

    Zero bits contribute no linear term. qubit_map takes the coupling
    table's column indices to qubit indices.
    """
    n_qubits = len(qubit_map)
    bits = np.asarray(bits)
    if bits.shape != (n_qubits,):
        raise ValidationError(
            f"expected {n_qubits} bits (one per qubit), got shape {bits.shape}"
        )
    if not np.all(np.isin(bits, (0, 1))):
        raise ValidationError("bits must be 0/1")
    if sorted(qubit_map.values()) != list(range(n_qubits)):
        raise ValidationError("qubit_map must cover qubits 0..n-1 exactly once")

    def to_qubit(col: int) -> int:
        if col not in qubit_map:
            raise ValidationError(f"coupling references unmapped column {col}")
        return qubit_map[col]

    linear = tuple(
        (q, float(bits[q])) for q in range(n_qubits) if bits[q] != 0
    )
    pair = tuple(
        (to_qubit(i), to_qubit(j), float(c))
        for i, j, c in couplings.pair_couplings
    )
    triad = tuple(
        (to_qubit(i), to_qubit(j), to_qubit(k), float(c))
        for i, j, k, c in couplings.triad_couplings
    )
    return HamiltonianSpec(n_qubits, linear, pair, triad, float(t), int(steps))


def prepare_state(bits, alpha: float) -> StateVector:
    """Angle-encoded product state: qubit q at theta = pi/2 + alpha*(2x-1).

    Amplitudes per qubit are (cos(theta/2), sin(theta/2)); alpha near pi/2
    approaches the literal basis-state encoding |x⟩. Both endpoints of
    (0, pi/2) are rejected: alpha = 0 erases the bits, alpha = pi/2 makes
    evolution a global phase.
    """
    bits = np.asarray(bits)
    n_qubits = bits.size
    if n_qubits > QUBIT_CAP:
        raise ValidationError(
            f"{n_qubits} qubits exceeds the hard cap of {QUBIT_CAP}"
        )
    if not np.all(np.isin(bits, (0, 1))):
        raise ValidationError("bits must be 0/1")
    if not 0.0 < alpha < math.pi / 2:
        raise ValidationError("alpha must lie strictly inside (0, pi/2)")
    state = np.ones(1, dtype=np.complex128)
    for q in range(n_qubits):
        theta = math.pi / 2 + alpha * (2.0 * float(bits[q]) - 1.0)
        single = np.array(
            [math.cos(theta / 2), math.sin(theta / 2)], dtype=np.complex128
        )
        # kron(single, state) puts qubit q at bit q of the joint index
        state = np.kron(single, state)
    return StateVector(state, n_qubits)


def evolve_diagonal(state: StateVector, hamiltonian: HamiltonianSpec) -> StateVector:
    """Apply e^{-iHt} exactly: each amplitude picks up phase e^{-i(t/steps)E(b)}
    once per Trotter step. All terms commute, so the step count never
    changes the result beyond rounding."""
    if hamiltonian.n_qubits != state.n_qubits:
        raise ValidationError(
            f"state has {state.n_qubits} qubits, Hamiltonian "
            f"{hamiltonian.n_qubits}"
        )
    steps = hamiltonian.trotter_steps
    phase = np.exp(-1j * (hamiltonian.time / steps) * hamiltonian.energies())
    amps = state.amplitudes.copy()
    for _ in range(steps):
        amps *= phase
    return StateVector(amps, state.n_qubits)


def apply_mixing(state: StateVector) -> StateVector:
    """Hadamard on every qubit via the in-place Walsh-Hadamard butterfly."""
    amps = state.amplitudes.copy()
    n_states = amps.size
    h = 1
    while h < n_states:
        block = amps.reshape(-1, 2 * h)
        top = block[:, :h] + block[:, h:]
        bottom = block[:, :h] - block[:, h:]
        block[:, :h] = top * _INV_SQRT2
        block[:, h:] = bottom * _INV_SQRT2
        h *= 2
    return StateVector(amps, state.n_qubits)


@dataclass(frozen=True)
class ExpectationSet:
    """Ordered (term, value) list: singles, then pairs, then triads."""

    entries: tuple  # of (qubit tuple, value)

    def __post_init__(self):
        for term, value in self.entries:
            if abs(value) > 1.0 + 1e-12:
                raise ValidationError(f"expectation {value} for {term} out of [-1, 1]")

    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.entries], dtype=np.float64)

    def names(self, prefix: str = "q_") -> list[str]:
        return [prefix + "".join(f"Z{q}" for q in term) for term, _ in self.entries]


def measure_expectations(state: StateVector, terms) -> ExpectationSet:
    """⟨Z-product⟩ for each term: sum of |a_b|^2 times the term's sign at b."""
    probabilities = np.abs(state.amplitudes) ** 2
    basis = _basis_indices(state.n_qubits)
    entries = []
    for term in terms:
        term = tuple(term)
        mask = 0
        for q in term:
            if not 0 <= q < state.n_qubits:
                raise ValidationError(f"qubit {q} out of range in term {term}")
            mask |= 1 << q
        value = float(probabilities @ _term_signs(basis, mask))
        entries.append((term, value))
    return ExpectationSet(tuple(entries))


def feature_terms(couplings: CouplingTable, qubit_map: dict) -> list[tuple]:
    """Measurement terms in feature order: every qubit's Z ascending, then
    pair Z-products in coupling order, then triad Z-products."""
    terms: list[tuple] = [(q,) for q in range(len(qubit_map))]
    for i, j, _ in couplings.pair_couplings:
        terms.append((qubit_map[i], qubit_map[j]))
    for i, j, k, _ in couplings.triad_couplings:
        terms.append((qubit_map[i], qubit_map[j], qubit_map[k]))
    return terms


def extract_features(bits_rows, couplings: CouplingTable, qubit_map: dict,
                     *, t: float = 0.5, steps: int = 1,
                     alpha: float = math.pi / 4,
                     mixing: bool = True) -> list[ExpectationSet]:
    """prepare -> evolve -> mix -> measure for each molecule's bit row.

    bits_rows has one row per molecule, one column per qubit (already in
    qubit order). Row order is preserved. An empty qubit map yields an
    empty ExpectationSet per molecule (the disabled-quantum ablation).
    """
    bits_rows = np.asarray(bits_rows)
    n_qubits = len(qubit_map)
    if bits_rows.ndim != 2 or bits_rows.shape[1] != n_qubits:
        raise ValidationError(
            f"bit rows must be (molecules, {n_qubits}), got {bits_rows.shape}"
        )
    if n_qubits == 0:
        return [ExpectationSet(()) for _ in range(bits_rows.shape[0])]
    terms = feature_terms(couplings, qubit_map)
    out = []
    for row in bits_rows:
        hamiltonian = build_hamiltonian(row, couplings, qubit_map, t, steps)
        state = prepare_state(row, alpha)
        state = evolve_diagonal(state, hamiltonian)
        if mixing:
            state = apply_mixing(state)
        out.append(measure_expectations(state, terms))
    return out
