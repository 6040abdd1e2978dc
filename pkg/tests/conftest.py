"""Shared fixtures: the XOR benchmark dataset and brute-force oracles.

Oracles here are written as directly off the definitions as possible
(dict-of-probabilities arithmetic, per-basis Python loops) so they share no
code shape with the implementations they check.
"""

import math
from collections import Counter
from itertools import product

import numpy as np
import pytest

from hamfex.dataset import FeatureMatrix, LabeledDataset

XOR_NOISE_PERIODS = (2, 4, 10, 20, 50, 100)


def build_xor_dataset() -> LabeledDataset:
    """400 rows: y = f1 XOR f2, plus 6 balanced square-wave noise bits.

    Each (f1, f2) combination fills a 100-row block; noise bit with period p
    flips every p/2 rows inside a block, so within every block (and within
    every split stratum, rows being tagged round-robin) all noise bits are
    exactly balanced and exactly independent of the label.
    """
    values, labels, split = [], [], []
    for f1, f2 in ((0, 0), (0, 1), (1, 0), (1, 1)):
        for i in range(100):
            noise = [(i // (p // 2)) % 2 for p in XOR_NOISE_PERIODS]
            values.append([f1, f2] + noise)
            labels.append(f1 ^ f2)
            split.append(("train", "train", "train", "valid", "test")[i % 5])
    names = ["f1", "f2"] + [f"n{p}" for p in XOR_NOISE_PERIODS]
    features = FeatureMatrix.from_values(names, np.array(values, dtype=float))
    return LabeledDataset(
        features, np.array(labels), np.array(split, dtype=object)
    )


@pytest.fixture
def xor_dataset() -> LabeledDataset:
    return build_xor_dataset()


def oracle_mi(x, y) -> float:
    """Plug-in MI from explicit cell probabilities, in nats."""
    n = len(x)
    joint = Counter(zip(x, y))
    px = Counter(x)
    py = Counter(y)
    total = 0.0
    for (a, b), c in joint.items():
        p_ab = c / n
        total += p_ab * math.log(p_ab / ((px[a] / n) * (py[b] / n)))
    return total


def oracle_conditional_mi(xi, xj, y) -> float:
    """Stratified plug-in conditional MI; strata under 2 samples contribute 0."""
    n = len(y)
    total = 0.0
    for value in (0, 1):
        rows = [t for t in range(n) if y[t] == value]
        if len(rows) < 2:
            continue
        total += (len(rows) / n) * oracle_mi(
            [xi[t] for t in rows], [xj[t] for t in rows]
        )
    return total


def oracle_interaction_information(xi, xj, xk) -> float:
    return oracle_mi(xi, xj) - oracle_conditional_mi(xi, xj, xk)


def oracle_entropy(x) -> float:
    n = len(x)
    return -sum((c / n) * math.log(c / n) for c in Counter(x).values())


def oracle_diagonal_energies(hamiltonian) -> np.ndarray:
    """E(b) per basis state, from the definition: loop qubits of each term
    and multiply out the individual spin values s_q = 1 - 2*bit_q(b)."""
    n = hamiltonian.n_qubits
    energies = np.zeros(1 << n)
    for b in range(1 << n):
        spins = [1.0 - 2.0 * ((b >> q) & 1) for q in range(n)]
        e = 0.0
        for q, c in hamiltonian.linear_terms:
            e += c * spins[q]
        for qi, qj, c in hamiltonian.pair_terms:
            e += c * spins[qi] * spins[qj]
        for qi, qj, qk, c in hamiltonian.triad_terms:
            e += c * spins[qi] * spins[qj] * spins[qk]
        energies[b] = e
    return energies


def oracle_evolved(state_amplitudes, hamiltonian) -> np.ndarray:
    """Dense elementwise-exponential evolution oracle."""
    energies = oracle_diagonal_energies(hamiltonian)
    return state_amplitudes * np.exp(-1j * hamiltonian.time * energies)


def random_binary_columns(rng, n_rows: int, n_cols: int) -> list:
    return [list(rng.integers(0, 2, n_rows)) for _ in range(n_cols)]


def random_diagonal_hamiltonian(rng, max_qubits: int, time_range=(0.1, 2.0),
                                steps: int = 1):
    """Random HamiltonianSpec with distinct supports and coefficients
    in [-1, 1]."""
    from hamfex.qsim import HamiltonianSpec

    n = int(rng.integers(2, max_qubits + 1))
    linear = tuple(
        (q, float(rng.uniform(-1, 1)))
        for q in range(n) if rng.random() < 0.7
    )
    pair_supports = set()
    while len(pair_supports) < min(3, n * (n - 1) // 2):
        i, j = sorted(rng.choice(n, 2, replace=False))
        pair_supports.add((int(i), int(j)))
    pairs = tuple((i, j, float(rng.uniform(-1, 1))) for i, j in pair_supports)
    triads = ()
    if n >= 3:
        n_triads = min(2, math.comb(n, 3))
        triad_supports = set()
        while len(triad_supports) < n_triads:
            i, j, k = sorted(rng.choice(n, 3, replace=False))
            triad_supports.add((int(i), int(j), int(k)))
        triads = tuple(
            (i, j, k, float(rng.uniform(-1, 1))) for i, j, k in triad_supports
        )
    t = float(rng.uniform(*time_range))
    return HamiltonianSpec(n, linear, pairs, triads, t, steps)


def random_state(rng, n_qubits: int):
    from hamfex.qsim import StateVector

    amps = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(
        1 << n_qubits
    )
    amps /= np.linalg.norm(amps)
    return StateVector(amps, n_qubits)


def exact_product_bits(n_half: int) -> tuple:
    """Three mutually independent balanced bits with exact product counts:
    all 8 combinations appear exactly n_half times."""
    xi, xj, xk = [], [], []
    for a, b, c in product((0, 1), repeat=3):
        for _ in range(n_half):
            xi.append(a)
            xj.append(b)
            xk.append(c)
    return xi, xj, xk
