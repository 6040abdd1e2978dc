"""Feature selection: MI ranking, pair/triad selection, coupling derivation.

All scoring here happens on a SplitView (train+valid rows only). Pair and
triad statistics are computed over binarized columns: 2x2x2 plug-in tables
are exact, so no estimator noise enters the thresholding decisions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .dataset import FeatureMatrix, SplitView
from .errors import ValidationError
from .mi import MiScore, conditional_mi, interaction_information, view_label_mi


@dataclass(frozen=True)
class MiRanking:
    """Columns ordered by MI with the label, descending; ties by index."""

    entries: tuple  # of (column index, MiScore), non-increasing by value
    k_selected: int

    def __post_init__(self):
        indices = [i for i, _ in self.entries]
        if len(set(indices)) != len(indices):
            raise ValidationError("ranking indices must be unique")
        values = [s.value for _, s in self.entries]
        if any(a < b for a, b in zip(values, values[1:])):
            raise ValidationError("ranking scores must be non-increasing")
        if not 0 <= self.k_selected <= len(self.entries):
            raise ValidationError("k_selected exceeds ranking length")

    def selected_indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries[: self.k_selected])


@dataclass(frozen=True)
class PairSet:
    """Selected (i, j, score) with i < j, plus the candidate column pool."""

    pairs: tuple  # of (i, j, score in nats), descending by score
    selected_columns: tuple  # ranking top-k pool the pairs were drawn from

    def __post_init__(self):
        seen = set()
        for i, j, _ in self.pairs:
            if not i < j:
                raise ValidationError(f"pair ({i}, {j}) not in i < j order")
            if (i, j) in seen:
                raise ValidationError(f"duplicate pair ({i}, {j})")
            seen.add((i, j))


@dataclass(frozen=True)
class TriadSet:
    """Selected (i, j, k, score) with i < j < k; score is signed II."""

    triads: tuple  # of (i, j, k, score in nats), descending by |score|

    def __post_init__(self):
        seen = set()
        for i, j, k, _ in self.triads:
            if not i < j < k:
                raise ValidationError(f"triad ({i}, {j}, {k}) not sorted")
            if (i, j, k) in seen:
                raise ValidationError(f"duplicate triad ({i}, {j}, {k})")
            seen.add((i, j, k))


@dataclass(frozen=True)
class CouplingTable:
    """Couplings keyed by column tuples, max-normalized so max |c| = 1."""

    pair_couplings: tuple  # of (i, j, c)
    triad_couplings: tuple  # of (i, j, k, c)
    normalization: float

    def __post_init__(self):
        magnitudes = [abs(c) for *_, c in self.pair_couplings]
        magnitudes += [abs(c) for *_, c in self.triad_couplings]
        if not all(np.isfinite(m) for m in magnitudes):
            raise ValidationError("couplings must be finite")
        if magnitudes and abs(max(magnitudes) - 1.0) > 1e-12:
            raise ValidationError("max |coupling| must be 1 after normalization")


def prefilter_top_k(view: SplitView, k: int, ksg_k: int = 3, seed: int = 0) -> MiRanking:
    """Rank every column by MI with the label; keep min(k, columns) selected.

    Estimator follows column kind (plug-in for binary, kNN otherwise).
    Negative kNN estimates are clamped to 0 here, at selection time. Ties
    break toward the lower column index.
    """
    if view.n_rows == 0:
        raise ValidationError("cannot rank columns of an empty view")
    if k < 1:
        raise ValidationError("k must be >= 1")
    scored = []
    for j in range(view.n_columns):
        score = view_label_mi(view, j, k=ksg_k, seed=seed)
        scored.append((j, MiScore(max(0.0, score.value), score.estimator)))
    scored.sort(key=lambda item: (-item[1].value, item[0]))
    return MiRanking(tuple(scored), min(k, view.n_columns))


def select_pairs(ranking: MiRanking, view: SplitView, theta_pair: float,
                 max_pairs: int) -> PairSet:
    """Keep pairs among the selected columns with I(X_i; X_j | Y) > theta_pair.

    All unordered pairs of the ranking's top-k columns are scored on
    binarized values, sorted descending by score (ties by index pair), and
    truncated to max_pairs. max_pairs = 0 is the classical ablation.
    """
    if max_pairs < 0:
        raise ValidationError("max_pairs must be >= 0")
    selected = tuple(sorted(ranking.selected_indices()))
    if max_pairs == 0:
        return PairSet((), selected)
    labels = view.labels()
    bits = {j: view.binary_column(j) for j in selected}
    kept = []
    for i, j in combinations(selected, 2):
        score = conditional_mi(bits[i], bits[j], labels).value
        if score > theta_pair:
            kept.append((i, j, score))
    kept.sort(key=lambda p: (-p[2], p[0], p[1]))
    return PairSet(tuple(kept[:max_pairs]), selected)


def select_triads(pairs: PairSet, view: SplitView, theta_triad: float,
                  max_triads: int) -> TriadSet:
    """Extend each selected pair by every other selected column; keep
    triads with |interaction information| > theta_triad.

    Candidates are (pair) x (selected columns), not all triples. Duplicate
    index triples keep the candidate with the largest |II|. Result is sorted
    descending by |II| (ties by index triple) and truncated to max_triads.
    """
    if max_triads < 0:
        raise ValidationError("max_triads must be >= 0")
    if max_triads == 0 or not pairs.pairs:
        return TriadSet(())
    bits = {j: view.binary_column(j) for j in pairs.selected_columns}
    best: dict[tuple[int, int, int], float] = {}
    for i, j, _ in pairs.pairs:
        for k in pairs.selected_columns:
            if k == i or k == j:
                continue
            key = tuple(sorted((i, j, k)))
            score = interaction_information(bits[i], bits[j], bits[k]).value
            if key not in best or abs(score) > abs(best[key]):
                best[key] = score
    kept = [
        (i, j, k, score)
        for (i, j, k), score in best.items()
        if abs(score) > theta_triad
    ]
    kept.sort(key=lambda t: (-abs(t[3]), t[0], t[1], t[2]))
    return TriadSet(tuple(kept[:max_triads]))


def derive_couplings(pairs: PairSet, triads: TriadSet) -> CouplingTable:
    """c_ij = pair score, c_ijk = |triad score|, jointly max-normalized."""
    raw_pairs = [(i, j, s) for i, j, s in pairs.pairs]
    raw_triads = [(i, j, k, abs(s)) for i, j, k, s in triads.triads]
    magnitudes = [abs(c) for *_, c in raw_pairs] + [c for *_, c in raw_triads]
    norm = max(magnitudes) if magnitudes else 1.0
    if norm == 0:
        norm = 1.0
    return CouplingTable(
        tuple((i, j, c / norm) for i, j, c in raw_pairs),
        tuple((i, j, k, c / norm) for i, j, k, c in raw_triads),
        norm,
    )


def derive_qubit_map(pairs: PairSet, triads: TriadSet) -> dict[int, int]:
    """Columns appearing in any pair or triad, numbered in ascending
    column order: column index -> qubit index."""
    columns = set()
    for i, j, _ in pairs.pairs:
        columns.update((i, j))
    for i, j, k, _ in triads.triads:
        columns.update((i, j, k))
    return {col: q for q, col in enumerate(sorted(columns))}


def polynomial_interactions(matrix: FeatureMatrix, selected) -> FeatureMatrix:
    """Degree-2 interaction-only expansion over the selected columns.

    Emits x_i*x_j for every unordered pair (no squares, no bias, originals
    not duplicated), named poly_<i>_<j> by original column index, ordered
    combinatorially: (0,1), (0,2), ..., (1,2), ...
    """
    selected = list(selected)
    if len(selected) < 2:
        raise ValidationError("polynomial interactions need at least 2 columns")
    for j in selected:
        if not 0 <= j < matrix.n_columns:
            raise ValidationError(f"column index {j} out of range")
    pair_list = list(combinations(sorted(selected), 2))
    values = np.empty((matrix.n_rows, len(pair_list)), dtype=np.float64)
    names = []
    for col, (i, j) in enumerate(pair_list):
        values[:, col] = matrix.values[:, i] * matrix.values[:, j]
        names.append(f"poly_{i}_{j}")
    return FeatureMatrix.from_values(names, values)
