"""Mutual information estimators over dataset columns. All values in nats.

Three estimators cover the column kinds that occur here: exact plug-in MI for
discrete/binary columns, the mixed discrete-continuous kNN estimator (Ross
variant of KSG) for count and continuous columns against the binary label,
and plug-in conditional MI / interaction information over binarized columns.

Negative KSG estimates are reported as-is; callers clamp to 0 at selection
time so raw values stay visible for diagnostics.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .dataset import BINARY, SplitView
from .errors import ValidationError
from .special import digamma

PLUG_IN = "plug_in"
KSG = "ksg"

_MAX_SYMBOLS = 64


@dataclass(frozen=True)
class MiScore:
    value: float
    estimator: str


def _check_same_length(*columns) -> int:
    lengths = {len(c) for c in columns}
    if len(lengths) != 1:
        raise ValidationError(f"column length mismatch: {sorted(lengths)}")
    (n,) = lengths
    if n == 0:
        raise ValidationError("empty input")
    return n


def _codes(x: np.ndarray, name: str) -> tuple[np.ndarray, int]:
    symbols, codes = np.unique(np.asarray(x), return_inverse=True)
    if symbols.size > _MAX_SYMBOLS:
        raise ValidationError(
            f"{name} has {symbols.size} distinct symbols, more than "
            f"{_MAX_SYMBOLS}; plug-in MI is for discrete columns"
        )
    return codes, symbols.size


def _require_binary(x: np.ndarray, name: str) -> np.ndarray:
    x = np.asarray(x)
    if not np.all(np.isin(x, (0, 1))):
        raise ValidationError(f"{name} must be binary (0/1 values only)")
    return x.astype(np.int64)


def entropy(x) -> float:
    """Plug-in Shannon entropy of a discrete column, in nats."""
    x = np.asarray(x)
    _check_same_length(x)
    _, counts = np.unique(x, return_counts=True)
    p = counts / counts.sum()
    return float(-np.sum(p * np.log(p)))


def plug_in_mi(x, y) -> MiScore:
    """Exact empirical MI between two discrete columns.

    Sum of p(a,b)·ln[p(a,b)/(p(a)p(b))] over occupied cells of the joint
    contingency table.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    n = _check_same_length(x, y)
    cx, nx = _codes(x, "x")
    cy, ny = _codes(y, "y")
    joint = np.bincount(cx * ny + cy, minlength=nx * ny).reshape(nx, ny)
    p = joint / n
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    mask = p > 0
    contributions = p[mask] * np.log(p[mask] / (px @ py)[mask])
    # summing in sorted order makes the result exactly symmetric in (x, y):
    # transposing the table permutes the cells but not their contributions
    value = float(np.sum(np.sort(contributions)))
    return MiScore(value, PLUG_IN)


def _jitter_seed(x: np.ndarray, seed: int) -> int:
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(x, dtype=np.float64).tobytes())
    digest.update(int(seed).to_bytes(8, "little", signed=True))
    return int.from_bytes(digest.digest()[:8], "little")


def ksg_mi(x, y, k: int = 3, seed: int = 0) -> MiScore:
    """Mixed discrete-continuous kNN MI estimate (Ross variant of KSG).

    For each sample, the radius is the distance to its k-th nearest neighbor
    among same-label points; m_i counts all points within that radius.
    Estimate = psi(N) - <psi(N_label)> + psi(k) - <psi(m_i)>.

    Ties (exact duplicates are the norm in count columns) are broken by
    adding jitter of magnitude 1e-10 x column std, seeded deterministically
    from the column content and the seed, so identical inputs give identical
    output bits. Labels whose class has fewer than 2 members are excluded;
    classes smaller than k+1 use the largest k they support.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y)
    n = _check_same_length(x, y)
    if k < 1:
        raise ValidationError("k must be >= 1")
    if n < k + 2:
        raise ValidationError(f"need at least {k + 2} samples for k = {k}")
    labels, label_codes = np.unique(y, return_inverse=True)
    if labels.size < 2:
        raise ValidationError("labels contain a single class")

    std = float(np.std(x))
    scale = 1e-10 * (std if std > 0 else 1.0)
    rng = np.random.default_rng(_jitter_seed(x, seed))
    xj = x + scale * rng.standard_normal(n)
    points = xj[:, None]

    radius = np.zeros(n)
    k_used = np.zeros(n)
    label_count = np.zeros(n)
    usable = np.zeros(n, dtype=bool)
    for code in range(labels.size):
        members = np.flatnonzero(label_codes == code)
        label_count[members] = members.size
        if members.size < 2:
            continue
        kc = min(k, members.size - 1)
        tree = cKDTree(points[members])
        # k=kc+1 because each point is its own nearest neighbor at distance 0
        dist, _ = tree.query(points[members], k=kc + 1)
        radius[members] = dist[:, -1]
        k_used[members] = kc
        usable[members] = True

    if not np.any(usable):
        raise ValidationError("every label class has fewer than 2 members")

    idx = np.flatnonzero(usable)
    full_tree = cKDTree(points)
    m = np.asarray(
        full_tree.query_ball_point(points[idx], radius[idx], return_length=True),
        dtype=np.float64,
    )
    m -= 1.0  # the query ball always contains the point itself

    n_eff = idx.size
    value = float(
        digamma(n_eff)
        - np.mean(digamma(label_count[idx]))
        + np.mean(digamma(k_used[idx]))
        - np.mean(digamma(m))
    )
    return MiScore(value, KSG)


def conditional_mi(xi, xj, y) -> MiScore:
    """I(X_i; X_j | Y) = sum over strata of p(y)·I(X_i; X_j | Y=y).

    Plug-in within each label stratum; strata with fewer than 2 samples
    contribute 0.
    """
    xi = _require_binary(xi, "xi")
    xj = _require_binary(xj, "xj")
    y = _require_binary(y, "y")
    n = _check_same_length(xi, xj, y)
    total = 0.0
    for value in (0, 1):
        mask = y == value
        count = int(mask.sum())
        if count < 2:
            continue
        total += (count / n) * plug_in_mi(xi[mask], xj[mask]).value
    return MiScore(total, PLUG_IN)


def interaction_information(xi, xj, xk) -> MiScore:
    """II(X_i; X_j; X_k) = I(X_i; X_j) - I(X_i; X_j | X_k).

    McGill sign convention: negative values mean synergy (conditioning
    reveals dependence, as in XOR), positive values redundancy. Callers
    threshold on |II|.
    """
    xi = _require_binary(xi, "xi")
    xj = _require_binary(xj, "xj")
    xk = _require_binary(xk, "xk")
    _check_same_length(xi, xj, xk)
    return MiScore(
        plug_in_mi(xi, xj).value - conditional_mi(xi, xj, xk).value,
        PLUG_IN,
    )


def label_mi(values: np.ndarray, kind: str, labels: np.ndarray,
             k: int = 3, seed: int = 0) -> MiScore:
    """Feature-vs-label MI with the estimator chosen by column kind.

    Binary columns use exact plug-in; count and continuous columns use the
    kNN estimator, which handles both without explicit discretization.
    """
    if kind == BINARY:
        return plug_in_mi(values, labels)
    return ksg_mi(values, labels, k=k, seed=seed)


def view_label_mi(view: SplitView, j: int, k: int = 3, seed: int = 0) -> MiScore:
    return label_mi(
        view.column_values(j), view.column_kinds[j], view.labels(), k=k, seed=seed
    )
