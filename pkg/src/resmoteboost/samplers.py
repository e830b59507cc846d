"""Reference resamplers: SMOTE, Borderline-SMOTE, ADASYN, Tomek links, RUS.

Conventions shared by the module: distances are Euclidean, nearest-neighbor
ties break toward the lower index, and oversamplers return the enlarged
minority set only (the caller reassembles with the untouched majority).
tomek_links is the exception and returns the reduced full dataset.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import cdist

from .data import ClassPartition, Dataset, NEGATIVE, POSITIVE, RandomSource
from .pruning import smote_interpolate


def _synthesize(minority: Dataset, seed_indices, k_neighbors: int, rng: RandomSource) -> Dataset:
    """Interpolated synthetics for the given seeds; returns minority + synthetics."""
    if len(seed_indices) == 0:
        return minority
    rows = []
    for i in seed_indices:
        s = smote_interpolate(minority.X[i], minority, int(i), k_neighbors, rng)
        rows.append(s.x)
    syn = Dataset(np.vstack(rows), np.full(len(rows), POSITIVE),
                  feature_names=minority.feature_names, source_tag=minority.source_tag)
    return minority.concat(syn)


def smote(partition: ClassPartition, n_new: int, k_neighbors: int, rng: RandomSource) -> Dataset:
    """Classic SMOTE: each synthetic interpolates a random minority seed toward
    one of its k nearest minority neighbors. Returns minority + synthetics."""
    minority = partition.minority
    if len(minority) < 2:
        raise ValueError("need at least 2 minority samples")
    seeds = [int(rng.integers(0, len(minority))) for _ in range(n_new)]
    return _synthesize(minority, seeds, k_neighbors, rng)


def _majority_neighbor_counts(partition: ClassPartition, k_neighbors: int) -> np.ndarray:
    """For each minority point: how many of its k nearest neighbors in the
    full dataset (excluding itself) belong to the majority class."""
    full = partition.majority.concat(partition.minority)
    m_off = len(partition.majority)
    d = cdist(partition.minority.X, full.X)
    counts = np.empty(len(partition.minority), dtype=int)
    for i in range(len(partition.minority)):
        order = np.argsort(d[i], kind="stable")
        order = order[order != m_off + i]                 # drop self
        nn = order[: min(k_neighbors, len(order))]
        counts[i] = int(np.sum(nn < m_off))
    return counts


def borderline_smote(partition: ClassPartition, n_new: int, k_neighbors: int,
                     rng: RandomSource) -> Dataset:
    """Borderline-SMOTE (borderline1 variant): seeds are drawn only from the
    DANGER set, minority points with at least half but not all of their k
    full-set neighbors in the majority class. Falls back to the whole
    minority when no point is in danger."""
    minority = partition.minority
    if len(minority) < 2:
        raise ValueError("need at least 2 minority samples")
    counts = _majority_neighbor_counts(partition, k_neighbors)
    k_eff = min(k_neighbors, len(partition.majority) + len(minority) - 1)
    danger = np.flatnonzero((counts * 2 >= k_eff) & (counts < k_eff))
    if len(danger) == 0:
        danger = np.arange(len(minority))
    seeds = [int(danger[int(rng.integers(0, len(danger)))]) for _ in range(n_new)]
    return _synthesize(minority, seeds, k_neighbors, rng)


def adasyn(partition: ClassPartition, n_new: int, k_neighbors: int,
           rng: RandomSource) -> Dataset:
    """ADASYN: allocate synthetics per seed proportionally to the fraction of
    majority neighbors around it, so harder minority points get more."""
    minority = partition.minority
    if len(minority) < 2:
        raise ValueError("need at least 2 minority samples")
    counts = _majority_neighbor_counts(partition, k_neighbors)
    k_eff = min(k_neighbors, len(partition.majority) + len(minority) - 1)
    r = counts / k_eff
    total = r.sum()
    if total > 0:
        alloc = [int(math.floor(n_new * ri / total + 0.5)) for ri in r]
    else:
        base, rem = divmod(n_new, len(minority))
        alloc = [base + (1 if i < rem else 0) for i in range(len(minority))]
    seeds = [i for i, a in enumerate(alloc) for _ in range(a)]
    return _synthesize(minority, seeds, k_neighbors, rng)


def tomek_links(partition: ClassPartition) -> Dataset:
    """Remove every majority member of a Tomek link (a mutual-1-NN pair with
    one point from each class), in a single simultaneous pass. Returns the
    reduced full dataset (majority first, then minority)."""
    if len(partition.majority) == 0 or len(partition.minority) == 0:
        raise ValueError("both classes must be non-empty")
    full = partition.majority.concat(partition.minority)
    m_off = len(partition.majority)
    d = cdist(full.X, full.X)
    np.fill_diagonal(d, np.inf)
    nn = np.argmin(d, axis=1)  # argmin is index-ordered, so ties pick lower index
    drop = set()
    for a in range(m_off):                      # a in majority
        b = int(nn[a])
        if b >= m_off and int(nn[b]) == a:      # b in minority and mutual
            drop.add(a)
    keep = [i for i in range(len(full)) if i not in drop]
    return full.subset(keep)


def random_under(partition: ClassPartition, n_remove: int, rng: RandomSource) -> Dataset:
    """Uniformly remove n_remove majority samples; returns the reduced majority."""
    majority = partition.majority
    if n_remove >= len(majority):
        raise ValueError("cannot remove the whole majority class")
    if n_remove == 0:
        return majority
    order = rng.permutation(len(majority))
    keep = np.sort(order[n_remove:])
    return majority.subset(keep)
