"""Brute-force reference computations, independent of the package's search code."""

from __future__ import annotations

import itertools

import numpy as np


def box_points(n):
    return list(itertools.product(*(range(1, c + 1) for c in n)))


def brute_solutions(k, b, n):
    """Every k-multiset of box points summing to b, by plain enumeration."""
    pts = box_points(n)
    b = tuple(b)
    return [
        combo
        for combo in itertools.combinations_with_replacement(pts, k)
        if tuple(map(sum, zip(*combo))) == b
    ]


def brute_supports(k, b, n):
    idx = {p: i for i, p in enumerate(box_points(n))}
    return {frozenset(idx[p] for p in combo) for combo in brute_solutions(k, b, n)}


def _free_table(k, b, n):
    volume = len(box_points(n))
    masks = np.arange(1 << volume, dtype=np.int64)
    bad = np.zeros(1 << volume, dtype=bool)
    for sup in brute_supports(k, b, n):
        e = sum(1 << i for i in sup)
        bad |= (masks & e) == e
    return volume, masks, ~bad


def _popcount(masks):
    counts = np.zeros_like(masks)
    m = masks.copy()
    while m.any():
        counts += m & 1
        m >>= 1
    return counts


def brute_mu(k, b, n):
    """(mu, lexicographically smallest maximum free set as a sorted index tuple)."""
    volume, masks, free = _free_table(k, b, n)
    sizes = np.where(free, _popcount(masks), -1)
    mu = int(sizes.max())
    best = [int(m) for m in masks[sizes == mu]]
    key = min(tuple(i for i in range(volume) if m >> i & 1) for m in best)
    return mu, key


def brute_counts(k, b, n):
    """(number of free sets, number of maximal free sets) over all subsets."""
    volume, masks, free = _free_table(k, b, n)
    maximal = free.copy()
    for v in range(volume):
        bit = 1 << v
        missing = (masks & bit) == 0
        maximal &= ~(missing & free[masks | bit])
    return int(free.sum()), int(maximal.sum())
