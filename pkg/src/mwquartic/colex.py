"""Colexicographic subset ranking (the combinatorial number system).

An r-subset {c_1 < ... < c_r} of nonnegative integers has colex rank
sum_i C(c_i, i); ranks run 0 .. C(n, r)-1 when elements are drawn from
{0, .., n-1}.  The census addresses its flat per-level tables with these
ranks, so both scalar and numpy-vectorized versions live here.
"""

from __future__ import annotations

from functools import cache
from math import comb

import numpy as np

MAX_ELEMENT = 27  # ground set {0..27}: one slot per minimal-vector pair


def colex_rank(subset) -> int:
    elems = sorted(subset)
    if len(set(elems)) != len(elems):
        raise ValueError("subset has repeated elements")
    return sum(comb(c, i + 1) for i, c in enumerate(elems))


def colex_unrank(rank: int, r: int) -> tuple:
    out = [0] * r
    t = rank
    for i in range(r, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= t:
            c += 1
        out[i - 1] = c
        t -= comb(c, i)
    if t:
        raise ValueError("rank out of range")
    return tuple(out)


def child_ranks(subset):
    """Colex ranks of the (r-1)-subsets obtained by deleting one element."""
    elems = sorted(subset)
    r = len(elems)
    pref = [0] * (r + 1)
    for i, c in enumerate(elems):
        pref[i + 1] = pref[i] + comb(c, i + 1)
    suff = [0] * (r + 1)
    for i in range(r - 1, -1, -1):
        suff[i] = suff[i + 1] + comb(elems[i], i)
    return [pref[j] + suff[j + 1] for j in range(r)]


@cache
def binom_table(max_n: int = MAX_ELEMENT + 1):
    """C(c, k) for 0 <= c <= max_n, 0 <= k <= max_n, as an int64 array."""
    t = np.zeros((max_n + 1, max_n + 1), dtype=np.int64)
    for c in range(max_n + 1):
        for k in range(max_n + 1):
            t[c, k] = comb(c, k)
    return t


@cache
def _binom_table_i32(max_n: int = MAX_ELEMENT + 1):
    return binom_table(max_n).astype(np.int32)


def unrank_block(ranks: np.ndarray, r: int) -> np.ndarray:
    """Vectorized colex unranking; returns an (n, r) int8 member array."""
    table = binom_table()
    t = np.asarray(ranks, dtype=np.int64).copy()
    members = np.empty((t.shape[0], r), dtype=np.int8)
    for i in range(r, 0, -1):
        col = table[:, i]  # nondecreasing in c
        c = np.searchsorted(col, t, side="right") - 1
        members[:, i - 1] = c
        t -= col[c]
    return members


def child_rank_block(members: np.ndarray) -> np.ndarray:
    """Vectorized child ranks: (n, r) members -> (n, r) int32 colex ranks.

    Column j holds the rank of the subset with position j deleted.  Ranks
    stay below C(28, 14) < 2**31, so int32 is safe.
    """
    table = _binom_table_i32()
    n, r = members.shape
    idx = members.astype(np.intp)
    hi = table[idx, np.arange(1, r + 1)]
    lo = table[idx, np.arange(0, r)]
    pref = np.zeros((n, r + 1), dtype=np.int32)
    np.cumsum(hi, axis=1, out=pref[:, 1:])
    suff = np.zeros((n, r + 1), dtype=np.int32)
    suff[:, :-1] = np.cumsum(lo[:, ::-1], axis=1)[:, ::-1]
    return pref[:, :r] + suff[:, 1:]
