"""Matroids induced by linear (in)dependence of the minimal-vector pairs.

The ground set is a collection of distinct pair indices; a subset is
independent when the basis coordinates of its representatives have full
rank over the chosen field (Q, or F_p for an odd prime p).  Independence
is always decided by a rank oracle; the full 2^E family is materialized
only in the small-r isomorphism search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from . import exactmath, lattice
from .colex import colex_rank

RATIONALS = "Q"

CIRCUIT_GUARD = 20
ISO_GUARD = 6


def _check_field(f):
    if f == RATIONALS:
        return f
    if exactmath.is_odd_prime(f):
        return f
    raise ValueError(f"field must be 'Q' or an odd prime, got {f!r}")


@dataclass(frozen=True)
class GroundSet:
    """Ordered, duplicate-free pair indices plus the field of coefficients."""

    elements: tuple
    field: object = RATIONALS

    def __post_init__(self):
        elems = tuple(int(e) for e in self.elements)
        if len(set(elems)) != len(elems):
            raise ValueError("ground set has repeated pair indices")
        for e in elems:
            if not 1 <= e <= lattice.N_PAIRS:
                raise ValueError(f"pair index out of range: {e}")
        object.__setattr__(self, "elements", elems)
        _check_field(self.field)

    def __contains__(self, e) -> bool:
        return e in self.elements


@dataclass
class MatroidStructure:
    """Rank-oracle-backed matroid on a ground set of pair indices.

    The oracle is pure; the cache only memoizes its answers, so concurrent
    queries are safe.
    """

    ground: GroundSet
    _ranks: dict = field(default_factory=dict, repr=False)

    def _subset(self, s):
        elems = tuple(sorted(int(e) for e in s))
        if len(set(elems)) != len(elems):
            raise ValueError("subset has repeated elements")
        for e in elems:
            if e not in self.ground:
                raise ValueError(f"element {e} is not in the ground set")
        return elems

    def rank(self, s) -> int:
        elems = self._subset(s)
        cached = self._ranks.get(elems)
        if cached is not None:
            return cached
        mat = lattice.subset_coord_matrix(elems)
        if self.ground.field == RATIONALS:
            r = exactmath.rank_q(mat)
        else:
            r = exactmath.rank_fp(mat, self.ground.field)
        self._ranks[elems] = r
        return r

    def is_independent(self, s) -> bool:
        elems = self._subset(s)
        return self.rank(elems) == len(elems)

    def circuits(self, within=None):
        """All minimal dependent subsets of `within` (default: whole ground set).

        Each returned subset is dependent while all of its maximal proper
        subsets are independent, which by heredity certifies minimality.
        """
        pool = self.ground.elements if within is None else self._subset(within)
        if len(pool) > CIRCUIT_GUARD:
            raise ValueError(f"circuit enumeration limited to {CIRCUIT_GUARD} elements")
        out = []
        # no circuit can exceed rank+1 elements
        max_size = min(len(pool), self.rank(pool) + 1)
        for size in range(1, max_size + 1):
            for cand in combinations(pool, size):
                if self.is_independent(cand):
                    continue
                if all(self.is_independent(cand[:j] + cand[j + 1 :]) for j in range(size)):
                    out.append(frozenset(cand))
        return out


def matroid_on(elements, field=RATIONALS) -> MatroidStructure:
    return MatroidStructure(GroundSet(tuple(elements), field))


def full_ground_matroid(field=RATIONALS) -> MatroidStructure:
    return matroid_on(range(1, lattice.N_PAIRS + 1), field)


def _dependence_family(m: MatroidStructure, subset):
    """Bitmask set of dependent sub-subsets of an ordered subset."""
    r = len(subset)
    masks = []
    for mask in range(1, 1 << r):
        picked = [subset[j] for j in range(r) if mask >> j & 1]
        if not m.is_independent(picked):
            masks.append(mask)
    return frozenset(masks)


def _canonical_family(family: frozenset, r: int):
    """Lexicographically least relabeling of a dependence family."""
    best = None
    for perm in permutations(range(r)):
        relabeled = []
        for mask in family:
            out = 0
            for j in range(r):
                if mask >> j & 1:
                    out |= 1 << perm[j]
            relabeled.append(out)
        key = tuple(sorted(relabeled))
        if best is None or key < best:
            best = key
    return best


def iso_class_ids(r: int, field=RATIONALS):
    """Matroid-equivalence class id of every r-subset, indexed by colex rank.

    Brute force: the dependence family of each subset is canonicalized by
    exhaustive relabeling; ids are dense, in order of first appearance.
    """
    if not 1 <= r <= ISO_GUARD:
        raise ValueError(f"isomorphism search limited to r <= {ISO_GUARD}")
    m = full_ground_matroid(field)
    canon_cache = {}
    class_of_canon = {}
    ids = [0] * _n_subsets(r)
    for subset in combinations(range(1, lattice.N_PAIRS + 1), r):
        family = _dependence_family(m, subset)
        canon = canon_cache.get(family)
        if canon is None:
            canon = canon_cache[family] = _canonical_family(family, r)
        cid = class_of_canon.get(canon)
        if cid is None:
            cid = class_of_canon[canon] = len(class_of_canon)
        ids[colex_rank(tuple(e - 1 for e in subset))] = cid
    return ids


def brute_force_iso_classes(r: int, field=RATIONALS) -> int:
    """Number of matroid-equivalence classes among all r-subsets (r <= 6)."""
    return len(set(iso_class_ids(r, field)))


def _n_subsets(r: int) -> int:
    from math import comb

    return comb(lattice.N_PAIRS, r)
