"""The 56 minimal vectors of the dual E7 lattice in its Q^8 model.

The lattice of sections is realized inside the sum-zero hyperplane of Q^8;
its 56 minimal vectors are (1/4) * (permutations of (1,1,1,1,1,1,-3,-3))
and their negatives.  Coordinates are stored pre-scaled by 4 so that every
vector is a small-integer tuple; the height pairing of two vectors is then
dot(v, w) / 16, giving height 3/2 on the minimal vectors themselves.

Vectors come in 28 +/- pairs.  Pair index i (1-based) refers to the i-th
tuple in descending lexicographic order of the 28 permutations with six +1
entries; that representative convention fixes all tables produced by the
census and the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from . import exactmath

SCALE = 4
HEIGHT_DENOM = 16  # SCALE**2
N_PAIRS = 28

_POSITIVE_POOL = sorted((1,) * 6 + (-3,) * 2)
_NEGATIVE_POOL = sorted((-1,) * 6 + (3,) * 2)


@dataclass(frozen=True)
class MinimalVector:
    """One of the 56 minimal vectors, as 8 integers scaled by 4."""

    coords: tuple

    def __post_init__(self):
        cs = tuple(int(x) for x in self.coords)
        pool = sorted(cs)
        if pool != _POSITIVE_POOL and pool != _NEGATIVE_POOL:
            raise ValueError(f"not a scaled minimal vector: {cs}")
        object.__setattr__(self, "coords", cs)

    def __neg__(self) -> "MinimalVector":
        return MinimalVector(tuple(-x for x in self.coords))

    @property
    def is_representative(self) -> bool:
        """True for the six-(+1) member of the +/- pair."""
        return sum(1 for x in self.coords if x == 1) == 6


def dot(v: MinimalVector, w: MinimalVector) -> int:
    return sum(a * b for a, b in zip(v.coords, w.coords))


def height_pairing(v: MinimalVector, w: MinimalVector) -> Fraction:
    """Height pairing of the underlying rational vectors: dot / 16."""
    return Fraction(dot(v, w), HEIGHT_DENOM)


@cache
def representatives():
    """The 28 pair representatives in descending lexicographic order."""
    tuples = []
    for i in range(7, 0, -1):  # 1-based positions of the two -3 entries
        for j in range(8, i, -1):
            coords = tuple(-3 if k in (i, j) else 1 for k in range(1, 9))
            tuples.append(coords)
    assert tuples == sorted(tuples, reverse=True)
    return tuple(MinimalVector(c) for c in tuples)


def enumerate_pairs():
    """[(pair index 1..28, representative)] in canonical order."""
    return [(i + 1, v) for i, v in enumerate(representatives())]


@cache
def _pair_lookup():
    return {v.coords: i + 1 for i, v in enumerate(representatives())}


def pair_index(v: MinimalVector) -> int:
    """Canonical 1..28 index of the +/- pair containing v."""
    key = v.coords if v.is_representative else (-v).coords
    return _pair_lookup()[key]


def representative(index: int) -> MinimalVector:
    if not 1 <= index <= N_PAIRS:
        raise ValueError(f"pair index out of range: {index}")
    return representatives()[index - 1]


@dataclass(frozen=True)
class LatticeBasis:
    """Hermite-form basis of the integer span of the 28 scaled representatives."""

    rows: tuple   # 7 integer 8-vectors
    pivots: tuple  # pivot column of each row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def coordinates(self, vector) -> tuple:
        """Integer coordinates of a lattice vector in this basis."""
        v = [int(x) for x in vector]
        out = []
        for row, piv in zip(self.rows, self.pivots):
            c, rem = divmod(v[piv], row[piv])
            if rem:
                raise ValueError("vector is not in the lattice")
            if c:
                v = [x - c * y for x, y in zip(v, row)]
            out.append(c)
        if any(v):
            raise ValueError("vector is not in the lattice")
        return tuple(out)

    def expand(self, coords) -> tuple:
        v = [0] * len(self.rows[0])
        for c, row in zip(coords, self.rows):
            if c:
                v = [x + int(c) * y for x, y in zip(v, row)]
        return tuple(v)


@cache
def compute_basis() -> LatticeBasis:
    rows = exactmath.hnf([v.coords for v in representatives()])
    pivots = tuple(next(j for j, x in enumerate(row) if x) for row in rows)
    basis = LatticeBasis(tuple(tuple(r) for r in rows), pivots)
    assert basis.rank == 7
    return basis


@cache
def rep_basis_coords():
    """Basis coordinates of all 28 representatives, as a tuple of 7-tuples."""
    basis = compute_basis()
    return tuple(basis.coordinates(v.coords) for v in representatives())


def subset_coord_matrix(pairs):
    """Rows of basis coordinates for a collection of pair indices."""
    coords = rep_basis_coords()
    rows = []
    for i in pairs:
        if not 1 <= int(i) <= N_PAIRS:
            raise ValueError(f"pair index out of range: {i}")
        rows.append(list(coords[int(i) - 1]))
    return rows


def rank_drop_primes(subset) -> set:
    """Primes p at which a Q-independent subset loses rank over F_p.

    Decided from the elementary divisors of the basis-coordinate matrix;
    raises ValueError if the subset is dependent over Q (every prime would
    qualify).
    """
    pairs = list(subset)
    if len(set(pairs)) != len(pairs):
        raise ValueError("subset has repeated pair indices")
    mat = subset_coord_matrix(pairs)
    if exactmath.rank_q(mat) != len(pairs):
        raise ValueError("subset is dependent over Q")
    out = set()
    for d in exactmath.snf_divisors(mat):
        out |= exactmath.prime_factors(d)
    return out
