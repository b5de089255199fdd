"""Existence of dihedral covers of order 2p branched over the quartic.

A cover branched at 2Q + p(C_1 + .. + C_r), for sections s_1 .. s_r and an
odd prime p, exists exactly when some combination sum a_i s_i with every
a_i in {1, .., p-1} lies in p times the section lattice.  In basis
coordinates this says: the mod-p kernel of the matrix whose columns are
the coordinate vectors of the signed sections contains a vector with all
entries nonzero.  The kernel is enumerated projectively under a hard
size bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import exactmath, lattice

KERNEL_ENUM_BOUND = 10**7
COVER_PRIMES_BOUND = 10**4


class KernelTooLarge(RuntimeError):
    """Kernel enumeration would exceed the hard bound p**nullity <= 1e7."""


@dataclass(frozen=True)
class CoverQuery:
    """A signed subset of pair indices plus an odd prime p."""

    pairs: tuple
    p: int
    signs: tuple = None

    def __post_init__(self):
        pairs = tuple(int(i) for i in self.pairs)
        if not pairs:
            raise ValueError("subset must be nonempty")
        if len(set(pairs)) != len(pairs):
            raise ValueError("subset has repeated pair indices")
        for i in pairs:
            if not 1 <= i <= lattice.N_PAIRS:
                raise ValueError(f"pair index out of range: {i}")
        if not exactmath.is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p!r}")
        signs = self.signs
        if signs is None:
            signs = (1,) * len(pairs)
        signs = tuple(int(s) for s in signs)
        if len(signs) != len(pairs) or any(s not in (-1, 1) for s in signs):
            raise ValueError("signs must be +/-1, one per pair")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "signs", signs)


def _columns_mod_p(query: CoverQuery):
    """7 x r matrix of signed basis coordinates, reduced mod p."""
    coords = lattice.rep_basis_coords()
    p = query.p
    cols = []
    for i, s in zip(query.pairs, query.signs):
        cols.append([(s * c) % p for c in coords[i - 1]])
    return [[cols[j][i] for j in range(len(cols))] for i in range(7)]


def _kernel_basis_mod_p(mat, p):
    """Basis of the right kernel of `mat` over F_p (list of columns vectors)."""
    rows = [row[:] for row in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-rows[i][fc]) % p
        basis.append(vec)
    return basis


def _has_full_support_vector(basis, p):
    """Whether some nonzero F_p-combination of the basis has no zero entry.

    Full support is invariant under scaling, so combinations are enumerated
    projectively (first nonzero coefficient fixed to 1).
    """
    nu = len(basis)
    ncols = len(basis[0])
    for lead in range(nu):
        for tail in product(range(p), repeat=nu - lead - 1):
            vec = basis[lead][:]
            for k, c in enumerate(tail):
                if c:
                    row = basis[lead + 1 + k]
                    vec = [(x + c * y) % p for x, y in zip(vec, row)]
            if all(vec):
                return True
    return False


def dcover_exists(query: CoverQuery) -> bool:
    """Whether the dihedral cover of order 2p exists for this signed subset."""
    p = query.p
    basis = _kernel_basis_mod_p(_columns_mod_p(query), p)
    if not basis:
        return False
    if p ** len(basis) > KERNEL_ENUM_BOUND:
        raise KernelTooLarge(
            f"kernel has p**{len(basis)} = {p ** len(basis)} elements, over the bound")
    return _has_full_support_vector(basis, p)


def _rank_mod_p(pairs, p) -> int:
    return exactmath.rank_fp(lattice.subset_coord_matrix(pairs), p)


def circuit_implies_cover(pairs, p: int) -> bool:
    """True when the subset is a circuit over F_p (signs are irrelevant).

    A circuit's unique-up-to-scalar dependence has full support, so a True
    answer forces dcover_exists; that implication is asserted here.
    """
    query = CoverQuery(tuple(pairs), p)  # validates inputs
    r = len(query.pairs)
    if _rank_mod_p(query.pairs, p) == r:
        return False
    is_circuit = all(
        _rank_mod_p(query.pairs[:j] + query.pairs[j + 1 :], p) == r - 1
        for j in range(r)
    )
    if is_circuit:
        assert dcover_exists(query), "circuit without a cover: broken invariant"
    return is_circuit


def cover_primes(pairs, p_max: int, signs=None):
    """Odd primes p <= p_max for which the cover exists, in increasing order."""
    if p_max > COVER_PRIMES_BOUND:
        raise ValueError(f"p_max is limited to {COVER_PRIMES_BOUND}")
    out = []
    for p in exactmath.primes_upto(p_max):
        if p == 2:
            continue
        if dcover_exists(CoverQuery(tuple(pairs), p, signs)):
            out.append(p)
    return out
