from fractions import Fraction
from itertools import permutations

import pytest

from mwquartic import exactmath, lattice
from mwquartic.lattice import (
    LatticeBasis,
    MinimalVector,
    compute_basis,
    enumerate_pairs,
    height_pairing,
    pair_index,
    rank_drop_primes,
    rep_basis_coords,
    representative,
    representatives,
)

from conftest import DROP3_SUBSET, FOUR_CIRCUIT


def test_exactly_28_pairs_in_descending_lex_order():
    pairs = enumerate_pairs()
    assert len(pairs) == 28
    assert [i for i, _ in pairs] == list(range(1, 29))
    # oracle: descending sort of all distinct permutations
    expected = sorted(set(permutations((1,) * 6 + (-3,) * 2)), reverse=True)
    assert [v.coords for _, v in pairs] == expected


def test_pair_one_has_minus_three_in_last_two_slots():
    assert representative(1).coords == (1, 1, 1, 1, 1, 1, -3, -3)
    assert representative(28).coords == (-3, -3, 1, 1, 1, 1, 1, 1)


def test_minimal_vector_validation():
    MinimalVector((1, 1, 1, 1, 1, 1, -3, -3))
    MinimalVector((-1, -1, 3, -1, -1, 3, -1, -1))
    with pytest.raises(ValueError):
        MinimalVector((1,) * 8)
    with pytest.raises(ValueError):
        MinimalVector((1, 1, 1, 1, 1, 1, -3, 3))


def test_heights():
    for _, v in enumerate_pairs():
        assert sum(v.coords) == 0
        assert height_pairing(v, v) == Fraction(3, 2)
        assert height_pairing(v, -v) == Fraction(-3, 2)


def test_cross_pairings_are_half_integers():
    reps = representatives()
    values = {
        height_pairing(reps[i], reps[j])
        for i in range(28)
        for j in range(28)
        if i != j
    }
    assert values == {Fraction(1, 2), Fraction(-1, 2)}
    # hand check: -3 slots {1,2} vs {1,3} -> (9 - 3 - 3 + 5)/16 = 1/2
    a = MinimalVector((-3, -3, 1, 1, 1, 1, 1, 1))
    b = MinimalVector((-3, 1, -3, 1, 1, 1, 1, 1))
    assert height_pairing(a, b) == Fraction(1, 2)


def test_pair_lookup_is_sign_invariant():
    for i, v in enumerate_pairs():
        assert pair_index(v) == i
        assert pair_index(-v) == i


def test_basis_has_rank_seven_and_round_trips():
    basis = compute_basis()
    assert basis.rank == 7
    for _, v in enumerate_pairs():
        coords = basis.coordinates(v.coords)
        assert len(coords) == 7
        assert basis.expand(coords) == v.coords


def test_basis_coordinates_are_linear():
    basis = compute_basis()
    v = representative(1)
    w = representative(9)
    double = basis.coordinates(tuple(2 * x for x in v.coords))
    assert double == tuple(2 * c for c in basis.coordinates(v.coords))
    summed = basis.coordinates(tuple(a + b for a, b in zip(v.coords, w.coords)))
    assert summed == tuple(
        a + b
        for a, b in zip(basis.coordinates(v.coords), basis.coordinates(w.coords))
    )


def test_non_lattice_vector_rejected():
    basis = compute_basis()
    with pytest.raises(ValueError):
        basis.coordinates((1, 0, 0, 0, 0, 0, 0, 0))


def test_span_is_the_full_dual_lattice():
    # Gram determinant of a basis under the height pairing must be 1/2,
    # the discriminant of the dual E7 lattice; this certifies that the 28
    # representatives generate the whole section lattice.
    basis = compute_basis()
    gram = [
        [Fraction(sum(x * y for x, y in zip(u, v)), 16) for v in basis.rows]
        for u in basis.rows
    ]
    det = _fraction_det(gram)
    assert abs(det) == Fraction(1, 2)


def _fraction_det(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def test_rank_drop_primes_singleton_empty():
    from math import gcd

    for i in (1, 13, 28):
        assert rank_drop_primes({i}) == set()
        # coordinates are primitive: no prime divides all of them
        g = 0
        for c in rep_basis_coords()[i - 1]:
            g = gcd(g, c)
        assert g == 1


def test_rank_drop_primes_examples():
    assert rank_drop_primes((1, 2, 3)) == set()
    # frozen: this independent 7-subset drops rank exactly at p = 3
    assert rank_drop_primes(DROP3_SUBSET) == {3}
    mat = lattice.subset_coord_matrix(DROP3_SUBSET)
    assert exactmath.rank_q(mat) == 7
    assert exactmath.rank_fp(mat, 3) == 6
    assert exactmath.rank_fp(mat, 5) == 7


def test_rank_drop_primes_rejects_dependent_subset():
    with pytest.raises(ValueError):
        rank_drop_primes(FOUR_CIRCUIT)


def test_four_circuit_sums_to_zero():
    rows = [representative(i).coords for i in FOUR_CIRCUIT]
    assert [sum(col) for col in zip(*rows)] == [0] * 8
    assert exactmath.rank_q(rows) == 3
