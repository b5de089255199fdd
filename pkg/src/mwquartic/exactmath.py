"""Exact linear algebra over Z, Q and F_p, and gcds of binary forms.

Everything here runs on arbitrary-precision integers or ``Fraction``;
there is no floating point and no rounding anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


class SingularSystem(ValueError):
    """Raised when a square linear system has determinant zero."""


def _int_rows(m):
    rows = [[int(x) for x in row] for row in m]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
    return rows


def rank_q(m) -> int:
    """Rank over Q of an integer matrix, by fraction-free (Bareiss) elimination."""
    a = _int_rows(m)
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][col]
        row_r = a[rank]
        for i in range(rank + 1, nrows):
            row_i = a[i]
            fi = row_i[col]
            for j in range(col + 1, ncols):
                num = pv * row_i[j] - fi * row_r[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise AssertionError("Bareiss division not exact")
                row_i[j] = q
            row_i[col] = 0
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def is_odd_prime(p) -> bool:
    if not isinstance(p, int) or isinstance(p, bool) or p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


def rank_fp(m, p: int) -> int:
    """Rank of an integer matrix reduced mod an odd prime p."""
    if not is_odd_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p!r}")
    a = [[x % p for x in row] for row in _int_rows(m)]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][col]
        row_r = a[rank]
        for i in range(rank + 1, nrows):
            row_i = a[i]
            fi = row_i[col]
            if fi:
                # cross-multiplied elimination; no modular inverses needed
                for j in range(col, ncols):
                    row_i[j] = (pv * row_i[j] - fi * row_r[j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def hnf(m):
    """Row-style Hermite normal form with positive pivots; zero rows dropped.

    The returned rows span the same integer row lattice as the input, each
    pivot is positive, and entries above a pivot are reduced into
    ``[0, pivot)``.
    """
    a = _int_rows(m)
    if not a or not a[0]:
        return []
    nrows, ncols = len(a), len(a[0])
    r = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, nrows) if a[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][col]))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, nrows):
                if a[i][col]:
                    q = a[i][col] // a[r][col]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if r < nrows and a[r][col]:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][col] // a[r][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == nrows:
                break
    return a[:r]


def snf_divisors(m):
    """Nonzero elementary divisors d_1 | d_2 | ... of an integer matrix."""
    a = _int_rows(m)
    if not a or not a[0]:
        return []
    nrows, ncols = len(a), len(a[0])
    steps = min(nrows, ncols)
    for s in range(steps):
        while True:
            # move the absolutely smallest nonzero entry of the block to (s, s)
            best = None
            for i in range(s, nrows):
                for j in range(s, ncols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            bi, bj = best
            a[s], a[bi] = a[bi], a[s]
            if bj != s:
                for row in a:
                    row[s], row[bj] = row[bj], row[s]
            piv = a[s][s]
            dirty = False
            for i in range(s + 1, nrows):
                q = a[i][s] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[s])]
                if a[i][s]:
                    dirty = True
            for j in range(s + 1, ncols):
                q = a[s][j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[s]
                if a[s][j]:
                    dirty = True
            if dirty:
                continue
            # pivot must divide the whole remaining block
            offender = next(
                ((i, j) for i in range(s + 1, nrows) for j in range(s + 1, ncols)
                 if a[i][j] % piv),
                None,
            )
            if offender is None:
                break
            a[s] = [x + y for x, y in zip(a[s], a[offender[0]])]
    divisors = [abs(a[i][i]) for i in range(steps) if a[i][i]]
    # enforce the divisibility chain (the block sweep already yields it, but
    # normalize defensively)
    changed = True
    while changed:
        changed = False
        for i in range(len(divisors) - 1):
            x, y = divisors[i], divisors[i + 1]
            if y % x:
                g = gcd(x, y)
                divisors[i], divisors[i + 1] = g, x * y // g
                changed = True
    return divisors


def solve_rational(a, b):
    """Exact solution x of a*x = b for a square nonsingular rational matrix."""
    n = len(a)
    if n == 0:
        return []
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("system is not square")
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col]), None)
        if piv is None:
            raise SingularSystem("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def primes_upto(n: int):
    """All primes <= n, by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def prime_factors(n: int):
    """Set of prime divisors of |n| (empty for n in {-1, 0, 1})."""
    n = abs(int(n))
    out = set()
    if n < 2:
        return out
    for d in (2, 3):
        while n % d == 0:
            out.add(d)
            n //= d
    d = 5
    while d * d <= n:
        for step in (d, d + 2):
            while n % step == 0:
                out.add(step)
                n //= step
        d += 6
    if n > 1:
        out.add(n)
    return out


# ---------------------------------------------------------------------------
# binary forms


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form of the given degree in two variables (s, t).

    ``coeffs[i]`` multiplies ``s**(degree - i) * t**i``.  The zero form of
    any declared degree is allowed and reports ``is_zero``.
    """

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) != self.degree + 1:
            raise ValueError("coefficient count does not match degree")
        object.__setattr__(self, "coeffs", cs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __call__(self, s, t) -> Fraction:
        s, t = Fraction(s), Fraction(t)
        d = self.degree
        return sum((c * s ** (d - i) * t**i for i, c in enumerate(self.coeffs)), Fraction(0))

    def mul(self, other: "BinaryForm") -> "BinaryForm":
        d = self.degree + other.degree
        out = [Fraction(0)] * (d + 1)
        for i, ci in enumerate(self.coeffs):
            if ci:
                for j, cj in enumerate(other.coeffs):
                    out[i + j] += ci * cj
        return BinaryForm(d, tuple(out))

    def add(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        return BinaryForm(self.degree, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "BinaryForm":
        c = Fraction(c)
        return BinaryForm(self.degree, tuple(c * x for x in self.coeffs))

    def deriv_s(self) -> "BinaryForm":
        if self.degree == 0:
            raise ValueError("derivative of a constant form")
        d = self.degree
        return BinaryForm(d - 1, tuple(self.coeffs[i] * (d - i) for i in range(d)))

    def deriv_t(self) -> "BinaryForm":
        if self.degree == 0:
            raise ValueError("derivative of a constant form")
        d = self.degree
        return BinaryForm(d - 1, tuple(self.coeffs[i + 1] * (i + 1) for i in range(d)))

    def monic(self) -> "BinaryForm":
        lead = next((c for c in self.coeffs if c), None)
        if lead is None:
            return self
        return self.scale(Fraction(1) / lead)

    def proportional_to(self, other: "BinaryForm") -> bool:
        if self.degree != other.degree:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.monic().coeffs == other.monic().coeffs


def _strip(u):
    k = 0
    while k < len(u) and u[k] == 0:
        k += 1
    return u[k:]


def _primitive(u):
    u = _strip(u)
    if not u:
        return []
    g = 0
    for c in u:
        g = gcd(g, abs(c))
    u = [c // g for c in u]
    if u[0] < 0:
        u = [-c for c in u]
    return u


def _prem(u, v):
    """Pseudo-remainder of integer coefficient lists (descending powers)."""
    lv = v[0]
    r = list(u)
    while r and len(r) >= len(v):
        lr = r[0]
        r = [lv * c for c in r]
        for i, cv in enumerate(v):
            r[i] -= lr * cv
        r = _strip(r)
    return r


def _ugcd_int(u, v):
    """Gcd of integer coefficient lists via content-stripped pseudo-remainders."""
    u, v = _primitive(u), _primitive(v)
    if not u:
        return v
    if not v:
        return u
    if len(u) < len(v):
        u, v = v, u
    while True:
        r = _prem(u, v)
        if not r:
            return v
        if len(r) == 1:
            return [1]
        u, v = v, _primitive(r)


def _clear_denoms(coeffs):
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in coeffs]


def binary_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Monic gcd over Q of two binary forms; errors if both are zero."""
    if f.is_zero and g.is_zero:
        raise ValueError("gcd of two zero forms is undefined")
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()

    def split(h):
        # h = t**m * H with t not dividing H; return m and the integer
        # coefficient list of H(x, 1) in descending powers of x
        m = next(i for i, c in enumerate(h.coeffs) if c)
        return m, _clear_denoms(list(h.coeffs[m:]))

    mf, uf = split(f)
    mg, ug = split(g)
    m = min(mf, mg)
    core = _ugcd_int(uf, ug)
    coeffs = [Fraction(0)] * m + [Fraction(c) for c in core]
    return BinaryForm(m + len(core) - 1, tuple(coeffs)).monic()
