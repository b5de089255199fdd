"""Reconstruction of a plane quartic and its 28 bitangent lines.

Seven bitangent lines in general position (an Aronhold set) determine the
quartic.  With coordinates chosen so that four of them are t0, t1, t2 and
t0+t1+t2, the remaining three are V(a_0i t0 + a_1i t1 + a_2i t2) for a
3x3 rational matrix a.  Auxiliary linear forms u_0, u_1, u_2 and scalars
k_1, k_2, k_3 are solved from an overdetermined linear system; the quartic
is the rationalization of sqrt(t0 u0) + sqrt(t1 u1) + sqrt(t2 u2) = 0, and
the remaining 21 bitangents come in seven families of three with explicit
equations in the t_j, u_j, a_ji and k_i.

Every line produced is re-verified against the quartic by exact
restriction: a line is a true bitangent exactly when the restricted binary
quartic is a nonzero multiple of the square of a quadratic with nonzero
discriminant.  Verification is the ground truth here; any failure is a
hard error naming the offending family.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactmath import BinaryForm, SingularSystem, binary_gcd, solve_rational


class InconsistentSystem(ValueError):
    """The fourth u-equation failed: degenerate input or an upstream bug."""


class DegenerateDenominator(ValueError):
    """A family-(6)/(7) denominator 1 - k_i a_ji a_j'i vanished."""


class DuplicateLine(ValueError):
    """Two of the 28 constructed lines coincide (non-general input)."""


class ZeroRestriction(ValueError):
    """A line is a component of the quartic (degenerate input)."""


class VerificationFailed(RuntimeError):
    """A constructed line failed the exact bitangency check."""

    def __init__(self, message, labels=()):
        super().__init__(message)
        self.labels = tuple(labels)


TRUE_BITANGENT = "true-bitangent"
HYPERFLEX = "hyperflex-line"
NOT_BITANGENT = "not-bitangent"


@dataclass(frozen=True)
class LinearForm:
    """c0*t0 + c1*t1 + c2*t2 with exact rational coefficients."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) != 3:
            raise ValueError("a linear form needs exactly 3 coefficients")
        object.__setattr__(self, "coeffs", cs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def primitive_key(self) -> tuple:
        """Scale-invariant integer key, for proportionality tests."""
        if self.is_zero:
            return (0, 0, 0)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for x in ints:
            g = _gcd(g, abs(x))
        ints = [x // g for x in ints]
        lead = next(x for x in ints if x)
        if lead < 0:
            ints = [-x for x in ints]
        return tuple(ints)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# degree-4 monomials (e0, e1, e2) in a fixed descending-exponent order
MONOMIALS = tuple(
    (e0, e1, 4 - e0 - e1)
    for e0 in range(4, -1, -1)
    for e1 in range(4 - e0, -1, -1)
)
assert len(MONOMIALS) == 15


@dataclass(frozen=True)
class TernaryQuartic:
    """Degree-4 form in (t0, t1, t2); coeffs follow MONOMIALS order."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) != 15:
            raise ValueError("a ternary quartic has 15 coefficients")
        if all(c == 0 for c in cs):
            raise ValueError("quartic is identically zero")
        object.__setattr__(self, "coeffs", cs)

    def coefficient(self, mono) -> Fraction:
        return self.coeffs[MONOMIALS.index(tuple(mono))]

    def __call__(self, t0, t1, t2) -> Fraction:
        t0, t1, t2 = Fraction(t0), Fraction(t1), Fraction(t2)
        total = Fraction(0)
        for (e0, e1, e2), c in zip(MONOMIALS, self.coeffs):
            if c:
                total += c * t0**e0 * t1**e1 * t2**e2
        return total


@dataclass(frozen=True)
class AronholdInput:
    """The 3x3 rational matrix a[j][i-1] = a_ji defining lines 5, 6, 7."""

    a: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.a)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 coefficient matrix")
        for j in range(3):
            for i in range(3):
                if rows[j][i] == 0:
                    raise ValueError(f"coefficient a_{j}{i + 1} must be nonzero")
        object.__setattr__(self, "a", rows)

    @classmethod
    def from_json_dict(cls, doc) -> "AronholdInput":
        rows = doc["a"]
        return cls(tuple(tuple(Fraction(str(x)) for x in row) for row in rows))


@dataclass(frozen=True)
class BitangentLine:
    label: str
    family: str
    form: LinearForm
    classification: str = ""


@dataclass
class BitangentReport:
    quartic: TernaryQuartic
    lines: list            # 28 BitangentLine, labels L1..L28
    concurrent_triples: list  # label triples with vanishing determinant
    residuals_zero: bool


@dataclass(frozen=True)
class RiemannSolution:
    lam: tuple   # lambda_1..3
    k: tuple     # k_1..3
    u: tuple     # u_0..2 as LinearForms


# ---------------------------------------------------------------------------
# tiny dict-based polynomials in (t0, t1, t2)


def _poly_from_linear(lf: LinearForm):
    out = {}
    for j, c in enumerate(lf.coeffs):
        if c:
            mono = [0, 0, 0]
            mono[j] = 1
            out[tuple(mono)] = c
    return out


def _poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            v = out.get(m, Fraction(0)) + c1 * c2
            if v:
                out[m] = v
            elif m in out:
                del out[m]
    return out


def _poly_add(p, q, scale=Fraction(1)):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, Fraction(0)) + scale * c
        if v:
            out[m] = v
        elif m in out:
            del out[m]
    return out


# ---------------------------------------------------------------------------
# Riemann's equations


def _lambda_system(inp: AronholdInput):
    a = inp.a
    return [[Fraction(1) / a[j][i] for i in range(3)] for j in range(3)]


def _k_system(inp: AronholdInput, lam):
    a = inp.a
    return [[lam[i] * a[j][i] for i in range(3)] for j in range(3)]


def riemann_residuals(inp: AronholdInput, k, u):
    """Coefficient vectors of the four defining equations; all zero iff solved.

    Equation 0 is u0+u1+u2+t0+t1+t2; equation i (1..3) is
    u0/a_0i + u1/a_1i + u2/a_2i + k_i (a_0i t0 + a_1i t1 + a_2i t2).
    """
    a = inp.a
    residuals = []
    res0 = [u[0].coeffs[j] + u[1].coeffs[j] + u[2].coeffs[j] + 1 for j in range(3)]
    residuals.append(tuple(res0))
    for i in range(3):
        res = [
            sum(u[m].coeffs[j] / a[m][i] for m in range(3)) + k[i] * a[j][i]
            for j in range(3)
        ]
        residuals.append(tuple(res))
    return residuals


def solve_riemann(inp: AronholdInput) -> RiemannSolution:
    """Solve for lambda, k and the auxiliary forms u_0, u_1, u_2 exactly.

    The nine u-coefficients are determined by equations 0, 1 and 2; the
    third a-line equation is then checked to hold identically and an
    InconsistentSystem is raised if it does not.
    """
    ones = [Fraction(-1)] * 3
    lam = tuple(solve_rational(_lambda_system(inp), ones))
    k = tuple(solve_rational(_k_system(inp, lam), ones))

    a = inp.a
    # unknowns per coordinate j: (u0_j, u1_j, u2_j); same matrix for each j
    mat = [
        [Fraction(1)] * 3,
        [Fraction(1) / a[m][0] for m in range(3)],
        [Fraction(1) / a[m][1] for m in range(3)],
    ]
    ucols = []
    for j in range(3):
        rhs = [Fraction(-1), -k[0] * a[j][0], -k[1] * a[j][1]]
        ucols.append(solve_rational(mat, rhs))
    u = tuple(LinearForm(tuple(ucols[j][m] for j in range(3))) for m in range(3))

    residuals = riemann_residuals(inp, k, u)
    for idx in (0, 1, 2):
        assert all(c == 0 for c in residuals[idx]), "solved equations must vanish"
    if any(c != 0 for c in residuals[3]):
        raise InconsistentSystem(
            "third a-line equation does not vanish identically; "
            "degenerate input or inconsistent data")
    return RiemannSolution(lam, k, u)


def build_quartic(u) -> TernaryQuartic:
    """Rationalized quartic from the three auxiliary forms.

    F = (t0 u0)^2 + (t1 u1)^2 + (t2 u2)^2
        - 2 t0 u0 t1 u1 - 2 t1 u1 t2 u2 - 2 t2 u2 t0 u0.
    """
    q = []
    for j in range(3):
        t_j = LinearForm(tuple(Fraction(int(j == m)) for m in range(3)))
        q.append(_poly_mul(_poly_from_linear(t_j), _poly_from_linear(u[j])))
    total = {}
    for j in range(3):
        total = _poly_add(total, _poly_mul(q[j], q[j]))
    for j, m in ((0, 1), (1, 2), (2, 0)):
        total = _poly_add(total, _poly_mul(q[j], q[m]), scale=Fraction(-2))
    coeffs = tuple(total.get(mono, Fraction(0)) for mono in MONOMIALS)
    return TernaryQuartic(coeffs)


# ---------------------------------------------------------------------------
# the 28 lines


def all_bitangents(inp: AronholdInput, k, u):
    """All 28 labeled lines: the Aronhold set plus seven families of three.

    Raises DegenerateDenominator if a family-(6)/(7) denominator vanishes
    and DuplicateLine if any two lines are proportional.
    """
    a = inp.a
    lines = []

    def push(family, coeffs):
        lines.append(BitangentLine(f"L{len(lines) + 1}", family, LinearForm(tuple(coeffs))))

    push("aronhold", (1, 0, 0))
    push("aronhold", (0, 1, 0))
    push("aronhold", (0, 0, 1))
    push("aronhold", (1, 1, 1))
    for i in range(3):
        push("aronhold", (a[0][i], a[1][i], a[2][i]))

    for m in range(3):
        push("u", u[m].coeffs)

    for m in range(3):
        coeffs = list(u[m].coeffs)
        for j in range(3):
            if j != m:
                coeffs[j] += 1
        push("u-plus-t", coeffs)

    denom = [[1 - k[i] * a[j1][i] * a[j2][i]
              for (j1, j2) in ((1, 2), (0, 2), (0, 1))] for i in range(3)]

    for m, family in ((0, "u0-mixed"), (1, "u1-mixed"), (2, "u2-mixed")):
        others = [j for j in range(3) if j != m]
        for i in range(3):
            coeffs = [c / a[m][i] for c in u[m].coeffs]
            for j in others:
                coeffs[j] += k[i] * a[j][i]
            push(family, coeffs)

    for i in range(3):
        if any(denom[i][j] == 0 for j in range(3)):
            raise DegenerateDenominator(
                f"denominator 1 - k_{i + 1} a_j{i + 1} a_j'{i + 1} vanishes")
    for i in range(3):
        push("t-weighted", tuple(Fraction(1) / denom[i][j] for j in range(3)))
    for i in range(3):
        coeffs = [Fraction(0)] * 3
        for m in range(3):
            w = Fraction(1) / (a[m][i] * denom[i][m])
            for j in range(3):
                coeffs[j] += w * u[m].coeffs[j]
        push("u-weighted", coeffs)

    assert len(lines) == 28
    seen = {}
    for line in lines:
        key = line.form.primitive_key()
        if key in seen:
            raise DuplicateLine(
                f"{line.label} ({line.family}) coincides with "
                f"{seen[key].label} ({seen[key].family})")
        seen[key] = line
    return lines


def restrict_to_line(f: TernaryQuartic, line: LinearForm) -> BinaryForm:
    """Binary quartic obtained by restricting f to a parametrized line."""
    if line.is_zero:
        raise ValueError("cannot restrict to the zero form")
    c = line.coeffs
    # two independent points spanning the line c . x = 0
    if c[0] != 0:
        pts = ((-c[1], c[0], Fraction(0)), (-c[2], Fraction(0), c[0]))
    elif c[1] != 0:
        pts = ((Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), -c[2], c[1]))
    else:
        pts = ((Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), Fraction(1), Fraction(0)))
    p, q = pts
    coords = [BinaryForm(1, (p[j], q[j])) for j in range(3)]
    total = BinaryForm(4, (0, 0, 0, 0, 0))
    one = BinaryForm(0, (Fraction(1),))
    for (e0, e1, e2), coeff in zip(MONOMIALS, f.coeffs):
        if not coeff:
            continue
        term = one
        for j, e in enumerate((e0, e1, e2)):
            for _ in range(e):
                term = term.mul(coords[j])
        total = total.add(term.scale(coeff))
    return total


def verify_bitangent(line: LinearForm, f: TernaryQuartic) -> str:
    """Exact tangency classification of a line against the quartic.

    true-bitangent: restriction is c*q^2 with q a quadratic of nonzero
    discriminant; hyperflex-line: restriction has a root of multiplicity 4;
    not-bitangent otherwise.  A zero restriction (line divides f) raises.
    """
    b = restrict_to_line(f, line)
    if b.is_zero:
        raise ZeroRestriction("line is a component of the quartic")
    g = binary_gcd(binary_gcd(b, b.deriv_s()), b.deriv_t())
    if g.degree == 3:
        return HYPERFLEX
    if g.degree == 2:
        disc = g.coeffs[1] ** 2 - 4 * g.coeffs[0] * g.coeffs[2]
        if disc != 0 and b.proportional_to(g.mul(g)):
            return TRUE_BITANGENT
    return NOT_BITANGENT


def concurrency_report(lines):
    """Label triples whose coefficient matrix has determinant zero.

    Precondition: the forms are pairwise non-proportional.
    """
    keys = {}
    for line in lines:
        key = line.form.primitive_key()
        if key in keys:
            raise ValueError(
                f"lines {keys[key]} and {line.label} are proportional")
        keys[key] = line.label
    out = []
    for x, y, z in combinations(lines, 3):
        m = [x.form.coeffs, y.form.coeffs, z.form.coeffs]
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        if det == 0:
            out.append((x.label, y.label, z.label))
    return out


# ---------------------------------------------------------------------------
# full pipeline


def analyze(inp: AronholdInput) -> BitangentReport:
    """Solve, build the quartic, construct and classify all 28 lines."""
    sol = solve_riemann(inp)
    f = build_quartic(sol.u)
    lines = all_bitangents(inp, sol.k, sol.u)
    classified = [
        BitangentLine(line.label, line.family, line.form,
                      verify_bitangent(line.form, f))
        for line in lines
    ]
    triples = concurrency_report(classified)
    return BitangentReport(f, classified, triples, residuals_zero=True)


def require_all_true(report: BitangentReport) -> None:
    """Hard verification gate: every line a true bitangent, no concurrences."""
    bad = [l for l in report.lines if l.classification != TRUE_BITANGENT]
    if bad:
        worst = bad[0]
        raise VerificationFailed(
            f"line {worst.label} of family '{worst.family}' classified as "
            f"{worst.classification}", labels=[l.label for l in bad])
    if report.concurrent_triples:
        labels = report.concurrent_triples[0]
        raise VerificationFailed(
            f"concurrent bitangent triple {labels}", labels=labels)


def reconstruct(inp: AronholdInput) -> BitangentReport:
    """analyze() followed by the mandatory verification gate."""
    report = analyze(inp)
    require_all_true(report)
    return report


def sample_aronhold(rng: random.Random, bound: int = 5, max_tries: int = 500):
    """Random nondegenerate input: small rational entries, rejection sampled
    until the whole pipeline verifies."""
    for _ in range(max_tries):
        rows = tuple(
            tuple(Fraction(rng.choice([x for x in range(-bound, bound + 1) if x]),
                           rng.randint(1, 3))
                  for _ in range(3))
            for _ in range(3)
        )
        try:
            inp = AronholdInput(rows)
            report = reconstruct(inp)
        except (ValueError, SingularSystem, VerificationFailed):
            continue
        return inp, report
    raise RuntimeError("no nondegenerate sample found; widen the search")
