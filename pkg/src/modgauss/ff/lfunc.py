"""L-polynomials from companion sums, Weil RH checks and central values.

With Z(T) = exp(sum_m S_m T^m / m) = prod_j (1 - alpha_j T), the reciprocal
roots satisfy |alpha_j| = sqrt(q) and alpha_j = sqrt(q) e^{i theta_j}; the
unitarized class has Tr theta^k = -S_k / q^{k/2}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import DomainError, IntegrityError
from . import poly
from .characters import (MultCharacter, companion_sums_all, deligne_polynomial,
                         is_admissible)
from .field import check_budget

RH_TOL = 1e-6
TRUNCATION_TOL = 1e-6


class Symmetry(str, Enum):
    UNITARY = "unitary"
    SYMPLECTIC = "symplectic"


@dataclass(frozen=True, eq=False)
class LPolynomial:
    """Z(T) = sum_k coefficients[k] T^k with coefficients[0] = 1."""

    coefficients: np.ndarray
    q: int
    symmetry: Symmetry = Symmetry.UNITARY
    power_sums: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.size == 0 or abs(c[0] - 1) > 1e-12:
            raise DomainError("an L-polynomial has constant coefficient 1")
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, T) -> complex:
        return complex(np.polynomial.polynomial.polyval(T, self.coefficients))

    def reciprocal_roots(self) -> np.ndarray:
        """The alpha_j with Z(T) = prod (1 - alpha_j T)."""
        if self.degree == 0:
            return np.empty(0, dtype=complex)
        # roots of T^d Z(1/T), whose coefficients in decreasing degree are c_0 .. c_d
        return np.roots(self.coefficients).astype(complex)


@dataclass(frozen=True)
class ConjugacyClass:
    eigenangles: np.ndarray
    group_dim: int

    def characteristic_value(self) -> complex:
        """det(1 - theta) = prod (1 - e^{i theta_j})."""
        return complex(np.prod(1 - np.exp(1j * np.asarray(self.eigenangles))))


def newton_coefficients(power_sums) -> np.ndarray:
    """Coefficients c_0 .. c_n of exp(sum_k s_k T^k / k), via m c_m = sum_k s_k c_{m-k}."""
    s = np.asarray(power_sums, dtype=complex)
    c = np.zeros(s.size + 1, dtype=complex)
    c[0] = 1
    for m in range(1, s.size + 1):
        c[m] = np.dot(s[:m], c[m - 1::-1][:m]) / m
    return c


def power_sums_from_coefficients(coefficients, n: int) -> np.ndarray:
    """Inverse of :func:`newton_coefficients`: s_1 .. s_n from c_0 = 1, c_1, ..."""
    c = np.zeros(max(n + 1, len(coefficients)), dtype=complex)
    c[:len(coefficients)] = coefficients
    if abs(c[0] - 1) > 1e-12:
        raise DomainError("constant coefficient must be 1")
    s = np.zeros(n, dtype=complex)
    for m in range(1, n + 1):
        s[m - 1] = m * c[m] - np.dot(s[:m - 1], c[m - 1:0:-1])
    return s


def l_from_power_sums(power_sums, q: int, degree: int,
                      symmetry: Symmetry = Symmetry.UNITARY) -> LPolynomial:
    """Build the degree-``degree`` L-polynomial, checking the next coefficient vanishes.

    ``power_sums`` must hold at least ``degree`` sums; if it holds more, the
    coefficient of T^{degree+1} implied by Newton's identities must be zero
    up to ``TRUNCATION_TOL`` relative to q^{(degree+1)/2}.
    """
    s = np.asarray(power_sums, dtype=complex)
    if s.size < degree:
        raise DomainError(f"need {degree} companion sums, got {s.size}")
    c = newton_coefficients(s[:degree + 1] if s.size > degree else s[:degree])
    if c.size > degree + 1:
        extra = abs(c[degree + 1])
        scale = max(1.0, q ** ((degree + 1) / 2))
        if extra > TRUNCATION_TOL * scale:
            raise IntegrityError(f"coefficient of T^{degree + 1} is {extra:.3g}, not 0: "
                                 "the L-function is not a polynomial of the expected degree")
    coeffs = c[:degree + 1]
    if symmetry is Symmetry.SYMPLECTIC:
        coeffs = coeffs.real.astype(complex)
    return LPolynomial(coeffs, q, symmetry, s)


def l_polynomial(chi: MultCharacter, g, d_L: int | None = None,
                 check_truncation: bool = True) -> LPolynomial:
    """L-polynomial of the sums S_m(chi, g), m = 1 .. d_L (+1 for the check)."""
    p = chi.p
    g = poly.normalize(g, p)
    d = poly.degree(g)
    if d_L is None:
        d_L = d - 1
    if d_L != d - 1:
        raise DomainError(f"degree of g is {d}; the L-polynomial has degree {d - 1}, not {d_L}")
    if chi.is_trivial or chi.power_is_trivial(d):
        raise DomainError("need chi non-trivial and chi^deg(g) non-trivial")
    if not poly.is_squarefree(g, p):
        raise DomainError("g must be squarefree")
    top = d_L + 1 if check_truncation else d_L
    sums = [companion_sums_all(g, p, m)[chi.index] for m in range(1, top + 1)]
    return l_from_power_sums(sums, p, d_L)


def verify_rh_and_unitarize(L: LPolynomial, tol: float = RH_TOL) -> ConjugacyClass:
    """Check |alpha_j| = sqrt(q) and return the angles of alpha_j / sqrt(q), ascending."""
    if L.degree < 1:
        raise DomainError("verify_rh_and_unitarize needs degree >= 1")
    roots = L.reciprocal_roots()
    rq = math.sqrt(L.q)
    dev = np.max(np.abs(np.abs(roots) - rq))
    if dev > tol * rq:
        raise IntegrityError(f"Riemann hypothesis check failed: max ||alpha| - sqrt(q)| = {dev:.3g}")
    angles = np.sort(np.angle(roots / rq), kind="stable")
    return ConjugacyClass(angles, L.degree)


def central_value(L: LPolynomial) -> complex:
    """L at the central point, T = q^{-1/2}."""
    return L(L.q ** -0.5)


def check_functional_equation(L: LPolynomial, tol: float = RH_TOL) -> float:
    """Largest distance from q/alpha to the nearest reciprocal root; raises if > tol sqrt(q)."""
    roots = L.reciprocal_roots()
    mirrored = L.q / roots
    dist = np.abs(mirrored[:, None] - roots[None, :]).min(axis=1)
    worst = float(dist.max(initial=0.0))
    if worst > tol * math.sqrt(L.q):
        raise IntegrityError(f"functional equation fails: root set not closed under q/alpha ({worst:.3g})")
    return worst


def hyperelliptic_l(f, p: int) -> LPolynomial:
    """Numerator of the zeta function of y^2 = f(x), f monic squarefree of degree 2g+1.

    S_m is the quadratic-character sum over F_{p^m}; then
    #C(F_{p^m}) = p^m + 1 + S_m counting the point at infinity.
    """
    f = poly.normalize(f, p)
    deg = poly.degree(f)
    if p < 3:
        raise DomainError("p must be odd")
    if deg < 1 or deg % 2 == 0 or f[-1] != 1:
        raise DomainError("f must be monic of odd degree 2g + 1")
    if not poly.is_squarefree(f, p):
        raise DomainError("f is not squarefree over F_p")
    genus = (deg - 1) // 2
    if genus == 0:
        return LPolynomial(np.ones(1), p, Symmetry.SYMPLECTIC)
    check_budget(p, 2 * genus)
    j = (p - 1) // 2
    sums = [companion_sums_all(f, p, m)[j].real for m in range(1, 2 * genus + 1)]
    L = l_from_power_sums(sums, p, 2 * genus, Symmetry.SYMPLECTIC)
    check_functional_equation(L)
    return L


# families -------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyMember:
    """One (chi, t) member of the g_{d,t} family with its L-data."""

    index: int
    t: int
    power_sums: np.ndarray
    L: LPolynomial | None
    weil_ok: bool


def dirichlet_family(p: int, d: int, max_m: int | None = None, build: bool = True):
    """Iterate over admissible (chi, t) with chi non-trivial and chi^d != 1.

    Companion sums S_1 .. S_{max_m} are computed for all characters at once
    per t (default max_m = d, one more than the L-degree, for the truncation
    check). With ``build=False`` only the sums are returned.
    """
    max_m = d if max_m is None else max_m
    for t in range(p):
        if not is_admissible(d, t, p):
            continue
        g = deligne_polynomial(d, t, p)
        sums = np.array([companion_sums_all(g, p, m) for m in range(1, max_m + 1)])
        for j in range(1, p - 1):
            chi = MultCharacter(p, j)
            if chi.power_is_trivial(d):
                continue
            s = sums[:, j]
            bound = (d - 1) * p ** (np.arange(1, max_m + 1) / 2)
            weil_ok = bool(np.all(np.abs(s) <= bound * (1 + 1e-9)))
            L = l_from_power_sums(s, p, d - 1) if build and max_m >= d - 1 else None
            yield FamilyMember(j, t, s, L, weil_ok)


@dataclass(frozen=True)
class EquidistReport:
    p: int
    d: int
    n_pairs: int
    n_excluded: int
    n_order_2d: int
    mean_trace: complex
    mean_trace_squared: complex
    mean_abs_trace_squared: float
    mean_trace_of_square: complex
    small_d: bool

    @property
    def deviations(self) -> dict:
        """Deviations from the Haar values (0, 0, 1, 0) of U(d-1)."""
        return {
            "trace": abs(self.mean_trace),
            "trace_squared": abs(self.mean_trace_squared),
            "abs_trace_squared": abs(self.mean_abs_trace_squared - 1),
            "trace_of_square": abs(self.mean_trace_of_square),
        }

    @property
    def scaled_deviations(self) -> dict:
        """Deviations multiplied by sqrt(p)."""
        return {k: v * math.sqrt(self.p) for k, v in self.deviations.items()}


def equidist_diagnostic(p: int, d: int) -> EquidistReport:
    """Moments of the unitarized classes over the admissible (chi, t) pairs.

    Only S_1 and S_2 are needed: Tr theta = -S_1 / sqrt(p) and
    Tr theta^2 = -S_2 / p. Pairs with chi^d = 1 are excluded (the L-function
    has the wrong degree); pairs with chi^{2d} = 1 are kept and counted.
    """
    if d < 3:
        raise DomainError("equidist_diagnostic needs d >= 3")
    excluded = 0
    order_2d = 0
    tr, sq = [], []
    for t in range(p):
        if not is_admissible(d, t, p):
            continue
        excluded += sum(1 for j in range(1, p - 1) if MultCharacter(p, j).power_is_trivial(d))
    for member in dirichlet_family(p, d, max_m=2, build=False):
        if MultCharacter(p, member.index).power_is_trivial(2 * d):
            order_2d += 1
        trace = -member.power_sums[0] / math.sqrt(p)
        tr.append(trace)
        sq.append(-member.power_sums[1] / p)
    tr = np.asarray(tr)
    return EquidistReport(
        p=p, d=d, n_pairs=tr.size, n_excluded=excluded, n_order_2d=order_2d,
        mean_trace=complex(tr.mean()),
        mean_trace_squared=complex((tr * tr).mean()),
        mean_abs_trace_squared=float((np.abs(tr) ** 2).mean()),
        mean_trace_of_square=complex(np.mean(sq)),
        small_d=d <= 5,
    )
