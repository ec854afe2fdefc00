"""Multiplicative characters of F_p and companion sums S_m(chi, g)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from . import poly
from .field import field_tower, is_prime, primitive_root, discrete_log_table, check_budget


@dataclass(frozen=True)
class MultCharacter:
    """chi_j(g^k) = exp(2 pi i j k / (p - 1)), g the smallest primitive root; chi(0) = 0."""

    p: int
    index: int

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise DomainError("characters are defined here for odd primes p")
        object.__setattr__(self, "index", int(self.index) % (self.p - 1))

    @property
    def generator(self) -> int:
        return primitive_root(self.p)

    @property
    def order(self) -> int:
        return (self.p - 1) // math.gcd(self.index, self.p - 1)

    @property
    def is_trivial(self) -> bool:
        return self.index == 0

    def power_is_trivial(self, d: int) -> bool:
        """Whether chi^d = 1."""
        return (self.index * d) % (self.p - 1) == 0

    def __call__(self, a) -> complex:
        a = int(a) % self.p
        if a == 0:
            return 0j
        k = int(discrete_log_table(self.p)[a])
        return complex(np.exp(2j * np.pi * ((self.index * k) % (self.p - 1)) / (self.p - 1)))

    @classmethod
    def quadratic(cls, p: int) -> "MultCharacter":
        return cls(p, (p - 1) // 2)


def is_admissible(d: int, t: int, p: int) -> bool:
    """True iff p does not divide d(d-1) and t^{d-1} != (1-d)^{d-1} in F_p."""
    if d < 2:
        raise DomainError("admissibility needs d >= 2")
    if (d * (d - 1)) % p == 0:
        return False
    return pow(t % p, d - 1, p) != pow((1 - d) % p, d - 1, p)


def deligne_polynomial(d: int, t: int, p: int) -> tuple:
    """g_{d,t} = X^d - d X - t over F_p (coefficients in increasing degree)."""
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    coeffs[1] = -d
    coeffs[0] = -t
    return poly.normalize(coeffs, p)


def norm_log_histogram(g, p: int, m: int) -> np.ndarray:
    """counts[a] = #{x in F_{p^m} : N(g(x)) = r^a}, r the smallest primitive root of F_p."""
    check_budget(p, m)
    field = field_tower(p, m)
    dl = field.norm_dlog(field.evaluate(g))
    return np.bincount(dl[dl >= 0], minlength=p - 1)


def sums_from_histogram(counts: np.ndarray, indices=None) -> np.ndarray:
    """S(chi_j) = sum_a counts[a] zeta^{j a} for the requested character indices j."""
    n = counts.size
    j = np.arange(n) if indices is None else np.asarray(indices) % n
    a = np.arange(n)
    phase = np.exp(2j * np.pi * ((j[:, None] * a[None, :]) % n) / n)
    return phase @ counts.astype(float)


def companion_sums_all(g, p: int, m: int) -> np.ndarray:
    """S_m(chi_j, g) for every character index j = 0 .. p - 2."""
    return sums_from_histogram(norm_log_histogram(g, p, m))


def companion_sum(chi: MultCharacter, g, m: int) -> complex:
    """S_m(chi, g) = sum over x in F_{p^m} of chi(N(g(x))), with chi(0) = 0."""
    if m < 1:
        raise DomainError("extension degree m must be >= 1")
    counts = norm_log_histogram(g, chi.p, m)
    return complex(sums_from_histogram(counts, [chi.index])[0])
