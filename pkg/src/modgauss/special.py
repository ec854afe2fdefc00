"""Complex special functions: log-Gamma, log Barnes-G, Pochhammer, 2F1, erf.

All functions accept scalars or numpy arrays and evaluate elementwise.
Scalars in give Python/numpy scalars out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special as _sp

from .errors import AccuracyError, DomainError

__all__ = [
    "PrecisionPolicy",
    "DEFAULT_POLICY",
    "log_gamma",
    "log_barnes_g",
    "pochhammer",
    "gauss_2f1",
    "erf",
]


@dataclass(frozen=True)
class PrecisionPolicy:
    rel_tol: float = 1e-12
    asymptotic_threshold: float = 20.0
    max_series_terms: int = 512

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.asymptotic_threshold < 8:
            raise DomainError("asymptotic_threshold must be at least 8")
        if self.max_series_terms < 32:
            raise DomainError("max_series_terms must be at least 32")


DEFAULT_POLICY = PrecisionPolicy()

# B_2, B_4, ..., B_32
_BERNOULLI_EVEN = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730), Fraction(8553103, 6),
    Fraction(-23749461029, 870), Fraction(8615841276005, 14322),
    Fraction(-7709321041217, 510),
]

# Stirling coefficients B_{2k} / (2k (2k-1)), k = 1..16
_STIRLING = [float(b / (2 * k * (2 * k - 1)))
             for k, b in enumerate(_BERNOULLI_EVEN, start=1)]
# Barnes coefficients B_{2k+2} / (4k(k+1)), k = 1..15
_BARNES = [float(_BERNOULLI_EVEN[k] / (4 * k * (k + 1)))
           for k in range(1, len(_BERNOULLI_EVEN))]

_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
# zeta'(-1) = 1/12 - log(Glaisher-Kinkelin constant)
_ZETA_PRIME_M1 = 1.0 / 12.0 - 0.24875447703378426


def _as_complex_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _restore(out, scalar):
    return out[()] if scalar else out


def _nonpositive_integers(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _shift_counts(z, threshold):
    """Number of unit shifts that move each z into the asymptotic region."""
    re = z.real
    direct = (np.abs(z) >= threshold) & (re >= 0)
    far_off_axis = np.abs(z.imag) >= threshold
    n = np.where(far_off_axis, np.ceil(-re), np.ceil(threshold - re))
    n = np.where(direct, 0, np.maximum(n, 0))
    return n.astype(np.int64)


def _stirling(w):
    """log Gamma(w) for |w| large in the closed right half-plane."""
    out = (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI
    inv = 1.0 / w
    inv2 = inv * inv
    power = inv
    for coef in _STIRLING:
        term = coef * power
        out = out + term
        if np.all(np.abs(term) < 1e-18 * np.maximum(np.abs(out), 1.0)):
            break
        power = power * inv2
    return out


def _barnes_asymptotic(w):
    """log G(1 + w) for |w| large in the closed right half-plane."""
    logw = np.log(w)
    w2 = w * w
    out = (0.5 * w2 - 1.0 / 12.0) * logw - 0.75 * w2 + w * _HALF_LOG_2PI + _ZETA_PRIME_M1
    inv2 = 1.0 / w2
    power = inv2
    for coef in _BARNES:
        term = coef * power
        out = out + term
        if np.all(np.abs(term) < 1e-18 * np.maximum(np.abs(out), 1.0)):
            break
        power = power * inv2
    return out


def log_gamma(z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Principal branch of log Gamma(z).

    Uses the Stirling series once ``|z|`` exceeds the policy threshold in the
    right half-plane, and the recurrence ``log Gamma(z) = log Gamma(z+n) - sum log(z+k)``
    to get there. On the negative real axis the upper-side limit is returned.
    """
    z, scalar = _as_complex_array(z)
    poles = _nonpositive_integers(z)
    if np.any(poles):
        bad = z[poles].ravel()[0].real
        raise DomainError(f"log_gamma: pole at z = {bad:g}")
    n = _shift_counts(z, policy.asymptotic_threshold)
    correction = np.zeros_like(z)
    for k in range(int(n.max(initial=0))):
        active = n > k
        correction[active] += np.log(z[active] + k)
    out = _stirling(z + n) - correction
    return _restore(out, scalar)


def log_barnes_g(z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """A continuous determination of log G(z), G the Barnes function.

    Anchored at log G(1) = 0 and continuous on Re z > 0. Points off the
    right half-plane are reached by the functional equation
    G(z+1) = Gamma(z) G(z), so only the real part is branch-free there.
    """
    z, scalar = _as_complex_array(z)
    zeros = _nonpositive_integers(z)
    if np.any(zeros):
        bad = z[zeros].ravel()[0].real
        raise DomainError(f"log_barnes_g: G vanishes at z = {bad:g}")
    integer = (z.imag == 0) & (z.real >= 1) & (z.real == np.round(z.real)) & (z.real <= 64)
    if np.all(integer):
        # exact: log G(n) = sum_{k<n} log Gamma(k)
        out = np.array([sum(math.lgamma(k) for k in range(1, int(v)))
                        for v in z.real.ravel()], dtype=complex).reshape(z.shape)
        return _restore(out, scalar)
    threshold = policy.asymptotic_threshold
    # asymptotic form is in 1 + w, so shift until z - 1 is in the asymptotic region
    n = _shift_counts(z - 1.0, threshold)
    shifted = z + n
    out = _barnes_asymptotic(shifted - 1.0)
    # log G(z) = log G(z+n) - n log Gamma(z+n) + sum_{i<n} (i+1) log(z+i)
    if np.any(n > 0):
        out = out - n * log_gamma(shifted, policy)
        acc = np.zeros_like(z)
        for i in range(int(n.max())):
            active = n > i
            acc[active] += (i + 1) * np.log(z[active] + i)
        out = out + acc
    return _restore(out, scalar)


def pochhammer(x, j: int):
    """Rising factorial x (x+1) ... (x+j-1); ``j = 0`` gives 1."""
    if j < 0:
        raise DomainError("pochhammer: j must be non-negative")
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    for k in range(j):
        out = out * (x + k)
    return out[()] if out.ndim == 0 else out


def gauss_2f1(a, b, c, z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Gauss hypergeometric series 2F1(a, b; c; z) for real |z| <= 1/2.

    ``z`` may be an array; ``a``, ``b``, ``c`` are scalars. Summation stops
    once a term falls below ``rel_tol`` times the partial sum past the index
    where the term ratio can no longer grow.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if c.imag == 0 and c.real <= 0 and c.real == round(c.real):
        raise DomainError(f"gauss_2f1: c = {c.real:g} is a non-positive integer")
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(np.abs(z) > 0.5):
        raise DomainError("gauss_2f1: requires |z| <= 1/2")
    total = np.ones(z.shape, dtype=complex)
    term = np.ones(z.shape, dtype=complex)
    done = np.zeros(z.shape, dtype=bool)
    settle = max(abs(a), abs(b), abs(c)) + 1.0
    for j in range(policy.max_series_terms):
        term = term * ((a + j) * (b + j) / ((c + j) * (j + 1))) * z
        total = total + term
        small = np.abs(term) <= policy.rel_tol * np.abs(total)
        done |= (term == 0) | (small & (j + 1 > settle))
        if done.all():
            break
    else:
        raise AccuracyError(
            f"gauss_2f1: no convergence within {policy.max_series_terms} terms")
    return total[0] if scalar else total


def erf(x):
    """Error function (real argument)."""
    out = _sp.erf(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out
