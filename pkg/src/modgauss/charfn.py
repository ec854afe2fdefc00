"""Exact and asymptotic characteristic functions of log det(1 - T).

For a Haar random T the characteristic function of ``log det(1 - T)`` is a
finite product of Gamma ratios. Everything here is computed as a sum of
log-Gamma values and exponentiated once.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import AccuracyError, DomainError
from .groups import Family, GroupKind, norm, point_for
from .special import log_barnes_g, log_gamma

__all__ = [
    "exact_log_charfn",
    "exact_charfn",
    "centering_shift",
    "centered_charfn",
    "barnes_form_charfn",
    "barnes_power_ratio_approx",
    "approx_charfn",
    "barnes_sn_remainder",
    "limiting_function",
    "covariance_scale",
]

_LOG2 = math.log(2.0)


def _exp_checked(log_value: complex) -> complex:
    if log_value.real > 700:
        raise AccuracyError("characteristic function overflows", log_value=log_value)
    return cmath.exp(log_value)


def exact_log_charfn(group: GroupKind, t) -> complex:
    """log E[exp(i t . log det(1 - T))] from the finite Gamma product."""
    t1, t2 = point_for(group, t)
    n = group.size
    j = np.arange(1, n + 1, dtype=float)
    if group.family is Family.UNITARY:
        u = 0.5 * (1j * t1 + t2)
        v = 0.5 * (1j * t1 - t2)
        terms = (log_gamma(j) + log_gamma(j + 1j * t1)
                 - log_gamma(j + u) - log_gamma(j + v))
        return complex(np.sum(terms))
    s = 1j * t1
    if group.family is Family.SYMPLECTIC:
        terms = (log_gamma(1 + n + j) + log_gamma(0.5 + s + j)
                 - log_gamma(0.5 + j) - log_gamma(1 + s + n + j))
    else:
        terms = (log_gamma(n + j - 1) + log_gamma(s + j - 0.5)
                 - log_gamma(j - 0.5) - log_gamma(s + n + j - 1))
    return complex(2 * n * s * _LOG2 + np.sum(terms))


def exact_charfn(group: GroupKind, t) -> complex:
    """E[exp(i t . log det(1 - T))] for Haar-distributed T in ``group``.

    For U(N) the point is ``(t1, t2)`` acting on (Re, Im); for the
    symplectic and orthogonal families ``t`` is real.
    """
    return _exp_checked(exact_log_charfn(group, t))


def centering_shift(group: GroupKind) -> float:
    """Deterministic shift subtracted from log det(1 - T) before normalizing."""
    if group.family is Family.SYMPLECTIC:
        return 0.5 * math.log(math.pi * group.size / 2)
    if group.family is Family.ORTHOGONAL:
        return 0.5 * math.log(8 * math.pi / group.size)
    return 0.0


def centered_charfn(group: GroupKind, t) -> complex:
    """Characteristic function of log det(1 - T) minus its centering shift."""
    t1, _ = point_for(group, t)
    return _exp_checked(exact_log_charfn(group, t) - 1j * t1 * centering_shift(group))


def covariance_scale(group: GroupKind) -> float:
    """delta_N such that Q_N(t) = delta_N |t|^2."""
    n = group.size
    if group.family is Family.UNITARY:
        return 0.5 * math.log(n)
    return math.log(n / 2)


def limiting_function_log(group: GroupKind, t) -> complex:
    t1, t2 = point_for(group, t)
    if group.family is Family.UNITARY:
        u = 1 + 0.5 * (1j * t1 - t2)
        v = 1 + 0.5 * (1j * t1 + t2)
        return complex(log_barnes_g(u) + log_barnes_g(v) - log_barnes_g(1 + 1j * t1))
    base = 1.5 if group.family is Family.SYMPLECTIC else 0.5
    return complex(log_barnes_g(base) - log_barnes_g(base + 1j * t1))


def limiting_function(group: GroupKind, t) -> complex:
    """Phi_g, Phi_Sp or Phi_SO at ``t`` according to the group family."""
    return _exp_checked(limiting_function_log(group, t))


def barnes_form_charfn(group: GroupKind, t) -> complex:
    """The exact characteristic function rewritten through Barnes G ratios.

    Independent route to :func:`exact_charfn` via
    prod_{j<=n} Gamma(j + x) = G(1 + n + x) / G(1 + x).
    """
    t1, t2 = point_for(group, t)
    n = group.size
    G = log_barnes_g
    if group.family is Family.UNITARY:
        u = 0.5 * (1j * t1 - t2)
        v = 0.5 * (1j * t1 + t2)
        ratio = (G(1 + u + v + n) + G(1 + n) - G(1 + u + n) - G(1 + v + n))
        return _exp_checked(complex(limiting_function_log(group, t) + ratio))
    s = 1j * t1
    if group.family is Family.SYMPLECTIC:
        ratio = (G(1.5 + s + n) + G(2 + 2 * n) + G(2 + s + n)
                 - G(1.5 + n) - G(2 + n) - G(2 + s + 2 * n))
    else:
        ratio = (G(0.5 + s + n) + G(2 * n) + G(s + n)
                 - G(0.5 + n) - G(n) - G(s + 2 * n))
    return _exp_checked(complex(limiting_function_log(group, t) + 2 * n * s * _LOG2 + ratio))


def _log_power_ratio_main(z: complex, n: int) -> complex:
    return (0.5 * z * math.log(2 * math.pi) - (n + 1) * z
            + (0.5 * z * z + n * z) * math.log(1 + n))


def log_barnes_power_ratio_approx(z, n: int) -> complex:
    """Logarithm of :func:`barnes_power_ratio_approx`, usable when the ratio overflows."""
    z = complex(z)
    if n < 1:
        raise DomainError("barnes_power_ratio_approx: n must be >= 1")
    if abs(z) > n ** (1 / 6) * (1 + 1e-12):
        raise DomainError(f"barnes_power_ratio_approx: |z| = {abs(z):g} exceeds n^(1/6)")
    return complex(_log_power_ratio_main(z, n))


def barnes_power_ratio_approx(z, n: int) -> complex:
    """Main term (2 pi)^{z/2} e^{-(n+1)z} (1+n)^{z^2/2 + nz} of G(1+z+n)/G(1+n).

    Valid with relative error O((|z|^2 + |z|^3)/n) for |z| <= n^{1/6}.
    """
    return _exp_checked(log_barnes_power_ratio_approx(z, n))


def approx_charfn(group: GroupKind, t) -> complex:
    """Uniform main term of :func:`exact_charfn` for |t| <= size^{1/6}."""
    t1, t2 = point_for(group, t)
    n = group.size
    r = norm((t1, t2))
    if r > n ** (1 / 6) * (1 + 1e-12):
        raise DomainError(f"approx_charfn: |t| = {r:g} exceeds {n}^(1/6)")
    log_phi = limiting_function_log(group, (t1, t2))
    if group.family is Family.UNITARY:
        main = -0.25 * r * r * math.log(n)
    elif group.family is Family.SYMPLECTIC:
        main = -0.5 * t1 * t1 * math.log(n / 2) + 0.5j * t1 * math.log(math.pi * n / 2)
    else:
        main = -0.5 * t1 * t1 * math.log(n / 2) + 0.5j * t1 * math.log(8 * math.pi / n)
    return _exp_checked(log_phi + main)


def _log1p_complex(w):
    # numpy's complex log1p loses relative accuracy for tiny |w|
    w = np.asarray(w, dtype=complex)
    re, im = w.real, w.imag
    return 0.5 * np.log1p(2 * re + re * re + im * im) + 1j * np.arctan2(im, 1 + re)


def _sn_tail(z: complex, n: int, last: int, order: int = 14) -> complex:
    """Sum over k > last of the per-factor logs, from their 1/k expansion."""
    from scipy.special import zeta

    total = 0j
    for j in range(2, order + 1):
        sign = -1.0 if j % 2 else 1.0
        a_j = sign * (z ** (j + 1) / (j + 1) + n * z ** j / j - (0.5 * z * z + n * z) / j)
        total += a_j * zeta(j, last + 1)
    return total


def barnes_sn_remainder(z, n: int, terms: int, tail: bool = False) -> complex:
    """Partial product S_n(z) of the exact correction to the power-ratio main term.

    S_n(z) = e^{-z(z-1)/2} prod_{k=n+1}^{n+terms}
             (1 + z/k)^{k-n} (1 + 1/k)^{z^2/2 + nz} e^{-z}, in log space.

    The factors approach 1 like 1/k^2, so the partial product is only
    O(1/terms) accurate. With ``tail=True`` the remaining infinite product is
    added from the 1/k expansion of each log-factor (Hurwitz zeta sums).
    """
    z = complex(z)
    if n < 1 or terms < 1:
        raise DomainError("barnes_sn_remainder: need n >= 1 and terms >= 1")
    if abs(z) > n / 2:
        raise DomainError("barnes_sn_remainder: requires |z| <= n/2")
    k = np.arange(n + 1, n + terms + 1, dtype=float)
    logs = ((k - n) * _log1p_complex(z / k)
            + (0.5 * z * z + n * z) * np.log1p(1.0 / k) - z)
    log_s = -0.5 * z * (z - 1) + complex(np.sum(logs))
    if tail:
        log_s += _sn_tail(z, n, n + terms)
    return _exp_checked(log_s)
