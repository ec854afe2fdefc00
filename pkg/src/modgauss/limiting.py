"""Limiting functions of mod-Gaussian convergence and curve emitters.

Each limiting function is the locally uniform limit of
E[exp(i t . X_N)] * exp(Q_N(t) / 2) for the corresponding model.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AccuracyError, DomainError
from .groups import GroupKind, as_point, norm
from .special import gauss_2f1, log_barnes_g

__all__ = [
    "LimitingKind",
    "LimitingFunction",
    "evaluate",
    "emit_curve",
    "arc_count_gaussian_log",
    "exact_arc_count_charfn",
]


class LimitingKind(str, Enum):
    UNITARY = "unitary"
    EULER = "euler"
    SYMPLECTIC = "symplectic"
    ORTHOGONAL = "orthogonal"
    ARC_COUNT = "arc-count"


_ONE_DIMENSIONAL = {LimitingKind.SYMPLECTIC, LimitingKind.ORTHOGONAL, LimitingKind.ARC_COUNT}


@dataclass(frozen=True)
class LimitingFunction:
    """A limiting function, identified by kind plus its parameters.

    Parameters
    ----------
    kind : LimitingKind
    arc_fraction : float, optional
        Half-length of the arc as a fraction of the circle (arc-count only),
        the arc being ``|theta| <= 2 pi arc_fraction``.
    truncation : int
        Prime cutoff for the Euler product (euler only).
    """

    kind: LimitingKind
    arc_fraction: float | None = None
    truncation: int = 100_000

    def __post_init__(self):
        object.__setattr__(self, "kind", LimitingKind(self.kind))
        if self.kind is LimitingKind.ARC_COUNT:
            g = self.arc_fraction
            if g is None or not 0 < g < 0.5:
                raise DomainError("arc-count limiting function needs 0 < arc_fraction < 1/2")
        if self.kind is LimitingKind.EULER and self.truncation < 2:
            raise DomainError("euler truncation must be at least 2")

    @classmethod
    def unitary(cls):
        return cls(LimitingKind.UNITARY)

    @classmethod
    def euler(cls, truncation: int = 100_000):
        return cls(LimitingKind.EULER, truncation=truncation)

    @classmethod
    def symplectic(cls):
        return cls(LimitingKind.SYMPLECTIC)

    @classmethod
    def orthogonal(cls):
        return cls(LimitingKind.ORTHOGONAL)

    @classmethod
    def arc_count(cls, arc_fraction: float):
        return cls(LimitingKind.ARC_COUNT, arc_fraction=arc_fraction)

    @classmethod
    def for_group(cls, group: GroupKind):
        return cls(LimitingKind(group.family.value))

    @property
    def one_dimensional(self) -> bool:
        return self.kind in _ONE_DIMENSIONAL

    def _point(self, t):
        t1, t2 = as_point(t)
        if self.one_dimensional and t2 != 0:
            raise DomainError(f"{self.kind.value} limiting function takes a real t")
        if self.kind is LimitingKind.ARC_COUNT and not abs(t1) < math.pi:
            raise DomainError("arc-count limiting function requires |t| < pi")
        return t1, t2

    def log_evaluate(self, t) -> complex:
        """Logarithm of the limiting function at ``t`` (one continuous branch)."""
        t1, t2 = self._point(t)
        G = log_barnes_g
        kind = self.kind
        if kind is LimitingKind.UNITARY:
            u = 1 + 0.5 * (1j * t1 - t2)
            v = 1 + 0.5 * (1j * t1 + t2)
            return complex(G(u) + G(v) - G(1 + 1j * t1))
        if kind is LimitingKind.SYMPLECTIC:
            return complex(G(1.5) - G(1.5 + 1j * t1))
        if kind is LimitingKind.ORTHOGONAL:
            return complex(G(0.5) - G(0.5 + 1j * t1))
        if kind is LimitingKind.ARC_COUNT:
            x = t1 / (2 * math.pi)
            chord = 2 - 2 * math.cos(4 * math.pi * self.arc_fraction)
            return complex(-x * x * math.log(chord) + 2 * (G(1 - x) + G(1 + x)))
        return _log_euler_product(t1, t2, self.truncation)

    def evaluate(self, t) -> complex:
        value = self.log_evaluate(t)
        if value.real > 700:
            raise AccuracyError("limiting function overflows", log_value=value)
        return cmath.exp(value)

    def tail_uncertainty(self, t) -> float:
        """Estimated size of the neglected log-factors beyond the prime cutoff.

        Zero for kinds with a closed form. For the Euler product the
        per-prime log factor is c2/p^2 + O(1/p^3), and
        sum_{p > M} 1/p^2 is about 1 / (M log M).
        """
        if self.kind is not LimitingKind.EULER:
            return 0.0
        t1, t2 = self._point(t)
        a = 0.5 * (1j * t1 + t2)
        b = 0.5 * (1j * t1 - t2)
        s = 0.25 * norm((t1, t2)) ** 2
        c2 = s / 2 + a * b * (a + 1) * (b + 1) / 4 - s * s / 2
        m = self.truncation
        return abs(c2) / (m * math.log(m))


def _log_euler_product(t1: float, t2: float, truncation: int) -> complex:
    from .euler import PrimeTable

    if t1 == 0 and t2 == 0:
        return 0j
    p = PrimeTable(truncation).primes.astype(float)
    x = 1.0 / p
    r2 = t1 * t1 + t2 * t2
    a = 0.5 * (1j * t1 + t2)
    b = 0.5 * (1j * t1 - t2)
    hyp = gauss_2f1(a, b, 1.0, x)
    return complex(np.sum(-0.25 * r2 * np.log1p(-x) + np.log(hyp)))


def evaluate(phi: LimitingFunction, t) -> complex:
    """Value of ``phi`` at the evaluation point ``t``."""
    return phi.evaluate(t)


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not step > 0:
        raise DomainError("step must be positive")
    if lo > hi:
        return np.empty(0)
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def emit_curve(phi: LimitingFunction, axis: str, lo: float, hi: float,
               step: float) -> list[tuple[float, float]]:
    """Rows ``(t, log|phi| / t^2)`` along a grid, ascending in t.

    ``axis="t2"`` fixes t1 = 1 and sweeps t2 (the two-dimensional unitary
    picture); ``axis="t"`` sweeps the single real variable. In both cases
    the normalization is by the square of the swept coordinate.
    """
    if axis not in ("t", "t2"):
        raise DomainError(f"unknown axis {axis!r}; expected 't' or 't2'")
    if axis == "t2" and phi.one_dimensional:
        raise DomainError("a t2 sweep needs a two-dimensional limiting function")
    rows = []
    for t in _grid(lo, hi, step):
        if t == 0:
            raise DomainError("the curve is normalized by t^2 and undefined at t = 0")
        point = (1.0, t) if axis == "t2" else (t, 0.0)
        rows.append((float(t), phi.log_evaluate(point).real / (t * t)))
    return rows


def arc_count_gaussian_log(n: int, t: float) -> float:
    """log of the Gaussian factor exp(-t^2 log(N) / (2 pi^2)) for arc counts."""
    return -t * t * math.log(n) / (2 * math.pi ** 2)


def exact_arc_count_charfn(n: int, arc_fraction: float, t: float) -> complex:
    """E[exp(i t (count - 2 gamma N))] for U(N), as a Toeplitz determinant.

    The symbol is 1 + (e^{it} - 1) on the arc |theta| <= 2 pi gamma, whose
    Fourier coefficients are elementary.
    """
    from scipy.linalg import toeplitz

    if not 0 < arc_fraction < 0.5:
        raise DomainError("need 0 < arc_fraction < 1/2")
    half = 2 * math.pi * arc_fraction
    jump = cmath.exp(1j * t) - 1
    k = np.arange(1, n)
    col = np.empty(n, dtype=complex)
    col[0] = 1 + jump * half / math.pi
    col[1:] = jump * np.sin(k * half) / (math.pi * k)
    sign, logdet = np.linalg.slogdet(toeplitz(col, col))
    return complex(sign * np.exp(logdet - 1j * t * 2 * arc_fraction * n))
