"""Random Euler product model and the finite Euler product P_N(t).

The model is L_N = -sum_{p <= N} log(1 - X_p / sqrt(p)) with X_p independent
and uniform on the unit circle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .groups import as_point, norm
from .rng import RandomStream, chunk_sizes
from .special import gauss_2f1

__all__ = [
    "PrimeTable",
    "EulerDraw",
    "sample_log_euler",
    "sample_log_euler_batch",
    "charfn_log_euler",
    "delta_N",
    "p_n_of_t",
    "tail_factor",
]

MAX_PRIME_BOUND = 10 ** 7
_CHUNK = 4096


@lru_cache(maxsize=16)
def _sieve(bound: int) -> np.ndarray:
    if bound < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(bound + 1, dtype=bool)
    is_prime[:2] = False
    for k in range(2, math.isqrt(bound) + 1):
        if is_prime[k]:
            is_prime[k * k::k] = False
    out = np.flatnonzero(is_prime).astype(np.int64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``bound``, ascending."""

    bound: int

    def __post_init__(self):
        if not 0 <= self.bound <= MAX_PRIME_BOUND:
            raise DomainError(f"prime bound must lie in [0, {MAX_PRIME_BOUND}]")

    @property
    def primes(self) -> np.ndarray:
        return _sieve(int(self.bound))

    def between(self, lo: int, hi: int) -> np.ndarray:
        """Primes p with lo < p <= hi."""
        p = PrimeTable(hi).primes
        return p[p > lo]


@dataclass(frozen=True)
class EulerDraw:
    value: complex
    N: int
    seed_provenance: tuple


def _check_n(n: int):
    if n < 2:
        raise DomainError("the Euler model needs N >= 2")


def _draw_chunk(weights: np.ndarray, size: int, gen: np.random.Generator) -> np.ndarray:
    angles = gen.uniform(-math.pi, math.pi, size=(size, weights.size))
    return -np.log(1 - weights * np.exp(1j * angles)).sum(axis=1)


def sample_log_euler_batch(n_primes_bound: int, size: int, rng: RandomStream) -> np.ndarray:
    """``size`` independent draws of L_N, N = ``n_primes_bound``.

    Draws are produced in fixed chunks keyed by chunk index, so the result
    does not depend on how a caller shards the work.
    """
    _check_n(n_primes_bound)
    weights = PrimeTable(n_primes_bound).primes.astype(float) ** -0.5
    out = [_draw_chunk(weights, c, rng.generator(i))
           for i, c in enumerate(chunk_sizes(size, _CHUNK))]
    return np.concatenate(out) if out else np.empty(0, dtype=complex)


def sample_log_euler(N: int, rng: RandomStream) -> EulerDraw:
    """A single realization of L_N."""
    value = sample_log_euler_batch(N, 1, rng)[0]
    return EulerDraw(complex(value), N, rng.provenance)


def _log_factor_product(primes: np.ndarray, t1: float, t2: float, with_gaussian: bool) -> complex:
    if primes.size == 0 or (t1 == 0 and t2 == 0):
        return 0j
    x = 1.0 / primes.astype(float)
    a = 0.5 * (1j * t1 + t2)
    b = 0.5 * (1j * t1 - t2)
    logs = np.log(gauss_2f1(a, b, 1.0, x))
    if with_gaussian:
        logs = logs - 0.25 * (t1 * t1 + t2 * t2) * np.log1p(-x)
    return complex(np.sum(logs))


def charfn_log_euler(N: int, t) -> complex:
    """E[exp(i t . L_N)] as a product of hypergeometric factors over p <= N."""
    _check_n(N)
    t1, t2 = as_point(t)
    return cmath.exp(_log_factor_product(PrimeTable(N).primes, t1, t2, False))


def delta_N(N: int) -> float:
    """Variance scale -1/2 sum_{p <= N} log(1 - 1/p) of each coordinate of L_N."""
    _check_n(N)
    p = PrimeTable(N).primes.astype(float)
    return float(-0.5 * np.sum(np.log1p(-1.0 / p)))


def p_n_of_t(N: int, t):
    """Finite Euler product prod_{p <= N} (1 - p^{-1/2 - it})^{-1}.

    ``t`` may be a scalar or an array; evaluation is in log space.
    """
    _check_n(N)
    t_arr = np.asarray(t, dtype=float)
    p = PrimeTable(N).primes.astype(float)
    logp = np.log(p)
    flat = t_arr.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for start in range(0, flat.size, _CHUNK):
        tt = flat[start:start + _CHUNK, None]
        terms = np.exp(-(0.5 + 1j * tt) * logp)
        out[start:start + _CHUNK] = np.exp(-np.log(1 - terms).sum(axis=1))
    out = out.reshape(t_arr.shape)
    return complex(out) if out.ndim == 0 else out


def tail_factor(N: int, t, M: int) -> complex:
    """prod_{N < p <= M} (1 - 1/p)^{-|t|^2/4} 2F1(a, b; 1; 1/p).

    This is the factor relating the truncated limiting function to the
    renormalized characteristic function; it is 1 + O(N^{-1/2}) uniformly
    for |t| <= N^{1/8}.
    """
    _check_n(N)
    t1, t2 = as_point(t)
    if norm((t1, t2)) > N ** 0.125 * (1 + 1e-12):
        raise DomainError(f"tail_factor: |t| exceeds N^(1/8) = {N ** 0.125:g}")
    if M < N:
        raise DomainError("tail_factor: need M >= N")
    primes = PrimeTable(M).between(N, M)
    return cmath.exp(_log_factor_product(primes, t1, t2, True))
