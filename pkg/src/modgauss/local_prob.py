"""Covariance forms, Gaussian box probabilities and Monte Carlo local probabilities.

Everything works in the diagonal basis of the covariance form: a form
Q(t) = sum_i delta_i t_i^2 is stored by its eigenvalues, and boxes are
aligned with the coordinate axes.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .groups import Family, GroupKind
from .rng import RandomStream, chunk_sizes
from .special import erf

__all__ = [
    "CovarianceForm",
    "ModGaussianHypotheses",
    "BoxRegion",
    "ProbabilityEstimate",
    "N0Threshold",
    "gaussian_box_prob",
    "gaussian_lower_bound",
    "disc_to_log_box",
    "n0_threshold",
    "mc_local_probability",
    "group_source",
    "euler_source",
    "kolmogorov_distance",
    "two_sample_distance",
    "normal_cdf",
    "wilson_interval",
]

DESK_SCALE = 10 ** 7
SATURATED = 2 ** 63 - 1
_MC_CHUNK = 8192


@dataclass(frozen=True)
class CovarianceForm:
    """Q(t) = sum_i delta_i t_i^2.

    The eigenvalues need not be sorted: they stay aligned with the box axes.
    """

    eigenvalues: tuple

    def __post_init__(self):
        vals = tuple(float(d) for d in np.atleast_1d(self.eigenvalues))
        if not vals:
            raise DomainError("a covariance form needs at least one eigenvalue")
        if not all(d > 0 and math.isfinite(d) for d in vals):
            raise DomainError("covariance eigenvalues must be positive and finite")
        object.__setattr__(self, "eigenvalues", vals)

    @classmethod
    def isotropic(cls, delta: float, m: int) -> "CovarianceForm":
        return cls((delta,) * m)

    @classmethod
    def for_group(cls, group: GroupKind) -> "CovarianceForm":
        """Covariance of log det(1 - T): (1/2) log N per coordinate for U(N),
        log(g/2) or log(N/2) for the real-valued families."""
        n = group.size
        if group.family is Family.UNITARY:
            return cls.isotropic(0.5 * math.log(n), 2)
        return cls((math.log(n / 2),))

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    @property
    def discriminant(self) -> float:
        return float(np.prod(self.eigenvalues))

    @property
    def balance_exponent(self) -> float:
        """Smallest mu with delta_max <= delta_min^mu (needs delta_min > 1)."""
        lo, hi = min(self.eigenvalues), max(self.eigenvalues)
        if lo <= 1:
            raise DomainError("balance exponent is defined only when delta_min > 1")
        return math.log(hi) / math.log(lo)

    def __call__(self, t) -> float:
        t = np.asarray(t, dtype=float)
        return float(np.sum(np.asarray(self.eigenvalues) * t * t))

    def dual(self, x) -> float:
        """Dual form sum_i x_i^2 / delta_i."""
        x = np.asarray(x, dtype=float)
        return float(np.sum(x * x / np.asarray(self.eigenvalues)))


@dataclass(frozen=True)
class ModGaussianHypotheses:
    """Constants of the quantitative mod-Gaussian local limit theorem.

    ``a``, ``alpha``, ``C_exp`` control the range and speed of convergence
    of the characteristic function, ``A_growth`` and ``beta`` the growth of
    the limiting function, and ``mu`` the balance of the covariance form.
    """

    m: int
    a: float
    alpha: float
    C_exp: float
    A_growth: float = 1.0
    beta: float = 0.0
    mu: float = 1.0

    def __post_init__(self):
        if self.m < 1:
            raise DomainError("dimension m must be >= 1")
        for name in ("a", "alpha", "C_exp", "mu"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.A_growth < 1:
            raise DomainError("A_growth must be >= 1")
        if self.beta < 0:
            raise DomainError("beta must be >= 0")

    @property
    def d_threshold(self) -> float:
        """D must exceed 2 (m + 1 + max{1/a, A/C, 3 m (m+1) mu A})."""
        m, A = self.m, self.A_growth
        return 2 * (m + 1 + max(1 / self.a, A / self.C_exp, 3 * m * (m + 1) * self.mu * A))

    def admits(self, D: float) -> bool:
        return D > self.d_threshold

    def error_scale(self, sigma: float, eps: float, D: float) -> float:
        """Shape sigma^{-1/2-1/D} + eps^{-m} / sigma of the error term."""
        if not self.admits(D):
            raise DomainError(f"D = {D:g} does not exceed {self.d_threshold:g}")
        return sigma ** (-0.5 - 1 / D) + eps ** (-self.m) / sigma


@dataclass(frozen=True)
class BoxRegion:
    """Open sup-norm box {x : |x - center|_inf < half_width}."""

    center: tuple
    half_width: float

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(self.center))
        object.__setattr__(self, "center", c)
        if not self.half_width > 0:
            raise DomainError("box half-width must be positive")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def contains(self, points) -> np.ndarray:
        """Membership of points given as an (n, m) array, or complex for m = 2."""
        pts = np.asarray(points)
        if np.iscomplexobj(pts):
            pts = np.stack([pts.real, pts.imag], axis=-1)
        pts = pts.reshape(len(pts), -1) if pts.ndim else pts.reshape(1, -1)
        if pts.shape[1] != self.dimension:
            # real-valued sources against a one-dimensional box
            pts = pts[:, :self.dimension]
        return np.all(np.abs(pts - np.asarray(self.center)) < self.half_width, axis=1)


@dataclass(frozen=True)
class ProbabilityEstimate:
    p_hat: float
    n_samples: int
    hits: int
    stderr: float
    ci95: tuple
    seed_provenance: tuple


@dataclass(frozen=True)
class N0Threshold:
    """Threshold size, its natural log, and whether it is beyond desk scale.

    ``value`` saturates at ``SATURATED`` when it does not fit in 63 bits.
    """

    value: int
    log_value: float
    beyond_desk_scale: bool


def _check_box(Q: CovarianceForm, box: BoxRegion):
    if Q.dimension != box.dimension:
        raise DomainError("box and covariance form have different dimensions")


def gaussian_box_prob(Q: CovarianceForm, box: BoxRegion) -> float:
    """P(G in box) for a centered Gaussian with covariance diag(delta_i)."""
    _check_box(Q, box)
    from scipy.special import erfc

    # reflect to the right half-line and difference the upper tails, which
    # keeps far-out boxes from cancelling to zero
    x0 = np.abs(np.asarray(box.center))
    scale = np.sqrt(2 * np.asarray(Q.eigenvalues))
    eps = box.half_width
    per_axis = 0.5 * (erfc((x0 - eps) / scale) - erfc((x0 + eps) / scale))
    return float(np.prod(per_axis))


def gaussian_lower_bound(Q: CovarianceForm, box: BoxRegion) -> float:
    """(2 pi)^{-m/2} eps^m sigma^{-1/2} exp(-Q~(x0)/2).

    In each coordinate the half of the interval lying towards the origin
    has length eps and density at least the density at x0, which gives the
    bound with constant c_m = (2 pi)^{-m/2}.
    """
    _check_box(Q, box)
    eps = box.half_width
    if eps > 1:
        raise DomainError("the elementary lower bound assumes eps <= 1")
    m = Q.dimension
    return float((2 * math.pi) ** (-m / 2) * eps ** m / math.sqrt(Q.discriminant)
                 * math.exp(-0.5 * Q.dual(box.center)))


def disc_to_log_box(z0: complex, eps: float) -> BoxRegion:
    """Box around (log|z0|, Arg z0) whose image under exp lies in the disc |z - z0| < eps.

    A radius eps / (2 |z0|) around a logarithm of z0 maps into the disc; the
    box is inscribed in that radius, so its half-width is smaller by sqrt(2).
    """
    z0 = complex(z0)
    if z0 == 0:
        raise DomainError("z0 must be non-zero")
    if not 0 < eps <= abs(z0):
        raise DomainError("need 0 < eps <= |z0|")
    r = abs(z0)
    center = (math.log(r), math.atan2(z0.imag, z0.real))
    return BoxRegion(center, eps / (2 * r) / math.sqrt(2))


def n0_threshold(model: str, z0: complex, eps: float, C: float = 1.0) -> N0Threshold:
    """Size beyond which the density lower bound is guaranteed (implied constant 1).

    ``model="unitary"``: max{exp((log|z0|)^2), exp(C (eps/(2|z0|))^-9)};
    ``model="euler"``: the same with each term exponentiated once more.
    """
    z0 = complex(z0)
    if z0 == 0 or not 0 < eps <= abs(z0):
        raise DomainError("need z0 != 0 and 0 < eps <= |z0|")
    if not C > 0:
        raise DomainError("C must be positive")
    first = math.log(abs(z0)) ** 2
    second = C * (eps / (2 * abs(z0))) ** -9
    if model == "unitary":
        log_value = max(first, second)
    elif model == "euler":
        top = max(first, second)
        log_value = math.exp(top) if top < 700 else math.inf
    else:
        raise DomainError(f"unknown model {model!r}; expected 'unitary' or 'euler'")
    if log_value < math.log(SATURATED):
        value = max(1, math.ceil(math.exp(log_value)))
    else:
        value = SATURATED
    return N0Threshold(value, log_value, value > DESK_SCALE)


def wilson_interval(hits: int, n: int, z: float = 1.959963984540054) -> tuple:
    """Wilson score interval for a binomial proportion."""
    p = hits / n
    denom = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if hits == 0 else max(0.0, mid - half)
    hi = 1.0 if hits == n else min(1.0, mid + half)
    return lo, hi


def group_source(group: GroupKind, method: str = "fast", centered: bool = False) -> Callable:
    """Sampler of log det(1 - T) usable by :func:`mc_local_probability`.

    For the real-valued families only the real part is returned; with
    ``centered=True`` the deterministic centering shift is subtracted.
    """
    from .charfn import centering_shift
    from .rmt import sample_log_det

    shift = centering_shift(group) if centered else 0.0

    def draw(size: int, rng: RandomStream):
        x = sample_log_det(group, size, rng, method)
        return x - shift if group.is_unitary else x.real - shift
    return draw


def euler_source(N: int) -> Callable:
    from .euler import sample_log_euler_batch

    def draw(size: int, rng: RandomStream):
        return sample_log_euler_batch(N, size, rng)
    return draw


def mc_local_probability(source: Callable, target: BoxRegion, n: int, rng: RandomStream,
                         shards: int = 1) -> ProbabilityEstimate:
    """Monte Carlo estimate of P(X in target).

    ``source(size, stream)`` returns ``size`` draws (complex for planar
    boxes, real for intervals). Work is split into fixed chunks with their
    own derived streams; ``shards`` only controls how many chunks run
    concurrently, so the estimate does not depend on it.
    """
    if n < 1000:
        raise DomainError("mc_local_probability needs n >= 1000")
    if shards < 1:
        raise DomainError("shards must be >= 1")
    sizes = chunk_sizes(n, _MC_CHUNK)

    def run(j):
        return int(np.count_nonzero(target.contains(source(sizes[j], rng.child(j)))))

    if shards == 1:
        hits = sum(run(j) for j in range(len(sizes)))
    else:
        with ThreadPoolExecutor(max_workers=shards) as pool:
            hits = sum(pool.map(run, range(len(sizes))))
    p = hits / n
    return ProbabilityEstimate(p, n, hits, math.sqrt(p * (1 - p) / n),
                               wilson_interval(hits, n), rng.provenance)


def normal_cdf(x):
    return 0.5 * (1 + erf(np.asarray(x, dtype=float) / math.sqrt(2)))


def kolmogorov_distance(samples: Sequence[float], reference_cdf: Callable = normal_cdf) -> float:
    """sup_x |F_n(x) - F(x)|, checked at both one-sided limits of every jump."""
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise DomainError("kolmogorov_distance needs at least one sample")
    n = x.size
    f = np.asarray(reference_cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def two_sample_distance(a, b) -> float:
    """Kolmogorov distance between two empirical distributions."""
    from scipy.stats import ks_2samp

    return float(ks_2samp(np.asarray(a, dtype=float), np.asarray(b, dtype=float)).statistic)
