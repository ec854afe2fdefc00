"""Haar sampling on U(N), USp(2g), SO(2N), log det(1 - T), arc counts.

Two kinds of samplers are provided.

* Dense samplers build a Haar matrix (Ginibre + QR with phase/sign fixes,
  quaternionic Gram-Schmidt for USp) or, for USp, run Metropolis chains on
  the Weyl density. They return eigenangles.
* Fast samplers draw log det(1 - T) or arc counts directly from exact
  distributional identities: a product of independent factors for U(N), the
  Killip-Nenciu tridiagonal models for USp(2g) and SO(2N), and the Pruefer
  phase of the CMV recursion for arc counts. They cost O(N) per sample.

All batch samplers work in fixed chunks keyed by chunk index, so results
depend only on (seed, stream, n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularSampleError
from .groups import Family, GroupKind
from .rng import RandomStream, chunk_sizes

__all__ = [
    "HaarSample",
    "sample_haar",
    "sample_angles",
    "log_det_one_minus",
    "log_det_from_angles",
    "sample_log_det",
    "count_in_arc",
    "sample_arc_counts",
    "normalized_count",
    "DENSE_METHODS",
]

DENSE_METHODS = {
    Family.UNITARY: ("qr",),
    Family.ORTHOGONAL: ("qr",),
    Family.SYMPLECTIC: ("quaternion", "mcmc"),
}
_CHUNK = 2048
_TINY = 1e-12


@dataclass(frozen=True)
class HaarSample:
    """Eigenangles in (-pi, pi] of one Haar-distributed matrix."""

    group: GroupKind
    eigenangles: np.ndarray
    seed_provenance: tuple

    def __post_init__(self):
        if len(self.eigenangles) != self.group.dimension:
            raise DomainError("number of eigenangles must equal the matrix dimension")


# dense samplers -----------------------------------------------------------

def _unitary_matrices(n: int, size: int, gen) -> np.ndarray:
    while True:
        z = (gen.standard_normal((size, n, n)) + 1j * gen.standard_normal((size, n, n))) / math.sqrt(2)
        q, r = np.linalg.qr(z)
        d = np.diagonal(r, axis1=1, axis2=2)
        if np.all(np.abs(d) > _TINY):
            return q * (d / np.abs(d))[:, None, :]


def _orthogonal_matrices(n: int, size: int, gen) -> np.ndarray:
    while True:
        z = gen.standard_normal((size, n, n))
        q, r = np.linalg.qr(z)
        d = np.diagonal(r, axis1=1, axis2=2)
        if np.all(np.abs(d) > _TINY):
            break
    q = q * np.sign(d)[:, None, :]
    # move the det = -1 coset onto SO(n) with a fixed reflection
    flip = np.linalg.det(q) < 0
    q[flip, :, -1] *= -1
    return q


def _symplectic_matrices(g: int, size: int, gen) -> np.ndarray:
    """Quaternionic Gram-Schmidt on Gaussian quaternion vectors.

    A quaternion vector is stored as v = (a; b) in C^{2g}; its partner
    column is (-conj b; conj a). The resulting 2g x 2g matrices are unitary
    and symplectic.
    """
    dim = 2 * g
    while True:
        x = (gen.standard_normal((size, dim, g)) + 1j * gen.standard_normal((size, dim, g))) / math.sqrt(2)
        cols = np.zeros((size, dim, dim), dtype=complex)
        ok = True
        for k in range(g):
            v = x[:, :, k]
            if k:
                basis = np.concatenate([cols[:, :, :k], cols[:, :, g:g + k]], axis=2)
                coef = np.einsum("sij,si->sj", basis.conj(), v)
                v = v - np.einsum("sij,sj->si", basis, coef)
            nrm = np.linalg.norm(v, axis=1)
            if np.any(nrm < _TINY):
                ok = False
                break
            v = v / nrm[:, None]
            cols[:, :, k] = v
            cols[:, :g, g + k] = -v[:, g:].conj()
            cols[:, g:, g + k] = v[:, :g].conj()
        if ok:
            return cols


def _paired_angles(matrices: np.ndarray) -> np.ndarray:
    """Eigenangles of real-spectrum-symmetric matrices, paired exactly."""
    half = matrices.shape[-1] // 2
    angles = np.sort(np.angle(np.linalg.eigvals(matrices)), axis=1)
    top = angles[:, half:]
    return np.concatenate([-top[:, ::-1], top], axis=1)


def _site_log_weight(theta: np.ndarray, j: int, value: np.ndarray) -> np.ndarray:
    """Terms of the log Weyl density that involve coordinate j set to ``value``."""
    others = np.delete(np.cos(theta), j, axis=1)
    with np.errstate(divide="ignore"):
        pair = np.log(np.abs(np.cos(value)[:, None] - others)).sum(axis=1)
        return 2 * pair + 2 * np.log(np.abs(np.sin(value)))


def _symplectic_mcmc(g: int, size: int, gen, sweeps: int) -> np.ndarray:
    """Independent Metropolis chains on prod (cos t_j - cos t_k)^2 prod sin^2 t_j.

    Each chain contributes its state after ``sweeps`` single-site sweeps with
    uniform proposals on [0, pi].
    """
    theta = gen.uniform(0, math.pi, (size, g))
    for _ in range(sweeps):
        for j in range(g):
            prop = gen.uniform(0, math.pi, size)
            gain = _site_log_weight(theta, j, prop) - _site_log_weight(theta, j, theta[:, j])
            accept = np.log(gen.uniform(size=size)) < gain
            theta[accept, j] = prop[accept]
    theta = np.sort(theta, axis=1)
    return np.concatenate([-theta[:, ::-1], theta], axis=1)


def _dense_angles_chunk(group: GroupKind, size: int, gen, method: str, sweeps: int) -> np.ndarray:
    n = group.size
    if group.family is Family.UNITARY:
        return np.angle(np.linalg.eigvals(_unitary_matrices(n, size, gen)))
    if group.family is Family.ORTHOGONAL:
        return _paired_angles(_orthogonal_matrices(2 * n, size, gen))
    if method == "mcmc":
        return _symplectic_mcmc(n, size, gen, sweeps)
    return _paired_angles(_symplectic_matrices(n, size, gen))


def _resolve_dense(group: GroupKind, method: str | None) -> str:
    allowed = DENSE_METHODS[group.family]
    method = allowed[0] if method is None else method
    if method not in allowed:
        raise DomainError(f"method {method!r} not available for {group}; use one of {allowed}")
    return method


def sample_angles(group: GroupKind, n: int, rng: RandomStream, method: str | None = None,
                  mcmc_sweeps: int = 60) -> np.ndarray:
    """Eigenangles of ``n`` Haar matrices, shape ``(n, dimension)``.

    For U(N) the angles are in the order returned by the eigen-solver; for
    USp and SO they are sorted, with the negated half first.
    """
    method = _resolve_dense(group, method)
    parts = [_dense_angles_chunk(group, c, rng.generator(i), method, mcmc_sweeps)
             for i, c in enumerate(chunk_sizes(n, _CHUNK))]
    if not parts:
        return np.empty((0, group.dimension))
    return np.concatenate(parts)


def sample_haar(group: GroupKind, rng: RandomStream, method: str | None = None) -> HaarSample:
    """One Haar-distributed matrix from ``group``, stored by its eigenangles."""
    angles = sample_angles(group, 1, rng, method)[0]
    return HaarSample(group, angles, rng.provenance)


# log det(1 - T) ---------------------------------------------------------------

def log_det_from_angles(angles) -> np.ndarray:
    """sum_j Log(1 - e^{i theta_j}) along the last axis, principal branch per factor.

    Uses 1 - e^{i theta} = 2 sin(theta/2) e^{i (theta - pi)/2}, so each term
    has imaginary part (theta - pi sign(theta)) / 2 in (-pi/2, pi/2].
    """
    angles = np.asarray(angles, dtype=float)
    if np.any(angles == 0):
        raise SingularSampleError("eigenangle exactly 0: det(1 - T) vanishes")
    re = np.log(np.abs(2 * np.sin(angles / 2)))
    im = 0.5 * (angles - math.pi * np.sign(angles))
    return (re + 1j * im).sum(axis=-1)


def log_det_one_minus(sample: HaarSample) -> complex:
    return complex(log_det_from_angles(sample.eigenangles))


def _unitary_log_det_chunk(n: int, size: int, gen) -> np.ndarray:
    # det(1 - U) has the law of prod_k (1 - e^{i w_k} sqrt(B_k)),
    # B_0 = 1 and B_k ~ Beta(1, k) independent
    k = np.arange(n)
    radius = np.ones((size, n))
    if n > 1:
        radius[:, 1:] = np.sqrt(gen.beta(1.0, k[1:], size=(size, n - 1)))
    phase = gen.uniform(-math.pi, math.pi, size=(size, n))
    gamma = radius * np.exp(1j * phase)
    return np.log(1 - gamma).sum(axis=1)


def _jacobi_log_det_chunk(n: int, size: int, gen, a: float, b: float) -> np.ndarray:
    """log det(2 - J) for the Killip-Nenciu Jacobi model (beta = 2).

    The eigenvalues of J are 2 cos(theta_j), so the result is
    log prod |1 - e^{i theta_j}|^2.
    """
    m = 2 * n - 1
    alpha = np.empty((size, m + 3))
    # alpha[:, k + 2] holds alpha_k; alpha_{-2} = alpha_{-1} = alpha_{2n-1} = -1
    alpha[:, 0] = alpha[:, 1] = -1.0
    for k in range(m):
        if k % 2 == 0:
            s = (2 * n - k - 2) / 2 + a + 1
            t = (2 * n - k - 2) / 2 + b + 1
        else:
            s = (2 * n - k - 3) / 2 + a + b + 2
            t = (2 * n - k - 1) / 2
        alpha[:, k + 2] = 1 - 2 * gen.beta(s, t, size=size)
    alpha[:, m + 2] = -1.0

    def al(k):
        return alpha[:, k + 2]

    log_det = np.zeros(size)
    ratio = None
    prev_off = None
    for k in range(n):
        diag = (1 - al(2 * k - 1)) * al(2 * k) - (1 + al(2 * k - 1)) * al(2 * k - 2)
        r = 2 - diag if ratio is None else 2 - diag - prev_off / ratio
        log_det += np.log(r)
        ratio = r
        if k < n - 1:
            prev_off = (1 - al(2 * k - 1)) * (1 - al(2 * k) ** 2) * (1 + al(2 * k + 1))
    return log_det + 0j


def _fast_log_det_chunk(group: GroupKind, size: int, gen) -> np.ndarray:
    n = group.size
    if group.family is Family.UNITARY:
        return _unitary_log_det_chunk(n, size, gen)
    if group.family is Family.SYMPLECTIC:
        return _jacobi_log_det_chunk(n, size, gen, 0.5, 0.5)
    return _jacobi_log_det_chunk(n, size, gen, -0.5, -0.5)


def sample_log_det(group: GroupKind, n: int, rng: RandomStream, method: str = "fast",
                   mcmc_sweeps: int = 60) -> np.ndarray:
    """``n`` independent draws of log det(1 - T), T Haar in ``group``.

    ``method="fast"`` uses the O(N) distributional identities; any dense
    method name goes through eigenangles instead.
    """
    if method == "fast":
        parts = [_fast_log_det_chunk(group, c, rng.generator(i))
                 for i, c in enumerate(chunk_sizes(n, _CHUNK))]
        return np.concatenate(parts) if parts else np.empty(0, dtype=complex)
    while True:
        try:
            return log_det_from_angles(sample_angles(group, n, rng, method, mcmc_sweeps))
        except SingularSampleError:
            rng = RandomStream(rng.seed, rng.stream + 1)


# arc counts ------------------------------------------------------------------

def _check_fraction(gamma: float):
    if not 0 < gamma < 0.5:
        raise DomainError("arc fraction must satisfy 0 < gamma < 1/2")


def count_in_arc(sample, gamma: float):
    """Number of eigenangles with |theta| <= 2 pi gamma (closed arc).

    ``sample`` is a HaarSample or an array of angles (last axis counted).
    """
    _check_fraction(gamma)
    angles = sample.eigenangles if isinstance(sample, HaarSample) else np.asarray(sample)
    counts = (np.abs(angles) <= 2 * math.pi * gamma).sum(axis=-1)
    return int(counts) if np.ndim(counts) == 0 else counts


def _cmv_counts_chunk(n: int, gamma: float, size: int, gen) -> np.ndarray:
    """Arc counts for U(N) from the Pruefer phase of the CMV recursion.

    Verblunsky coefficients of Haar measure: alpha_k (k < N-1) rotation
    invariant with |alpha_k|^2 ~ Beta(1, N-k-1), alpha_{N-1} uniform on the
    circle. The eigenvalues e^{i theta} are the solutions of
    psi_{N-1}(theta) = eta mod 2 pi, with psi increasing in theta.
    """
    half = 2 * math.pi * gamma
    edges = np.array([-half, half])
    psi = np.broadcast_to(edges, (size, 2)).copy()
    for k in range(n - 1):
        rad = np.sqrt(gen.beta(1.0, n - k - 1, size=size))
        alpha = rad * np.exp(1j * gen.uniform(-math.pi, math.pi, size=size))
        psi = psi + edges - 2 * np.angle(1 - alpha[:, None] * np.exp(1j * psi))
    eta = gen.uniform(-math.pi, math.pi, size=size)
    # the arc is closed; ties have probability zero
    low = np.ceil((psi[:, 0] - eta) / (2 * math.pi))
    high = np.floor((psi[:, 1] - eta) / (2 * math.pi))
    return (high - low + 1).astype(np.int64)


def sample_arc_counts(n: int, gamma: float, size: int, rng: RandomStream,
                      method: str = "fast") -> np.ndarray:
    """Eigenvalue counts in |theta| <= 2 pi gamma for ``size`` Haar U(n) matrices."""
    _check_fraction(gamma)
    if method == "fast":
        parts = [_cmv_counts_chunk(n, gamma, c, rng.generator(i))
                 for i, c in enumerate(chunk_sizes(size, _CHUNK))]
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    return count_in_arc(sample_angles(GroupKind.unitary(n), size, rng, method), gamma)


def normalized_count(count, n: int, gamma: float):
    """(count - 2 gamma N) / (sqrt(log N) / pi)."""
    if n < 2:
        raise DomainError("normalized_count needs N >= 2")
    return (np.asarray(count) - 2 * gamma * n) * math.pi / math.sqrt(math.log(n))
