import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modgauss.errors import DomainError
from modgauss.groups import GroupKind
from modgauss.local_prob import (DESK_SCALE, SATURATED, BoxRegion, CovarianceForm,
                                 ModGaussianHypotheses, disc_to_log_box, euler_source,
                                 gaussian_box_prob, gaussian_lower_bound, group_source,
                                 kolmogorov_distance, mc_local_probability, n0_threshold,
                                 two_sample_distance, wilson_interval)
from modgauss.rmt import sample_log_det

# erf(1/sqrt 2), mpmath at 30 digits
ONE_SIGMA_MASS = 0.682689492137085897170465


def test_one_dimensional_one_sigma():
    p = gaussian_box_prob(CovarianceForm((1.0,)), BoxRegion((0.0,), 1.0))
    assert abs(p - ONE_SIGMA_MASS) < 1e-14


def test_planar_box_factorizes():
    Q = CovarianceForm((1.0, 4.0))
    p = gaussian_box_prob(Q, BoxRegion((0.0, 0.0), 2.0))
    ref = math.erf(2 / math.sqrt(2)) * math.erf(2 / math.sqrt(8))
    assert abs(p - ref) < 1e-14


def test_huge_box_has_full_mass():
    Q = CovarianceForm.isotropic(2.0, 2)
    assert gaussian_box_prob(Q, BoxRegion((0.0, 0.0), 1e3)) == pytest.approx(1, abs=1e-15)


def test_dimension_mismatch_rejected():
    with pytest.raises(DomainError):
        gaussian_box_prob(CovarianceForm((1.0,)), BoxRegion((0.0, 0.0), 1.0))
    with pytest.raises(DomainError):
        CovarianceForm((1.0, -2.0))
    with pytest.raises(DomainError):
        BoxRegion((0.0,), 0.0)


def test_lower_bound_below_box_probability():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        m = int(rng.integers(1, 3))
        Q = CovarianceForm(tuple(rng.uniform(0.05, 20, m)))
        box = BoxRegion(tuple(rng.uniform(-6, 6, m)), float(rng.uniform(1e-3, 1)))
        assert 0 < gaussian_lower_bound(Q, box) <= gaussian_box_prob(Q, box)
    with pytest.raises(DomainError):
        gaussian_lower_bound(CovarianceForm((1.0,)), BoxRegion((0.0,), 1.5))


def test_far_tail_box_does_not_cancel():
    p = gaussian_box_prob(CovarianceForm((1.0,)), BoxRegion((10.0,), 0.5))
    ref = 0.5 * (math.erfc(9.5 / math.sqrt(2)) - math.erfc(10.5 / math.sqrt(2)))
    assert p == pytest.approx(ref, rel=1e-12)
    assert gaussian_box_prob(CovarianceForm((1.0,)), BoxRegion((-10.0,), 0.5)) == p


def test_box_partition_is_additive():
    Q = CovarianceForm((1.7,))
    whole = gaussian_box_prob(Q, BoxRegion((0.3,), 1.0))
    halves = gaussian_box_prob(Q, BoxRegion((-0.2,), 0.5)) + gaussian_box_prob(Q, BoxRegion((0.8,), 0.5))
    assert abs(whole - halves) < 1e-14


def test_disc_to_log_box_examples():
    box = disc_to_log_box(1, 1)
    assert box.center == (0.0, 0.0)
    assert box.half_width == pytest.approx(1 / (2 * math.sqrt(2)))
    box = disc_to_log_box(math.e, math.e)
    assert box.center[0] == pytest.approx(1) and box.center[1] == 0
    with pytest.raises(DomainError):
        disc_to_log_box(0, 0.1)
    with pytest.raises(DomainError):
        disc_to_log_box(1, 2)


@settings(max_examples=100, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.floats(0.01, 1.0))
def test_disc_to_log_box_maps_into_disc(z0, frac):
    eps = frac * abs(z0)
    box = disc_to_log_box(z0, eps)
    rng = np.random.default_rng(0)
    u = rng.uniform(-1, 1, (200, 2)) * box.half_width * 0.999999
    w = (box.center[0] + u[:, 0]) + 1j * (box.center[1] + u[:, 1])
    assert np.all(np.abs(np.exp(w) - z0) < eps)


def test_n0_threshold():
    t = n0_threshold("unitary", 1, 1)
    assert t.log_value == pytest.approx(512)
    assert t.value == SATURATED and t.beyond_desk_scale
    assert n0_threshold("euler", 1, 1).log_value == pytest.approx(math.exp(512))
    assert n0_threshold("euler", 1, 0.5).log_value == math.inf
    logs = [n0_threshold("unitary", 1, eps).log_value for eps in (0.2, 0.5, 0.9)]
    assert all(b < a for a, b in zip(logs, logs[1:]))
    small = n0_threshold("unitary", 1, 1, C=1e-3)
    assert small.value == math.ceil(math.exp(0.512)) and not small.beyond_desk_scale
    assert small.value < DESK_SCALE
    with pytest.raises(DomainError):
        n0_threshold("orthogonal", 1, 1)


def test_hypotheses_threshold_and_error_scale():
    h = ModGaussianHypotheses(m=2, a=0.5, alpha=1.0, C_exp=1.0)
    assert h.d_threshold == pytest.approx(2 * (3 + 18))
    assert not h.admits(42) and h.admits(43)
    assert h.error_scale(100.0, 0.5, 50) == pytest.approx(100 ** (-0.5 - 1 / 50) + 4 / 100)
    with pytest.raises(DomainError):
        h.error_scale(100.0, 0.5, 10)
    with pytest.raises(DomainError):
        ModGaussianHypotheses(m=0, a=1, alpha=1, C_exp=1)


def test_covariance_form_basics():
    Q = CovarianceForm((3.0, 2.0))
    assert Q.eigenvalues == (3.0, 2.0)
    assert Q.discriminant == 6
    assert Q((1, 2)) == 11
    assert Q.dual((3, 2)) == pytest.approx(5)
    assert Q.balance_exponent == pytest.approx(math.log(3) / math.log(2))
    g = CovarianceForm.for_group(GroupKind.unitary(64))
    assert g.eigenvalues == pytest.approx((0.5 * math.log(64),) * 2)
    assert CovarianceForm.for_group(GroupKind.symplectic(64)).eigenvalues == pytest.approx((math.log(32),))


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0 and 0 < hi < 0.05
    assert wilson_interval(100, 100)[1] == 1
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi and hi - 0.5 == pytest.approx(0.5 - lo)


def test_mc_huge_box_is_certain(stream):
    est = mc_local_probability(group_source(GroupKind.unitary(8)), BoxRegion((0.0, 0.0), 1e6),
                               2000, stream)
    assert est.p_hat == 1 and est.hits == 2000 and est.stderr == 0
    with pytest.raises(DomainError):
        mc_local_probability(group_source(GroupKind.unitary(8)), BoxRegion((0.0, 0.0), 1.0), 10, stream)


def test_mc_independent_of_shards(stream):
    source, box = euler_source(100), BoxRegion((0.0, 0.0), 0.5)
    a = mc_local_probability(source, box, 30_000, stream, shards=1)
    b = mc_local_probability(source, box, 30_000, stream, shards=3)
    assert a == b


def test_kolmogorov_distance_basics():
    assert kolmogorov_distance([0.0]) == pytest.approx(0.5)
    assert kolmogorov_distance(np.full(50, 0.3)) >= 0.5
    x = np.random.default_rng(5).standard_normal(20_000)
    # DKW: P(D > e) <= 2 exp(-2 n e^2), about 1e-6 at this e
    assert kolmogorov_distance(x) <= math.sqrt(math.log(2 / 1e-6) / (2 * x.size))
    assert two_sample_distance([0, 1, 2], [0, 1, 2]) == 0
    with pytest.raises(DomainError):
        kolmogorov_distance([])


@pytest.mark.parametrize("center,half_width", [((0.0, 0.0), 0.3), ((1.0, -0.5), 0.5), ((-1.5, 1.0), 1.0)])
def test_local_probability_against_gaussian(center, half_width, stream):
    # local limit: P(X in box) ~ Gaussian box mass up to O(sigma^{-1/2}), sigma = det Q
    group = GroupKind.unitary(256)
    Q = CovarianceForm.for_group(group)
    box = BoxRegion(center, half_width)
    est = mc_local_probability(group_source(group), box, 100_000, stream)
    sigma = Q.discriminant
    gauss = gaussian_box_prob(Q, box)
    assert abs(est.p_hat - gauss) <= 4 * est.stderr + gauss * sigma ** -0.5


# Kolmogorov distance from N(0, 1) of the exact U(256) law of each scaled coordinate,
# Gil-Pelaez inversion of the exact characteristic function on 161 points in [-4, 4]
UNITARY_256_EXACT_KS = (0.03248, 0.03198)


@pytest.fixture(scope="module")
def scaled_unitary_256():
    from modgauss.rng import RandomStream

    n = 256
    x = sample_log_det(GroupKind.unitary(n), 100_000, RandomStream(20240611))
    return x / math.sqrt(0.5 * math.log(n))


@pytest.mark.xfail(strict=True, reason="the exact N=256 law sits 0.032 from normal in Kolmogorov "
                                       "distance in each coordinate, above 0.03")
def test_scaled_coordinates_near_normal(scaled_unitary_256):
    for coord in (scaled_unitary_256.real, scaled_unitary_256.imag):
        assert kolmogorov_distance(coord) <= 0.03


def test_scaled_coordinates_match_exact_law(scaled_unitary_256):
    # sampling error of a Kolmogorov distance at n = 1e5 is about 1.63 / sqrt(n) = 0.005
    for coord, ref in zip((scaled_unitary_256.real, scaled_unitary_256.imag), UNITARY_256_EXACT_KS):
        assert abs(kolmogorov_distance(coord) - ref) <= 1.63 / math.sqrt(100_000)
