import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sint

import molsig as m
from molsig import geometry

from conftest import closed_form_distance_cdf


class TestDiskRegion:
    def test_rejects_nonpositive_radius(self):
        for bad in (0.0, -1.0, float("nan"), float("inf")):
            with pytest.raises(ValueError):
                m.DiskRegion(bad)

    def test_diameter(self):
        assert m.DiskRegion(1.5).diameter == 3.0


class TestUniformPoint:
    def test_support_containment(self, unit_region):
        rng = np.random.default_rng(42)
        pts = m.sample_uniform_points(unit_region, 10_000, rng)
        assert np.all(np.hypot(pts[:, 0], pts[:, 1]) <= 1.0 + 1e-12)

    def test_same_seed_same_point(self, unit_region):
        p1 = m.sample_uniform_point(unit_region, np.random.default_rng(7))
        p2 = m.sample_uniform_point(unit_region, np.random.default_rng(7))
        assert np.array_equal(p1, p2)

    def test_radial_distribution(self, unit_region):
        # radial CDF of a uniform disk point is rho^2 / r^2
        rng = np.random.default_rng(3)
        pts = m.sample_uniform_points(unit_region, 100_000, rng)
        rho = np.sort(np.hypot(pts[:, 0], pts[:, 1]))
        ecdf = np.arange(1, rho.size + 1) / rho.size
        ks = np.max(np.abs(ecdf - rho**2))
        assert ks < 0.01


class TestPairDistance:
    def test_triangle_bound(self, unit_region):
        rng = np.random.default_rng(0)
        for _ in range(200):
            s = m.sample_pair_distance(unit_region, rng)
            assert 0.0 <= s.value <= 2.0

    def test_batch_support(self, unit_region, backend):
        d = m.sample_pair_distances(unit_region, 50_000, seed=11, backend=backend)
        assert d.shape == (50_000,)
        assert np.all((d >= 0.0) & (d <= 2.0))

    def test_mean_matches_first_moment(self, unit_region):
        # oracle: numerical quadrature of x * f(x) over [0, 2r]
        mean_oracle, _ = sint.quad(
            lambda x: x * m.distance_pdf(x, unit_region), 0.0, 2.0, limit=200)
        d = m.sample_pair_distances(unit_region, 100_000, seed=1)
        assert abs(d.mean() - mean_oracle) / mean_oracle < 0.01

    def test_ecdf_matches_quadrature_cdf(self, unit_region):
        # oracle: cumulative scipy quadrature of the density on a fine grid
        grid = np.linspace(0.0, 2.0, 2001)
        masses = [
            sint.quad(lambda x: m.distance_pdf(x, unit_region), a, b)[0]
            for a, b in zip(grid[:-1], grid[1:])
        ]
        cdf_grid = np.concatenate([[0.0], np.cumsum(masses)])

        n = 100_000
        d = np.sort(m.sample_pair_distances(unit_region, n, seed=2))
        ecdf = np.arange(1, n + 1) / n
        ks = np.max(np.abs(ecdf - np.interp(d, grid, cdf_grid)))
        assert ks < 1.63 / math.sqrt(n)  # 99% Kolmogorov band

    def test_scalar_and_batch_sampler_agree_in_distribution(self, unit_region):
        from scipy import stats

        rng = np.random.default_rng(5)
        scalar = np.array([
            m.sample_pair_distance(unit_region, rng).value for _ in range(5000)
        ])
        batch = m.sample_pair_distances(unit_region, 5000, seed=5)
        assert stats.ks_2samp(scalar, batch).pvalue > 1e-3

    def test_worker_count_does_not_change_result(self, unit_region):
        a = m.sample_pair_distances(unit_region, 40_000, seed=9, n_workers=1)
        b = m.sample_pair_distances(unit_region, 40_000, seed=9, n_workers=4)
        assert np.array_equal(a, b)

    def test_sample_count_validation(self, unit_region):
        with pytest.raises(ValueError):
            m.sample_pair_distances(unit_region, 0, seed=1)
        with pytest.raises(OverflowError):
            m.sample_pair_distances(unit_region, 2**62 + 1, seed=1)


class TestDistancePdf:
    def test_endpoints_vanish(self, unit_region):
        assert m.distance_pdf(0.0, unit_region) == 0.0
        assert m.distance_pdf(2.0, unit_region) == 0.0

    def test_value_at_unit_distance(self, unit_region):
        # arccos(1/2) = pi/3 collapses the density at x = r = 1 to
        # 4/3 - sqrt(3)/pi
        expected = 4.0 / 3.0 - math.sqrt(3.0) / math.pi
        assert m.distance_pdf(1.0, unit_region) == pytest.approx(expected, rel=1e-14)

    def test_out_of_support_is_zero_not_error(self, unit_region):
        assert m.distance_pdf(-0.5, unit_region) == 0.0
        assert m.distance_pdf(2.5, unit_region) == 0.0

    @pytest.mark.parametrize("radius", [1e-3, 1.0, 10.0])
    def test_normalization(self, radius):
        region = m.DiskRegion(radius)
        total, _ = sint.quad(lambda x: m.distance_pdf(x, region), 0.0,
                             2.0 * radius, limit=200)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_strictly_positive_inside(self, unit_region):
        x = np.linspace(1e-9, 2.0 - 1e-9, 1000)
        assert np.all(m.distance_pdf(x, unit_region) > 0.0)

    @given(x=st.floats(-1.0, 25.0), radius=st.floats(0.01, 10.0))
    @settings(max_examples=200, deadline=None)
    def test_nonnegative_everywhere(self, x, radius):
        assert m.distance_pdf(x, m.DiskRegion(radius)) >= 0.0


class TestDistanceCdf:
    def test_matches_closed_form(self, unit_region):
        x = np.linspace(0.0, 2.0, 300)
        ours = m.distance_cdf(x, unit_region)
        assert np.allclose(ours, closed_form_distance_cdf(x, unit_region),
                           atol=1e-12)

    def test_matches_scipy_quadrature(self, unit_region):
        for x in (0.3, 1.0, 1.9):
            ref, _ = sint.quad(lambda s: m.distance_pdf(s, unit_region), 0.0, x)
            assert m.distance_cdf(x, unit_region) == pytest.approx(ref, abs=1e-10)

    def test_boundary_values(self, unit_region):
        assert m.distance_cdf(0.0, unit_region) == 0.0
        assert m.distance_cdf(2.0, unit_region) == pytest.approx(1.0, abs=1e-12)
        assert m.distance_cdf(5.0, unit_region) == 1.0

    def test_unsorted_array_input(self, unit_region):
        x = np.array([1.5, 0.2, 1.9, 0.2, 1.0])
        out = m.distance_cdf(x, unit_region)
        assert np.allclose(out, [m.distance_cdf(float(v), unit_region) for v in x],
                           atol=1e-13)


class TestDistancePowerPdf:
    def test_beta_one_is_identity(self, unit_region):
        z = np.linspace(0.0, 2.0, 50)
        assert np.allclose(
            m.distance_power_pdf(z, 1.0, unit_region),
            m.distance_pdf(z, unit_region),
            rtol=1e-14,
        )

    def test_squared_distance_value(self, unit_region):
        # direct substitution into the squared-distance density at z=1, r=1
        expected = (1.0 / math.pi) * (2.0 * math.acos(0.5) - math.sqrt(0.75))
        assert m.distance_power_pdf(1.0, 2.0, unit_region) == pytest.approx(
            expected, rel=1e-14)

    def test_squared_distance_normalizes(self, unit_region):
        total, _ = sint.quad(
            lambda z: m.distance_power_pdf(z, 2.0, unit_region), 0.0, 4.0,
            limit=200)
        assert total == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 3.0])
    def test_normalization_across_powers(self, unit_region, beta):
        top = 2.0**beta
        total, _ = sint.quad(
            lambda z: m.distance_power_pdf(z, beta, unit_region), 0.0, top,
            limit=400)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_zero_limits(self, unit_region):
        assert m.distance_power_pdf(0.0, 1.5, unit_region) == 0.0
        assert m.distance_power_pdf(0.0, 2.0, unit_region) == 1.0
        assert m.distance_power_pdf(0.0, 3.0, unit_region) == np.inf

    def test_negative_argument_rejected(self, unit_region):
        with pytest.raises(ValueError):
            m.distance_power_pdf(-0.1, 2.0, unit_region)
        with pytest.raises(ValueError):
            m.distance_power_pdf(1.0, 0.0, unit_region)
