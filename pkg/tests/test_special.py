"""Branch arithmetic, Gamma, and Hankel function checks.

mpmath serves as the independent oracle for the Hankel values; the
Wronskian identity W(H1, H2) = -4i/(pi z) and the large-argument form are
checked as stated properties.
"""

import math

import mpmath
import numpy as np
import pytest

from indefsl.special import (
    HANKEL_SERIES_RADIUS,
    gamma,
    hankel,
    hankel_with_derivative,
    power_cut,
    sqrt_cut,
)


class TestBranchedPowers:
    def test_sqrt_of_minus_one_is_i(self):
        assert sqrt_cut(-1.0) == pytest.approx(1j)

    def test_cut_limit_is_positive_root(self):
        assert sqrt_cut(4.0) == pytest.approx(2.0)

    def test_arg_halving(self):
        assert sqrt_cut(1j) == pytest.approx(np.exp(1j * np.pi / 4))

    def test_square_roundtrip_random(self):
        rng = np.random.default_rng(1234)
        z = rng.standard_normal(10_000) * 10 + 1j * rng.standard_normal(10_000) * 10
        w = sqrt_cut(z)
        assert np.max(np.abs(w * w - z) / np.maximum(np.abs(z), 1e-300)) < 1e-14

    def test_upper_halfplane_values(self):
        rng = np.random.default_rng(7)
        z = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        w = np.asarray(sqrt_cut(z))
        assert np.all(np.imag(w) > -1e-15)  # arg w in [0, pi)

    def test_power_cut_matches_sqrt(self):
        rng = np.random.default_rng(99)
        z = rng.standard_normal(200) + 1j * rng.standard_normal(200)
        z = z[np.abs(z.imag) > 1e-3]
        assert np.max(np.abs(power_cut(z, 0.5) - sqrt_cut(z))) < 1e-13

    def test_power_cut_branch_normalization(self):
        # (-1)^(1/4) on this branch is e^{i pi/4}
        assert power_cut(-1.0, 0.25) == pytest.approx(np.exp(1j * np.pi / 4))

    def test_power_cut_on_cut_from_above(self):
        assert power_cut(1.0, 0.37) == pytest.approx(1.0)

    def test_power_cut_of_minus_four(self):
        assert power_cut(-4.0, 0.5) == pytest.approx(2j)

    def test_power_cut_zero_rejected(self):
        with pytest.raises(ValueError):
            power_cut(0.0, 0.5)


class TestGamma:
    def test_small_values(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-12)
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
        assert gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)

    def test_recurrence(self):
        x = np.linspace(0.05, 10.0, 400)
        for xv in x:
            assert gamma(xv + 1.0) == pytest.approx(xv * gamma(xv), rel=1e-11)

    def test_domain(self):
        for bad in (0.0, -1.0, -0.5):
            with pytest.raises(ValueError):
                gamma(bad)


def _mp_hankel(nu, z, kind):
    # default mpmath precision itself loses the subdominant kind at
    # moderate |Im z|; it needs extra digits to serve as the oracle
    with mpmath.workdps(40):
        f = mpmath.hankel1 if kind == 1 else mpmath.hankel2
        return complex(f(nu, complex(z)))


class TestHankel:
    def test_half_order_closed_form(self):
        # H_{1/2}^{(1)}(z) = -i sqrt(2/(pi z)) e^{iz}
        z = 1.0
        want = -1j * math.sqrt(2 / (math.pi * z)) * np.exp(1j * z)
        assert hankel(0.5, z, 1) == pytest.approx(want, rel=1e-12)
        assert want == pytest.approx(0.67139 - 0.43110j, abs=1e-5)

    @pytest.mark.parametrize("nu", [0.1, 0.25, 0.5, 0.75, 0.9, 1.0])
    @pytest.mark.parametrize("z", [0.3 + 0.1j, 2 + 1j, 8 - 3j, -5 + 9j, 30 + 10j,
                                   70 - 20j, 0.3j, -9 + 0.5j, 12 + 12j])
    def test_against_mpmath(self, nu, z):
        for kind in (1, 2):
            got = hankel(nu, z, kind)
            want = _mp_hankel(nu, z, kind)
            assert got == pytest.approx(want, rel=1e-8)

    def test_crossover_hole_floor(self):
        # subdominant kind near z ~ 9i sits at the double-precision floor of
        # both representations; the error stays below 5e-7 there
        for nu in (0.1, 0.5, 0.9):
            for z in (8.5j, 9j, 10j, 1 + 9j):
                got = hankel(nu, z, 1)
                want = _mp_hankel(nu, z, 1)
                assert got == pytest.approx(want, rel=5e-7)

    def test_wronskian_identity_on_log_grid(self):
        # W(H1, H2)(z) = -4i/(pi z) to 1e-8 relative, |z| in [0.1, 100],
        # arg z in [-3/4 pi, 3/4 pi].
        radii = np.geomspace(0.1, 100.0, 12)
        args = np.linspace(-0.75 * np.pi, 0.75 * np.pi, 7)
        for r in radii:
            for a in args:
                z = r * np.exp(1j * a)
                h1, h1p = hankel_with_derivative(0.35, z, 1)
                h2, h2p = hankel_with_derivative(0.35, z, 2)
                w = h1 * h2p - h1p * h2
                want = -4j / (np.pi * z)
                assert abs(w - want) <= 1e-8 * abs(want), f"z={z}"

    def test_wronskian_paper_point(self):
        z = 2 + 1j
        h1, h1p = hankel_with_derivative(0.25, z, 1)
        h2, h2p = hankel_with_derivative(0.25, z, 2)
        assert h1 * h2p - h1p * h2 == pytest.approx(-4j / (np.pi * z), rel=1e-10)

    def test_leading_asymptotic_at_50(self):
        nu, z = 0.25, 50.0
        lead = math.sqrt(2 / (math.pi * z)) * np.exp(1j * (z - nu * np.pi / 2 - np.pi / 4))
        assert abs(hankel(nu, z, 1) - lead) / abs(lead) < 1e-2

    def test_asymptotic_residual_decay_rate(self):
        # H^(1) vs the leading term: relative residual ~ |z|^{-1}; the fitted
        # decay exponent over |z| >= 30 must be at least 0.9.
        nu = 0.4
        radii = np.geomspace(30.0, 1000.0, 12)
        resid = []
        for r in radii:
            z = r * np.exp(0.05j)
            lead = np.sqrt(2 / (np.pi * z)) * np.exp(1j * (z - nu * np.pi / 2 - np.pi / 4))
            resid.append(abs(hankel(nu, z, 1) - lead) / abs(lead))
        slope = np.polyfit(np.log(radii), np.log(resid), 1)[0]
        assert -slope >= 0.9

    def test_series_asymptotic_crossover_band(self):
        # both representations agree in the hand-over band (angles kept
        # moderate: in strongly subdominant directions the series has no
        # accuracy left to compare)
        for r in np.linspace(10.0, 16.0, 7):
            for a in (-0.3, 0.0, 0.3):
                z = r * np.exp(1j * a)
                s = hankel(0.3, z, 1, method="series")
                asym = hankel(0.3, z, 1, method="asymptotic")
                assert s == pytest.approx(asym, rel=1e-6), f"z={z}"

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            hankel(0.5, 0.0, 1)
        with pytest.raises(ValueError):
            hankel(0.5, -3.0, 1)  # on the R_- cut
        with pytest.raises(ValueError):
            hankel(1.5, 1.0, 1)
        with pytest.raises(ValueError):
            hankel(0.5, 1.0, 3)

    def test_switchover_constant(self):
        assert HANKEL_SERIES_RADIUS == 12.0
