"""Ratio scans, shift optimization, class checks, and root finding."""

import cmath
import math

import numpy as np
import pytest

from indefsl.coeffs import Coefficient
from indefsl.criteria import (
    BoundednessVerdict,
    DecayingClass,
    JNonnegVerdict,
    RatioKind,
    ScanRegion,
    StieltjesVerdict,
    _ContourCache,
    _winding_on_rect,
    classify_decaying,
    classify_pair,
    definitizing_poly,
    find_nonreal_eigs,
    j_nonneg_check,
    necessary_ratio_scan,
    optimize_shift,
    ratio,
    scan_sup,
    stieltjes_check,
)
from indefsl.errors import DenominatorVanishes
from indefsl.mcatalog import (
    DecayingABM,
    ExampleA1M,
    ExampleQ0M,
    FreeM,
    MPair,
    NumericM,
    PeriodicM,
    PowerWeightM,
    m1_helper,
    mirrored_power_ratio_constant,
)
from indefsl.periodic import PeriodicData, lowest_band_edge, monodromy
from indefsl.sl_ode import HalfLineProblem, Side


def deep_well_problem(depth=5.0, width=1.0):
    return HalfLineProblem(Side.PLUS, Coefficient.characteristic(-depth, 0.0, width),
                           Coefficient.constant(1.0))


class TestRatio:
    def test_mirrored_power_constant(self):
        pair = MPair.mirror_even(PowerWeightM(2.0))
        want = mirrored_power_ratio_constant(2.0)
        for lam in (1j, 0.5 + 0.25j, -3 + 0.01j):
            assert ratio(pair, None, lam) == pytest.approx(want, rel=1e-12)

    def test_free_constant_one(self):
        pair = MPair.mirror_even(FreeM())
        assert ratio(pair, None, 1j) == pytest.approx(1.0, rel=1e-12)
        assert mirrored_power_ratio_constant(0.0) == pytest.approx(1.0)

    def test_q0_imaginary_axis_growth(self):
        # Im-part ratio ~ K sqrt(2/y), K = pi/4 + 3/2 (series constant of
        # the closed form; see test_mcatalog)
        pair = MPair.mirror_even(ExampleQ0M())
        y = 1e-6
        mp_v, mm_v = pair.M_plus(1j * y), pair.M_minus(1j * y)
        got = abs((mp_v + mm_v).imag) / abs(mp_v - mm_v)
        K = math.pi / 4 + 1.5
        assert got == pytest.approx(K * math.sqrt(2.0 / y) / 2.0, rel=0.05) \
            or got == pytest.approx(K * math.sqrt(2.0 / y), rel=0.35)

    def test_swap_sign_flip_invariance(self):
        pair = MPair.mirror_even(ExampleQ0M())
        lam, C = 0.3 + 0.2j, 0.7
        a = ratio(lambda l: pair.M_plus(l), lambda l: pair.M_minus(l), lam, C)
        b = ratio(lambda l: -pair.M_minus(l), lambda l: -pair.M_plus(l), lam, -C)
        assert a == pytest.approx(b, rel=1e-13)

    def test_denominator_vanishes(self):
        class Same:
            def m(self, lam):
                return 1j / cmath.sqrt(lam)

        class MirrorOfSame:
            # minus evaluator engineered so that M_- == M_+
            def m(self, lam):
                return -1j / cmath.sqrt(-lam)

        pair = MPair(Same(), MirrorOfSame())
        with pytest.raises(DenominatorVanishes):
            ratio(pair, None, 1j)


class TestScans:
    def test_q0_near_zero_growth(self):
        pair = MPair.mirror_even(ExampleQ0M())
        res = necessary_ratio_scan(pair, None, ScanRegion.near_zero(1e-2))
        assert res.verdict is BoundednessVerdict.GROWTH_DETECTED
        assert res.growth_exponent == pytest.approx(0.5, abs=0.05)
        res2 = scan_sup(pair, None, ScanRegion.near_zero(1e-2))
        assert res2.growth_exponent == pytest.approx(0.5, abs=0.05)

    def test_a1_near_zero_bounded(self):
        pair = MPair.mirror_even(ExampleA1M())
        res = scan_sup(pair, None, ScanRegion.near_zero(1e-3))
        assert res.verdict is BoundednessVerdict.BOUNDED_RATIO
        assert res.sup_value < 0.1
        # the sup shrinks as the grid closes in on 0
        res_fine = scan_sup(pair, None, ScanRegion.near_zero(1e-4))
        assert res_fine.sup_value < res.sup_value

    def test_mirrored_power_scan_constant(self):
        pair = MPair.mirror_even(PowerWeightM(1.0))
        want = mirrored_power_ratio_constant(1.0)
        for region in (ScanRegion.near_zero(0.5), ScanRegion.near_infinity(2.0),
                       ScanRegion.upper_half_plane(0.1, 10.0)):
            res = scan_sup(pair, None, region)
            assert res.sup_value == pytest.approx(want, rel=1e-8)
            assert res.verdict is BoundednessVerdict.BOUNDED_RATIO

    def test_free_necessary_flat(self):
        pair = MPair.mirror_even(FreeM())
        res = necessary_ratio_scan(pair, None, ScanRegion.near_zero(1.0))
        assert abs(res.growth_exponent) < 0.05

    def test_threads_equivalence(self):
        pair = MPair.mirror_even(ExampleQ0M())
        region = ScanRegion.near_zero(1e-2, radial_points=10, angular_points=5)
        a = scan_sup(pair, None, region)
        b = scan_sup(pair, None, region, threads=4)
        assert a.sup_value == b.sup_value
        assert a.growth_exponent == b.growth_exponent

    def test_region_validation(self):
        with pytest.raises(ValueError):
            ScanRegion.near_zero(-1.0)
        with pytest.raises(ValueError):
            ScanRegion.near_zero(1.0, decades=1.0)
        with pytest.raises(ValueError):
            ScanRegion.upper_half_plane(5.0, 1.0)
        grid = ScanRegion.near_zero(1.0).grid()
        assert np.all(grid.imag > 0)


class TestOptimizeShift:
    def test_symmetric_pair_zero_shift(self):
        pair = MPair.mirror_even(ExampleA1M())
        c, res = optimize_shift(pair, None, ScanRegion.near_zero(1e-3))
        assert abs(c) < 1e-6 or res.flat_shift_objective

    def test_never_worse_than_zero_shift(self):
        well = deep_well_problem(0.4, 1.0)
        qm = Coefficient.characteristic(0.6, -1.5, 0.0, domain=(-math.inf, 0.0))
        pm = HalfLineProblem(Side.MINUS, qm,
                             Coefficient.constant(1.0, domain=(-math.inf, 0.0)))
        pair = MPair(DecayingABM(well), DecayingABM(pm))
        region = ScanRegion.near_zero(1e-3)
        c, res = optimize_shift(pair, None, region)
        base = scan_sup(pair, None, region, C=0.0)
        assert res.sup_value <= base.sup_value * (1.0 + 1e-12)

    def test_decaying_analytic_candidate(self, warm_kernels):
        # C ~ a+/b+ - a-/b- from the lam = 0 quadrature constants
        plus = HalfLineProblem(Side.PLUS, Coefficient.characteristic(-0.3, 0.0, 1.0),
                               Coefficient.constant(1.0))
        qm = Coefficient.characteristic(0.5, -1.5, 0.0, domain=(-math.inf, 0.0))
        minus = HalfLineProblem(Side.MINUS, qm,
                                Coefficient.constant(1.0, domain=(-math.inf, 0.0)))
        abp, abm = DecayingABM(plus), DecayingABM(minus)
        ap, bp = abp.constants()
        am, bm = abm.constants()
        c_analytic = ap / bp - am / bm
        pair = MPair(abp, abm)
        region = ScanRegion.near_zero(1e-4, decades=2.0)
        c_best, _ = optimize_shift(pair, None, region, seed_C=c_analytic)
        assert c_best == pytest.approx(c_analytic, rel=0.05)

    def test_periodic_case_b_shift(self, warm_kernels):
        # asymmetric periodic potential shifted to its band edge:
        # delta_-(0) != 0 and the optimal shift is 2 s(T,0)/delta_-(0)
        T = 3.0
        q0 = Coefficient.pieces([(0.0, 1.0, "const", (1.0,)),
                                 (1.0, T, "const", (0.0,))],
                                domain=(0.0, math.inf))
        lam0 = lowest_band_edge(PeriodicData(q0, T)).lam0
        q = Coefficient.pieces([(0.0, 1.0, "const", (1.0 - lam0,)),
                                (1.0, T, "const", (-lam0,))],
                               domain=(0.0, math.inf))
        data = PeriodicData(q, T)
        mono0 = monodromy(data, 1e-13)
        dminus0 = mono0.delta_minus.real
        assert abs(dminus0) > 1e-3
        c_want = 2.0 * mono0.sT.real / dminus0
        pair = MPair(PeriodicM(data, Side.PLUS), PeriodicM(data, Side.MINUS))
        c_best, res = optimize_shift(pair, None,
                                     ScanRegion.near_zero(1e-5, decades=2.0))
        assert c_best == pytest.approx(c_want, rel=0.05)
        assert res.verdict is BoundednessVerdict.BOUNDED_RATIO


class TestStieltjes:
    def test_m1_is_stieltjes(self):
        class M1:
            def m(self, lam):
                return m1_helper(lam)

        assert stieltjes_check(M1()) is StieltjesVerdict.S

    def test_free_is_stieltjes(self):
        assert stieltjes_check(FreeM()) is StieltjesVerdict.S

    def test_q0_even_shortcut(self):
        assert j_nonneg_check(ExampleQ0M(), ExampleQ0M(), even=True) \
            is JNonnegVerdict.LIKELY

    def test_deep_well_violated(self, warm_kernels):
        ev = NumericM(deep_well_problem())
        assert stieltjes_check(ev) is StieltjesVerdict.NEITHER
        assert j_nonneg_check(ev, ev, even=True) is JNonnegVerdict.VIOLATED

    def test_deep_well_discrete_negative_count(self, warm_kernels):
        # kappa_-(L) >= 1 for the deep well: definite-weight matrix oracle
        from indefsl.discrete import discretize
        from indefsl.sl_ode import FullLineProblem
        fp = FullLineProblem.even_mirror(deep_well_problem())
        op = discretize(fp, 30.0, 1200)
        L = op.sign_vector[:, None] * op.matrix
        vals = np.linalg.eigvalsh(0.5 * (L + L.T))
        assert np.sum(vals < -1e-6) >= 1

    def test_any_attractive_well_binds(self, warm_kernels):
        # even a shallow well has a bound state in 1d: still VIOLATED
        ev = NumericM(deep_well_problem(0.2, 1.0))
        assert j_nonneg_check(ev, ev, even=True) is JNonnegVerdict.VIOLATED

    def test_general_route_matches_shortcut(self, warm_kernels):
        # positive bump: q >= 0 makes the definite operator nonnegative
        bump = HalfLineProblem(Side.PLUS, Coefficient.characteristic(0.5, 0.0, 1.0),
                               Coefficient.constant(1.0))
        ev = NumericM(bump)
        assert j_nonneg_check(ev, ev, even=True) is JNonnegVerdict.LIKELY
        assert j_nonneg_check(ev, ev, even=False) is JNonnegVerdict.LIKELY


class TestClassifyDecaying:
    def test_free_case(self, warm_kernels):
        p = HalfLineProblem(Side.PLUS, Coefficient.constant(0.0),
                            Coefficient.constant(1.0), X=40.0)
        rep, _ = classify_decaying(p, p.reflected())
        assert rep.klass is DecayingClass.POLE_LIKE
        assert rep.a == pytest.approx(1.0, abs=1e-6)
        assert abs(rep.b) < 1e-6

    def test_quarter_wave_vanishing(self, warm_kernels):
        p = HalfLineProblem(Side.PLUS,
                            Coefficient.characteristic(-1.0, 0.0, math.pi / 2),
                            Coefficient.constant(1.0))
        rep, _ = classify_decaying(p, p.reflected())
        assert rep.klass is DecayingClass.VANISHING
        assert rep.k > 0

    def test_shallow_well_constants_match_quadrature(self, warm_kernels):
        p = HalfLineProblem(Side.PLUS, Coefficient.characteristic(-1.0, 0.0, 1.0),
                            Coefficient.constant(1.0))
        rep, _ = classify_decaying(p, p.reflected())
        assert rep.klass is DecayingClass.POLE_LIKE
        assert rep.a == pytest.approx(rep.a_quadrature, rel=0.02)
        assert rep.a_quadrature == pytest.approx(math.cos(1.0), rel=1e-6)


class TestNonrealEigs:
    def test_free_empty(self):
        pair = MPair.mirror_even(FreeM())
        assert find_nonreal_eigs(pair, None, (-5.0, 5.0, 0.1, 5.0)) == []

    def test_q0_empty(self):
        pair = MPair.mirror_even(ExampleQ0M())
        assert find_nonreal_eigs(pair, None, (-5.0, 5.0, 0.1, 5.0)) == []

    def test_deep_well_pair(self, warm_kernels):
        pair = MPair.mirror_even(NumericM(deep_well_problem()))
        eigs = find_nonreal_eigs(pair, None, (-10.0, 10.0, 0.05, 12.0))
        assert len(eigs) == 2
        (z1, k1), (z2, k2) = eigs
        assert k1 == 1 and k2 == 1
        # even potential: eigenvalues mirror across the imaginary axis
        assert z2 == pytest.approx(-z1.conjugate(), rel=1e-6)
        assert abs(pair.F(z1)) < 1e-8

    def test_winding_additivity(self, warm_kernels):
        pair = MPair.mirror_even(NumericM(deep_well_problem()))
        cache = _ContourCache(pair, 1.0, 0.0)
        rect = (-10.0, 10.0, 0.05, 12.0)
        total = _winding_on_rect(cache, rect, 1e-11)
        xm = 0.5 * (rect[0] + rect[1])
        left = _winding_on_rect(cache, (rect[0], xm, rect[2], rect[3]), 1e-11)
        right = _winding_on_rect(cache, (xm, rect[1], rect[2], rect[3]), 1e-11)
        assert total == left + right == 2

    def test_rect_validation(self):
        pair = MPair.mirror_even(FreeM())
        with pytest.raises(ValueError):
            find_nonreal_eigs(pair, None, (-1.0, 1.0, -0.5, 2.0))


class TestDefinitizing:
    def test_empty_is_z(self):
        dp = definitizing_poly([])
        assert list(dp.coefficients) == [0.0, 1.0]
        assert dp.similar_to_normal

    def test_single_i(self):
        dp = definitizing_poly([(1j, 1)])
        assert dp.coefficients == pytest.approx([0.0, 1.0, 0.0, 1.0])

    def test_multiplicity_two(self):
        dp = definitizing_poly([(0.5 + 1.0j, 2)])
        assert not dp.similar_to_normal
        assert len(dp.coefficients) == 6
        # real coefficients from conjugate pairing
        z = 0.5 + 1.0j
        vals = np.polynomial.polynomial.polyval(0.3, dp.coefficients)
        want = 0.3 * abs(0.3 - z) ** 4
        assert vals == pytest.approx(want, rel=1e-12)

    def test_rejects_lower_half_plane(self):
        with pytest.raises(ValueError):
            definitizing_poly([(1 - 1j, 1)])


class TestClassifyPair:
    def test_a1_report(self):
        pair = MPair.mirror_even(ExampleA1M())
        rep = classify_pair(pair, even=True, R_zero=1e-3)
        assert rep.herglotz_ok
        assert rep.j_nonneg is JNonnegVerdict.LIKELY
        assert rep.critical_point_zero is BoundednessVerdict.BOUNDED_RATIO
        assert rep.critical_point_infinity is BoundednessVerdict.BOUNDED_RATIO
        assert rep.nonreal_eigs == []

    def test_q0_report_detects_singularity(self):
        pair = MPair.mirror_even(ExampleQ0M())
        rep = classify_pair(pair, even=True, R_zero=1e-3)
        assert rep.j_nonneg is JNonnegVerdict.LIKELY
        assert rep.critical_point_zero is BoundednessVerdict.GROWTH_DETECTED
        assert rep.zero_exponent == pytest.approx(0.5, abs=0.05)

    def test_well_report_violated(self, warm_kernels):
        pair = MPair.mirror_even(NumericM(deep_well_problem()))
        rep = classify_pair(pair, even=True, eig_rect=(-10.0, 10.0, 0.05, 12.0))
        assert rep.j_nonneg is JNonnegVerdict.VIOLATED
        assert len(rep.nonreal_eigs) == 2
        assert rep.definitizing is not None
        assert len(rep.definitizing.coefficients) == 6
        d = rep.as_dict()
        assert d["similar_to_normal"] is True
