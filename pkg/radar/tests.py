import math

import numpy as np
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError
from scipy import integrate

from MARadar.test_utils import *
from radar.ambiguity import (angular_cut, chi, chi_angular, chi_mag_sq, chi_oracle, chi_r, compute_slice,
                             waveform_kernel)
from radar.domain import (AmbiguityQuery, AntennaLayout, DetectionParams, FhCode, equidistant_layout,
                          generate_fh_code, random_feasible_layout)
from radar.exceptions import (CalibrationError, CodeError, GridMismatch, InfeasibleLayout, NullNotFound,
                              OrthogonalityError, QueryError, VisibleRegionError)
from radar.metrics import (bound_gap, detection_probability, lobe_report, main_lobe_width, monotone_within_ci,
                           peak_sidelobe_level, plateau_start)
from radar.serializers import (AmbiguitySliceSerializer, AntennaLayoutSerializer, RadarConfigSerializer,
                               validate_config)
from radar.theory import (b_min, delay_lower_bound, doppler_lower_bound, layout_grid_sweep, mmlwd_layout)

global SECTION_CONFIG
global TINY_CONFIG
global SMALL_CONFIG
global SEEDS
global MT_VALUES
global L_VALUES
global THETA_VALUES
global ORACLE_TOL


def make_config(data):
    serializer = RadarConfigSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def random_queries(cfg, count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield AmbiguityQuery(tau=rng.uniform(-1.1, 1.1) * cfg.T_w,
                             v=rng.uniform(-1, 1) * cfg.f_max,
                             theta=rng.uniform(-1, 1) * math.pi / 2,
                             theta_p=rng.uniform(-1, 1) * math.pi / 2)


class ConfigTest(SimpleTestCase):
    """
    Radar configuration validation
    """

    def assertRejects(self, field, **changes):
        with self.assertRaises(ValidationError) as context:
            make_config(dict(SECTION_CONFIG, **changes))
        self.assertIn(field, context.exception.detail, 'expected the error to name %s' % field)

    def test_evaluation_config_is_valid(self):
        cfg = make_config(SECTION_CONFIG)
        self.assertIs(validate_config(cfg), cfg)
        self.assertTrue(cfg.is_orthogonal, 'delta_f*delta_t=1 is orthogonal hopping')
        self.assertAlmostEqual(cfg.wavelength, 0.0365593, places=6)

    def test_duration_must_match_subpulses(self):
        self.assertRejects('T_w', T_w=5e-6)

    def test_sampling_rate_covers_hop_band(self):
        self.assertRejects('f_s', f_s=1e6)

    def test_pulse_repetition_not_shorter_than_pulse(self):
        self.assertRejects('T_P', T_P=1e-6)

    def test_positive_subpulse_length(self):
        self.assertRejects('delta_t', delta_t=0.0, T_w=0.0)

    def test_non_integer_hop_product(self):
        """
        Allowed as a configuration, but the angular shortcut refuses it
        """
        cfg = make_config(dict(SECTION_CONFIG, delta_f=1.5e6))
        self.assertFalse(cfg.is_orthogonal)
        with self.assertRaises(OrthogonalityError):
            chi_angular(0.0, 0.1, equidistant_layout(4), cfg)


class CodeTest(SimpleTestCase):
    """
    Frequency hopping code generation
    """

    def setUp(self):
        self.cfg = make_config(SECTION_CONFIG)

    def test_full_code_is_permutation(self):
        code = generate_fh_code(self.cfg, 8, seed=0)
        for q in range(self.cfg.Q):
            self.assertEqual(sorted(code.c[:, q].tolist()), list(range(1, 9)),
                             'with M_t=K every subpulse uses every frequency once')

    def test_distinct_within_subpulse(self):
        code = generate_fh_code(self.cfg, 2, seed=3)
        self.assertEqual(code.c.shape, (2, self.cfg.Q))
        self.assertTrue(np.all(code.c[0] != code.c[1]))

    def test_same_seed_same_code(self):
        self.assertTrue(np.array_equal(generate_fh_code(self.cfg, 5, 7).c, generate_fh_code(self.cfg, 5, 7).c))

    def test_more_antennas_than_frequencies(self):
        with self.assertRaises(CodeError):
            generate_fh_code(self.cfg, 9, seed=0)

    def test_repeated_frequency_in_subpulse(self):
        with self.assertRaises(OrthogonalityError):
            FhCode(c=[[1, 2], [1, 3]], K=4)

    def test_entry_out_of_range(self):
        with self.assertRaises(CodeError):
            FhCode(c=[[1, 5], [2, 3]], K=4)


class LayoutTest(SimpleTestCase):
    """
    Layout constructors and their feasibility checks
    """

    def test_equidistant_positions(self):
        layout = equidistant_layout(8)
        self.assertTrue(np.array_equal(layout.x, np.arange(8) * 0.5))
        self.assertEqual(layout.L, 3.5)

    def test_single_antenna_rejected(self):
        with self.assertRaises(InfeasibleLayout):
            equidistant_layout(1)

    def test_random_layouts_are_feasible(self):
        for seed in SEEDS:
            layout = random_feasible_layout(8, 7.0, seed)
            self.assertGreaterEqual(layout.d.min(), 0.5)
            self.assertLessEqual(layout.d.sum(), 7.0 + 1e-9)

    def test_tight_budget_gives_equidistant(self):
        layout = random_feasible_layout(8, 3.5, seed=0)
        self.assertTrue(np.array_equal(layout.d, np.full(7, 0.5)))

    def test_budget_below_minimum(self):
        with self.assertRaises(InfeasibleLayout):
            random_feasible_layout(8, 3.4, seed=0)

    def test_spacing_below_half_wavelength(self):
        with self.assertRaises(InfeasibleLayout):
            AntennaLayout(d=[0.4, 1.0], L=3.0)
        serializer = AntennaLayoutSerializer(data={'M_t': 3, 'd': [0.4, 1.0], 'L': 3.0})
        self.assertFalse(serializer.is_valid())
        self.assertIn('d', serializer.errors)

    def test_minimum_width_layout(self):
        self.assertTrue(np.array_equal(mmlwd_layout(8, 9.0).d, [0.5, 0.5, 0.5, 6.0, 0.5, 0.5, 0.5]))
        self.assertTrue(np.array_equal(mmlwd_layout(3, 2.0).d, [0.5, 1.5]))
        self.assertTrue(np.array_equal(mmlwd_layout(8, 3.5).d, np.full(7, 0.5)),
                        'the tightest budget collapses to the half-wavelength array')


class SubpulseTest(SimpleTestCase):
    """
    Single subpulse ambiguity function
    """
    delta_t = 1e-6

    def integral(self, tau, v):
        lo, hi = max(0.0, -tau), min(self.delta_t, self.delta_t - tau)
        t = np.linspace(lo, hi, 20001)
        return integrate.trapezoid(np.exp(2j * np.pi * v * t), t) / self.delta_t

    def test_matched(self):
        self.assertEqual(chi_r(0.0, 0.0, self.delta_t), 1 + 0j)

    def test_zero_outside_subpulse(self):
        for v in (0.0, 3e5, -7e5):
            self.assertEqual(chi_r(self.delta_t, v, self.delta_t), 0j)
            self.assertEqual(chi_r(-1.5 * self.delta_t, v, self.delta_t), 0j)

    def test_half_overlap_one_cycle(self):
        value = chi_r(self.delta_t / 2, 1 / self.delta_t, self.delta_t)
        self.assertAlmostEqual(abs(value), 1 / math.pi, places=12)
        self.assertAlmostEqual(np.angle(value), math.pi / 2, places=12)

    def test_matches_numerical_integral(self):
        for tau, v in ((0.3e-6, 0.7e6), (-0.4e-6, -1.3e6), (0.0, 2.5e6)):
            self.assertAlmostEqual(abs(chi_r(tau, v, self.delta_t) - self.integral(tau, v)), 0.0, places=6)


class AmbiguityTest(SimpleTestCase):
    """
    Closed form ambiguity function against its definition
    """

    def setUp(self):
        self.cfg = make_config(SECTION_CONFIG)
        self.code = generate_fh_code(self.cfg, 8, seed=0)
        self.layout = random_feasible_layout(8, 7.0, seed=1)

    def test_matched_peak_equals_antenna_count(self):
        for theta in THETA_VALUES:
            value = chi(AmbiguityQuery(0.0, 0.0, theta, theta), self.layout, self.code, self.cfg)
            self.assertAlmostEqual(value.real, 8.0, places=9)
            self.assertAlmostEqual(value.imag, 0.0, places=9)

    def test_two_element_null(self):
        cfg = make_config(TINY_CONFIG)
        code = generate_fh_code(cfg, 2, seed=0)
        layout = AntennaLayout(d=[1.0], L=1.0)
        value = chi(AmbiguityQuery(0.0, 0.0, 0.0, math.pi / 6), layout, code, cfg)
        self.assertLess(abs(value), 1e-9, 'half a cycle between the two elements cancels')

    def test_closed_form_matches_integral(self):
        for config, M_t, count in ((TINY_CONFIG, 2, 20), (SMALL_CONFIG, 4, 10)):
            cfg = make_config(config)
            code = generate_fh_code(cfg, M_t, seed=2)
            layout = random_feasible_layout(M_t, 2.0 * M_t, seed=3)
            for query in random_queries(cfg, count, seed=M_t):
                difference = abs(chi(query, layout, code, cfg) - chi_oracle(query, layout, code, cfg))
                self.assertLess(difference, ORACLE_TOL * M_t, 'closed form and integral disagree at %s' % (query,))

    def test_integral_at_matched_point(self):
        query = AmbiguityQuery(0.0, 0.0, math.pi / 4, math.pi / 4)
        self.assertAlmostEqual(abs(chi_oracle(query, self.layout, self.code, self.cfg)), 8.0, delta=1e-4)

    def test_squared_magnitude_decomposition(self):
        for query in random_queries(self.cfg, 20, seed=5):
            expected = abs(chi(query, self.layout, self.code, self.cfg)) ** 2
            value = chi_mag_sq(query, self.layout, self.code, self.cfg)
            self.assertAlmostEqual(value, expected, delta=1e-10 * max(1.0, expected))

    def test_zero_beyond_pulse(self):
        query = AmbiguityQuery(1.05 * self.cfg.T_w, 1e5, 0.2, 0.3)
        self.assertEqual(chi(query, self.layout, self.code, self.cfg), 0j)

    def test_peak_dominates(self):
        for query in random_queries(self.cfg, 50, seed=6):
            self.assertLessEqual(abs(chi(query, self.layout, self.code, self.cfg)), 8.0 + 1e-9)

    def test_angular_form(self):
        for theta, theta_p in ((0.0, 0.3), (0.7, -0.2), (-1.2, 1.0)):
            full = chi(AmbiguityQuery(0.0, 0.0, theta, theta_p), self.layout, self.code, self.cfg)
            short = chi_angular(theta, theta_p, self.layout, self.cfg)
            self.assertAlmostEqual(abs(full - short), 0.0, places=9)
            self.assertAlmostEqual(abs(chi_angular(theta_p, theta, self.layout) - short.conjugate()), 0.0, places=12)

    def test_kernel_reproduces_pointwise_values(self):
        fixed = AmbiguityQuery(0.0, 0.0, math.pi / 3, math.pi / 3)
        slc = compute_slice('doppler', fixed, None, 21, self.layout, self.code, self.cfg)
        for v, value in zip(slc.coords[::5], slc.values[::5]):
            point = chi(AmbiguityQuery(0.0, v, math.pi / 3, math.pi / 3), self.layout, self.code, self.cfg)
            self.assertAlmostEqual(value, abs(point), places=10)

    def test_kernel_blocks(self):
        taus = np.linspace(-self.cfg.T_w, self.cfg.T_w, 300)
        kernel = waveform_kernel(taus, 1e5, self.code, self.cfg)
        self.assertEqual(kernel.shape, (300, 8, 8))

    def test_angular_slice_peaks_at_look_direction(self):
        layout = equidistant_layout(8)
        slc = compute_slice('angular', AmbiguityQuery(0.0, 0.0, 0.0), None, 400, layout, self.code, self.cfg)
        self.assertIn(0.0, slc.coords, 'matched coordinate is always sampled')
        self.assertAlmostEqual(slc.values[slc.coords == 0.0][0], 8.0, places=9)
        self.assertAlmostEqual(slc.peak, 8.0, places=9)

    def test_delay_slice_support(self):
        span = self.cfg.Q * self.cfg.delta_t
        slc = compute_slice('delay', AmbiguityQuery(0.0, 0.0, 0.5), (-1.5 * span, 1.5 * span), 301,
                            self.layout, self.code, self.cfg)
        outside = np.abs(slc.coords) >= 1.01 * span
        self.assertTrue(np.all(slc.values[outside] == 0.0))

    def test_slice_representation(self):
        fixed = AmbiguityQuery(0.0, 0.0, 0.3)
        slc = compute_slice('doppler', fixed, (1e5, 1e6), 10, self.layout, self.code, self.cfg)
        data = AmbiguitySliceSerializer(slc).data
        self.assertIsNone(data['matched'], 'zero Doppler lies outside the requested range')
        self.assertEqual(len(data['coords']), 10)
        self.assertEqual(data['values'], [float(value) for value in slc.values])
        self.assertEqual(data['meta']['normalization'], 'sum_divided_by_Q')

    def test_invalid_slices(self):
        fixed = AmbiguityQuery(0.0, 0.0, 0.0)
        with self.assertRaises(QueryError):
            compute_slice('range', fixed, None, 10, self.layout, self.code, self.cfg)
        with self.assertRaises(QueryError):
            compute_slice('doppler', fixed, (1e6, 1e6), 10, self.layout, self.code, self.cfg)
        with self.assertRaises(QueryError):
            AmbiguityQuery(0.0, 0.0, 2.0)


class TheoryTest(SimpleTestCase):
    """
    Minimum lobe width layout and the Doppler/delay bounds
    """

    def setUp(self):
        self.cfg = make_config(SECTION_CONFIG)
        self.code = generate_fh_code(self.cfg, 8, seed=0)

    def test_lobe_width_values(self):
        self.assertAlmostEqual(b_min(8, 7.0, 0.0), 0.182070, places=5)
        self.assertAlmostEqual(b_min(8, 9.0, 0.0), 2 * math.asin(1 / 15), places=12)

    def test_lobe_width_shrinks_with_budget(self):
        widths = [b_min(8, L, 0.0) for L in np.arange(4.0, 12.5, 0.5)]
        self.assertTrue(all(a > b for a, b in zip(widths, widths[1:])))

    def test_lobe_outside_visible_region(self):
        with self.assertRaises(VisibleRegionError):
            b_min(8, 3.5, 1.5)

    def test_nulls_at_lobe_edges(self):
        for M_t in MT_VALUES:
            for L in L_VALUES:
                layout = mmlwd_layout(M_t, L)
                half = 2 / (4 * L - M_t + 2)
                width = b_min(M_t, L, 0.0)
                for theta_p in (width / 2, -width / 2):
                    self.assertLess(abs(chi_angular(0.0, theta_p, layout)), 1e-6 * M_t)
                theta = math.pi / 6
                null = math.asin(math.sin(theta) - half)
                self.assertLess(abs(chi_angular(theta, null, layout)), 1e-6 * M_t)

    def test_no_layout_nulls_inside_minimum_lobe(self):
        """
        Random layouts under the same budget keep |chi| away from zero
        inside the main lobe of the minimum width layout
        """
        width = b_min(8, 9.0, 0.0)
        points = np.linspace(0.0, 0.99 * width / 2, 200)
        for seed in range(50):
            layout = random_feasible_layout(8, 9.0, seed)
            values = np.abs(chi_angular(0.0, points, layout))
            self.assertGreater(values.min(), 1e-3, 'layout %d has a null inside the minimum lobe' % seed)

    def test_minimum_layout_is_smallest_inside_its_lobe(self):
        """
        Inside the main lobe of the minimum width layout no other layout
        under the same budget has a smaller |chi|
        """
        M_t, L = 8, 9.0
        half = 2 / (4 * L - M_t + 2)
        best = mmlwd_layout(M_t, L)
        for theta in THETA_VALUES:
            s = math.sin(theta)
            points = np.arcsin(s + np.linspace(-0.999, 0.999, 201) * half)
            floor = np.abs(chi_angular(theta, points, best))
            for seed in range(100):
                layout = random_feasible_layout(M_t, L, seed)
                values = np.abs(chi_angular(theta, points, layout))
                self.assertTrue(np.all(floor <= values + 1e-9 * M_t),
                                'layout %d dips below the minimum width layout at theta=%.4f' % (seed, theta))

    def test_doppler_bound_at_zero(self):
        bound = doppler_lower_bound([0.0, 1 / self.cfg.delta_t], self.code, self.cfg, M_t=8, theta=math.pi / 3)
        self.assertAlmostEqual(bound.lower[0], 8.0, places=9)
        self.assertAlmostEqual(bound.lower[1], 0.0, places=9)
        self.assertTrue(bound.informative)

    def test_bounds_uninformative_at_broadside(self):
        self.assertFalse(doppler_lower_bound([0.0], self.code, self.cfg, theta=0.0).informative)
        self.assertFalse(delay_lower_bound([0.0], self.code, self.cfg, theta=0.0).informative)

    def test_code_size_mismatch(self):
        with self.assertRaises(CodeError):
            doppler_lower_bound([0.0], self.code, self.cfg, M_t=4)

    def test_doppler_bound_holds_for_random_layouts(self):
        fixed = AmbiguityQuery(0.0, 0.0, math.pi / 3)
        for seed in range(200):
            layout = random_feasible_layout(8, 20.0, seed)
            slc = compute_slice('doppler', fixed, None, 41, layout, self.code, self.cfg)
            bound = doppler_lower_bound(slc.coords, self.code, self.cfg, theta=math.pi / 3)
            self.assertEqual(bound_gap(slc, bound).violation_count, 0)

    def test_delay_bound(self):
        span = self.cfg.Q * self.cfg.delta_t
        bound = delay_lower_bound([0.0, 1.05 * span, -1.05 * span, 1.2 * span], self.code, self.cfg)
        self.assertAlmostEqual(bound.lower[0], 8.0, places=9)
        self.assertTrue(np.all(bound.lower[1:] == 0.0))
        fixed = AmbiguityQuery(0.0, 0.0, math.pi / 3)
        for seed in range(200):
            layout = random_feasible_layout(8, 20.0, seed)
            slc = compute_slice('delay', fixed, None, 41, layout, self.code, self.cfg)
            gap = bound_gap(slc, delay_lower_bound(slc.coords, self.code, self.cfg))
            self.assertEqual(gap.violation_count, 0)

    def test_bounds_hold_over_spacing_grid(self):
        code = generate_fh_code(self.cfg, 4, seed=0)
        fixed = AmbiguityQuery(0.0, 0.0, math.pi / 3)
        for layout in layout_grid_sweep(4):
            for axis, bound in (('doppler', doppler_lower_bound), ('delay', delay_lower_bound)):
                slc = compute_slice(axis, fixed, None, 41, layout, code, self.cfg)
                gap = bound_gap(slc, bound(slc.coords, code, self.cfg, theta=math.pi / 3))
                self.assertEqual(gap.violation_count, 0, '%s bound fails for d=%s' % (axis, layout.d.tolist()))

    def test_bound_on_other_grid(self):
        fixed = AmbiguityQuery(0.0, 0.0, math.pi / 3)
        slc = compute_slice('doppler', fixed, None, 41, equidistant_layout(8), self.code, self.cfg)
        with self.assertRaises(GridMismatch):
            bound_gap(slc, doppler_lower_bound(np.linspace(0, 1e6, 41), self.code, self.cfg))

    def test_grid_sweep(self):
        layouts = list(layout_grid_sweep(4))
        self.assertEqual(len(layouts), 216)
        self.assertTrue(all(layout.M_t == 4 for layout in layouts))


class LobeMetricsTest(SimpleTestCase):
    """
    Main lobe width and peak sidelobe level read off slices
    """

    def test_measured_width_matches_minimum(self):
        slc = angular_cut(mmlwd_layout(8, 9.0), 0.0, 4001)
        self.assertAlmostEqual(main_lobe_width(slc), b_min(8, 9.0, 0.0), delta=1e-3)

    def test_width_grid(self):
        for M_t in MT_VALUES:
            for L in L_VALUES:
                for theta in THETA_VALUES:
                    slc = angular_cut(mmlwd_layout(M_t, L), theta, 4001)
                    try:
                        expected = b_min(M_t, L, theta)
                    except VisibleRegionError:
                        with self.assertRaises(NullNotFound):
                            main_lobe_width(slc)
                        continue
                    self.assertAlmostEqual(main_lobe_width(slc), expected, delta=1e-3,
                                           msg='M_t=%d L=%g theta=%g' % (M_t, L, theta))

    def test_sidelobe_levels(self):
        uniform = peak_sidelobe_level(angular_cut(equidistant_layout(8), 0.0, 4001))
        self.assertTrue(-14.0 < uniform < -12.0, 'uniform array sidelobe %.2f dB' % uniform)
        clustered = peak_sidelobe_level(angular_cut(mmlwd_layout(8, 9.0), 0.0, 4001))
        self.assertTrue(-3.0 < clustered <= 0.0, 'two-cluster array sidelobe %.2f dB' % clustered)

    def test_report(self):
        report = lobe_report(angular_cut(mmlwd_layout(8, 9.0), 0.0, 4001))
        self.assertAlmostEqual(report.peak, 8.0, places=9)
        self.assertLess(report.left_null, 0.0)
        self.assertGreater(report.right_null, 0.0)
        self.assertAlmostEqual(report.width, report.right_null - report.left_null, places=12)

    def test_plateau_start(self):
        budgets = [4.0, 5.0, 6.0, 7.0, 8.0, 9.0]
        self.assertEqual(plateau_start(budgets, [10.0, 8.0, 6.1, 6.05, 6.0, 6.0]), 6.0)
        self.assertEqual(plateau_start(budgets, [5.0] * 6), 4.0)
        self.assertIsNone(plateau_start(budgets, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]))
        self.assertIsNone(plateau_start([4.0], [1.0]))


class DetectionTest(SimpleTestCase):
    """
    Monte-Carlo detection probability
    """

    def setUp(self):
        self.cfg = make_config(SECTION_CONFIG)
        self.code = generate_fh_code(self.cfg, 8, seed=0)
        self.det = DetectionParams(M_r=8, P_fa=1e-2, snr_grid=(-60.0, -20.0, -15.0, -10.0, 30.0), trials=2000)

    def test_too_few_trials(self):
        det = DetectionParams(M_r=8, P_fa=1e-4, snr_grid=(0.0,), trials=1000)
        with self.assertRaises(CalibrationError):
            detection_probability(equidistant_layout(8), self.code, self.cfg, det, seed=0)

    def test_limits(self):
        curve = detection_probability(equidistant_layout(8), self.code, self.cfg, self.det, seed=0)
        self.assertEqual(curve.p_d[-1], 1.0, 'a strong target is always detected')
        self.assertLess(abs(curve.p_d[0] - self.det.P_fa), 0.015, 'a vanishing target fires at the false alarm rate')
        self.assertLess(abs(curve.p_fa_measured - self.det.P_fa), 0.015)
        self.assertTrue(np.all(curve.ci_low <= curve.p_d + 1e-12) and np.all(curve.p_d <= curve.ci_high + 1e-12))

    def test_reproducible(self):
        first = detection_probability(equidistant_layout(8), self.code, self.cfg, self.det, seed=4)
        second = detection_probability(equidistant_layout(8), self.code, self.cfg, self.det, seed=4)
        self.assertTrue(np.array_equal(first.p_d, second.p_d))
        self.assertEqual(first.threshold, second.threshold)

    def test_matched_gain_is_full_array(self):
        for layout in (equidistant_layout(8), mmlwd_layout(8, 7.0)):
            curve = detection_probability(layout, self.code, self.cfg, self.det, seed=1)
            self.assertAlmostEqual(curve.gain, self.code.Q * 8, places=9)

    def test_steering_mismatch_depends_on_layout(self):
        """
        With the filter steered off the target the angular pattern sets the
        gain, so a clustered array loses more than a uniform one
        """
        uniform = detection_probability(equidistant_layout(8), self.code, self.cfg, self.det, seed=1, theta_p=0.1)
        clustered = detection_probability(mmlwd_layout(8, 7.0), self.code, self.cfg, self.det, seed=1, theta_p=0.1)
        self.assertGreater(uniform.gain, 3 * clustered.gain)
        self.assertGreater(uniform.p_d[2] - clustered.p_d[2], 0.2, 'uniform %.3f clustered %.3f'
                           % (uniform.p_d[2], clustered.p_d[2]))
        self.assertFalse(np.allclose(uniform.p_d, clustered.p_d, atol=1.0 / self.det.trials))

    def test_false_alarm_interval(self):
        curve = detection_probability(equidistant_layout(8), self.code, self.cfg, self.det, seed=0)
        self.assertLessEqual(curve.p_fa_ci_low, curve.p_fa_measured)
        self.assertGreaterEqual(curve.p_fa_ci_high, curve.p_fa_measured)
        self.assertLess(curve.p_fa_ci_high - curve.p_fa_ci_low, 0.02)

    def test_monotone_in_snr(self):
        det = DetectionParams(M_r=8, P_fa=1e-2, snr_grid=tuple(np.arange(-25.0, 0.1, 2.5)), trials=2000)
        curve = detection_probability(equidistant_layout(8), self.code, self.cfg, det, seed=2)
        self.assertTrue(monotone_within_ci(curve))
