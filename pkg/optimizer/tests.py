import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from MARadar.test_utils import *
from optimizer.ga import GaParams, ga_optimize, repair
from optimizer.objective import (WeightedObjective, build_grid, f1_bar, f2_bar, f3_bar, f_weighted,
                                 finite_diff_grad, grad_f_weighted)
from optimizer.rgpm import (LOBE_POINTS, RgpmParams, active_set, armijo_step, feasible_polytope, max_step,
                            multipliers, multistart_optimize, projection_matrix, rgpm_optimize, snap)
from optimizer.serializers import GaParamsSerializer, RgpmParamsSerializer
from radar.ambiguity import angular_cut
from radar.domain import AntennaLayout, RadarConfig, equidistant_layout, generate_fh_code, random_feasible_layout
from radar.exceptions import InfeasibleLayout, RadarError, RankDeficient, StepSizeError
from radar.metrics import main_lobe_width
from radar.theory import b_min, mmlwd_layout

global SECTION_CONFIG
global SMALL_CONFIG
global SEEDS
global FD_STEP
global GRADIENT_RTOL
global MIXED_ALPHA


def relative_error(value, reference):
    return np.max(np.abs(value - reference)) / np.max(np.abs(reference))


class GridTest(SimpleTestCase):
    """
    Riemann grid sizes and objective weights
    """

    def setUp(self):
        self.cfg = RadarConfig(**SECTION_CONFIG)

    def test_evaluation_grid(self):
        grid = build_grid(self.cfg, equidistant_layout(8, 7.0), (1.0, 0.0, 0.0))
        self.assertEqual((grid.n1, grid.n2, grid.n3), (35, 240, 192))
        self.assertEqual(grid.theta.size, 36)
        self.assertAlmostEqual(grid.d_theta, math.pi / 35, places=15)
        self.assertAlmostEqual(grid.d_v, 2 * self.cfg.f_max / 240, delta=1e-6)
        self.assertAlmostEqual(grid.d_tau, 2 * self.cfg.T_w / 192, delta=1e-18)

    def test_refined_grid(self):
        grid = build_grid(self.cfg, equidistant_layout(8, 7.0), (1.0, 0.0, 0.0), refine=2)
        self.assertEqual((grid.n1, grid.n2, grid.n3), (70, 480, 384))

    def test_doppler_sample_count(self):
        self.assertEqual(build_grid(self.cfg, equidistant_layout(8, 7.0), (0.0, 1.0, 0.0)).n2, 240)
        slow = RadarConfig(**dict(SECTION_CONFIG, f_max=1e4))
        self.assertEqual(build_grid(slow, equidistant_layout(8, 7.0), (0.0, 1.0, 0.0)).n2, 1)
        fast = RadarConfig(**dict(SECTION_CONFIG, f_max=2.5e6))
        self.assertEqual(build_grid(fast, equidistant_layout(8, 7.0), (0.0, 1.0, 0.0)).n2, 60)

    def test_weights_must_sum_to_one(self):
        with self.assertRaises(ValidationError):
            build_grid(self.cfg, equidistant_layout(8, 7.0), (0.5, 0.4, 0.2))

    def test_negative_weight(self):
        with self.assertRaises(ValidationError):
            build_grid(self.cfg, equidistant_layout(8, 7.0), (1.2, -0.2, 0.0))

    def test_look_direction_in_range(self):
        with self.assertRaises(ValidationError):
            build_grid(self.cfg, equidistant_layout(8, 7.0), (0.0, 1.0, 0.0), theta_eval=2.0)


class ObjectiveTest(SimpleTestCase):
    """
    Objective terms and their analytic gradient
    """

    def setUp(self):
        self.cfg = RadarConfig(**SMALL_CONFIG)
        self.code = generate_fh_code(self.cfg, 4, seed=0)
        self.layout = random_feasible_layout(4, 4.0, seed=1)

    def grid(self, alpha, theta_eval=None):
        return build_grid(self.cfg, self.layout, alpha, theta_eval)

    def test_single_term_weights(self):
        for index, term in enumerate((f1_bar, f2_bar, f3_bar)):
            alpha = [0.0, 0.0, 0.0]
            alpha[index] = 1.0
            grid = self.grid(tuple(alpha))
            self.assertAlmostEqual(f_weighted(self.layout, grid, self.code, self.cfg),
                                   term(self.layout, grid, self.code, self.cfg), places=12)

    def test_zero_weight_terms_skipped(self):
        objective = WeightedObjective(self.grid((1.0, 0.0, 0.0)), self.code, self.cfg)
        f1, f2, f3 = objective.terms(self.layout)
        self.assertIsNotNone(f1)
        self.assertIsNone(f2)
        self.assertIsNone(f3)

    def test_weighted_sum(self):
        objective = WeightedObjective(self.grid(MIXED_ALPHA), self.code, self.cfg)
        f1, f2, f3 = objective.terms(self.layout)
        expected = MIXED_ALPHA[0] * f1 + MIXED_ALPHA[1] * f2 + MIXED_ALPHA[2] * f3
        self.assertAlmostEqual(objective(self.layout), expected, delta=1e-12 * expected)
        entry = objective.record(self.layout)
        self.assertEqual(entry['f'], objective(self.layout))
        self.assertEqual(entry['d'], self.layout.d.tolist())

    def test_single_antenna_closed_forms(self):
        """
        With one element chi no longer depends on angles, so the sums
        reduce to sample counts and the sinc of the pulse
        """
        code = generate_fh_code(self.cfg, 1, seed=0)
        single = AntennaLayout(d=[], L=0.0)
        grid = build_grid(self.cfg, equidistant_layout(2, 2.0), (0.0, 1.0, 0.0))
        n_theta = grid.n1 + 1
        self.assertAlmostEqual(f1_bar(single, grid, code, self.cfg), (n_theta * grid.d_theta) ** 2, places=10)
        expected = n_theta * grid.d_theta * grid.d_v * np.sum(np.sinc(grid.v * self.cfg.T_w) ** 2)
        self.assertAlmostEqual(f2_bar(single, grid, code, self.cfg), expected, delta=1e-10 * expected)

    def test_gradient_matches_finite_differences(self):
        for alpha, theta_eval in ((MIXED_ALPHA, None), ((1.0, 0.0, 0.0), None), ((0.0, 0.0, 1.0), None),
                                  ((0.0, 0.5, 0.5), math.pi / 4)):
            grid = self.grid(alpha, theta_eval)
            analytic = grad_f_weighted(self.layout, grid, self.code, self.cfg)
            numeric = finite_diff_grad(self.layout, grid, self.code, self.cfg, FD_STEP)
            self.assertLess(relative_error(analytic, numeric), GRADIENT_RTOL, 'alpha=%s theta_eval=%s' % (alpha, theta_eval))

    def test_finite_difference_order(self):
        """
        Halving the step cuts the central difference error by about four
        """
        grid = self.grid(MIXED_ALPHA)
        objective = WeightedObjective(grid, self.code, self.cfg)
        analytic = objective.gradient(self.layout)
        coarse = np.max(np.abs(finite_diff_grad(self.layout, grid, self.code, self.cfg, 1e-2, objective) - analytic))
        fine = np.max(np.abs(finite_diff_grad(self.layout, grid, self.code, self.cfg, 5e-3, objective) - analytic))
        self.assertTrue(3.0 < coarse / fine < 5.0, 'error ratio %.3f' % (coarse / fine))

    def test_step_must_be_positive(self):
        with self.assertRaises(RadarError):
            finite_diff_grad(self.layout, self.grid(MIXED_ALPHA), self.code, self.cfg, 0.0)

    def test_broadside_cuts_ignore_layout(self):
        grid = self.grid((0.0, 0.5, 0.5), theta_eval=0.0)
        objective = WeightedObjective(grid, self.code, self.cfg)
        self.assertTrue(np.all(objective.gradient(self.layout) == 0.0))
        self.assertEqual(objective(self.layout), objective(equidistant_layout(4, 4.0)))


class PolytopeTest(SimpleTestCase):
    """
    Constraint handling of the gradient projection
    """

    def setUp(self):
        self.poly = feasible_polytope(4, 4.0)
        self.params = RgpmParams()

    def test_constraint_matrix(self):
        self.assertEqual(self.poly.A.shape, (4, 3))
        self.assertTrue(np.array_equal(self.poly.b, [0.5, 0.5, 0.5, -4.0]))
        self.assertTrue(self.poly.contains([0.5, 1.0, 2.5]))
        self.assertFalse(self.poly.contains([0.5, 1.0, 2.6]))

    def test_active_rows(self):
        self.assertTrue(np.array_equal(active_set([0.5, 1.0, 1.0], self.poly), [0]))
        self.assertTrue(np.array_equal(active_set([0.5, 1.0, 2.5], self.poly), [0, 3]))
        self.assertEqual(active_set([1.0, 1.0, 1.0], self.poly).size, 0)
        with self.assertRaises(InfeasibleLayout):
            active_set([0.4, 1.0, 1.0], self.poly)

    def test_projectors(self):
        self.assertTrue(np.array_equal(projection_matrix(np.empty((0, 3)), 3), np.eye(3)))
        P = projection_matrix(self.poly.A[[0]])
        np.testing.assert_allclose(P, np.diag([0.0, 1.0, 1.0]), atol=1e-12)
        P = projection_matrix(self.poly.A[[3]])
        np.testing.assert_allclose(P, np.eye(3) - np.ones((3, 3)) / 3, atol=1e-12)

    def test_dependent_rows(self):
        with self.assertRaises(RankDeficient):
            projection_matrix(np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))

    def test_multipliers_recover_combination(self):
        rows = self.poly.A[[0, 3]]
        g = rows.T @ np.array([2.0, 3.0])
        np.testing.assert_allclose(multipliers(rows, g), [2.0, 3.0], atol=1e-12)

    def test_step_to_boundary(self):
        self.assertAlmostEqual(max_step(np.ones(3), np.array([1.0, 0.0, 0.0]), self.poly), 0.5, places=12)
        self.assertAlmostEqual(max_step(np.ones(3), np.array([-1.0, 0.0, 0.0]), self.poly), 1.0, places=12)

    def test_backtracking(self):
        poly = feasible_polytope(4, 10.0)
        target = np.full(3, 2.0)

        def func(d):
            return float(np.sum((d - target) ** 2))

        d = np.ones(3)
        omega, f_new = armijo_step(d, 2 * (d - target), poly, func, self.params)
        self.assertEqual(omega, 0.5)
        self.assertEqual(f_new, 0.0)

    def test_backtracking_honours_acceptance(self):
        poly = feasible_polytope(4, 10.0)
        target = np.full(3, 2.0)

        def func(d):
            return float(np.sum((d - target) ** 2))

        d = np.ones(3)
        omega, f_new = armijo_step(d, 2 * (d - target), poly, func, self.params, accept=lambda point: point[0] <= 1.5)
        self.assertEqual(omega, 0.25)
        self.assertAlmostEqual(f_new, 0.75, places=12)
        with self.assertRaises(StepSizeError):
            armijo_step(d, 2 * (d - target), poly, func, self.params, accept=lambda point: False)

    def test_backtracking_failures(self):
        with self.assertRaises(RadarError):
            armijo_step(np.ones(3), np.zeros(3), self.poly, lambda d: 0.0, self.params)
        with self.assertRaises(StepSizeError):
            armijo_step(np.ones(3), np.ones(3), self.poly, lambda d: 1.0, self.params)

    def test_snap_to_face(self):
        d = snap([0.5 + 1e-12, 1.0, 1.0], self.poly)
        self.assertEqual(d[0], 0.5)

    def test_parameter_validation(self):
        data = dict(T=1e-2, K_max=10, sigma=1e-4, rho=1.0, omega0=1.0, omega_min=1e-12, active_tol=1e-9, starts=2)
        serializer = RgpmParamsSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn('rho', serializer.errors)
        serializer = RgpmParamsSerializer(data=dict(data, rho=0.5, omega_min=2.0))
        self.assertFalse(serializer.is_valid())
        self.assertIn('omega_min', serializer.errors)
        serializer = RgpmParamsSerializer(data=dict(data, rho=0.5))
        self.assertTrue(serializer.is_valid())
        self.assertEqual(serializer.save().K_max, 10)
        self.assertIsNone(serializer.save().max_lobe_width)
        serializer = RgpmParamsSerializer(data=dict(data, rho=0.5, max_lobe_width=-0.1))
        self.assertFalse(serializer.is_valid())
        self.assertIn('max_lobe_width', serializer.errors)


class GradientProjectionTest(SimpleTestCase):
    """
    Gradient projection runs on small arrays
    """

    def setUp(self):
        self.cfg = RadarConfig(**SMALL_CONFIG)

    def test_single_point_polytope(self):
        code = generate_fh_code(self.cfg, 4, seed=0)
        layout = equidistant_layout(4, 1.5)
        grid = build_grid(self.cfg, layout, (1.0, 0.0, 0.0))
        result = rgpm_optimize(layout, feasible_polytope(4, 1.5), grid, code, self.cfg)
        self.assertTrue(result.converged)
        self.assertEqual(result.certificate, 'single-point')
        self.assertEqual(result.layout, layout)

    def test_descent_stays_feasible(self):
        code = generate_fh_code(self.cfg, 4, seed=0)
        poly = feasible_polytope(4, 3.0)
        grid = build_grid(self.cfg, equidistant_layout(4, 3.0), MIXED_ALPHA)
        params = RgpmParams(K_max=20)
        for seed in SEEDS[:3]:
            start = random_feasible_layout(4, 3.0, seed)
            result = rgpm_optimize(start, poly, grid, code, self.cfg, params=params)
            values = [row.f for row in result.trace]
            slack = 1e-8 * values[0]
            self.assertTrue(all(b <= a + slack for a, b in zip(values, values[1:])), 'f went up from seed %d' % seed)
            self.assertLessEqual(result.f, values[0] + slack)
            self.assertTrue(poly.contains(result.layout.d, 1e-9))
            self.assertLessEqual(len(result.trace), params.K_max + 1)

    def test_two_elements_match_brute_force(self):
        code = generate_fh_code(self.cfg, 2, seed=0)
        L = 1.1
        poly = feasible_polytope(2, L)
        grid = build_grid(self.cfg, equidistant_layout(2, L), (1.0, 0.0, 0.0), refine=8)
        objective = WeightedObjective(grid, code, self.cfg)
        spacings = np.linspace(0.5, L, 601)
        values = np.array([objective([d]) for d in spacings])
        best, results = multistart_optimize(poly, grid, code, self.cfg, params=RgpmParams(T=1e-4, K_max=100),
                                            seed=0, objective=objective)
        self.assertEqual(len(results), 4)
        self.assertLessEqual(best.f, values.min() * (1 + 1e-4))
        self.assertLess(abs(best.layout.d[0] - spacings[values.argmin()]), 0.01)

    def test_multistart_labels(self):
        code = generate_fh_code(self.cfg, 3, seed=0)
        poly = feasible_polytope(3, 2.0)
        grid = build_grid(self.cfg, equidistant_layout(3, 2.0), (1.0, 0.0, 0.0))
        best, results = multistart_optimize(poly, grid, code, self.cfg, params=RgpmParams(K_max=5, starts=3))
        self.assertEqual([result.start for result in results], ['equidistant', 'mmlwd', 'random-0'])
        self.assertEqual(best.f, min(result.f for result in results))

    def test_kkt_certificate_carries_multipliers(self):
        """
        A cost increasing in every spacing stops on the vertex where all
        spacings are minimal, with non-negative multipliers
        """
        class SpacingSum:
            def value(self, d):
                return float(np.sum(np.asarray(getattr(d, 'd', d))))

            def gradient(self, d):
                return np.ones(np.asarray(getattr(d, 'd', d)).size)

        poly = feasible_polytope(4, 4.0)
        result = rgpm_optimize(equidistant_layout(4, 3.0), poly, None, None, self.cfg, objective=SpacingSum())
        self.assertTrue(result.converged)
        self.assertEqual(result.certificate, 'kkt')
        np.testing.assert_allclose(result.layout.d, [0.5, 0.5, 0.5], atol=1e-9)
        self.assertEqual(len(result.multipliers), 3)
        self.assertGreaterEqual(min(result.multipliers), -1e-9)
        self.assertEqual(result.to_dict()['multipliers'], result.multipliers)

    def test_projectors_on_every_iteration(self):
        code = generate_fh_code(self.cfg, 4, seed=0)
        poly = feasible_polytope(4, 3.0)
        grid = build_grid(self.cfg, equidistant_layout(4, 3.0), MIXED_ALPHA)
        seen = []

        def recorded(M_active, n=None):
            P = projection_matrix(M_active, n)
            seen.append((np.atleast_2d(M_active), P))
            return P

        with mock.patch('optimizer.rgpm.projection_matrix', side_effect=recorded):
            result = rgpm_optimize(mmlwd_layout(4, 3.0), poly, grid, code, self.cfg, params=RgpmParams(K_max=15))
        self.assertGreaterEqual(len(seen), len(result.trace))
        for M_active, P in seen:
            np.testing.assert_allclose(P @ P, P, atol=1e-10)
            if M_active.size:
                np.testing.assert_allclose(P @ M_active.T, 0.0, atol=1e-10)

    def test_main_lobe_limit(self):
        code = generate_fh_code(self.cfg, 4, seed=0)
        poly = feasible_polytope(4, 3.0)
        grid = build_grid(self.cfg, equidistant_layout(4, 3.0), (1.0, 0.0, 0.0))
        limit = 1.1 * b_min(4, 3.0, 0.0)
        params = RgpmParams(K_max=20, starts=3, max_lobe_width=limit)
        best, results = multistart_optimize(poly, grid, code, self.cfg, params=params)
        self.assertNotIn('equidistant', [result.start for result in results])
        self.assertIn('mmlwd', [result.start for result in results])
        for result in results:
            width = main_lobe_width(angular_cut(result.layout, 0.0, LOBE_POINTS))
            self.assertLessEqual(width, limit + 1e-6, 'start %s widened the lobe to %.6f' % (result.start, width))
        with self.assertRaises(InfeasibleLayout):
            rgpm_optimize(equidistant_layout(4, 3.0), poly, grid, code, self.cfg, params=params)
        with self.assertRaises(InfeasibleLayout):
            multistart_optimize(poly, grid, code, self.cfg, params=RgpmParams(K_max=5, max_lobe_width=0.5 * limit))


class GeneticTest(SimpleTestCase):
    """
    Genetic algorithm baseline
    """

    def setUp(self):
        self.cfg = RadarConfig(**SMALL_CONFIG)
        self.code = generate_fh_code(self.cfg, 4, seed=0)
        self.poly = feasible_polytope(4, 3.0)
        self.grid = build_grid(self.cfg, equidistant_layout(4, 3.0), (1.0, 0.0, 0.0))

    def test_repair(self):
        np.testing.assert_allclose(repair([0.2, 5.0, 5.0], 3.0), [0.5, 1.25, 1.25], atol=1e-12)
        np.testing.assert_allclose(repair([0.7, 0.8, 0.9], 3.0), [0.7, 0.8, 0.9], atol=0)

    def test_reproducible(self):
        params = GaParams(G=4, N=6, seed=3)
        first = ga_optimize(self.poly, self.grid, self.code, self.cfg, params=params)
        second = ga_optimize(self.poly, self.grid, self.code, self.cfg, params=params)
        self.assertEqual(first.f, second.f)
        self.assertEqual(first.layout, second.layout)

    def test_elitism(self):
        result = ga_optimize(self.poly, self.grid, self.code, self.cfg, params=GaParams(G=6, N=6, seed=1))
        self.assertEqual(len(result.best_trace), 6)
        self.assertTrue(all(b <= a for a, b in zip(result.best_trace, result.best_trace[1:])))
        self.assertEqual(result.f, result.best_trace[-1])
        self.assertTrue(self.poly.contains(result.layout.d, 1e-9))

    def test_single_generation(self):
        result = ga_optimize(self.poly, self.grid, self.code, self.cfg, params=GaParams(G=1, N=4, seed=0))
        self.assertEqual(len(result.best_trace), 1)

    def test_parameter_validation(self):
        serializer = GaParamsSerializer(data={'G': 5, 'N': 1, 'p_cross': 0.9, 'p_mut': 0.2,
                                              'mutation_scale': 0.1, 'seed': 0})
        self.assertFalse(serializer.is_valid())
        self.assertIn('N', serializer.errors)

    def test_multistart_never_worse_than_its_starts(self):
        params = RgpmParams(K_max=30, starts=3)
        best, _ = multistart_optimize(self.poly, self.grid, self.code, self.cfg, params=params)
        baseline = mmlwd_layout(4, 3.0)
        self.assertLessEqual(best.f, f_weighted(baseline, self.grid, self.code, self.cfg) * (1 + 1e-6))
