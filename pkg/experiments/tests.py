import csv
import json
import math
import os
import shutil
import tempfile
import unittest
from io import StringIO
from unittest import mock

import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from MARadar.test_utils import *
from experiments.config import config_hash, load_document, parse_range
from experiments.management.commands.tradeoff import simplex_weights, tradeoff_correlations
from experiments.models import RunRecord
from optimizer.ga import GaParams, ga_optimize
from optimizer.objective import WeightedObjective, build_grid, finite_diff_grad
from optimizer.rgpm import RgpmParams, feasible_polytope, multistart_optimize, projection_matrix, rgpm_optimize
from radar.ambiguity import angular_cut
from radar.domain import DetectionParams, RadarConfig, equidistant_layout, generate_fh_code, random_feasible_layout
from radar.metrics import (detection_probability, main_lobe_width, monotone_within_ci, peak_sidelobe_level,
                           plateau_start)
from radar.theory import b_min, mmlwd_layout

global COMMAND_CONFIG
global SECTION_CONFIG
global FD_STEP


def read_csv(path):
    """
    Returns (header, columns, rows) of a result CSV
    """
    with open(path, encoding='utf-8', newline='') as handle:
        lines = handle.read().split('\n')
    header = dict(line[2:].split(': ', 1) for line in lines if line.startswith('# '))
    body = [line for line in lines if line and not line.startswith('#')]
    rows = list(csv.reader(body))
    return header, rows[0], rows[1:]


class CommandTestCase(TestCase):
    """
    Runs the experiment commands against a small configuration in a
    scratch directory
    """

    def setUp(self):
        self.workdir = tempfile.mkdtemp()
        self.config = os.path.join(self.workdir, 'config.json')
        with open(self.config, 'w', encoding='utf-8') as handle:
            json.dump(COMMAND_CONFIG, handle)

    def tearDown(self):
        shutil.rmtree(self.workdir)

    def out(self, name='out'):
        return os.path.join(self.workdir, name)

    def call(self, command, output='out', **options):
        stdout = StringIO()
        options.setdefault('config', self.config)
        call_command(command, output_dir=self.out(output), stdout=stdout, **options)
        return stdout.getvalue()

    def load(self, name, output='out'):
        with open(os.path.join(self.out(output), name), encoding='utf-8') as handle:
            return json.load(handle)


class ConfigurationTest(CommandTestCase):
    """
    Layered configuration and argument checks shared by every command
    """

    def test_defaults_and_overrides(self):
        document = load_document(self.config, ['array.M_t=4', 'radar.f_max=1e6'])
        self.assertEqual(document['array']['M_t'], 4)
        self.assertEqual(document['radar']['f_max'], 1e6)
        self.assertEqual(document['radar']['Q'], COMMAND_CONFIG['radar']['Q'])
        self.assertIn('alpha', document['objective'], 'sections missing from the file keep their defaults')

    def test_hash_is_stable(self):
        self.assertEqual(config_hash(load_document(self.config)), config_hash(load_document(self.config)))
        self.assertNotEqual(config_hash(load_document(self.config)),
                            config_hash(load_document(self.config, ['rgpm.K_max=6'])))

    def test_range_parsing(self):
        self.assertEqual(parse_range('-10:0:5'), [-10.0, -5.0, 0.0])

    def test_missing_config_file(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', config=os.path.join(self.workdir, 'missing.json'))

    def test_malformed_override(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', overrides=['array'])

    def test_unknown_section(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', overrides=['antenna.M_t=4'])

    def test_budget_below_minimum(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', overrides=['array.L=0.5'])

    def test_inconsistent_radar_section(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', overrides=['radar.T_w=5e-6'])

    def test_code_repeating_a_frequency(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', overrides=['code.c=[[1,2],[1,3],[2,4]]'])

    def test_explicit_code(self):
        self.call('af', axis='angular', points=101, overrides=['code.c=[[1,2],[2,3],[3,4]]'])
        meta = self.load('af_angular.json')
        self.assertEqual(meta['meta']['code']['c'], [[1, 2], [2, 3], [3, 4]])

    def test_malformed_layout_file(self):
        path = os.path.join(self.workdir, 'layout.json')
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write('{"d": [0.5,')
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', layout='file:' + path)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump({'spacings': [0.5, 1.5]}, handle)
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', layout='file:' + path)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump([0.5, 1.5], handle)
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', layout='file:' + path)

    def test_code_file(self):
        path = os.path.join(self.workdir, 'code.json')
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump({'c': [[1, 2], [2, 3], [3, 4]], 'K': 4}, handle)
        self.call('af', axis='angular', points=101, overrides=['code.path=' + path])
        self.assertEqual(self.load('af_angular.json')['meta']['code']['c'], [[1, 2], [2, 3], [3, 4]])
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump({'K': 4}, handle)
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', overrides=['code.path=' + path])
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write('c = [[1, 2]]')
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', overrides=['code.path=' + path])

    def test_json_outputs_carry_run_metadata(self):
        self.call('optimize', method='rgpm', alpha='1,0,0', seed=5)
        run = self.load('run.json')
        for name in ('summary.json', 'layout.json', 'run.json'):
            meta = self.load(name)['meta']
            self.assertEqual(set(meta) & {'config_hash', 'seed', 'normalization', 'version'},
                             {'config_hash', 'seed', 'normalization', 'version'}, name)
            self.assertEqual(meta['config_hash'], run['config_hash'], name)
            self.assertEqual(meta['seed'], 5, name)
            self.assertEqual(meta['normalization'], settings.NORMALIZATION, name)
            self.assertEqual(meta['version'], settings.VERSION, name)


class AmbiguityCommandTest(CommandTestCase):
    """
    af command
    """

    def test_angular_cut(self):
        message = self.call('af', axis='angular', points=200)
        self.assertIn('af finished', message)
        header, columns, rows = read_csv(os.path.join(self.out(), 'af_angular.csv'))
        self.assertEqual(columns, ['coord', 'magnitude', 'magnitude_db'])
        self.assertEqual(len(rows), 201, 'the matched coordinate is added to an even grid')
        self.assertEqual(header['seed'], '0')
        self.assertEqual(header['axis'], 'angular')
        self.assertEqual(len(header['config_hash']), 64)
        summary = self.load('af_angular.json')
        self.assertAlmostEqual(summary['peak'], 3.0, places=9)
        self.assertEqual(summary['meta']['layout']['M_t'], 3)
        self.assertEqual(len(summary['values']), 201)

    def test_doppler_and_delay_cuts(self):
        for axis in ('doppler', 'delay'):
            self.call('af', axis=axis, points=51, layout='mmlwd', theta=0.4)
            _, _, rows = read_csv(os.path.join(self.out(), 'af_%s.csv' % axis))
            self.assertEqual(len(rows), 51)
            self.assertAlmostEqual(max(float(row[1]) for row in rows), 3.0, places=9)

    def test_reruns_are_identical(self):
        self.call('af', output='first', axis='doppler', points=51, layout='random', seed=2)
        self.call('af', output='second', axis='doppler', points=51, layout='random', seed=2)
        with open(os.path.join(self.out('first'), 'af_doppler.csv'), 'rb') as first:
            with open(os.path.join(self.out('second'), 'af_doppler.csv'), 'rb') as second:
                self.assertEqual(first.read(), second.read())

    def test_layout_file(self):
        path = os.path.join(self.workdir, 'layout.json')
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump({'d': [0.5, 1.5]}, handle)
        self.call('af', axis='angular', points=101, layout='file:' + path)
        self.assertEqual(self.load('af_angular.json')['meta']['layout']['d'], [0.5, 1.5])

    def test_unknown_layout(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='angular', layout='spiral')

    def test_empty_range(self):
        with self.assertRaises(CommandError):
            self.call('af', axis='doppler', range=[1e6, 1e6])

    def test_run_ledger(self):
        self.call('af', axis='angular', points=101)
        self.call('af', axis='doppler', points=51, seed=3)
        records = list(RunRecord.objects.all())
        self.assertEqual(len(records), 2)
        self.assertEqual([record.seed for record in records], [0, 3])
        self.assertTrue(all(record.command == 'af' and record.status == 'ok' for record in records))
        run = self.load('run.json')
        self.assertEqual(run['seed'], 3)
        self.assertEqual(run['config_hash'], records[1].config_hash)


class TheoryCommandTest(CommandTestCase):
    """
    theory command
    """

    def test_budget_sweep(self):
        self.call('theory', sweep='L', values=[2.0, 3.0], theta=0.0, width_points=1001)
        _, columns, rows = read_csv(os.path.join(self.out(), 'theory_sweep_L.csv'))
        self.assertEqual(columns, ['value', 'M_t', 'L', 'theta', 'b_min', 'measured_width', 'psl_db'])
        self.assertEqual(len(rows), 2)
        self.assertAlmostEqual(float(rows[1][4]), 2 * math.asin(2 / 11), places=12)

    def test_sweep_outside_visible_region(self):
        self.call('theory', sweep='theta', values=[1.5], width_points=1001)
        _, _, rows = read_csv(os.path.join(self.out(), 'theory_sweep_theta.csv'))
        self.assertEqual(rows[0][4], 'nan')

    def test_doppler_bound(self):
        self.call('theory', bound='doppler', theta=0.5, points=41)
        header, columns, rows = read_csv(os.path.join(self.out(), 'theory_bound_doppler.csv'))
        self.assertEqual(columns, ['coord', 'bound', 'magnitude', 'gap'])
        self.assertEqual(header['informative'], 'true')
        self.assertTrue(all(float(row[3]) >= -1e-6 for row in rows))
        self.assertEqual(self.load('run.json')['summary']['bound']['violation_count'], 0)

    def test_delay_bound_at_broadside(self):
        self.call('theory', bound='delay', theta=0.0, points=41)
        header, _, _ = read_csv(os.path.join(self.out(), 'theory_bound_delay.csv'))
        self.assertEqual(header['informative'], 'false')

    def test_nothing_requested(self):
        with self.assertRaises(CommandError):
            self.call('theory')


class OptimizeCommandTest(CommandTestCase):
    """
    optimize and tradeoff commands
    """

    def test_both_methods(self):
        self.call('optimize', method='both', alpha='1,0,0')
        summary = self.load('summary.json')
        self.assertLessEqual(summary['rgpm']['f'], summary['f_equidistant'] * (1 + 1e-6),
                             'the equidistant start can only improve')
        _, columns, rows = read_csv(os.path.join(self.out(), 'rgpm_trace.csv'))
        self.assertEqual(columns, ['start', 'k', 'f', 'grad_norm', 'active_count', 'omega'])
        self.assertEqual({row[0] for row in rows}, {'equidistant', 'mmlwd'})
        _, _, generations = read_csv(os.path.join(self.out(), 'ga_trace.csv'))
        self.assertEqual(len(generations), COMMAND_CONFIG['ga']['G'])
        layout = self.load('layout.json')
        self.assertEqual(layout['M_t'], 3)
        self.assertLessEqual(sum(layout['d']), COMMAND_CONFIG['array']['L'] + 1e-9)
        self.assertIn('ga_gap', summary)

    def test_look_direction(self):
        self.call('optimize', alpha='0,0.5,0.5', theta_eval=0.3)
        summary = self.load('summary.json')
        self.assertEqual(summary['theta_eval'], 0.3)
        self.assertEqual(summary['grid']['alpha'], [0.0, 0.5, 0.5])

    def test_weights_not_on_simplex(self):
        with self.assertRaises(CommandError):
            self.call('optimize', alpha='0.5,0.2,0.1')

    def test_simplex(self):
        weights = list(simplex_weights(2))
        self.assertEqual(len(weights), 6)
        self.assertTrue(all(math.isclose(sum(alpha), 1.0) for alpha in weights))

    def test_tradeoff(self):
        self.call('tradeoff', resolution=1)
        _, columns, rows = read_csv(os.path.join(self.out(), 'tradeoff.csv'))
        self.assertEqual(columns, ['alpha1', 'alpha2', 'alpha3', 'f1', 'f2', 'f3', 'f', 'd1', 'd2'])
        self.assertEqual(len(rows), 3)
        correlations = self.load('tradeoff_summary.json')['rank_correlation']
        self.assertEqual(set(correlations), {'f1_f3', 'f2_f1', 'f2_f3'})

    def test_rank_correlation_signs(self):
        f1 = [1.0, 2.0, 3.0, 4.0, 5.0]
        f2 = [9.0, 7.0, 8.0, 3.0, 1.0]
        f3 = [0.1, 0.3, 0.2, 0.6, 0.9]
        correlations = tradeoff_correlations(f1, f2, f3)
        self.assertAlmostEqual(correlations['f1_f3'], 0.9, places=12)
        self.assertAlmostEqual(correlations['f2_f1'], -0.9, places=12)
        self.assertAlmostEqual(correlations['f2_f3'], -1.0, places=12)
        self.assertTrue(math.isnan(tradeoff_correlations(f1, [2.0] * 5, f3)['f2_f1']))

    def test_main_lobe_limit(self):
        self.call('optimize', alpha='1,0,0', lobe_limit=1.1, overrides=['array.M_t=4', 'array.L=3.0'])
        summary = self.load('summary.json')
        lobe = summary['lobe']
        self.assertAlmostEqual(lobe['b_min'], 2 * math.asin(0.2), places=12)
        self.assertAlmostEqual(lobe['limit'], 1.1 * lobe['b_min'], places=12)
        self.assertGreater(lobe['equidistant']['main_lobe_width'], lobe['limit'])
        self.assertLessEqual(lobe['rgpm']['main_lobe_width'], lobe['limit'] + 1e-6)
        self.assertEqual([start['start'] for start in summary['rgpm']['starts']], ['mmlwd'])

    def test_aperture_sweep(self):
        self.call('optimize', alpha='0,0.5,0.5', apertures='1.0:2.0:0.5')
        _, columns, rows = read_csv(os.path.join(self.out(), 'aperture_sweep.csv'))
        self.assertEqual(columns, ['L', 'f', 'f1', 'f2', 'f3', 'd'])
        self.assertEqual([float(row[0]) for row in rows], [1.0, 1.5, 2.0])
        self.assertTrue(all(sum(float(x) for x in row[5].split()) <= float(row[0]) + 1e-9 for row in rows))
        sweep = self.load('summary.json')['apertures']
        self.assertEqual(sweep['L'], [1.0, 1.5, 2.0])
        self.assertEqual(set(sweep['plateau']), {'f2', 'f3'})
        self.assertEqual(len(sweep['f2']), 3)

    def test_tradeoff_resolution(self):
        with self.assertRaises(CommandError):
            self.call('tradeoff', resolution=0)


class DetectCommandTest(CommandTestCase):
    """
    detect command
    """

    def test_layout_comparison(self):
        self.call('detect', layouts='equidistant,mmlwd,optimized', snr='-10:0:5')
        for name in ('equidistant', 'mmlwd', 'optimized'):
            _, columns, rows = read_csv(os.path.join(self.out(), 'detect_%s.csv' % name))
            self.assertEqual(columns, ['snr_db', 'p_d', 'ci_low', 'ci_high'])
            self.assertEqual([float(row[0]) for row in rows], [-10.0, -5.0, 0.0])
        _, columns, rows = read_csv(os.path.join(self.out(), 'detect_comparison.csv'))
        self.assertEqual(columns, ['snr_db', 'p_d_equidistant', 'p_d_mmlwd', 'p_d_optimized'])
        self.assertEqual(len(rows), 3)
        summary = self.load('detect_summary.json')
        self.assertEqual(summary['trials'], COMMAND_CONFIG['detection']['trials'])

    def test_too_few_trials(self):
        with self.assertRaises(CommandError):
            self.call('detect', layouts='equidistant', pfa=1e-4)

    def test_steering_offset(self):
        self.call('detect', output='matched', layouts='equidistant,mmlwd', snr='-10:0:5')
        matched = self.load('detect_summary.json', output='matched')
        gains = [matched['layouts'][name]['gain'] for name in ('equidistant', 'mmlwd')]
        np.testing.assert_allclose(gains, [6.0, 6.0], atol=1e-9)
        self.assertIsNone(matched['theta_p'])

        self.call('detect', output='offset', layouts='equidistant,mmlwd', snr='-10:0:5', theta_p=0.3)
        offset = self.load('detect_summary.json', output='offset')
        self.assertEqual(offset['theta_p'], 0.3)
        uniform, clustered = (offset['layouts'][name]['gain'] for name in ('equidistant', 'mmlwd'))
        self.assertLess(uniform, 6.0)
        self.assertLess(clustered, 6.0)
        self.assertGreater(abs(uniform - clustered), 0.5)
        low, high = offset['layouts']['equidistant']['p_fa_ci']
        self.assertLessEqual(low, offset['layouts']['equidistant']['p_fa_measured'])
        self.assertLessEqual(offset['layouts']['equidistant']['p_fa_measured'], high)

    def test_steering_outside_visible_region(self):
        with self.assertRaises(CommandError):
            self.call('detect', layouts='equidistant', theta_p=2.0)


@unittest.skipUnless(os.environ.get('MAFH_ACCEPTANCE'), 'set MAFH_ACCEPTANCE=1 to run the full-size checks')
class AcceptanceTest(TestCase):
    """
    Full-size evaluation setup, minutes of run time
    """

    def setUp(self):
        self.cfg = RadarConfig(**SECTION_CONFIG)
        self.code = generate_fh_code(self.cfg, 8, seed=0)

    def test_clustered_layout_trades_sidelobes_for_width(self):
        uniform = angular_cut(equidistant_layout(8, 7.0), 0.0, 4001)
        clustered = angular_cut(mmlwd_layout(8, 7.0), 0.0, 4001)
        self.assertGreater(peak_sidelobe_level(clustered), peak_sidelobe_level(uniform))

    def test_analytic_gradient_on_evaluation_setup(self):
        for index in range(3):
            alpha = [0.0, 0.0, 0.0]
            alpha[index] = 1.0
            grid = build_grid(self.cfg, equidistant_layout(8, 7.0), tuple(alpha))
            objective = WeightedObjective(grid, self.code, self.cfg).warm()
            for seed in range(20):
                layout = random_feasible_layout(8, 7.0, seed)
                analytic = objective.gradient(layout)
                numeric = finite_diff_grad(layout, grid, self.code, self.cfg, FD_STEP, objective)
                np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-6 * np.max(np.abs(numeric)),
                                           err_msg='alpha=%s seed=%d' % (alpha, seed))

    def test_delay_objective_plateau(self):
        poly = feasible_polytope(8, 7.0)
        grid = build_grid(self.cfg, equidistant_layout(8, 7.0), (0.0, 0.0, 1.0), theta_eval=math.pi / 4)
        seen = []

        def recorded(M_active, n=None):
            P = projection_matrix(M_active, n)
            seen.append((np.atleast_2d(M_active), P))
            return P

        with mock.patch('optimizer.rgpm.projection_matrix', side_effect=recorded):
            result = rgpm_optimize(equidistant_layout(8, 7.0), poly, grid, self.code, self.cfg,
                                   params=RgpmParams(T=1e-2, K_max=150))
        values = [row.f for row in result.trace]
        self.assertTrue(all(b <= a * (1 + 1e-12) for a, b in zip(values, values[1:])))
        settled = values[min(60, len(values) - 1)]
        self.assertLessEqual(abs(values[-1] - settled), 0.01 * (values[0] - values[-1]) + 1e-12)
        self.assertTrue(poly.contains(result.layout.d, 1e-9))
        for M_active, P in seen:
            np.testing.assert_allclose(P @ P, P, atol=1e-10)
            if M_active.size:
                np.testing.assert_allclose(P @ M_active.T, 0.0, atol=1e-10)
        if result.certificate == 'kkt':
            self.assertGreaterEqual(min(result.multipliers), -1e-9)

    def test_gradient_projection_against_baselines(self):
        poly = feasible_polytope(8, 7.0)
        for alpha in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)):
            grid = build_grid(self.cfg, equidistant_layout(8, 7.0), alpha)
            objective = WeightedObjective(grid, self.code, self.cfg).warm()
            best, _ = multistart_optimize(poly, grid, self.code, self.cfg, params=RgpmParams(starts=4),
                                          objective=objective)
            genetic = ga_optimize(poly, grid, self.code, self.cfg, params=GaParams(G=100, N=16, seed=0),
                                  objective=objective)
            uniform = objective.value(equidistant_layout(8, 7.0))
            self.assertLessEqual(best.f, genetic.f * 1.05, 'alpha=%s' % (alpha,))
            self.assertLess(best.f, uniform, 'alpha=%s' % (alpha,))
            self.assertLess(genetic.f, uniform, 'alpha=%s' % (alpha,))

    def test_width_limited_layout_lowers_sidelobes(self):
        poly = feasible_polytope(8, 7.0)
        grid = build_grid(self.cfg, equidistant_layout(8, 7.0), (1.0, 0.0, 0.0))
        limit = 1.1 * b_min(8, 7.0, 0.0)
        best, _ = multistart_optimize(poly, grid, self.code, self.cfg, params=RgpmParams(max_lobe_width=limit))
        optimized = angular_cut(best.layout, 0.0, 4001)
        clustered = angular_cut(mmlwd_layout(8, 7.0), 0.0, 4001)
        self.assertLessEqual(main_lobe_width(optimized), limit + 1e-6)
        self.assertLess(peak_sidelobe_level(optimized), peak_sidelobe_level(clustered))

    def test_aperture_plateau(self):
        budgets = [float(L) for L in range(4, 13)]
        f2, f3 = [], []
        for L in budgets:
            grid = build_grid(self.cfg, equidistant_layout(8, L), (0.0, 0.5, 0.5), theta_eval=math.pi / 4)
            objective = WeightedObjective(grid, self.code, self.cfg).warm()
            best, _ = multistart_optimize(feasible_polytope(8, L), grid, self.code, self.cfg, objective=objective)
            terms = objective.record(best.layout)
            f2.append(terms['f2'])
            f3.append(terms['f3'])
        self.assertIsNotNone(plateau_start(budgets, f2), 'f2 over L: %s' % f2)
        self.assertIsNotNone(plateau_start(budgets, f3), 'f3 over L: %s' % f3)

    def test_detection_at_low_false_alarm_rate(self):
        det = DetectionParams(M_r=8, P_fa=1e-4, snr_grid=tuple(np.arange(-30.0, 0.1, 2.0)), trials=1000000)
        grid = build_grid(self.cfg, equidistant_layout(8, 7.0), (1.0, 0.0, 0.0))
        best, _ = multistart_optimize(feasible_polytope(8, 7.0), grid, self.code, self.cfg)
        uniform = detection_probability(equidistant_layout(8, 7.0), self.code, self.cfg, det, seed=0)
        optimized = detection_probability(best.layout, self.code, self.cfg, det, seed=0)
        self.assertLessEqual(uniform.p_fa_ci_low, det.P_fa)
        self.assertLessEqual(det.P_fa, uniform.p_fa_ci_high)
        self.assertTrue(monotone_within_ci(uniform))
        self.assertTrue(monotone_within_ci(optimized))
        half = int(np.argmin(np.abs(uniform.p_d - 0.5)))
        self.assertGreaterEqual(optimized.ci_high[half], uniform.p_d[half])

    def test_objective_tradeoff(self):
        poly = feasible_polytope(8, 7.0)
        baseline = equidistant_layout(8, 7.0)
        reference = WeightedObjective(build_grid(self.cfg, baseline, (1 / 3, 1 / 3, 1 / 3)), self.code, self.cfg)
        terms = ([], [], [])
        for alpha in simplex_weights(5):
            grid = build_grid(self.cfg, baseline, alpha)
            best, _ = multistart_optimize(poly, grid, self.code, self.cfg)
            for values, term in zip(terms, (reference.f1, reference.f2, reference.f3)):
                values.append(term(best.layout))
        correlations = tradeoff_correlations(*terms)
        self.assertGreater(correlations['f1_f3'], 0.0, correlations)
        self.assertLess(correlations['f2_f3'], 0.0, correlations)
