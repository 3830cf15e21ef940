import logging

import numpy as np

from experiments.config import parse_range
from experiments.runner import ExperimentCommand
from optimizer.objective import build_grid
from optimizer.rgpm import feasible_polytope, multistart_optimize
from radar.metrics import detection_probability, monotone_within_ci
from radar.serializers import DetectionParamsSerializer

logger = logging.getLogger(__name__)


class Command(ExperimentCommand):
    help = 'Monte-Carlo detection probability versus SNR for several layouts'
    name = 'detect'

    def add_command_arguments(self, parser):
        parser.add_argument('--pfa', type=float, default=None, help='false alarm probability')
        parser.add_argument('--snr', default=None, help='SNR grid in dB as from:to:step')
        parser.add_argument('--trials', type=int, default=None)
        parser.add_argument('--layouts', default='equidistant,mmlwd,optimized',
                            help='comma separated layout names, "optimized" runs gradient projection first')
        parser.add_argument('--theta', type=float, default=0.0, help='target direction in radians')
        parser.add_argument('--theta-p', type=float, default=None,
                            help='direction the receiver is steered to, defaults to the target direction')

    def detection_params(self, ctx, options):
        data = dict(ctx.document['detection'])
        if options['pfa'] is not None:
            data['P_fa'] = options['pfa']
        if options['snr'] is not None:
            data['snr_grid'] = parse_range(options['snr'])
        if options['trials'] is not None:
            data['trials'] = options['trials']
        serializer = DetectionParamsSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return serializer.save()

    def resolve(self, ctx, name):
        if name != 'optimized':
            return ctx.layout(name)
        baseline = ctx.layout('equidistant')
        grid = build_grid(ctx.cfg, baseline, (1.0, 0.0, 0.0))
        best, _ = multistart_optimize(feasible_polytope(ctx.M_t, ctx.L), grid, ctx.code, ctx.cfg,
                                      params=ctx.rgpm, seed=ctx.seed)
        return best.layout

    def run(self, ctx, output, options):
        det = self.detection_params(ctx, options)
        names = [name.strip() for name in options['layouts'].split(',') if name.strip()]
        curves = {}
        summary = {'P_fa': det.P_fa, 'trials': det.trials, 'M_r': det.M_r, 'theta': options['theta'],
                   'theta_p': options['theta_p'], 'layouts': {}}
        for name in names:
            layout = self.resolve(ctx, name)
            curve = detection_probability(layout, ctx.code, ctx.cfg, det, ctx.seed, theta=options['theta'],
                                          theta_p=options['theta_p'])
            curves[name] = curve
            label = name.replace('file:', '').replace('/', '_')
            output.write_csv('detect_%s.csv' % label, ('snr_db', 'p_d', 'ci_low', 'ci_high'),
                             zip(curve.snr_db, curve.p_d, curve.ci_low, curve.ci_high),
                             extra={'layout': name, 'threshold': curve.threshold})
            crossing = np.flatnonzero(curve.p_d >= 0.5)
            summary['layouts'][name] = {
                'layout': layout.to_dict(),
                'threshold': curve.threshold,
                'gain': curve.gain,
                'p_fa_measured': curve.p_fa_measured,
                'p_fa_ci': [curve.p_fa_ci_low, curve.p_fa_ci_high],
                'monotone': monotone_within_ci(curve),
                'snr_at_half': float(curve.snr_db[crossing[0]]) if crossing.size else None,
            }
            logger.info('%s: measured P_fa=%.3g', name, curve.p_fa_measured)

        snr = next(iter(curves.values())).snr_db if curves else []
        columns = ('snr_db',) + tuple('p_d_%s' % name for name in curves)
        rows = [(value,) + tuple(curve.p_d[i] for curve in curves.values()) for i, value in enumerate(snr)]
        output.write_csv('detect_comparison.csv', columns, rows)
        output.write_json('detect_summary.json', summary)
        return summary, 'ok'
