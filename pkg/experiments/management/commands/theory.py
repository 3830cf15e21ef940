import logging

import numpy as np

from experiments.config import ConfigError
from experiments.runner import ExperimentCommand
from radar.ambiguity import angular_cut, compute_slice
from radar.domain import AmbiguityQuery
from radar.exceptions import NullNotFound, VisibleRegionError
from radar.metrics import bound_gap, lobe_report
from radar.theory import b_min, delay_lower_bound, doppler_lower_bound, mmlwd_layout

logger = logging.getLogger(__name__)

DEFAULT_THETAS = [0.0, np.pi / 12, np.pi / 6, np.pi / 4, np.pi / 3]


class Command(ExperimentCommand):
    help = 'Minimum lobe width sweeps and Doppler/delay lower bounds'
    name = 'theory'

    def add_command_arguments(self, parser):
        parser.add_argument('--sweep', choices=('L', 'Mt', 'theta'), default=None)
        parser.add_argument('--values', type=float, nargs='+', default=None,
                            help='sweep values, defaults depend on the swept quantity')
        parser.add_argument('--bound', choices=('doppler', 'delay'), default=None)
        parser.add_argument('--layout', default='equidistant', help='layout measured against the bound')
        parser.add_argument('--theta', type=float, default=np.pi / 3)
        parser.add_argument('--points', type=int, default=401)
        parser.add_argument('--range', type=float, nargs=2, default=None, metavar=('LO', 'HI'))
        parser.add_argument('--width-points', type=int, default=4001,
                            help='angular samples used to measure lobe widths')

    def run(self, ctx, output, options):
        if not options['sweep'] and not options['bound']:
            raise ConfigError('nothing to do, pass --sweep and/or --bound')
        summary = {}
        if options['sweep']:
            summary['sweep'] = self.sweep(ctx, output, options)
        if options['bound']:
            summary['bound'] = self.bound(ctx, output, options)
        return summary, 'ok'

    def _sweep_points(self, ctx, options):
        sweep, values = options['sweep'], options['values']
        if sweep == 'L':
            values = values or list(np.arange(np.ceil((ctx.M_t - 1) / 2), 12.5, 0.5))
            return [(L, ctx.M_t, L, options['theta']) for L in values]
        if sweep == 'Mt':
            values = values or list(range(2, ctx.cfg.K + 1))
            return [(M_t, int(M_t), ctx.L, options['theta']) for M_t in values]
        values = values or DEFAULT_THETAS
        return [(theta, ctx.M_t, ctx.L, theta) for theta in values]

    def sweep(self, ctx, output, options):
        rows = []
        for value, M_t, L, theta in self._sweep_points(ctx, options):
            try:
                predicted = b_min(M_t, L, theta)
            except VisibleRegionError as exc:
                logger.warning('%s', exc)
                predicted = float('nan')
            layout = mmlwd_layout(M_t, L)
            try:
                report = lobe_report(angular_cut(layout, theta, options['width_points'], ctx.cfg))
                measured, psl = report.width, report.psl_db
            except NullNotFound as exc:
                logger.warning('%s', exc)
                measured, psl = float('nan'), float('nan')
            rows.append((value, M_t, L, theta, predicted, measured, psl))
        output.write_csv('theory_sweep_%s.csv' % options['sweep'],
                         ('value', 'M_t', 'L', 'theta', 'b_min', 'measured_width', 'psl_db'), rows)
        return {'quantity': options['sweep'], 'points': len(rows)}

    def bound(self, ctx, output, options):
        axis = options['bound']
        theta = options['theta']
        layout = ctx.layout(options['layout'])
        fixed = AmbiguityQuery(tau=0.0, v=0.0, theta=theta, theta_p=theta)
        slc = compute_slice(axis, fixed, options['range'], options['points'], layout, ctx.code, ctx.cfg)
        if axis == 'doppler':
            bound = doppler_lower_bound(slc.coords, ctx.code, ctx.cfg, M_t=ctx.M_t, theta=theta)
        else:
            bound = delay_lower_bound(slc.coords, ctx.code, ctx.cfg, M_t=ctx.M_t, theta=theta)
        gap = bound_gap(slc, bound)
        if not bound.informative:
            logger.info('theta=%.3g is broadside, the %s bound is not informative there', theta, axis)
        rows = zip(bound.coords, bound.lower, slc.values, slc.values - bound.lower)
        output.write_csv('theory_bound_%s.csv' % axis, ('coord', 'bound', 'magnitude', 'gap'), rows,
                         extra={'axis': axis, 'layout': options['layout'], 'theta': theta,
                                'informative': bound.informative})
        return {'axis': axis, 'min_gap': gap.min_gap, 'violation_count': gap.violation_count,
                'informative': bound.informative}
