# Variables to be used in the unit tests

import math

# X-band evaluation configuration
SECTION_CONFIG = {
    'f_c': 8.2e9,
    'bandwidth': 8e6,
    'delta_f': 1e6,
    'delta_t': 1e-6,
    'Q': 6,
    'K': 8,
    'T_w': 6e-6,
    'T_P': 20e-6,
    'f_s': 160e6,
    'f_max': 10e6,
}

# Two antennas, two subpulses, four frequencies
TINY_CONFIG = dict(SECTION_CONFIG, Q=2, K=4, T_w=2e-6, f_max=2e6)

# Four antennas, four subpulses, six frequencies
SMALL_CONFIG = dict(SECTION_CONFIG, Q=4, K=6, T_w=4e-6, f_max=3e6)

SEEDS = [0, 1, 2, 3, 4]

# Budgets used in the lobe width checks
MT_VALUES = [4, 6, 8]
L_VALUES = [5.0, 7.0, 9.0]
THETA_VALUES = [0.0, math.pi / 6, math.pi / 3]

# Closed form against the numerical integral, relative to M_t
ORACLE_TOL = 1e-4

# Command settings for quick runs
COMMAND_CONFIG = {
    'radar': TINY_CONFIG,
    'array': {'M_t': 3, 'L': 2.0},
    'rgpm': {'K_max': 5, 'starts': 2},
    'ga': {'G': 3, 'N': 4},
    'detection': {'M_r': 2, 'P_fa': 1e-2, 'snr_grid': [-10.0, 0.0], 'trials': 2000},
}

# Central difference step and tolerance for the gradient checks
FD_STEP = 1e-6
GRADIENT_RTOL = 1e-5

# Weights exercising every objective term
MIXED_ALPHA = (0.5, 0.3, 0.2)
