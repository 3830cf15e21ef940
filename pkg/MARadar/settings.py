"""
Django settings for MARadar project.

The project carries no web surface; Django provides the settings layer, the
management command runner, the ORM for the run ledger and the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

VERSION = '1.0.0'

# Only used to satisfy Django's startup checks, nothing is signed.
SECRET_KEY = os.environ.get('MAFH_SECRET_KEY', 'maradar-local-only')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'radar.apps.RadarConfig',
    'optimizer.apps.OptimizerConfig',
    'experiments.apps.ExperimentsConfig',
    'rest_framework',
    'django.contrib.auth',
    'django.contrib.contenttypes',
]

MIDDLEWARE = []


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging

LOG_LEVEL = os.environ.get('MAFH_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'radar': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
        'optimizer': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
        'experiments': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
    },
}


# Worker cap for independent runs (multi-start, sweeps), 0 means one per CPU

MAFH_THREADS = int(os.environ.get('MAFH_THREADS', '0'))


# Radar defaults (X-band evaluation setup). Frequencies in Hz, times in s,
# array lengths in multiples of the wavelength.

RADAR_DEFAULTS = {
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

ARRAY_DEFAULTS = {
    'M_t': 8,
    'L': 7.0,
}

DETECTION_DEFAULTS = {
    'M_r': 8,
    'P_fa': 1e-4,
    'snr_grid': [-30.0, -27.0, -24.0, -21.0, -18.0, -15.0, -12.0, -9.0, -6.0],
    'trials': 1000000,
}

OBJECTIVE_DEFAULTS = {
    'alpha': [1.0, 0.0, 0.0],
    'theta_eval': None,
}

RGPM_DEFAULTS = {
    'T': 1e-2,
    'K_max': 150,
    'sigma': 1e-4,
    'rho': 0.5,
    'omega0': 1.0,
    'omega_min': 1e-12,
    'active_tol': 1e-9,
    'starts': 4,
    'max_lobe_width': None,
}

GA_DEFAULTS = {
    'G': 100,
    'N': 16,
    'p_cross': 0.9,
    'p_mut': 0.2,
    'mutation_scale': 0.1,
    'seed': 0,
}

ORACLE = {
    'RULE': 'simpson',
    'OVERSAMPLE': 4,
}

NORMALIZATION = 'sum_divided_by_Q'
