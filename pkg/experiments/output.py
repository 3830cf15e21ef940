"""
Writers for experiment results. CSV files start with '# key: value' lines
(config hash, seed, normalization, version) and use LF line endings and
shortest round-trip float text, so reruns with the same inputs produce
byte-identical files. JSON goes through the REST framework renderer and
carries the same fields under "meta".
"""
import csv
import logging
import math
import os

import numpy as np
from django.conf import settings
from rest_framework.renderers import JSONRenderer

logger = logging.getLogger(__name__)


def _text(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def plain(value):
    """
    Convert numpy containers and scalars to JSON-ready Python values;
    non-finite floats become None
    """
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


class OutputDir:
    """
    Destination directory of one run, stamping every CSV header and every
    JSON object with the same metadata
    """

    def __init__(self, path, config_hash, seed):
        self.path = path
        self.meta = {
            'config_hash': config_hash,
            'seed': seed,
            'normalization': settings.NORMALIZATION,
            'version': settings.VERSION,
        }
        os.makedirs(path, exist_ok=True)

    def file(self, name):
        return os.path.join(self.path, name)

    def write_csv(self, name, columns, rows, extra=None):
        meta = dict(self.meta)
        meta.update(extra or {})
        path = self.file(name)
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            for key, value in meta.items():
                handle.write('# %s: %s\n' % (key, _text(value)))
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_text(value) for value in row])
        logger.info('wrote %s', path)
        return path

    def write_json(self, name, data):
        """
        Write a JSON object with the run metadata under its 'meta' key,
        merged over any metadata the object already carries
        """
        data = plain(data)
        meta = data.get('meta')
        data['meta'] = dict(meta if isinstance(meta, dict) else {}, **self.meta)
        path = self.file(name)
        content = JSONRenderer().render(data, renderer_context={'indent': 2})
        with open(path, 'wb') as handle:
            handle.write(content)
            handle.write(b'\n')
        logger.info('wrote %s', path)
        return path
