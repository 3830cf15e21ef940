"""
Layered experiment configuration: defaults from settings, then an optional
JSON file, then --set section.key=value overrides. The merged document is
validated section by section and hashed for the output headers.
"""
import hashlib
import json
import logging
from dataclasses import dataclass

from django.conf import settings

from optimizer.objective import check_weights
from optimizer.serializers import GaParamsSerializer, RgpmParamsSerializer
from radar.domain import FhCode, equidistant_layout, generate_fh_code, random_feasible_layout
from radar.exceptions import CodeError, RadarError
from radar.serializers import AntennaLayoutSerializer, FhCodeSerializer, RadarConfigSerializer
from radar.theory import mmlwd_layout
from experiments.serializers import ArraySettingsSerializer

logger = logging.getLogger(__name__)

SECTIONS = {
    'radar': 'RADAR_DEFAULTS',
    'array': 'ARRAY_DEFAULTS',
    'detection': 'DETECTION_DEFAULTS',
    'objective': 'OBJECTIVE_DEFAULTS',
    'rgpm': 'RGPM_DEFAULTS',
    'ga': 'GA_DEFAULTS',
}

# Free-form section: either {"c": [[...]], "K": ...} or {"path": "code.json"}; empty means generate
CODE_SECTION = 'code'


class ConfigError(RadarError):
    pass


def defaults():
    document = {section: dict(getattr(settings, name)) for section, name in SECTIONS.items()}
    document[CODE_SECTION] = {}
    return document


def _merge(document, section, values, origin):
    if section not in document:
        raise ConfigError('unknown configuration section %r in %s' % (section, origin))
    if not isinstance(values, dict):
        raise ConfigError('section %r in %s must be an object' % (section, origin))
    document[section].update(values)


def parse_override(item):
    key, _, raw = item.partition('=')
    section, _, name = key.partition('.')
    try:
        value = json.loads(raw)
    except ValueError:
        value = raw
    return section, name, value


def load_document(path=None, overrides=()):
    document = defaults()
    if path:
        with open(path, encoding='utf-8') as handle:
            try:
                loaded = json.load(handle)
            except ValueError as exc:
                raise ConfigError('%s is not valid JSON: %s' % (path, exc))
        for section, values in loaded.items():
            _merge(document, section, values, path)
    for item in overrides:
        section, name, value = parse_override(item)
        _merge(document, section, {name: value}, '--set %s' % item)
    return document


def config_hash(document):
    canonical = json.dumps(document, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def _validated(serializer_class, data):
    serializer = serializer_class(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer


@dataclass(frozen=True, eq=False)
class RunContext:
    document: dict
    config_hash: str
    seed: int
    cfg: object
    M_t: int
    L: float
    code: FhCode
    alpha: tuple
    theta_eval: float
    rgpm: object
    ga: object

    def layout(self, name):
        """
        Resolve a layout name: equidistant, mmlwd, random, or file:PATH
        with a JSON layout document
        """
        if name == 'equidistant':
            return equidistant_layout(self.M_t, self.L)
        if name == 'mmlwd':
            return mmlwd_layout(self.M_t, self.L)
        if name == 'random':
            return random_feasible_layout(self.M_t, self.L, self.seed)
        if name.startswith('file:'):
            path = name[len('file:'):]
            with open(path, encoding='utf-8') as handle:
                try:
                    data = json.load(handle)
                except ValueError as exc:
                    raise ConfigError('layout file %s is not valid JSON: %s' % (path, exc))
            if not isinstance(data, dict) or not isinstance(data.get('d'), list):
                raise ConfigError('layout file %s must hold an object with a "d" list of spacings' % path)
            data.setdefault('M_t', len(data['d']) + 1)
            data.setdefault('L', self.L)
            layout = _validated(AntennaLayoutSerializer, data).save()
            if layout.M_t != self.M_t:
                raise ConfigError('layout file has M_t=%d but the array section says %d' % (layout.M_t, self.M_t))
            return layout
        raise ConfigError('unknown layout %r' % name)


def _load_code(section, cfg, M_t, seed):
    if 'path' in section:
        code = FhCode.from_file(section['path'])
    elif 'c' in section:
        code = _validated(FhCodeSerializer, {'K': section.get('K', cfg.K), 'c': section['c']}).save()
    else:
        code = generate_fh_code(cfg, M_t, seed)
    if code.M_t != M_t or code.Q != cfg.Q or code.K != cfg.K:
        raise CodeError('code shape %dx%d (K=%d) does not match M_t=%d, Q=%d, K=%d'
                        % (code.M_t, code.Q, code.K, M_t, cfg.Q, cfg.K))
    return code


def build_context(document, seed=0):
    """
    Validate every section of a merged document. Raises
    rest_framework.exceptions.ValidationError or a RadarError.
    """
    cfg = _validated(RadarConfigSerializer, document['radar']).save()
    array = _validated(ArraySettingsSerializer, document['array']).validated_data
    objective = document['objective']
    alpha, theta_eval = check_weights(objective.get('alpha', ()), objective.get('theta_eval'))
    rgpm = _validated(RgpmParamsSerializer, document['rgpm']).save()
    ga = _validated(GaParamsSerializer, document['ga']).save()
    code = _load_code(document[CODE_SECTION], cfg, array['M_t'], seed)
    logger.debug('code for M_t=%d: %s', array['M_t'], code.c.tolist())
    return RunContext(document=document, config_hash=config_hash(document), seed=seed, cfg=cfg,
                      M_t=array['M_t'], L=array['L'], code=code, alpha=alpha, theta_eval=theta_eval,
                      rgpm=rgpm, ga=ga)


def parse_floats(text, separator=','):
    try:
        return [float(item) for item in text.split(separator)]
    except ValueError:
        raise ConfigError('expected %r separated numbers, got %r' % (separator, text))


def parse_range(text):
    """
    Inclusive numeric range 'from:to:step'
    """
    values = parse_floats(text, ':')
    if len(values) != 3 or values[2] <= 0 or values[1] < values[0]:
        raise ConfigError('range %r must be from:to:step with a positive step' % text)
    start, stop, step = values
    count = int(round((stop - start) / step)) + 1
    return [start + i * step for i in range(count) if start + i * step <= stop + 1e-9 * step]
