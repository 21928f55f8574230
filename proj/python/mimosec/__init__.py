"""Python front end for the mimosec C++ core.

Config-taking helpers accept either a dict or a JSON string; dicts are
merged over the built-in defaults by the C++ side.
"""

import json as _json

from ._mimosec import (  # noqa: F401
    ParameterError,
    UnknownFigure,
    ViolatedInvariant,
    __version__,
    verify,
    waterfilling,
)
from . import _mimosec as _core


def _as_json(config):
    if config is None:
        return _core.default_config()
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def default_config():
    """Built-in defaults as a dict."""
    return _json.loads(_core.default_config())


def validate_config(config):
    return _core.validate_config(_as_json(config))


def figure_csv(id, overrides=(), seed=1, workers=1):
    return _core.figure_csv(id, list(overrides), seed, workers)


def simulate_csv(config=None, blocks=100):
    return _core.simulate_csv(_as_json(config), blocks)


def thresholds_csv(config=None):
    return _core.thresholds_csv(_as_json(config))


def mc_csv(config=None, experiment="sinr", trials=1000):
    return _core.mc_csv(_as_json(config), experiment, trials)


def s_epsilon(config, epsilon, delta):
    return _core.s_epsilon(_as_json(config), epsilon, delta)


def v_of_r(config, rates, delta):
    return _core.v_of_r(_as_json(config), list(rates), delta)


def g_epsilon(config, epsilon):
    return _core.g_epsilon(_as_json(config), epsilon)


def rate_no_training_jamming(config, m, user=0):
    return _core.rate_no_training_jamming(_as_json(config), m, user)


def defense_rate(config, m, user=0):
    return _core.defense_rate(_as_json(config), m, user)


def leakage_delta_conjugate(config, m, delta, user=0):
    return _core.leakage_delta_conjugate(_as_json(config), m, delta, user)


def decodable_rate_delta(config, m, delta, user=0):
    return _core.decodable_rate_delta(_as_json(config), m, delta, user)
