"""Instruction-conditioned trajectory toolkit.

Thin wrappers over the C++ core. Scenario corpora and datasets are JSONL text;
results come back as parsed JSON (lists of row dicts, or a report dict).
Configs may be passed as a dict or as JSON text.
"""

import json

from . import _core
from ._core import Error, InputError  # noqa: F401

# One exception class per error kind, e.g. SchemaError, InvalidAnchor.
for _name in dir(_core):
    _obj = getattr(_core, _name)
    if isinstance(_obj, type) and issubclass(_obj, Exception):
        globals()[_name] = _obj

speed_category = _core.speed_category
accel_category = _core.accel_category
reachable_range = _core.reachable_range


def _config(config):
    if config is None or isinstance(config, str):
        return config
    return json.dumps(config)


def _rows(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def extract(scenarios, config=None):
    return _rows(_core.extract(scenarios, _config(config)))


def feasibility(scenarios, config=None):
    return _rows(_core.feasibility(scenarios, _config(config)))


def gen_instructions(scenarios, mode="direction", guidelines=None, sample=False, count=None,
                     config=None):
    if guidelines is not None and not isinstance(guidelines, str):
        guidelines = json.dumps(guidelines)
    return _core.gen_instructions(scenarios, mode, guidelines, sample, count, _config(config))


def evaluate(dataset, predictions, scenarios=None, config=None):
    return json.loads(_core.evaluate(dataset, predictions, scenarios, _config(config)))


def stats(dataset, config=None):
    return json.loads(_core.stats(dataset, _config(config)))


def synth(suite, count, seed=0, config=None):
    """Returns (corpus, expected, predictions) as JSONL text."""
    return _core.synth(suite, count, seed, _config(config))


def resolved_config(config=None):
    return json.loads(_core.resolved_config(_config(config)))


def content_hash(data):
    if isinstance(data, str):
        data = data.encode()
    return _core.content_hash(data)
