# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Configuration.

Run defaults are module constants. Provider settings are resolved from, in
increasing precedence: built-in defaults, a YAML file, the environment and
explicit overrides (command-line flags).

Provider file
-------------

    endpoint: https://api.example.com/openai/v1
    model: llama-3.1-8b-instant
    judge_model: llama-3.1-8b-instant
    timeout: 60
    prices:
      input_per_million: 0.05
      output_per_million: 0.08

"""
import logging
import os

from dataclasses import dataclass
from dataclasses import fields
from dataclasses import replace

import yaml

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 4000
DEFAULT_MAX_DEPTH = 3
DEFAULT_TEMPERATURE = 0.3
DEFAULT_SAMPLE_SIZE = 500
DEFAULT_SEED = 42
DEFAULT_CHARS_PER_TOKEN = 4
DEFAULT_MAX_RETRIES = 3
DEFAULT_MAX_IN_FLIGHT = 8
DEFAULT_TIMEOUT = 60.0

ENV_ENDPOINT = "GWQA_ENDPOINT"
ENV_API_KEY = "GWQA_API_KEY"
ENV_MODEL = "GWQA_MODEL"
ENV_JUDGE_MODEL = "GWQA_JUDGE_MODEL"


class ProviderConfigError(Exception):
    pass


@dataclass(frozen=True)
class ProviderSettings:
    endpoint: str = None
    api_key: str = None
    model: str = None
    judge_model: str = None
    timeout: float = DEFAULT_TIMEOUT
    input_price_per_million: float = 0.0
    output_price_per_million: float = 0.0

    @property
    def effective_judge_model(self):
        return self.judge_model or self.model

    def cost(self, prompt_tokens, completion_tokens):
        """Return the estimated cost of the given token totals.
        """
        return (prompt_tokens * self.input_price_per_million +
                completion_tokens * self.output_price_per_million) / 1e6

    def __repr__(self):
        # Never print the key.
        key = "***" if self.api_key else None

        return "ProviderSettings(endpoint={!r}, api_key={!r}, model={!r}, judge_model={!r})".format(
            self.endpoint, key, self.model, self.judge_model)


def _from_yaml(path):
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}

    if not isinstance(data, dict):
        raise ProviderConfigError("{}: expected a mapping".format(path))

    values = {}

    for key in ("endpoint", "api_key", "model", "judge_model"):
        if data.get(key) is not None:
            values[key] = str(data[key])

    if data.get("timeout") is not None:
        values["timeout"] = float(data["timeout"])

    prices = data.get("prices") or {}

    if "input_per_million" in prices:
        values["input_price_per_million"] = float(prices["input_per_million"])

    if "output_per_million" in prices:
        values["output_price_per_million"] = float(prices["output_per_million"])

    return values


def _from_env(environ):
    values = {}

    env_keys = {
        "endpoint":    ENV_ENDPOINT,
        "api_key":     ENV_API_KEY,
        "model":       ENV_MODEL,
        "judge_model": ENV_JUDGE_MODEL,
    }

    for key, env_key in env_keys.items():
        if environ.get(env_key):
            values[key] = environ[env_key]

    return values


def load_provider_settings(path=None, environ=None, **overrides):
    """Resolve provider settings.
    """
    settings = ProviderSettings()

    if path:
        settings = replace(settings, **_from_yaml(path))

    settings = replace(settings, **_from_env(os.environ if environ is None else environ))

    known = set(f.name for f in fields(ProviderSettings))
    unknown = set(overrides) - known

    if unknown:
        raise ProviderConfigError("unknown provider settings: {}".format(", ".join(sorted(unknown))))

    settings = replace(settings, **dict((k, v) for k, v in overrides.items() if v is not None))

    logger.debug("Provider settings: %r", settings)

    return settings
