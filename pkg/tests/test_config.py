# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import os
import shutil
import tempfile
import unittest

from gwqa.config import ProviderConfigError
from gwqa.config import load_provider_settings

PROVIDER_YAML = """\
endpoint: https://api.example.com/v1
model: small-model
timeout: 30
prices:
  input_per_million: 0.05
  output_per_million: 0.08
"""


class ProviderSettingsTests(unittest.TestCase):

    def setUp(self):
        self._dir = tempfile.mkdtemp()
        self._path = os.path.join(self._dir, "provider.yaml")

        with open(self._path, "w") as f:
            f.write(PROVIDER_YAML)

    def tearDown(self):
        shutil.rmtree(self._dir)

    def test_defaults(self):
        settings = load_provider_settings(environ={})

        self.assertIsNone(settings.endpoint)
        self.assertEqual(settings.timeout, 60.0)
        self.assertEqual(settings.cost(1000, 1000), 0.0)

    def test_yaml(self):
        settings = load_provider_settings(self._path, environ={})

        self.assertEqual(settings.endpoint, "https://api.example.com/v1")
        self.assertEqual(settings.model, "small-model")
        self.assertEqual(settings.timeout, 30.0)
        self.assertEqual(settings.effective_judge_model, "small-model")
        self.assertAlmostEqual(settings.cost(1000000, 1000000), 0.13)

    def test_precedence(self):
        environ = {"GWQA_MODEL": "env-model", "GWQA_API_KEY": "secret", "GWQA_JUDGE_MODEL": "judge"}

        settings = load_provider_settings(self._path, environ=environ)

        self.assertEqual(settings.model, "env-model")
        self.assertEqual(settings.effective_judge_model, "judge")

        settings = load_provider_settings(self._path, environ=environ, model="flag-model", judge_model=None)

        self.assertEqual(settings.model, "flag-model")
        self.assertEqual(settings.judge_model, "judge")

    def test_key_masked(self):
        settings = load_provider_settings(environ={"GWQA_API_KEY": "secret"})

        self.assertEqual(settings.api_key, "secret")
        self.assertNotIn("secret", repr(settings))

    def test_unknown_override(self):
        with self.assertRaises(ProviderConfigError):
            load_provider_settings(environ={}, colour="blue")

    def test_not_a_mapping(self):
        with open(self._path, "w") as f:
            f.write("- a\n- b\n")

        with self.assertRaises(ProviderConfigError):
            load_provider_settings(self._path, environ={})


def main():
    unittest.main()


if __name__ == '__main__':
    main()
