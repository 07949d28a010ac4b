# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

import random
import string
import unittest

from gwqa.core.context import ApproximateTokenCounter
from gwqa.core.context import count_tokens


class ApproximateTokenCounterTests(unittest.TestCase):

    def setUp(self):
        self._counter = ApproximateTokenCounter()

    def test_empty(self):
        self.assertEqual(self._counter.count(""), 0)

    def test_rounding(self):
        self.assertEqual(self._counter.count("abc"), 1)
        self.assertEqual(self._counter.count("abcd"), 1)
        self.assertEqual(self._counter.count("abcde"), 2)
        self.assertEqual(self._counter.count("x" * 4000), 1000)

    def test_fractional_ratio(self):
        counter = ApproximateTokenCounter(3.5)

        self.assertEqual(counter.count("x" * 7), 2)
        self.assertEqual(counter.count("x" * 8), 3)

    def test_invalid_ratio(self):
        with self.assertRaises(ValueError):
            ApproximateTokenCounter(0)

    def test_callable(self):
        self.assertEqual(self._counter("abcdefgh"), 2)
        self.assertEqual(count_tokens(self._counter, "abcdefgh"), 2)

    def test_concatenation_bounds(self):
        rng = random.Random(3)

        for _ in range(500):
            a = "".join(rng.choice(string.printable) for _ in range(rng.randint(0, 60)))
            b = "".join(rng.choice(string.printable) for _ in range(rng.randint(0, 60)))

            count_ab = self._counter.count(a + b)

            self.assertGreaterEqual(count_ab, self._counter.count(a))
            self.assertLessEqual(count_ab, self._counter.count(a) + self._counter.count(b) + 1)

            if a:
                self.assertGreaterEqual(self._counter.count(a), 1)


def main():
    unittest.main()


if __name__ == '__main__':
    main()
