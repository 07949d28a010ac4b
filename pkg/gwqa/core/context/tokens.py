# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
Token counters.

The approximate counter charges ceil(len(s) / chars_per_token) tokens and is
the default everywhere. Any object with a `count(text)` method can be plugged
in instead; `TiktokenCounter` is the model-exact one.

"""
import math

from fractions import Fraction

TOKEN_COUNTER_APPROXIMATE = "approximate"
TOKEN_COUNTER_PLUGGABLE = "pluggable"


class TokenCounter(object):

    """Generic Token Counter Interface.
    """

    mode = TOKEN_COUNTER_PLUGGABLE

    def count(self, text):
        """Return the number of tokens in text.
        """
        raise NotImplementedError()

    def __call__(self, text):
        return self.count(text)


class ApproximateTokenCounter(TokenCounter):

    """Character-length based token counter.
    """

    mode = TOKEN_COUNTER_APPROXIMATE

    def __init__(self, chars_per_token=4):
        chars_per_token = Fraction(chars_per_token)

        if chars_per_token <= 0:
            raise ValueError("chars_per_token must be positive")

        self._chars_per_token = chars_per_token

    @property
    def chars_per_token(self):
        return self._chars_per_token

    def count(self, text):
        if not text:
            return 0

        return math.ceil(Fraction(len(text)) / self._chars_per_token)

    def __repr__(self):
        return "ApproximateTokenCounter(chars_per_token={})".format(self._chars_per_token)


class TiktokenCounter(TokenCounter):

    """Model-exact token counter backed by tiktoken.
    """

    def __init__(self, encoding_name="cl100k_base"):
        import tiktoken

        self._encoding_name = encoding_name
        self._encoding = tiktoken.get_encoding(encoding_name)

    def count(self, text):
        if not text:
            return 0

        return len(self._encoding.encode(text, disallowed_special=()))

    def __repr__(self):
        return "TiktokenCounter(encoding_name={!r})".format(self._encoding_name)


def count_tokens(counter, text):
    return counter.count(text)
