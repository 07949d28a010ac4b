# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

from .gateway import AuthenticationError
from .gateway import ChatProvider
from .gateway import ChatRequest
from .gateway import ChatResponse
from .gateway import GatewayError
from .gateway import HttpChatProvider
from .gateway import LlmGateway
from .gateway import ProtocolError
from .gateway import ProviderTimeoutError
from .gateway import ProviderUnavailableError
from .gateway import RateLimitError
from .gateway import RunAccounting
from .gateway import StubProvider
from .gateway import TranscriptLog
from .gateway import fingerprint
