# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

from .gwqa import GWQA

__version__ = "0.1.0"
