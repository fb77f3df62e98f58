# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .mixture import Mixture
from .order_parameter import OrderParameter, PositiveTempOrderParameter
