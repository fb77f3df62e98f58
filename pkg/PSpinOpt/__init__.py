# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from . import core
from . import parisi
from . import optimization
from . import landscape
from . import bounds
from . import dynamics
from . import util
from . import interface

from .core.mixture import Mixture
from .__version__ import __version__
