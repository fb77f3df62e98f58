# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .langevin import LangevinConfig, integrate, run_paths
