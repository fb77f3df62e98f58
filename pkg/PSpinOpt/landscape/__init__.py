# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .hamiltonian import sample, HamiltonianInstance, spherical_ops
from .ascent import ascend, LandscapeRecord
