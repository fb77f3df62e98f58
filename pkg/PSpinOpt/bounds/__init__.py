# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .replica import two_replica_bound, three_replica_bound, matrix_identities_check
