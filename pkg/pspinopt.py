#!/usr/bin/env python
# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import sys

from PSpinOpt.interface.cli import main

if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
