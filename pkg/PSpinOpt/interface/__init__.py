# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .config_parser import parser
from .driver import PSpinDriver
from .output import OutputEng
