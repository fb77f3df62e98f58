#!/usr/bin/env python
import matplotlib
matplotlib.use('agg')

import sys, unittest, warnings
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    suite = unittest.defaultTestLoader.discover('PSpinOpt/testing', top_level_dir='.')
result = unittest.TextTestRunner(verbosity=1).run(suite)
sys.exit(0 if result.wasSuccessful() else 1)
