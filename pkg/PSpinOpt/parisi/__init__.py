# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .zero_temperature import minimize_Q, evaluate_Q, stationarity_report, spectral_prediction
from .positive_temperature import minimize_cs_positive_temp, evaluate_cs_positive_temp
