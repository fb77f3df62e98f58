# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

class InvalidConfigError(Exception):
    pass

class InvalidVariableNameError(Exception):
    pass

class DomainError(ValueError):
    pass

class InvalidMixtureError(DomainError):
    pass

class OutsideConeError(DomainError):
    pass

class DimensionMismatchError(ValueError):
    pass

class CapacityError(Exception):
    pass

class SingularPathError(ArithmeticError):
    pass

class PreconditionError(ValueError):
    pass


class StabilityError(Exception):
    """
    Raised when the Langevin step size violates dt*(beta*|grad H|/sqrt(N) + 1) <= 0.1.

    :param message: description of the violation.
    :param suggested_dt: a step size that satisfies the guard at the failing state.
    """
    def __init__(self, message, suggested_dt=None):
        super(StabilityError, self).__init__(message)
        self.suggested_dt = suggested_dt


class NonConvergenceError(Exception):
    """
    Raised by the solvers when the iteration budget is exhausted.

    :param message: description of the failure.
    :param best: best iterate found (an order parameter object).
    :param residuals: dictionary with the residuals at the best iterate.
    """
    def __init__(self, message, best=None, residuals=None):
        super(NonConvergenceError, self).__init__(message)
        self.best = best
        self.residuals = residuals if residuals is not None else {}
