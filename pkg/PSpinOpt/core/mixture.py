# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError, InvalidMixtureError, InvalidConfigError

logger = logging.getLogger(__name__)


class Mixture(object):
    """
    Mixture function xi(x) = sum_p gamma_p^2 x^p of a spherical mixed p-spin model.

    :param coeffs: dictionary mapping the degree p >= 1 to gamma_p >= 0 (not squared).

    .. Note:: instances are immutable, the coefficients are copied on construction.
    """

    def __init__(self, coeffs):
        clean = {}
        for p, gamma in dict(coeffs).items():
            if isinstance(p, bool) or int(p) != p or int(p) < 1:
                raise InvalidMixtureError('Invalid degree ' + str(p) + ': degrees are integers >= 1.')
            gamma = float(gamma)
            if not np.isfinite(gamma) or gamma < 0:
                raise InvalidMixtureError('Coefficient of degree ' + str(p) + ' must be finite and nonnegative.')
            if gamma > 0:
                clean[int(p)] = gamma
        if not any(p >= 2 for p in clean):
            raise InvalidMixtureError('The mixture needs a positive coefficient of degree >= 2.')
        if 1 in clean:
            logger.warning('gamma_1 > 0 is stored but the landscape and dynamics checks are not certified for it.')

        self._coeffs = clean
        self.max_degree = max(clean)
        xi_coef = np.zeros(self.max_degree + 1)
        for p, gamma in clean.items():
            xi_coef[p] = gamma ** 2
        self._polys = [Polynomial(xi_coef)]
        for _ in range(4):
            self._polys.append(self._polys[-1].deriv())

    @classmethod
    def fromConfig(cls, config):
        """
        Builds a mixture from a config block of the form {"coeffs": {"2": 1.0, "4": 0.5}}.
        """
        if not isinstance(config, dict) or 'coeffs' not in config:
            raise InvalidConfigError('mixture: a "coeffs" table is required.')
        coeffs = {}
        for key, value in config['coeffs'].items():
            if not isinstance(key, str) or not key.isdigit():
                raise InvalidConfigError('mixture.coeffs.' + str(key) + ': degrees are decimal strings.')
            coeffs[int(key)] = value
        try:
            return cls(coeffs)
        except InvalidMixtureError as e:
            raise InvalidConfigError('mixture.coeffs: ' + str(e))

    def to_config(self):
        return {'coeffs': dict((str(p), g) for p, g in sorted(self._coeffs.items()))}

    @property
    def coeffs(self):
        return dict(self._coeffs)

    @property
    def degrees(self):
        return sorted(self._coeffs)

    def polynomial(self, order=0):
        """
        numpy Polynomial of the derivative of order *order* of xi (no domain check).
        """
        return self._polys[order]

    def __call__(self, q, order=0):
        return eval_derivatives(self, q, order)

    def __eq__(self, other):
        return isinstance(other, Mixture) and self._coeffs == other._coeffs

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(tuple(sorted(self._coeffs.items())))

    def __repr__(self):
        return 'Mixture(' + repr(self.coeffs) + ')'


def eval_derivatives(m, q, order=0):
    """
    Evaluates the derivative of order *order* (0..3) of xi at q in [0, 1].

    :param m: mixture.
    :param q: scalar or array of overlaps in [0, 1].
    :param order: derivative order.
    """
    if isinstance(order, bool) or order not in (0, 1, 2, 3):
        raise DomainError('Derivative order must be 0, 1, 2 or 3, got ' + str(order) + '.')
    q_arr = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(q_arr)) or np.any(q_arr < 0) or np.any(q_arr > 1):
        raise DomainError('Overlaps must lie in [0, 1].')
    value = m.polynomial(order)(q_arr)
    return float(value) if np.ndim(value) == 0 else value


def dilate(m, t):
    """
    Returns the mixture xi_t(q) = xi(t^2 q), that is gamma_p -> gamma_p t^p.
    """
    if not np.isfinite(t) or t <= 0:
        raise DomainError('Dilation parameter must be positive, got ' + str(t) + '.')
    if t == 1:
        return Mixture(m.coeffs)
    return Mixture(dict((p, g * t ** p) for p, g in m.coeffs.items()))


def scale(m, beta):
    """
    Returns the mixture beta^2 xi used by the positive-temperature functional.
    """
    if not np.isfinite(beta) or beta <= 0:
        raise DomainError('Inverse temperature must be positive, got ' + str(beta) + '.')
    return Mixture(dict((p, g * beta) for p, g in m.coeffs.items()))


def predicates(m):
    """
    Structural predicates. Finite-degree mixtures are never generic.
    """
    is_even = all(p % 2 == 0 for p in m.degrees)
    return {'is_even': is_even, 'is_generic': False, 'is_even_generic': False}


def e_infinity_pure(p):
    """
    Threshold energy 2 sqrt((p-1)/p) of the pure p-spin model.
    """
    if isinstance(p, bool) or int(p) != p or p < 3:
        raise DomainError('The pure threshold energy needs an integer p >= 3.')
    return 2. * np.sqrt((p - 1.) / p)


def e_infinity_pm(m):
    """
    Energies (E_inf^-, E_inf^+) between which marginally stable critical points can exist.

    Returns None when the discriminant is negative.
    """
    xi = m.polynomial(0)(1.)
    d1 = m.polynomial(1)(1.)
    d2 = m.polynomial(2)(1.)
    if d1 + d2 <= 0:
        return None
    alpha2 = d2 + d1 - d1 ** 2
    disc = 4. * d2 * d1 ** 2 - (d2 + d1) * (2. * (d2 - d1 + d1 ** 2) - alpha2 * np.log(d2 / d1))
    if disc < 0:
        if disc > -1e-12 * (1. + abs(4. * d2 * d1 ** 2)):
            disc = 0.
        else:
            logger.info('Threshold discriminant is negative (%g) for %r.', disc, m)
            return None
    root = np.sqrt(disc)
    return ((2. * d1 * np.sqrt(d2) - root) / (d1 + d2), (2. * d1 * np.sqrt(d2) + root) / (d1 + d2))


def full_rsb_density(m, q):
    """
    Second derivative of xi''(q)^(-1/2): the density of zeta on a full-RSB interval.
    """
    q = np.asarray(q, dtype=float)
    d2 = m.polynomial(2)(q)
    d3 = m.polynomial(3)(q)
    d4 = m.polynomial(4)(q)
    with np.errstate(divide='ignore', invalid='ignore'):
        density = 0.75 * d2 ** (-2.5) * d3 ** 2 - 0.5 * d2 ** (-1.5) * d4
    return density


def replica_symmetric_value(m):
    """
    Value sqrt(xi'(1)) of the functional at zeta = 0, L = 1/sqrt(xi'(1)).
    """
    return float(np.sqrt(m.polynomial(1)(1.)))
