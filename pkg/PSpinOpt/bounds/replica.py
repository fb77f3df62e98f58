# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np

from ..core.errors import DomainError
from ..core.mixture import predicates
from .interpolation import InterpolationPath, PathSegment, evaluate_path, monotonicity_report

logger = logging.getLogger(__name__)

DEFAULT_LADDER = (1e-2, 5e-3, 2.5e-3)


def two_replica_matrices():
    v_plus, v_minus = np.array([1., 1.]), np.array([1., -1.])
    return np.outer(v_plus, v_plus), np.outer(v_minus, v_minus)


def three_replica_vectors(eps):
    """
    Orthogonal generators (v3, v-, v*) of J3, J- and J*.
    """
    return (np.array([1., 1. - eps, 1. - eps]), np.array([0., 1., -1.]),
            np.array([2. - 2. * eps, -1., -1.]))


def three_replica_weights():
    """
    Entrywise weights of the covariance of 3 H(s1) - H(s2) - H(s3).
    """
    return np.array([[9., -3., -3.], [-3., 1., 1.], [-3., 1., 1.]])


def t_star(eps):
    """
    Trace of J3, the switching time of the three-replica path.
    """
    return 3. - 4. * eps + 2. * eps ** 2


def _check_even(m):
    if not predicates(m)['is_even']:
        raise DomainError('Replica bounds need an even mixture, got ' + repr(m) + '.')


def two_replica_path(m, op, eps):
    """
    Two-replica path on [0, 2]: Phi' = J+/2 up to 2 - eps and J-/2 after, alpha(t) = zeta(t/2)/2, shift
    (L J+ + l J-)/2 with l = xi''(1)^-1/2.
    """
    if not 0 <= eps < 0.3:
        raise DomainError('Two-replica bound needs eps in [0, 0.3).')
    J_plus, J_minus = two_replica_matrices()
    ell = m.polynomial(2)(1.) ** -0.5
    overlap = (1. - eps / 2.) * J_plus + eps / 2. * J_minus
    segments = [PathSegment(0., 2. - eps, J_plus / 2., 0.5, 0.5, 0.),
                PathSegment(2. - eps, 2., J_minus / 2., 0.5, 0.5, 1. - eps / 2.)]
    return InterpolationPath([np.array([1., 1.]), np.array([1., -1.])], (op.L * J_plus + ell * J_minus) / 2.,
                             np.ones((2, 2)), overlap, segments)


def three_replica_path(m, op, eps, ablate_jstar=False):
    """
    Three-replica path on [0, 3]: Phi' = J3/t* up to t* and J-/2 after, alpha(t) = zeta(t/t*) then zeta(1^-),
    shift L J3 + (l/2) J- + eps^2 J*.

    :param ablate_jstar: drop the eps^2 J* part of the shift.
    """
    if not 0 <= eps < 0.2:
        raise DomainError('Three-replica bound needs eps in [0, 0.2).')
    v3, v_minus, v_star = three_replica_vectors(eps)
    J3, J_minus, J_star = np.outer(v3, v3), np.outer(v_minus, v_minus), np.outer(v_star, v_star)
    ell = m.polynomial(2)(1.) ** -0.5
    ts = t_star(eps)
    shift = op.L * J3 + ell / 2. * J_minus
    if not ablate_jstar:
        shift = shift + eps ** 2 * J_star
    a = 1. - eps
    b = 1. - 4. * eps + 2. * eps ** 2
    overlap = np.array([[1., a, a], [a, 1., b], [a, b, 1.]])
    segments = [PathSegment(0., ts, J3 / ts, 1., 1. / ts, 0.),
                PathSegment(ts, 3., J_minus / 2., 1., 0., 1.)]
    return InterpolationPath([v3, v_minus, v_star], shift, three_replica_weights(), overlap, segments)


def two_replica_bound(m, op, eps, substeps=2):
    """
    Upper bound on 2 GS_2,eps (best pair energy at overlap 1 - eps). Equals 4 GS at eps = 0.

    :param m: even Mixture.
    :param op: OrderParameter minimizing the zero-temperature functional.
    :param eps: overlap defect in [0, 0.3).
    """
    _check_even(m)
    return evaluate_path(two_replica_path(m, op, eps), m, op, substeps=substeps)['bound']


def three_replica_bound(m, op, eps, substeps=2, ablate_jstar=False):
    """
    Upper bound on 2 GS_3,eps (best three-replica energy at the overlap matrix Q3). Equals 2 GS at eps = 0.
    """
    _check_even(m)
    return evaluate_path(three_replica_path(m, op, eps, ablate_jstar=ablate_jstar), m, op, substeps=substeps)['bound']


def matrix_identities_check(n_random=100, eps_values=None, seed=0):
    """
    Checks the inverse identities of the rank-one families by dense inversion:
    (A J+ + B J-)^-1 = (J+/A + J-/B)/4 and Tr((A J3 + B J- + C J*)^-1 (D J3 + E J- + F J*)) = D/A + E/B + F/C,
    plus the orthogonality of the families.
    """
    rng = np.random.default_rng(seed)
    eps_values = np.linspace(0.01, 0.19, 10) if eps_values is None else eps_values

    def draw(size):
        return rng.choice([-1., 1.], size=size) * rng.uniform(0.5, 2., size=size)

    J_plus, J_minus = two_replica_matrices()
    residual2 = 0.
    for A, B in draw((n_random, 2)):
        dense = np.linalg.inv(A * J_plus + B * J_minus)
        residual2 = max(residual2, float(np.max(np.abs(dense - (J_plus / A + J_minus / B) / 4.))))

    residual3 = 0.
    orthogonality = abs(np.sum(J_plus * J_minus))
    for eps in eps_values:
        J3, J_minus3, J_star = [np.outer(v, v) for v in three_replica_vectors(eps)]
        orthogonality = max(orthogonality, abs(np.sum(J3 * J_minus3)), abs(np.sum(J3 * J_star)),
                            abs(np.sum(J_minus3 * J_star)))
        for A, B, C, D, E, F in draw((n_random, 6)):
            dense = np.trace(np.linalg.inv(A * J3 + B * J_minus3 + C * J_star).dot(D * J3 + E * J_minus3 + F * J_star))
            expected = D / A + E / B + F / C
            residual3 = max(residual3, abs(dense - expected) / (1. + abs(expected)))
    return {'two_replica_residual': residual2, 'three_replica_residual': float(residual3),
            'orthogonality': float(orthogonality), 'max_residual': max(residual2, float(residual3))}


def phi_monotonicity_check(m, op, eps, n_times=50):
    """
    PSD monotonicity, trace and endpoint residuals of both interpolation paths.
    """
    return {'two_replica': monotonicity_report(two_replica_path(m, op, eps), n_times),
            'three_replica': monotonicity_report(three_replica_path(m, op, min(eps, 0.19)), n_times)}


def slope_targets(op, m):
    """
    First-order coefficients of both bounds: -zhat(1) (sqrt(xi''(1)) - 1/zhat(1))^2 and
    4 zhat(1) (sqrt(xi''(1)) + 1/zhat(1))^2.
    """
    root = np.sqrt(m.polynomial(2)(1.))
    z = op.zhat1
    return {'two_replica': float(-z * (root - 1. / z) ** 2), 'three_replica': float(4. * z * (root + 1. / z) ** 2)}


def richardson_slope(values, eps_ladder, base):
    """
    Slope at eps = 0 of a function known at a geometric ladder of eps values, by two levels of Richardson
    extrapolation of the difference quotients (value - base)/eps.

    :param values: function values at the ladder.
    :param eps_ladder: decreasing geometric ladder (at least three values).
    :param base: value at eps = 0.
    """
    eps_ladder = np.asarray(eps_ladder, dtype=float)
    raw = (np.asarray(values, dtype=float) - base) / eps_ladder
    if raw.size < 3:
        raise DomainError('Richardson extrapolation needs at least three ladder values.')
    ratio = eps_ladder[0] / eps_ladder[1]
    if not np.allclose(eps_ladder[:-1] / eps_ladder[1:], ratio):
        raise DomainError('The eps ladder must be geometric.')
    level1 = (ratio * raw[1:] - raw[:-1]) / (ratio - 1.)
    level2 = (ratio ** 2 * level1[1:] - level1[:-1]) / (ratio ** 2 - 1.)
    return {'raw': raw.tolist(), 'level1': level1.tolist(), 'slope': float(level2[-1])}


def bound_ladder(m, op, eps_ladder=DEFAULT_LADDER, substeps=2):
    """
    Both bounds along an eps ladder, their extrapolated slopes against the first-order targets and the
    quadrature refinement residual (substeps doubled) at the largest eps.
    """
    _check_even(m)
    base2 = two_replica_bound(m, op, 0., substeps)
    base3 = three_replica_bound(m, op, 0., substeps)
    rows = []
    for eps in eps_ladder:
        rows.append({'eps': float(eps), 'bound2': two_replica_bound(m, op, eps, substeps),
                     'bound3': three_replica_bound(m, op, eps, substeps)})
    slope2 = richardson_slope([r['bound2'] for r in rows], eps_ladder, base2)
    slope3 = richardson_slope([r['bound3'] for r in rows], eps_ladder, base3)
    for r, s2, s3 in zip(rows, slope2['raw'], slope3['raw']):
        r['slope2'] = s2
        r['slope3'] = s3
    eps0 = eps_ladder[0]
    refinement = max(abs(rows[0]['bound2'] - two_replica_bound(m, op, eps0, 2 * substeps)),
                     abs(rows[0]['bound3'] - three_replica_bound(m, op, eps0, 2 * substeps)))
    targets = slope_targets(op, m)
    logger.info('bound_ladder: slope2=%.6f (target %.6f) slope3=%.6f (target %.6f)',
                slope2['slope'], targets['two_replica'], slope3['slope'], targets['three_replica'])
    return {'base2': base2, 'base3': base3, 'rows': rows, 'slope2': slope2['slope'], 'slope3': slope3['slope'],
            'targets': targets, 'refinement': refinement}
