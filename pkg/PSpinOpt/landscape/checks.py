# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np
from scipy.optimize import brentq

from ..core.errors import DomainError, PreconditionError

logger = logging.getLogger(__name__)

NO_GROUND_STATES = 'no δ-approximate ground states found'


def semicircle_cdf(x, radius):
    x = np.clip(x / radius, -1., 1.)
    return 0.5 + (x * np.sqrt(1. - x * x) + np.arcsin(x)) / np.pi


def semicircle_quantile(fraction, radius):
    """
    Inverse CDF of the semicircle law supported on [-radius, radius].

    :param fraction: probability in [0, 1].
    :param radius: radius of the support.
    """
    if not 0 <= fraction <= 1:
        raise DomainError('Quantile fraction must lie in [0, 1].')
    if radius <= 0:
        raise DomainError('Semicircle radius must be positive.')
    if fraction == 0:
        return -float(radius)
    if fraction == 1:
        return float(radius)
    return float(brentq(lambda x: semicircle_cdf(x, radius) - fraction, -radius, radius, xtol=1e-14))


def bulk_edge_check(rec, m, k_frac=0.02, k0=1):
    """
    Compares lambda_j and lambda_{N-j}, j = max(k0, ceil(k_frac N)) capped at N/2, of the spherical Hessian
    with the predicted bulk edges +-2 sqrt(xi''(1)) - radial. The quantile-corrected predictions place the j-th
    eigenvalue at the matching semicircle quantile instead of the edge.

    :param rec: LandscapeRecord.
    :param m: Mixture.
    """
    N = rec.N
    j = min(max(int(k0), int(np.ceil(k_frac * N))), N // 2)
    radius = 2. * np.sqrt(m.polynomial(2)(1.))
    predicted_plus = radius - rec.radial
    predicted_minus = -radius - rec.radial
    lam_j = rec.eig(j)
    lam_low = rec.eig(N - j)
    size = float(N - 1)
    return {'j': j, 'radial': rec.radial,
            'lambda_j': lam_j, 'lambda_N_minus_j': lam_low,
            'predicted_plus': predicted_plus, 'predicted_minus': predicted_minus,
            'gap_plus': abs(lam_j - predicted_plus), 'gap_minus': abs(lam_low - predicted_minus),
            'corrected_plus': semicircle_quantile(1. - (j - 0.5) / size, radius) - rec.radial,
            'corrected_minus': semicircle_quantile((j - 0.5) / size, radius) - rec.radial}


def best_records(recs, fraction=0.1):
    """
    Deepest records: the top *fraction* (at least one) by energy.
    """
    ordered = sorted(recs, key=lambda r: r.energy_per_N, reverse=True)
    return ordered[:max(1, int(np.ceil(fraction * len(ordered))))]


def default_delta(recs, pred):
    """
    Achieved energy gap to GS plus 0.01.
    """
    best = max(r.energy_per_N for r in recs)
    return max(0., pred.gs - best) + 0.01


def prediction_check(recs, pred, delta=None, is_even=False):
    """
    Compares the records with energy_per_N >= GS - delta against the spectral prediction: radial derivative,
    bulk edge at j = ceil(delta N) capped at N-1, top outlier (even mixtures only) and bottom edge.

    :param recs: list of LandscapeRecord.
    :param pred: SpectralPrediction.
    :param delta: energy window, defaults to the achieved gap plus 0.01.
    :param is_even: whether the no-outlier statement applies.
    """
    if delta is None:
        delta = default_delta(recs, pred) if recs else 0.01
    if not delta > 0:
        raise DomainError('Energy window delta must be positive.')
    kept = [r for r in recs if r.energy_per_N >= pred.gs - delta]
    best = max([r.energy_per_N for r in recs]) if recs else None
    if not kept:
        logger.info('prediction_check: none of %d records within delta=%g of GS=%.6f', len(recs), delta, pred.gs)
        return {'status': NO_GROUND_STATES, 'count': 0, 'delta': delta, 'gs': pred.gs, 'best_energy': best}

    rows = []
    for r in kept:
        # the spherical Hessian has N-1 eigenvalues
        j = min(max(1, int(np.ceil(delta * r.N))), r.N - 1)
        rows.append({'energy_per_N': r.energy_per_N,
                     'radial_gap': abs(r.radial - pred.r),
                     'bulk_gap': abs(r.eig(j) - pred.lambda_plus),
                     'outlier_gap': abs(r.lambda_1 - pred.lambda_plus),
                     'bottom_gap': abs(r.lambda_min - pred.lambda_minus)})
    report = {'status': 'ok', 'count': len(kept), 'delta': delta, 'gs': pred.gs, 'best_energy': best,
              'outlier_applies': bool(is_even), 'records': rows}
    for key in ('radial_gap', 'bulk_gap', 'outlier_gap', 'bottom_gap'):
        report['max_' + key] = max(row[key] for row in rows)
    report['max_lambda_1'] = max(r.lambda_1 for r in kept)
    return report


def reference_matrix(d):
    """
    Normalized centered Gram matrix of the regular simplex with d+2 vertices: diagonal ((d+1)/(d+2))^2,
    off-diagonal -(d+1)/(d+2)^2. Its spectrum is (d+1)/(d+2) with multiplicity d+1 and a single 0.
    """
    k = d + 2
    c = (k - 1.) / k ** 2
    return c * (k * np.eye(k) - np.ones((k, k)))


def equidistant_rank_certificate(points, a, eps):
    """
    Rank certificate for near-equidistant points: the normalized centered Gram matrix is within operator
    distance *perturbation* of the simplex reference, so by Weyl's inequality its rank is at least the number
    of reference eigenvalues above the perturbation. Points in R^dim with a rank lower bound above dim cannot exist.

    :param points: array (k, dim) of k >= 3 points.
    :param a: common target distance.
    :param eps: relative distance tolerance.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    k, dim = points.shape
    if k < 3:
        raise DomainError('The certificate needs at least three points.')
    if a <= 0 or eps < 0:
        raise DomainError('Target distance must be positive and tolerance nonnegative.')
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))[np.triu_indices(k, 1)]
    slack = 1e-12 * a
    if np.min(dist) < a * (1. - eps) - slack or np.max(dist) > a * (1. + eps) + slack:
        raise PreconditionError('Pairwise distances span [%g, %g], outside [a(1-eps), a(1+eps)] = [%g, %g].'
                                % (np.min(dist), np.max(dist), a * (1. - eps), a * (1. + eps)))
    centered = points - points.mean(axis=0)
    gram = centered.dot(centered.T) * (2. * (k - 1.) / (k * a * a))
    gram_eigs = np.sort(np.linalg.eigvalsh(gram))[::-1]
    reference = reference_matrix(k - 2)
    perturbation = float(np.linalg.norm(gram - reference, 2))
    reference_eigs = np.sort(np.linalg.eigvalsh(reference))[::-1]
    rank_lower_bound = int(np.sum(reference_eigs > perturbation + 1e-12))
    return {'feasible': rank_lower_bound <= dim, 'gram_eigs': gram_eigs.tolist(),
            'perturbation': perturbation, 'perturbation_bound': (k - 1.) * (2. * eps + eps * eps),
            'threshold': (k - 1.) / k, 'rank_lower_bound': rank_lower_bound, 'dimension': dim}
