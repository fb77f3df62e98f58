# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np
from scipy.cluster.hierarchy import linkage, fcluster
from scipy.spatial.distance import squareform

from ..core.errors import DomainError

logger = logging.getLogger(__name__)


def pairwise_distances(points, fold=False):
    """
    Euclidean distances between rows; with *fold* the distance of x to y is min(|x - y|, |x + y|).
    """
    points = np.asarray(points, dtype=float)
    sq = np.sum(points * points, axis=1)
    inner = points.dot(points.T)
    if fold:
        inner = np.abs(inner)
    dist2 = sq[:, None] + sq[None, :] - 2. * inner
    dist = np.sqrt(np.maximum(dist2, 0.))
    np.fill_diagonal(dist, 0.)
    return dist


def level_set(recs, delta, gs=None):
    """
    Records with energy_per_N >= gs - delta; *gs* defaults to the best energy among the records.
    """
    if not delta > 0:
        raise DomainError('Energy window delta must be positive.')
    energies = [getattr(r, 'energy_per_N', None) for r in recs]
    if any(e is None for e in energies):
        raise DomainError('Filtering by energy needs LandscapeRecord entries.')
    if not recs:
        return []
    reference = max(energies) if gs is None else gs
    return [r for r, e in zip(recs, energies) if e >= reference - delta]


def cluster_level_set(recs, threshold=0.25, fold=False, delta=None, gs=None):
    """
    Single-linkage clustering of the record points at distance threshold*sqrt(N).

    :param recs: list of LandscapeRecord (or arrays), at least two.
    :param threshold: linkage threshold in units of sqrt(N).
    :param fold: identify antipodal points (even mixtures).
    :param delta: restrict to the level set energy_per_N >= gs - delta first (None keeps every record).
    :param gs: reference energy of the level set, defaults to the best record.
    Returns the components with their diameters and the minimal separation, both over sqrt(N).
    """
    if delta is not None:
        recs = level_set(recs, delta, gs)
    points = np.array([getattr(r, 'sigma', r) for r in recs], dtype=float)
    if points.shape[0] < 2:
        raise DomainError('Clustering needs at least two records.')
    scale = np.sqrt(points.shape[1])
    dist = pairwise_distances(points, fold=fold) / scale
    labels = fcluster(linkage(squareform(dist, checks=False), method='single'), t=threshold, criterion='distance')

    components = []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        diameter = float(np.max(dist[np.ix_(members, members)])) if members.size > 1 else 0.
        components.append({'members': members.tolist(), 'diameter': diameter})

    separation = None
    if len(components) > 1:
        separation = float(min(np.min(dist[np.ix_(a['members'], b['members'])])
                               for i, a in enumerate(components) for b in components[i + 1:]))

    antipodal = []
    if fold:
        plain = pairwise_distances(points) / scale
        rows, cols = np.nonzero((dist <= threshold) & (plain > threshold))
        antipodal = [(int(i), int(j)) for i, j in zip(rows, cols) if i < j]

    logger.info('cluster_level_set: %d records, %d components, max diameter %.3f',
                points.shape[0], len(components), max(c['diameter'] for c in components))
    return {'components': components, 'labels': labels.tolist(), 'min_separation': separation, 'delta': delta,
            'max_diameter': max(c['diameter'] for c in components), 'antipodal_pairs': antipodal}
