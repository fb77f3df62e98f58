import numpy as np
import unittest
from numpy.testing import assert_allclose

from PSpinOpt.core.errors import DomainError
from PSpinOpt.landscape.ascent import LandscapeRecord
from PSpinOpt.landscape.clustering import pairwise_distances, cluster_level_set, level_set


class TestClustering(unittest.TestCase):

    def setUp(self):
        self.a = np.array([2., 0., 0., 0.])
        self.b = np.array([0., 2., 0., 0.])

    def test_duplicates_form_one_component(self):
        result = cluster_level_set([self.a, self.a.copy(), self.b])
        self.assertEqual(len(result['components']), 2)
        sizes = sorted(len(c['members']) for c in result['components'])
        self.assertEqual(sizes, [1, 2])
        self.assertEqual(result['max_diameter'], 0.)
        assert_allclose(result['min_separation'], np.sqrt(8.) / 2.)
        self.assertEqual(result['labels'][0], result['labels'][1])

    def test_fold_identifies_antipodes(self):
        points = [self.a, -self.a, self.b]
        plain = cluster_level_set(points)
        self.assertEqual(len(plain['components']), 3)
        folded = cluster_level_set(points, fold=True)
        self.assertEqual(len(folded['components']), 2)
        self.assertEqual(folded['antipodal_pairs'], [(0, 1)])

    def test_pairwise_distances(self):
        dist = pairwise_distances(np.array([self.a, -self.a]), fold=True)
        assert_allclose(dist, np.zeros((2, 2)), atol=1e-12)
        dist = pairwise_distances(np.array([self.a, -self.a]))
        assert_allclose(dist[0, 1], 4.)

    def test_energy_window(self):
        recs = [LandscapeRecord(self.a, 1.50, 0., 3., [-1.], 1, True),
                LandscapeRecord(self.a.copy(), 1.48, 0., 3., [-1.], 1, True),
                LandscapeRecord(self.b, 1.45, 0., 3., [-1.], 1, True),
                LandscapeRecord(-self.b, 1.20, 0., 3., [-1.], 1, True)]
        self.assertEqual(len(level_set(recs, 0.1)), 3)
        self.assertEqual(len(level_set(recs, 0.1, gs=1.56)), 2)
        result = cluster_level_set(recs, delta=0.03)
        self.assertEqual(result['delta'], 0.03)
        self.assertEqual(len(result['components']), 1)
        self.assertEqual(len(result['labels']), 2)
        self.assertEqual(len(cluster_level_set(recs)['components']), 3)
        with self.assertRaises(DomainError):
            cluster_level_set(recs, delta=0.01)
        with self.assertRaises(DomainError):
            level_set([self.a, self.b], 0.1)

    def test_needs_two_records(self):
        with self.assertRaises(DomainError):
            cluster_level_set([self.a])
