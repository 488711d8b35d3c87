"""Tests the width parameters, bounds and the Monte-Carlo optimal bound.

"""
import unittest

import numpy as np

from priorsense import geometry
from priorsense.geometry import ShiftHypothesisError
from priorsense.proximal import BlockPartition, PriorShift, Structure
from test import *


class Test_SparseTable(unittest.TestCase):
    """x* = [1, 0] with the six reference shifts."""

    def setUp(self):
        return

    def test_params(self):
        for label, (p, v1, u1, _, _) in TEST_TABLE1.items():
            v, u = geometry.sparse_params(TEST_TABLE1_X_STAR, PriorShift(p))
            self.assertAlmostEqual(v, v1, places=10, msg=label)
            self.assertAlmostEqual(u, u1, places=10, msg=label)

    def test_bounds(self):
        for label, (p, v1, u1, bound_I, bound_II) in TEST_TABLE1.items():
            b1, b2 = geometry.sparse_bounds(2, 1, v1, u1)
            self.assertAlmostEqual(b1, bound_I, places=2, msg=label)
            self.assertAlmostEqual(b2, bound_II, places=10, msg=label)

    def test_report_row(self):
        report = geometry.bound_report(Structure.SPARSE, TEST_TABLE1_X_STAR, PriorShift([0.5, 0.0]), label='b')
        self.assertEqual(report.to_row(2), ['b', '1.25', '0.25', '1.49', '1.25', '', '1.25'])

    def test_estimate_is_smaller_bound(self):
        report = geometry.bound_report(Structure.SPARSE, TEST_TABLE1_X_STAR, PriorShift([0.5, -0.2]))
        self.assertAlmostEqual(report.width_sq_estimate, 1.29, places=10)

    def test_monte_carlo_below_bound_I(self):
        for label, (p, _, _, _, _) in TEST_TABLE1.items():
            report = geometry.bound_report(Structure.SPARSE, TEST_TABLE1_X_STAR, PriorShift(p),
                                           mc_samples=100000, seed=1, label=label)
            self.assertLessEqual(report.optimal_mc, report.bound_I + 3 * report.optimal_mc_std_error, label)
            self.assertGreaterEqual(report.optimal_mc, 1.0, label)

    def test_monte_carlo_above_bound_II(self):
        """Bound II lets the scale depend on g, so a single t can do worse than it."""
        for label, minimum in (('b', 1.389), ('e', 1.402)):
            p, _, _, _, bound_II = TEST_TABLE1[label]
            value, std_error = geometry.optimal_width_bound(Structure.SPARSE, TEST_TABLE1_X_STAR, PriorShift(p),
                                                            n_samples=100000, seed=1)
            self.assertGreater(value, bound_II + 3 * std_error, label)
            self.assertAlmostEqual(value, minimum, delta=0.02, msg=label)

    def tearDown(self):
        return


class Test_LowRankTable(unittest.TestCase):
    """X* = diag(1, 0, 0) with the six reference shifts λΦ = diag(η)."""

    def test_params_and_bound_II(self):
        for label, (eta, v3, u3, bound_II) in TEST_TABLE2.items():
            shift = PriorShift(np.diag(eta), Structure.LOW_RANK)
            v, u = geometry.lowrank_params(TEST_TABLE2_X_STAR, shift)
            self.assertAlmostEqual(v, v3, places=10, msg=label)
            self.assertAlmostEqual(u, u3, places=10, msg=label)
            self.assertAlmostEqual(geometry.lowrank_bounds(3, 3, 1, v, u)[1], bound_II, places=10, msg=label)

    def test_bound_I_without_shift(self):
        bound_I, _ = geometry.lowrank_bounds(3, 3, 1, 3.0, 1.0)
        self.assertAlmostEqual(bound_I, TEST_TABLE2_BOUND_I_NO_SHIFT, delta=1e-3)

    def test_monte_carlo_sandwich(self):
        samples = 100000 if SLOW_TESTS else 20000
        labels = TEST_TABLE2 if SLOW_TESTS else ('a', 'b', 'e')
        for label in labels:
            eta = TEST_TABLE2[label][0]
            report = geometry.bound_report(Structure.LOW_RANK, TEST_TABLE2_X_STAR,
                                           PriorShift(np.diag(eta), Structure.LOW_RANK),
                                           mc_samples=samples, seed=2, label=label)
            self.assertLessEqual(report.optimal_mc,
                                 min(report.bound_I, report.bound_II) + 3 * report.optimal_mc_std_error, label)

    def test_transpose_invariance(self):
        self.assertEqual(geometry.lowrank_bounds(5, 3, 1, 4.0, 1.5), geometry.lowrank_bounds(3, 5, 1, 4.0, 1.5))


class Test_NoShiftReductions(unittest.TestCase):

    def test_sparse(self):
        x = np.zeros(10)
        x[:3] = [1.0, -2.0, 0.5]
        v, u = geometry.sparse_params(x, PriorShift.zero(10))
        self.assertEqual((v, u), (10.0, 3.0))
        bound_I, _ = geometry.sparse_bounds(10, 3, v, u)
        self.assertGreaterEqual(bound_I, 10 - (2 / np.pi) * 7)
        self.assertAlmostEqual(geometry.classical_bound(Structure.SPARSE, x), bound_I)

    def test_block(self):
        part = BlockPartition(12, 3)
        x = np.zeros(12)
        x[:3] = [1.0, 2.0, 2.0]
        v, u = geometry.block_params(x, PriorShift.zero(12), part)
        self.assertAlmostEqual(v, 4.0)
        self.assertAlmostEqual(u, 1.0)

    def test_lowrank(self):
        X = np.outer([1.0, 2.0, 0.0, 1.0], [1.0, 0.0, 1.0])
        v, u = geometry.lowrank_params(X, np.zeros((4, 3)))
        self.assertAlmostEqual(v, 3.0)
        self.assertAlmostEqual(u, 1.0)


class Test_BlockGeometry(unittest.TestCase):

    def test_unit_blocks_match_sparse(self):
        x = np.array([1.0, 0.0, -3.0, 0.0])
        p = PriorShift([0.5, -0.2, -0.5, 0.1])
        np.testing.assert_allclose(geometry.block_params(x, p, BlockPartition(4, 1)), geometry.sparse_params(x, p))

    def test_aligned_half_shift(self):
        part = BlockPartition(4, 2)
        x = np.array([3.0, 4.0, 0.0, 0.0])
        v, u = geometry.block_params(x, PriorShift([0.3, 0.4, 0.0, 0.0]), part)
        self.assertAlmostEqual(v, 0.25 + 1.0)
        self.assertAlmostEqual(u, 0.25)

    def test_chi_mean(self):
        self.assertAlmostEqual(geometry.chi_mean(1), np.sqrt(2 / np.pi))
        self.assertAlmostEqual(geometry.chi_mean(2), np.sqrt(np.pi / 2))
        self.assertLess(geometry.chi_mean(100), 10.0)
        self.assertGreater(geometry.chi_mean(100), np.sqrt(99))

    def test_bounds_need_matching_partition(self):
        with self.assertRaises(ValueError):
            geometry.block_bounds(10, 3, 3, 1, 2.0, 1.0)


class Test_SubspacePair(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(3)
        self.X = rng.normal(size=(5, 2)) @ rng.normal(size=(2, 4))
        self.pair = geometry.make_subspace_pair(self.X)
        self.rng = rng

    def test_rank(self):
        self.assertEqual(self.pair.rank, 2)

    def test_projections_sum_to_identity(self):
        M = self.rng.normal(size=(5, 4))
        np.testing.assert_allclose(geometry.project_S(self.pair, M) + geometry.project_S_perp(self.pair, M), M,
                                   atol=1e-12)

    def test_UVt_lies_in_S(self):
        np.testing.assert_allclose(geometry.project_S(self.pair, self.pair.UVt), self.pair.UVt, atol=1e-12)
        np.testing.assert_allclose(geometry.project_S_perp(self.pair, self.pair.UVt), 0, atol=1e-12)

    def test_orthonormal_bases(self):
        U = np.hstack([self.pair.U, self.pair.U_perp])
        V = np.hstack([self.pair.V, self.pair.V_perp])
        np.testing.assert_allclose(U.T @ U, np.eye(5), atol=1e-12)
        np.testing.assert_allclose(V.T @ V, np.eye(4), atol=1e-12)

    def test_ambiguous_rank(self):
        with self.assertRaises(ValueError):
            geometry.make_subspace_pair(np.diag([1.0, 2e-8, 9e-9]))

    def test_explicit_rank_overrides_detection(self):
        pair = geometry.make_subspace_pair(np.diag([1.0, 2e-8, 9e-9]), rank=1)
        self.assertEqual(pair.rank, 1)

    def test_zero_matrix(self):
        with self.assertRaises(ValueError):
            geometry.make_subspace_pair(np.zeros((3, 3)))


class Test_Distance(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(4)

    def test_zero_scale_is_norm(self):
        g = self.rng.normal(size=6)
        x = np.array([1.0, 0, 0, -2.0, 0, 0])
        d = geometry.dist_sq_scaled_subdiff(Structure.SPARSE, x, PriorShift(0.3 * np.sign(x)), g, 0.0)
        self.assertAlmostEqual(d, np.sum(g**2))

    def test_member_has_zero_distance(self):
        x = np.array([1.0, 0, 0, -2.0])
        p = np.array([0.5, 0.2, -0.4, 0.0])
        w = np.array([1.0, 0.3, -0.9, -1.0]) - p
        d = geometry.dist_sq_scaled_subdiff(Structure.SPARSE, x, PriorShift(p), 0.7 * w, 0.7)
        self.assertAlmostEqual(d, 0.0, places=12)

    def test_sparse_grid_oracle(self):
        x = np.array([1.0, 0, 0, -2.0, 0])
        p = self.rng.uniform(-0.8, 0.8, size=5)
        t = 0.7
        for _ in range(20):
            g = self.rng.normal(scale=1.5, size=5)
            expected = 0.0
            for i in range(5):
                if x[i]:
                    w = np.array([np.sign(x[i])])
                else:
                    w = np.linspace(-1, 1, 200001)
                expected += np.min((g[i] - t * (w - p[i]))**2)
            d = geometry.dist_sq_scaled_subdiff(Structure.SPARSE, x, PriorShift(p), g, t)
            self.assertAlmostEqual(d, expected, delta=1e-6)

    def test_block_distance_is_minimal(self):
        part = BlockPartition(6, 2)
        x = np.array([1.0, 1.0, 0, 0, 0, 0])
        p = self.rng.uniform(-0.3, 0.3, size=6)
        g = self.rng.normal(size=6)
        t = 0.8
        d = geometry.dist_sq_scaled_subdiff(Structure.BLOCK_SPARSE, x, PriorShift(p), g, t, part)
        for _ in range(1000):
            w = np.zeros(6)
            w[:2] = x[:2] / np.linalg.norm(x[:2])
            for b in (slice(2, 4), slice(4, 6)):
                z = self.rng.normal(size=2)
                w[b] = self.rng.uniform() * z / np.linalg.norm(z)
            self.assertLessEqual(d, np.sum((g - t * (w - p))**2) + 1e-12)

    def test_lowrank_distance_is_minimal(self):
        X = np.diag([2.0, 0.0, 0.0])
        pair = geometry.make_subspace_pair(X)
        P = 0.2 * self.rng.normal(size=(3, 3))
        G = self.rng.normal(size=(3, 3))
        t = 0.9
        d = geometry.dist_sq_scaled_subdiff(Structure.LOW_RANK, X, PriorShift(P, Structure.LOW_RANK), G, t)
        for _ in range(1000):
            B = self.rng.normal(size=(2, 2))
            B *= self.rng.uniform() / np.linalg.norm(B, 2)
            W = pair.UVt + pair.U_perp @ B @ pair.V_perp.T
            self.assertLessEqual(d, np.sum((G - t * (W - P))**2) + 1e-12)

    def test_negative_scale(self):
        with self.assertRaises(ValueError):
            geometry.dist_sq_scaled_subdiff(Structure.SPARSE, [1.0, 0.0], np.zeros(2), np.zeros(2), -1.0)


class Test_OptimalWidthBound(unittest.TestCase):

    def test_zero_scale_gives_dimension(self):
        x = np.array([1.0, 0, 0, 0, 0, 0, 0, 0])
        value, std_error = geometry.optimal_width_bound(Structure.SPARSE, x, np.zeros(8), n_samples=20000,
                                                        seed=5, t_grid=[0.0])
        self.assertAlmostEqual(value, 8.0, delta=5 * std_error)

    def test_random_sparse_sandwich(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            x = np.zeros(32)
            x[rng.choice(32, 4, replace=False)] = rng.normal(size=4)
            p = 0.5 * np.sign(x) + 0.1 * rng.uniform(-1, 1, size=32) * (x == 0)
            report = geometry.bound_report(Structure.SPARSE, x, PriorShift(p), mc_samples=5000, seed=7)
            self.assertLessEqual(report.optimal_mc, report.bound_I + 3 * report.optimal_mc_std_error)

    def test_refinement_improves_on_grid(self):
        x, p = TEST_TABLE1_X_STAR, PriorShift([0.5, -0.2])
        t_h = geometry.width_heuristic_t(Structure.SPARSE, x, p)
        grid = np.linspace(0, geometry.GRID_SPAN * t_h, geometry.GRID_POINTS)
        refined, _ = geometry.optimal_width_bound(Structure.SPARSE, x, p, n_samples=2000, seed=9)
        coarse, _ = geometry.optimal_width_bound(Structure.SPARSE, x, p, n_samples=2000, seed=9, t_grid=grid)
        self.assertLessEqual(refined, coarse)

    def test_too_few_samples(self):
        with self.assertRaises(ValueError):
            geometry.optimal_width_bound(Structure.SPARSE, [1.0, 0.0], np.zeros(2), n_samples=10)

    def test_deterministic(self):
        args = (Structure.SPARSE, np.array([1.0, 0.0, 0.0]), np.array([0.5, 0.0, 0.1]))
        self.assertEqual(geometry.optimal_width_bound(*args, n_samples=500, seed=8),
                         geometry.optimal_width_bound(*args, n_samples=500, seed=8))


class Test_Hypothesis(unittest.TestCase):

    def test_exact_prior_contains_zero(self):
        self.assertTrue(geometry.shifted_subdifferential_contains_zero(Structure.SPARSE, [1.0, 0.0], [1.0, 0.0]))
        self.assertTrue(geometry.shifted_subdifferential_contains_zero(Structure.SPARSE, [1.0, 0.0], [1.0, -0.5]))

    def test_partial_prior_excludes_zero(self):
        self.assertFalse(geometry.shifted_subdifferential_contains_zero(Structure.SPARSE, [1.0, 0.0], [0.5, 0.0]))

    def test_lowrank_membership(self):
        X = np.diag([1.0, 0.0, 0.0])
        self.assertTrue(geometry.shifted_subdifferential_contains_zero(Structure.LOW_RANK, X, np.diag([1.0, 0.5, 0.0])))
        self.assertFalse(geometry.shifted_subdifferential_contains_zero(Structure.LOW_RANK, X, np.diag([0.5, 0.0, 0.0])))

    def test_report_raises(self):
        with self.assertRaises(ShiftHypothesisError):
            geometry.bound_report(Structure.SPARSE, TEST_TABLE1_X_STAR, PriorShift([1.0, 0.0]))

    def test_message_names_the_hypothesis(self):
        with self.assertRaisesRegex(ShiftHypothesisError, 'sparse bound hypothesis .*\\|\\|x\\*\\|\\|_1'):
            geometry.bound_report(Structure.SPARSE, TEST_TABLE1_X_STAR, PriorShift([1.0, 0.0]), label='exact')
        with self.assertRaisesRegex(ShiftHypothesisError, 'low-rank bound hypothesis'):
            geometry.bound_report(Structure.LOW_RANK, TEST_TABLE2_X_STAR,
                                  PriorShift(np.diag([1.0, 0.5, 0.0]), Structure.LOW_RANK))

    def test_hypothesis_error_is_value_error(self):
        self.assertTrue(issubclass(ShiftHypothesisError, ValueError))


if __name__ == '__main__':
    unittest.main()
