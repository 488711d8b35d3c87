"""Tests the proximal operators against brute-force minimization.

"""
import unittest
from unittest import mock

import numpy as np

from priorsense import proximal
from priorsense.proximal import BlockPartition, PriorShift, Structure
from test import zoom_argmin

N_ORACLE = 200


def _scalar_prox_oracle(penalty, v, tau):
    """argmin_x tau·penalty(x) + (x - v)^2 / 2 over the reals."""
    def objective(points):
        x = points[:, 0]
        return tau * penalty(x) + 0.5 * (x - v)**2
    return zoom_argmin(objective, v, 8.0)[0]


class Test_SoftThreshold(unittest.TestCase):

    def setUp(self):
        return

    def test_definition(self):
        np.testing.assert_array_equal(proximal.soft_threshold([0.5, -2], 1), [0, -1])

    def test_identity_limit(self):
        v = np.array([0.3, -1.2, 4.0])
        np.testing.assert_allclose(proximal.soft_threshold(v, 1e-12), v, atol=1e-11)

    def test_grid_oracle(self):
        rng = np.random.default_rng(0)
        for v in rng.normal(scale=2, size=N_ORACLE):
            expected = _scalar_prox_oracle(np.abs, v, 0.3)
            self.assertAlmostEqual(proximal.soft_threshold([v], 0.3)[0], expected, delta=1e-4)

    def tearDown(self):
        return


class Test_ProxMcL1(unittest.TestCase):

    def test_no_prior_reduces_to_soft_threshold(self):
        v = np.array([1.5, -0.2, 0.7])
        np.testing.assert_array_equal(proximal.prox_mc_l1(v, 0.4, PriorShift.zero(3)), proximal.soft_threshold(v, 0.4))

    def test_small_value(self):
        np.testing.assert_array_equal(proximal.prox_mc_l1([0.0], 1.0, PriorShift([0.5])), [0.0])

    def test_shape_mismatch(self):
        with self.assertRaises(ValueError):
            proximal.prox_mc_l1(np.zeros(3), 1.0, PriorShift(np.zeros(2)))

    def test_grid_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(N_ORACLE):
            v, p = rng.normal(scale=2, size=2)
            tau = rng.uniform(0.05, 1.5)
            expected = _scalar_prox_oracle(lambda x, p=p: np.abs(x) - p * x, v, tau)
            self.assertAlmostEqual(proximal.prox_mc_l1([v], tau, PriorShift([p]))[0], expected, delta=1e-4)


class Test_ProxMcBlock(unittest.TestCase):

    def test_small_block_shrinks_to_zero(self):
        part = BlockPartition(2, 2)
        out = proximal.prox_mc_block(np.array([0.3, 0.4]), 1.0, PriorShift.zero(2), part)
        np.testing.assert_array_equal(out, [0, 0])

    def test_unit_blocks_equal_prox_mc_l1(self):
        rng = np.random.default_rng(2)
        v = rng.normal(size=8)
        shift = PriorShift(rng.uniform(-1, 1, size=8))
        np.testing.assert_allclose(proximal.prox_mc_block(v, 0.6, shift, BlockPartition(8, 1)),
                                   proximal.prox_mc_l1(v, 0.6, shift), atol=1e-14)

    def test_partition_mismatch(self):
        with self.assertRaises(ValueError):
            proximal.prox_mc_block(np.zeros(6), 1.0, PriorShift.zero(6), BlockPartition(4, 2))

    def test_grid_oracle(self):
        rng = np.random.default_rng(3)
        part = BlockPartition(4, 2)
        for _ in range(N_ORACLE // 4):
            v = rng.normal(scale=1.5, size=4)
            p = rng.normal(scale=0.7, size=4)
            tau = rng.uniform(0.1, 1.2)
            out = proximal.prox_mc_block(v, tau, PriorShift(p), part)
            for b in part.blocks:
                def objective(points, vb=v[b], pb=p[b]):
                    return tau * (np.linalg.norm(points, axis=1) - points @ pb) + 0.5 * np.sum((points - vb)**2, axis=1)
                expected = zoom_argmin(objective, v[b], 6.0)
                np.testing.assert_allclose(out[b], expected, atol=1e-4)


class Test_ProxMcNuclear(unittest.TestCase):

    def test_diagonal_svt(self):
        out = proximal.prox_mc_nuclear(np.diag([3.0, 1.0]), 2.0, PriorShift.zero((2, 2), Structure.LOW_RANK))
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-12)

    def test_full_shrinkage(self):
        V = np.array([[0.5, 0.2], [-0.1, 0.3]])
        out = proximal.prox_mc_nuclear(V, 5.0, PriorShift.zero((2, 2), Structure.LOW_RANK))
        np.testing.assert_array_equal(out, np.zeros((2, 2)))

    def test_local_optimality(self):
        rng = np.random.default_rng(4)
        V = rng.normal(size=(3, 3))
        P = rng.normal(scale=0.3, size=(3, 3))
        tau = 0.5
        X = proximal.prox_mc_nuclear(V, tau, PriorShift(P, Structure.LOW_RANK))

        def objective(Y):
            return tau * (np.sum(np.linalg.svd(Y, compute_uv=False)) - np.sum(P * Y)) + 0.5 * np.sum((Y - V)**2)

        best = objective(X)
        for _ in range(10000):
            E = rng.normal(size=(3, 3))
            self.assertLessEqual(best, objective(X + 1e-3 * E / np.linalg.norm(E)) + 1e-12)

    def test_svd_failure_raises_svd_error(self):
        with mock.patch('priorsense.proximal.scipy.linalg.svd', side_effect=np.linalg.LinAlgError('no')):
            with self.assertRaises(proximal.SVDError):
                proximal.prox_mc_nuclear(np.eye(2), 1.0, PriorShift.zero((2, 2), Structure.LOW_RANK))


class Test_ProxL1L1(unittest.TestCase):

    def test_zero_weight_is_soft_threshold(self):
        v = np.linspace(-3, 3, 25)
        phi = np.linspace(2, -2, 25)
        np.testing.assert_allclose(proximal.prox_l1l1(v, 0.7, 0.0, phi), proximal.soft_threshold(v, 0.7), atol=1e-14)

    def test_zero_prior_doubles_threshold(self):
        v = np.linspace(-3, 3, 25)
        np.testing.assert_allclose(proximal.prox_l1l1(v, 0.4, 1.0, np.zeros(25)), proximal.soft_threshold(v, 0.8),
                                   atol=1e-14)

    def test_grid_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(N_ORACLE):
            v, phi = rng.normal(scale=2, size=2)
            tau = rng.uniform(0.05, 1.5)
            lam = rng.uniform(0, 3)
            expected = _scalar_prox_oracle(lambda x, lam=lam, phi=phi: np.abs(x) + lam * np.abs(x - phi), v, tau)
            self.assertAlmostEqual(proximal.prox_l1l1([v], tau, lam, [phi])[0], expected, delta=1e-4)


class Test_ProxL1L2(unittest.TestCase):

    def test_zero_weight_is_soft_threshold(self):
        v = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(proximal.prox_l1l2(v, 0.5, 0.0, np.ones(13)), proximal.soft_threshold(v, 0.5))

    def test_large_weight_pins_prior(self):
        phi = np.array([1.0, -2.0, 0.5])
        np.testing.assert_allclose(proximal.prox_l1l2(phi, 1.0, 1e9, phi), phi, atol=1e-6)

    def test_grid_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(N_ORACLE):
            v, phi = rng.normal(scale=2, size=2)
            tau = rng.uniform(0.05, 1.5)
            lam = rng.uniform(0, 3)
            expected = _scalar_prox_oracle(lambda x, lam=lam, phi=phi: np.abs(x) + lam / 2 * (x - phi)**2, v, tau)
            self.assertAlmostEqual(proximal.prox_l1l2([v], tau, lam, [phi])[0], expected, delta=1e-4)


class Test_ProjectL2Ball(unittest.TestCase):

    def test_inside(self):
        np.testing.assert_array_equal(proximal.project_l2_ball([0.1, 0.2], [0, 0], 1.0), [0.1, 0.2])

    def test_zero_radius(self):
        np.testing.assert_array_equal(proximal.project_l2_ball([3, 4], [1, 1], 0.0), [1, 1])

    def test_radial_scaling(self):
        np.testing.assert_allclose(proximal.project_l2_ball([3, 0], [0, 0], 1.0), [1, 0])

    def test_output_in_ball(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            z, c = rng.normal(scale=5, size=(2, 6))
            delta = rng.uniform(0, 2)
            self.assertLessEqual(np.linalg.norm(proximal.project_l2_ball(z, c, delta) - c), delta * (1 + 1e-12))


class Test_ProxProperties(unittest.TestCase):
    """Firm nonexpansiveness and local optimality of every prox."""

    def setUp(self):
        rng = np.random.default_rng(8)
        p = rng.uniform(-1, 1, size=6)
        phi = rng.normal(size=6)
        P = rng.normal(scale=0.3, size=(3, 3))
        part = BlockPartition(6, 2)
        self.vector_proxes = {
            'soft_threshold': (lambda v, t: proximal.soft_threshold(v, t), lambda x: np.sum(np.abs(x))),
            'mc_l1': (lambda v, t: proximal.prox_mc_l1(v, t, PriorShift(p)), lambda x: np.sum(np.abs(x)) - x @ p),
            'mc_block': (lambda v, t: proximal.prox_mc_block(v, t, PriorShift(p), part),
                         lambda x: np.sum(part.block_norms(x)) - x @ p),
            'l1l1': (lambda v, t: proximal.prox_l1l1(v, t, 0.8, phi),
                     lambda x: np.sum(np.abs(x)) + 0.8 * np.sum(np.abs(x - phi))),
            'l1l2': (lambda v, t: proximal.prox_l1l2(v, t, 0.8, phi),
                     lambda x: np.sum(np.abs(x)) + 0.4 * np.sum((x - phi)**2)),
        }
        self.matrix_prox = (lambda V, t: proximal.prox_mc_nuclear(V, t, PriorShift(P, Structure.LOW_RANK)),
                            lambda X: np.sum(np.linalg.svd(X, compute_uv=False)) - np.sum(P * X))
        self.rng = rng

    def test_firm_nonexpansive(self):
        cases = list(self.vector_proxes.items()) + [('nuclear', self.matrix_prox)]
        for name, (prox, _) in cases:
            shape = (3, 3) if name == 'nuclear' else (6,)
            for _ in range(50):
                a, b = self.rng.normal(scale=2, size=(2,) + shape)
                pa, pb = prox(a, 0.7), prox(b, 0.7)
                self.assertLessEqual(np.sum((pa - pb)**2), np.sum((pa - pb) * (a - b)) + 1e-9, name)

    def test_local_optimality(self):
        cases = list(self.vector_proxes.items()) + [('nuclear', self.matrix_prox)]
        tau = 0.6
        for name, (prox, f) in cases:
            shape = (3, 3) if name == 'nuclear' else (6,)
            v = self.rng.normal(scale=2, size=shape)
            x = prox(v, tau)
            best = tau * f(x) + 0.5 * np.sum((x - v)**2)
            for _ in range(1000):
                d = self.rng.normal(size=shape)
                y = x + 1e-3 * d / np.linalg.norm(d)
                self.assertLessEqual(best, tau * f(y) + 0.5 * np.sum((y - v)**2) + 1e-12, name)


class Test_BlockPartition(unittest.TestCase):

    def test_blocks_cover(self):
        part = BlockPartition.from_sizes(12, 3)
        self.assertEqual(part.l, 4)
        covered = np.concatenate([np.arange(12)[b] for b in part.blocks])
        np.testing.assert_array_equal(covered, np.arange(12))

    def test_block_norms(self):
        np.testing.assert_allclose(BlockPartition(4, 2).block_norms([3, 4, 0, 1]), [5, 1])

    def test_indivisible(self):
        with self.assertRaises(ValueError):
            BlockPartition(10, 3)


class Test_PriorShift(unittest.TestCase):

    def test_from_prior(self):
        shift = PriorShift.from_prior(0.5, [2.0, -4.0])
        np.testing.assert_array_equal(shift.payload, [1.0, -2.0])

    def test_non_finite(self):
        with self.assertRaises(ValueError):
            PriorShift([1.0, np.inf])

    def test_low_rank_needs_matrix(self):
        with self.assertRaises(ValueError):
            PriorShift(np.zeros(3), Structure.LOW_RANK)

    def test_payload_is_read_only(self):
        shift = PriorShift.zero(3)
        with self.assertRaises(ValueError):
            shift.payload[0] = 1.0


if __name__ == '__main__':
    unittest.main()
