import os
from pathlib import Path

import numpy as np

SLOW_TESTS = bool(os.environ.get('PRIORSENSE_SLOW_TESTS'))
CONFIG_DIR = Path(__file__).resolve().parents[1] / 'configs'

# x* = [1, 0]; label -> (λφ, v1, u1, bound I, bound II)
TEST_TABLE1_X_STAR = np.array([1.0, 0.0])
TEST_TABLE1 = {
    'a': ([0.0, 0.0], 2.0, 1.0, 1.68, 2.0),
    'b': ([0.5, 0.0], 1.25, 0.25, 1.49, 1.25),
    'c': ([-0.5, 0.0], 3.25, 2.25, 1.80, 3.25),
    'd': ([0.0, -1.0], 5.0, 2.0, 1.87, 3.0),
    'e': ([0.5, -0.2], 1.69, 0.29, 1.62, 1.29),
    'f': ([0.5, -1.0], 4.25, 1.25, 1.85, 2.25),
}

# X* = diag(1, 0, 0), λΦ = diag(η); label -> (η, v3, u3, bound II)
TEST_TABLE2_X_STAR = np.diag([1.0, 0.0, 0.0])
TEST_TABLE2 = {
    'a': ([0.0, 0.0, 0.0], 3.0, 1.0, 15.0),
    'b': ([0.25, 0.0, 0.0], 2.5625, 0.5625, 10.625),
    'c': ([-0.25, 0.0, 0.0], 3.5625, 1.5625, 20.625),
    'd': ([0.0, 0.0, -0.5], 4.25, 1.25, 17.5),
    'e': ([0.5, 0.0, -0.2], 2.69, 0.29, 7.9),
    'f': ([-0.25, 0.0, -0.5], 4.8125, 1.8125, 23.125),
}
TEST_TABLE2_BOUND_I_NO_SHIFT = 8.9415


def zoom_argmin(objective, center, radius, tol=1e-8, points=201, keep=10):
    """Brute-force minimizer of a convex `objective` by repeated grid search.

    `objective` maps an (N, d) array of points to N values.  Each pass
    evaluates a `points`-per-axis grid around the current best point and then
    shrinks the window to `keep` grid steps.

    """
    center = np.atleast_1d(np.asarray(center, dtype=float))
    dims = center.size
    while True:
        axes = [np.linspace(c - radius, c + radius, points) for c in center]
        mesh = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, dims)
        center = mesh[np.argmin(objective(mesh))]
        step = 2 * radius / (points - 1)
        if step < tol:
            return center
        radius = keep * step
