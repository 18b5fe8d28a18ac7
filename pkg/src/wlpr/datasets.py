"""Built-in test data: star curve, cosine, sine step and staircase."""
from __future__ import annotations

import numpy as np

STAR_SAMPLES = 50

STAIRCASE_X = np.arange(1, 18, dtype=float)
STAIRCASE_F = np.array([10, 10, 10, 10, 10, 10.5, 10.5, 10.5, 10.5, 15, 50, 50, 50, 50, 60, 85, 85],
                       dtype=float)


def star(t):
    """``F(t) = (4 cos t + cos 4t, 4 sin t - sin 4t)``; returns shape ``(..., 2)``."""
    t = np.asarray(t, float)
    return np.stack([4 * np.cos(t) + np.cos(4 * t), 4 * np.sin(t) - np.sin(4 * t)], axis=-1)


def star_parameters(samples=STAR_SAMPLES, level=0):
    """Parameters ``t_j = j * 2pi / samples / 2**level`` over one period."""
    count = samples * 2 ** level
    return np.arange(count) * (2 * np.pi / count)


def star_samples(samples=STAR_SAMPLES):
    return star(star_parameters(samples))


def cosine(x):
    return np.cos(np.pi * np.asarray(x, float))


def sine_step(x):
    """``sin(pi x)`` on ``[0, 0.5]`` and ``-sin(pi x)`` on ``(0.5, 1]``."""
    x = np.asarray(x, float)
    return np.where(x <= 0.5, np.sin(np.pi * x), -np.sin(np.pi * x))


def sine_step_samples(points=33):
    x = np.arange(points) / (points - 1)
    return x, sine_step(x)


def staircase():
    return STAIRCASE_X.copy(), STAIRCASE_F.copy()


def make_rng(seed):
    """PCG64 generator; its name is recorded in experiment metadata."""
    return np.random.Generator(np.random.PCG64(seed))


RNG_NAME = f"numpy.random.PCG64 (numpy {np.__version__})"
