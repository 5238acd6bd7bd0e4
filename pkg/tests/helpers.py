"""Shared oracles for the test suite; deliberately loop-based and independent of the library."""

import numpy as np


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def shift_loop(x, k):
    d = len(x)
    return np.array([x[(n + k) % d] for n in range(d)])


def reverse_loop(x):
    d = len(x)
    return np.array([x[(-n) % d] for n in range(d)])


def conv_loop(x, y):
    d = len(x)
    return np.array([sum(x[k] * y[(n - k) % d] for k in range(d)) for n in range(d)])


def dft_loop(x):
    d = len(x)
    return np.array([sum(x[k] * np.exp(-2j * np.pi * n * k / d) for k in range(d)) for n in range(d)])


def inner_loop(x, y):
    return sum(a * np.conj(b) for a, b in zip(x, y))


def nfp_loop(x, p, m, k, ell):
    """|(p * (S_k m o x))_ell|^2 by direct summation."""
    d = len(x)
    v = [m[(n + k) % d] * x[n] for n in range(d)]
    return abs(sum(p[j] * v[(ell - j) % d] for j in range(d))) ** 2


def phase_error(x, z):
    ip = np.vdot(z, x)
    ph = ip / abs(ip) if abs(ip) else 1.0
    return np.linalg.norm(x - ph * z) / np.linalg.norm(x)
