"""Shared randomized-state helpers for the test suite (all seeded)."""

import numpy as np


def rng(seed=0):
    return np.random.default_rng(seed)


def random_unitary(d, generator):
    z = generator.normal(size=(d, d)) + 1j * generator.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(n, generator, rank=None):
    rank = rank or n
    g = generator.normal(size=(n, rank)) + 1j * generator.normal(size=(n, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_pure(n, generator):
    v = generator.normal(size=n) + 1j * generator.normal(size=n)
    return v / np.linalg.norm(v)


def random_hermitian(n, generator):
    g = generator.normal(size=(n, n)) + 1j * generator.normal(size=(n, n))
    return (g + g.conj().T) / 2
