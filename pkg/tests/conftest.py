"""Shared random generators for the test suite.

Random Hamiltonians are built as ``P D P^-1`` so that the exact spectrum is
known independently of the solver under test.
"""

import math

import numpy as np
import pytest

from nonherm.two_level import TwoLevelParams


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_spectrum(rng, n, min_gap=0.1, real=False):
    while True:
        vals = rng.uniform(-3, 3, n) + (0j if real else 1j * rng.uniform(-3, 3, n))
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(n) * 1e9
        if gaps.min() >= min_gap:
            return vals


def random_basis(rng, n, max_cond=50.0):
    while True:
        p = random_complex(rng, n, n)
        if np.linalg.cond(p) <= max_cond:
            return p


def random_diagonalizable(rng, n, real=False, max_cond=50.0):
    """``(H, D)`` with ``H = P diag(D) P^-1``."""
    d = random_spectrum(rng, n, real=real)
    p = random_basis(rng, n, max_cond)
    return p @ np.diag(d) @ np.linalg.inv(p), d


def random_hermitian(rng, n):
    a = random_complex(rng, n, n)
    return (a + a.conj().T) / 2


def random_two_level(rng, regime):
    """Random ``TwoLevelParams`` in the unbroken ("ur") or broken ("br") regime."""
    while True:
        alpha, beta = rng.uniform(-3, 3, 2)
        if abs(alpha * beta - 2) < 0.2:
            continue
        if regime == "ur":
            e1, e2 = rng.uniform(-3, 3, 2)
            if abs(e1 - e2) < 0.1:
                continue
            return TwoLevelParams(alpha, beta, e1, e2)
        re, im = rng.uniform(-3, 3), rng.uniform(0.1, 2) * rng.choice([-1, 1])
        return TwoLevelParams(alpha, beta, complex(re, im), complex(re, -im))


def multiset_distance(a, b):
    a, b = sorted(a, key=lambda z: (z.real, z.imag)), list(b)
    worst = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b.pop(k)))
    return worst


def expm_taylor(a, terms=30):
    """Scaling-and-squaring Taylor exponential, independent of any eigensolver."""
    norm = np.linalg.norm(a, 1)
    k = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    b = a / 2 ** k
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for j in range(1, terms):
        term = term @ b / j
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
