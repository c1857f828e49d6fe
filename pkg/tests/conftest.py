"""Shared independent oracles for the test suite.

These deliberately use brute-force O(N^2) / O(n*m) summations (or stdlib
functions) so the library implementations are checked against a second,
unrelated route.
"""

import math

import numpy as np
import pytest


def direct_dft(x: np.ndarray) -> np.ndarray:
    """O(N^2) DFT by explicit summation, forward-unscaled."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ x


def direct_convolve(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """O(n*m) linear convolution truncated to len(x)."""
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    out = np.zeros(x.size)
    for k in range(x.size):
        for m in range(h.size):
            if 0 <= k - m < x.size:
                out[k] += h[m] * x[k - m]
    return out


def direct_circular_convolve(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """O(n*m) circular convolution of x with h (h zero-padded to len(x))."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.size)
    for k in range(x.size):
        for m in range(h.size):
            out[k] += h[m] * x[(k - m) % x.size]
    return out


def q_function(x: float) -> float:
    """Gaussian tail probability via the stdlib erfc (independent of scipy)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
