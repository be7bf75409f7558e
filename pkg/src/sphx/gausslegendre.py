"""Cached Gauss-Legendre rules.

``scipy.special.roots_legendre`` is O(n) per rule (numpy's ``leggauss``
solves an eigenproblem), and the kernel code asks for rules with thousands
of nodes many times over.
"""

from __future__ import annotations

import functools

import numpy as np
from scipy.special import roots_legendre


@functools.lru_cache(maxsize=128)
def _unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss(n: int, lo: float = -1.0, hi: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point rule on ``[lo, hi]``."""
    x, w = _unit(int(n))
    h = 0.5 * (hi - lo)
    return h * (x + 1.0) + lo, h * w
