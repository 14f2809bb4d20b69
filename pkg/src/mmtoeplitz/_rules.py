"""Cached one-dimensional Gauss rules shared by the integrators."""

from functools import lru_cache

import numpy as np
from scipy import special as sp


@lru_cache(maxsize=512)
def _gauss_jacobi(n, a, b):
    if a == 0.0 and b == 0.0:
        t, w = sp.roots_legendre(n)
    else:
        t, w = sp.roots_jacobi(n, a, b)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_jacobi(n, a=0.0, b=0.0):
    """Nodes and weights on [-1, 1] for the weight (1 - t)**a * (1 + t)**b."""
    if n < 1:
        raise ValueError("need at least one node")
    return _gauss_jacobi(int(n), float(a), float(b))


def piece_rule(lo, hi, n, left=0.0, right=0.0):
    """Gauss rule for ``int_lo^hi (x - lo)**left (hi - x)**right g(x) dx``.

    ``lo`` and ``hi`` may be arrays of equal shape ``S``; the result has shape
    ``S + (n,)``.  Zero-length pieces get zero weight.
    """
    t, w = gauss_jacobi(n, right, left)
    lo = np.asarray(lo, dtype=float)[..., None]
    hi = np.asarray(hi, dtype=float)[..., None]
    half = 0.5 * (hi - lo)
    x = lo + half * (1.0 + t)
    scale = np.where(half > 0, np.abs(half), 0.0) ** (1.0 + left + right)
    return x, w * scale
