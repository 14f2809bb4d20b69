"""Closed-form and semi-closed-form special values.

Gamma ratios are always taken through ``lgamma`` so that large multi-indices
do not overflow.
"""

import itertools
import math
from functools import reduce

import numpy as np

from ._rules import gauss_jacobi
from .errors import DivergenceError, DomainError


class MultiIndex(tuple):
    """Tuple of nonnegative integers with ``order`` (|p|) and ``factorial`` (p!)."""

    def __new__(cls, entries=()):
        if isinstance(entries, (int, np.integer)):
            entries = (entries,)
        vals = []
        for e in entries:
            if isinstance(e, float) and e.is_integer():
                e = int(e)
            if not isinstance(e, (int, np.integer)) or isinstance(e, bool):
                raise TypeError(f"multi-index entries must be integers, got {e!r}")
            if e < 0:
                raise DomainError(f"multi-index entries must be nonnegative, got {e}")
            vals.append(int(e))
        return super().__new__(cls, vals)

    @property
    def order(self):
        return sum(self)

    @property
    def factorial(self):
        return reduce(lambda acc, k: acc * math.factorial(k), self, 1)

    @property
    def log_factorial(self):
        return sum(math.lgamma(k + 1) for k in self)

    def __repr__(self):
        return f"MultiIndex{tuple(self)!r}"


def multi_indices(n, max_order):
    """All multi-indices of length ``n`` with ``|p| <= max_order``, graded then lexicographic."""
    out = []
    for order in range(max_order + 1):
        level = [c for c in itertools.product(range(order + 1), repeat=n) if sum(c) == order]
        out.extend(MultiIndex(c) for c in sorted(level, reverse=True))
    return out


def check_weight(lam):
    """Validate a Bergman weight parameter and return it as a float."""
    lam = float(lam)
    if not lam > -1.0:
        raise DomainError(f"weight parameter must satisfy lambda > -1, got {lam}")
    return lam


def gamma_ratio(a, b):
    """Gamma(a) / Gamma(b) for positive a, b."""
    return math.exp(math.lgamma(a) - math.lgamma(b))


def pochhammer(x, m):
    """Rising factorial x (x+1) ... (x+m-1); equals 1 for m = 0."""
    if m < 0 or int(m) != m:
        raise DomainError("Pochhammer length must be a nonnegative integer")
    out = 1.0
    for k in range(int(m)):
        out *= x + k
    return out


def c_lambda(n, lam):
    """Normalising constant making the weighted measure on the ball a probability."""
    if n < 1:
        raise DomainError("dimension must be at least 1")
    lam = check_weight(lam)
    return pochhammer(lam + 1.0, n) / math.pi**n


def dirichlet_integral(p, s, n=None):
    """Exact value of ``int_{R^n_+} h^p (1 + |h|_1)^(-s) dh``.

    Equals ``p! Gamma(s - |p| - n) / Gamma(s)``; finite only for ``s > |p| + n``.
    """
    p = MultiIndex(p)
    if n is None:
        n = len(p)
    if len(p) != n:
        raise DomainError(f"multi-index has {len(p)} entries, dimension is {n}")
    excess = s - p.order - n
    if not excess > 0:
        raise DivergenceError(f"integral diverges: need s > |p| + n = {p.order + n}, got s = {s}")
    return math.exp(p.log_factorial + math.lgamma(excess) - math.lgamma(s))


def log_dirichlet_integral(p, s):
    p = MultiIndex(p)
    excess = s - p.order - len(p)
    if not excess > 0:
        raise DivergenceError(f"integral diverges: need s > {p.order + len(p)}, got s = {s}")
    return p.log_factorial + math.lgamma(excess) - math.lgamma(s)


def romanovski_total(alpha, beta, nodes=32):
    """Total mass V(alpha, beta) of the Romanovski-Routh weight on the real line.

    Computed in angle form, ``int_0^pi exp(-alpha*theta) sin(theta)**(-2*beta)``,
    with Gauss-Jacobi nodes absorbing both endpoint powers.  Converges exactly
    when ``beta < 1/2``.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not beta < 0.5:
        raise DivergenceError(f"V(alpha, beta) diverges for beta >= 1/2, got beta = {beta}")
    c = -2.0 * beta
    n = int(nodes) + int(math.ceil(abs(alpha)))
    t, w = gauss_jacobi(n, c, c)
    theta = 0.5 * math.pi * (1.0 + t)
    # sin(theta) = theta (pi - theta) * g(theta) with g smooth and positive
    g = np.sin(theta) / (theta * (math.pi - theta))
    shift = 0.0 if alpha >= 0 else math.pi
    vals = np.exp(-alpha * (theta - shift)) * g**c
    # (theta (pi - theta))**c = (pi/2)**(2c) (1 - t)**c (1 + t)**c ; dtheta = pi/2 dt
    total = float(np.dot(w, vals)) * (0.5 * math.pi) ** (2.0 * c + 1.0)
    return total * math.exp(-alpha * shift)
