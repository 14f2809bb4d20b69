"""Group-moment coordinates on the ball and on the Siegel domain.

Quasi-elliptic:   kappa(t, h) = t . sigma(h),        tau(z) = (rho(z), H(z))
Quasi-hyperbolic: kappa(t', s, h) = (t', s) . sigma(h), tau(z) = (rho(z), H(z))

Points with a vanishing coordinate (z_j = 0, j < n in the Siegel case) form
a null set on which the coordinates are undefined; they are rejected with
:class:`DegenerateInputError` rather than perturbed.

Measure densities are taken with respect to ``(dt / it) dh`` where every
angular factor ``dt_j / (i t_j)`` has total mass ``2 pi``.
"""

import math
from typing import NamedTuple

import numpy as np

from . import geometry
from .errors import DegenerateInputError, DomainError
from .special import c_lambda, check_weight

ANGULAR_MASS = 2.0 * math.pi


class MomentCoordQE(NamedTuple):
    t: np.ndarray
    h: np.ndarray


class MomentCoordQH(NamedTuple):
    t_prime: np.ndarray
    s: np.ndarray
    h: np.ndarray


def _nonzero(zs, what):
    if np.any(np.abs(zs) == 0):
        raise DegenerateInputError(f"{what} has a vanishing coordinate; group-moment coordinates undefined")


def _positive_h(h):
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0):
        raise DomainError("moment coordinates h must be strictly positive")
    return h


# -- quasi-elliptic ---------------------------------------------------------

def H_qe(z):
    """Reparametrised moment map ``|z_j|^2 / (1 - |z|^2)``; equals ``-moment_map_qe``."""
    z = np.asarray(z, dtype=complex)
    d = geometry.ball_defect(z)
    if np.any(d <= 0):
        raise DomainError("point outside the unit ball")
    _nonzero(z, "ball point")
    return np.abs(z) ** 2 / d[..., None]


def sigma_qe(h):
    h = _positive_h(h)
    return np.sqrt(h / (1.0 + np.sum(h, axis=-1, keepdims=True))).astype(complex)


def rho_qe(z):
    z = np.asarray(z, dtype=complex)
    _nonzero(z, "ball point")
    return z / np.abs(z)


def kappa_qe(t, h):
    return geometry.act_qe(t, sigma_qe(h))


def tau_qe(z):
    return MomentCoordQE(rho_qe(z), H_qe(z))


def phi_qe(r):
    """Radial part of tau: ``r -> (r_j^2 / (1 - |r|^2))_j``."""
    r = np.asarray(r, dtype=float)
    return r**2 / (1.0 - np.sum(r**2, axis=-1, keepdims=True))


def jacobian_det_qe(r):
    """``det d(phi)_r = 2^n prod r_j / (1 - |r|^2)^(n+1)``."""
    r = np.asarray(r, dtype=float)
    n = r.shape[-1]
    d = 1.0 - np.sum(r**2, axis=-1)
    if np.any(d <= 0) or np.any(r <= 0):
        raise DomainError("need r > 0 inside the unit ball")
    return 2.0**n * np.prod(r, axis=-1) / d ** (n + 1)


def measure_density_qe(h, lam):
    """Density of the pushforward of v_lambda w.r.t. (dt/it) dh."""
    h = np.asarray(h, dtype=float)
    lam = check_weight(lam)
    n = h.shape[-1]
    return c_lambda(n, lam) / 2.0**n * (1.0 + np.sum(h, axis=-1)) ** (-(n + lam + 1.0))


# -- quasi-hyperbolic -------------------------------------------------------

def _siegel(z):
    z = np.asarray(z, dtype=complex)
    d = geometry.siegel_defect(z)
    if np.any(d <= 0):
        raise DomainError("point outside the Siegel domain")
    return z, d


def H_qh(z):
    """``(|z_1|^2, ..., |z_{n-1}|^2, Re z_n) / (Im z_n - |z'|^2)``."""
    z, d = _siegel(z)
    _nonzero(z[..., :-1], "Siegel point")
    out = np.empty(z.shape)
    out[..., :-1] = np.abs(z[..., :-1]) ** 2
    out[..., -1] = z[..., -1].real
    return out / d[..., None]


def sigma_qh(h):
    h = np.asarray(h, dtype=float)
    hp = _positive_h(h[..., :-1])
    out = np.empty(h.shape, dtype=complex)
    out[..., :-1] = np.sqrt(hp)
    out[..., -1] = h[..., -1] + 1j * (1.0 + np.sum(hp, axis=-1))
    return out


def rho_qh(z):
    """``(z_j / |z_j|)_{j<n}`` together with the defect ``Im z_n - |z'|^2``."""
    z, d = _siegel(z)
    zp = z[..., :-1]
    _nonzero(zp, "Siegel point")
    return zp / np.abs(zp), d


def kappa_qh(t_prime, s, h):
    return geometry.act_qh(t_prime, s, sigma_qh(h))


def tau_qh(z):
    t_prime, s = rho_qh(z)
    return MomentCoordQH(t_prime, s, H_qh(z))


def H_tilde(z):
    """``(H_0(z), Re z_n / Im z_n)``: same first n-1 components as ``H_qh``."""
    z, d = _siegel(z)
    _nonzero(z[..., :-1], "Siegel point")
    out = np.empty(z.shape)
    out[..., :-1] = np.abs(z[..., :-1]) ** 2 / d[..., None]
    out[..., -1] = z[..., -1].real / z[..., -1].imag
    return out


def phi_qh(r_prime, x, y):
    """``(r'^2 / s, x / s, s)`` with ``s = y - |r'|^2``; returns an (n+1)-vector."""
    r_prime = np.asarray(r_prime, dtype=float)
    s = y - np.sum(r_prime**2, axis=-1)
    return np.concatenate([r_prime**2 / s, [x / s, s]])


def jacobian_det_qh(r_prime, x, y):
    """``2^(n-1) prod r'_j / (y - |r'|^2)^n``."""
    r_prime = np.asarray(r_prime, dtype=float)
    n = r_prime.shape[-1] + 1
    s = y - np.sum(r_prime**2, axis=-1)
    if np.any(s <= 0) or np.any(r_prime <= 0):
        raise DomainError("need r' > 0 and y > |r'|^2")
    return 2.0 ** (n - 1) * np.prod(r_prime, axis=-1) / s**n


def measure_density_qh(s, h, lam):
    """Density of the pushforward of the Siegel weighted measure w.r.t. (dt'/it') ds dh."""
    h = np.asarray(h, dtype=float)
    lam = check_weight(lam)
    n = h.shape[-1]
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise DomainError("s must be positive")
    return np.broadcast_to(c_lambda(n, lam) / 2.0 ** (n + 1) * s ** (n + lam), np.broadcast_shapes(s.shape, h.shape[:-1]))


def moment_to_H_qh(mu):
    """Linear map taking ``moment_map_qh`` to ``H_qh``: ``-diag(1, ..., 1, 2)``."""
    mu = np.asarray(mu, dtype=float)
    scale = np.ones(mu.shape[-1])
    scale[-1] = 2.0
    return -mu * scale


def total_mass_qe(n, lam, spec=None):
    """Total mass of the pushforward measure on T^n x R^n_+, by quadrature.

    Should be 1 because v_lambda is a probability measure on the ball.
    """
    from .quadrature import integrate_h_weighted

    lam = check_weight(lam)
    value, err = integrate_h_weighted((0,) * n, n + lam + 1.0, None, n, spec)
    pref = ANGULAR_MASS**n * c_lambda(n, lam) / 2.0**n
    return pref * value, pref * err
