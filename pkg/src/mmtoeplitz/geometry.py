"""Unit ball and Siegel domain: group actions, Kahler forms and moment maps.

Points are complex arrays of shape ``(..., n)``.  Tangent vectors and the
matrices of two-forms use the real ordering ``(x1, y1, ..., xn, yn)``; this is
the only module that translates between complex and real coordinates.  The
translation is fixed by ``i dz ^ dzbar = 2 dx ^ dy``.
"""

import warnings

import numpy as np

from .errors import DomainError, NearBoundaryWarning

QE = "qe"
QH = "qh"

BOUNDARY_TOL = 1e-8
UNIT_TOL = 1e-12


def as_real(z):
    """Complex ``(..., n)`` -> interleaved real ``(..., 2n)``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def as_complex(v):
    """Interleaved real ``(..., 2n)`` -> complex ``(..., n)``."""
    v = np.asarray(v, dtype=float)
    return v[..., 0::2] + 1j * v[..., 1::2]


def ball_defect(z):
    """1 - |z|^2, positive exactly inside the unit ball."""
    z = np.asarray(z, dtype=complex)
    return 1.0 - np.sum(np.abs(z) ** 2, axis=-1)


def siegel_defect(z):
    """Im(z_n) - |z'|^2, positive exactly inside the Siegel domain."""
    z = np.asarray(z, dtype=complex)
    return z[..., -1].imag - np.sum(np.abs(z[..., :-1]) ** 2, axis=-1)


def in_ball(z):
    return ball_defect(z) > 0


def in_siegel(z):
    return siegel_defect(z) > 0


def _require(mask, what):
    if not np.all(mask):
        raise DomainError(f"point(s) outside the {what}")


def _check_unit(t):
    t = np.asarray(t, dtype=complex)
    if np.any(np.abs(np.abs(t) - 1.0) > UNIT_TOL):
        raise DomainError("torus elements must have modulus 1")
    return t


def act_qe(t, z):
    """Torus action on the ball, ``t . z = (t1 z1, ..., tn zn)``."""
    t = _check_unit(t)
    z = np.asarray(z, dtype=complex)
    return t * z


def act_qh(t_prime, s, z):
    """Quasi-hyperbolic action ``(t', s) . z = (s^(1/2) t' z', s z_n)``."""
    t_prime = _check_unit(t_prime)
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise DomainError("dilation parameter must be positive")
    z = np.asarray(z, dtype=complex)
    zp = np.sqrt(s)[..., None] * t_prime * z[..., :-1]
    zn = (s * z[..., -1])[..., None]
    lead = np.broadcast_shapes(zp.shape[:-1], zn.shape[:-1])
    zp = np.broadcast_to(zp, lead + zp.shape[-1:])
    zn = np.broadcast_to(zn, lead + (1,))
    return np.concatenate([zp, zn], axis=-1)


def exp_qe(X):
    """Exponential map of the torus Lie algebra: X -> exp(i X)."""
    return np.exp(1j * np.asarray(X, dtype=float))


def exp_qh(X):
    """Exponential map for T^(n-1) x R_+: returns (t', s)."""
    X = np.asarray(X, dtype=float)
    return np.exp(1j * X[..., :-1]), np.exp(X[..., -1])


def _real_matrix(A):
    # omega = i sum A_jk dz_j ^ dzbar_k  ->  omega(u, v) = -2 Im(U^T A conj(V))
    n = A.shape[-1]
    E = np.zeros((2 * n, n), dtype=complex)
    idx = np.arange(n)
    E[2 * idx, idx] = 1.0
    E[2 * idx + 1, idx] = 1j
    return -2.0 * (E @ A @ E.conj().T).imag


def _warn_boundary(defect, what):
    if defect < BOUNDARY_TOL:
        warnings.warn(f"point within {defect:.1e} of the {what} boundary", NearBoundaryWarning, stacklevel=3)


def kahler_form_qe(z):
    """Bergman Kahler form of the ball at ``z`` as a real 2n x 2n matrix."""
    z = np.asarray(z, dtype=complex)
    d = ball_defect(z)
    _require(d > 0, "unit ball")
    _warn_boundary(d, "ball")
    n = z.shape[-1]
    A = (d * np.eye(n) + np.outer(z.conj(), z)) / d**2
    return _real_matrix(A)


def kahler_form_qh(z):
    """Bergman Kahler form of the Siegel domain at ``z`` as a real 2n x 2n matrix."""
    z = np.asarray(z, dtype=complex)
    d = siegel_defect(z)
    _require(d > 0, "Siegel domain")
    _warn_boundary(d, "Siegel domain")
    n = z.shape[-1]
    zp = z[:-1]
    A = np.zeros((n, n), dtype=complex)
    A[:-1, :-1] = d * np.eye(n - 1) + np.outer(zp.conj(), zp)
    A[:-1, -1] = zp.conj() / 2j
    A[-1, :-1] = -zp / 2j
    A[-1, -1] = 0.25
    return _real_matrix(A / d**2)


def moment_map_qe(z):
    z = np.asarray(z, dtype=complex)
    return -np.abs(z) ** 2 / ball_defect(z)[..., None]


def moment_map_qh(z):
    z = np.asarray(z, dtype=complex)
    d = siegel_defect(z)[..., None]
    out = np.empty(z.shape)
    out[..., :-1] = 2.0 * np.abs(z[..., :-1]) ** 2
    out[..., -1] = z[..., -1].real
    return -out / (2.0 * d)


def _action_curve(X, z, which):
    def curve(s):
        if which == QE:
            return act_qe(exp_qe(s * X), z)
        t, sc = exp_qh(s * X)
        return act_qh(t, sc, z)
    return curve


def induced_field(X, z, which, method="analytic", step=1e-5):
    """Fundamental vector field ``d/ds exp(sX) . z`` at s = 0, as a real 2n-vector."""
    X = np.asarray(X, dtype=float)
    z = np.asarray(z, dtype=complex)
    if X.shape[-1] != z.shape[-1]:
        raise DomainError("Lie algebra vector and point have different dimensions")
    if method == "fd":
        curve = _action_curve(X, z, which)
        return as_real((curve(step) - curve(-step)) / (2 * step))
    if which == QE:
        w = 1j * X * z
    elif which == QH:
        w = np.empty_like(z)
        w[..., :-1] = (1j * X[..., :-1] + 0.5 * X[..., -1:]) * z[..., :-1]
        w[..., -1] = X[..., -1] * z[..., -1]
    else:
        raise ValueError(f"unknown action {which!r}")
    return as_real(w)


def _parts(which):
    if which == QE:
        return moment_map_qe, kahler_form_qe, in_ball
    if which == QH:
        return moment_map_qh, kahler_form_qh, in_siegel
    raise ValueError(f"unknown action {which!r}")


def verify_hamiltonian(z, X, which, step=1e-5):
    """Max over the real coordinate basis of ``|d mu_X(v) - omega(X#, v)|``.

    ``d mu_X`` is a central difference with the given step; the result is a
    residual, never an exception.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    mu, form, inside = _parts(which)
    z = np.asarray(z, dtype=complex)
    _require(inside(z), "domain")
    X = np.asarray(X, dtype=float)
    omega = form(z)
    lhs_field = induced_field(X, z, which) @ omega
    x0 = as_real(z)
    dim = x0.size
    shifts = step * np.eye(dim)
    plus = mu(as_complex(x0 + shifts)) @ X
    minus = mu(as_complex(x0 - shifts)) @ X
    dmu = (plus - minus) / (2 * step)
    return float(np.max(np.abs(dmu - lhs_field)))


def random_ball_points(rng, n, size, radius=0.8):
    """Points with |z| uniform in (0.05, radius) and a uniformly random direction."""
    z = rng.normal(size=(size, n)) + 1j * rng.normal(size=(size, n))
    z /= np.linalg.norm(z, axis=-1, keepdims=True)
    return z * rng.uniform(0.05, radius, size=(size, 1))


def random_siegel_points(rng, n, size, spread=1.0, defect=(0.5, 1.5)):
    """Points with Gaussian ``z'``, ``Re z_n`` and a defect ``Im z_n - |z'|^2`` uniform in ``defect``."""
    zp = 0.5 * spread * (rng.normal(size=(size, n - 1)) + 1j * rng.normal(size=(size, n - 1)))
    d = rng.uniform(*defect, size=size)
    x = spread * rng.normal(size=size)
    y = d + np.sum(np.abs(zp) ** 2, axis=-1)
    return np.concatenate([zp, (x + 1j * y)[:, None]], axis=-1)
