"""Independent checks: brute-force Toeplitz matrices, PDE residuals, isometry constants.

The Toeplitz matrix of a symbol ``a`` in the normalised monomial basis is
built directly from weighted inner products ``<a e_p, e_q>`` over the ball.
Holomorphic basis vectors make the Bergman projection unnecessary, and no
invariance of ``a`` is assumed, so diagonality is a genuine test.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import DEFAULT_SPEC, ball_grid, default_angular_nodes, integrate_ball, integrate_h_weighted, integrate_rr
from .special import MultiIndex, c_lambda, check_weight, multi_indices, pochhammer, romanovski_total
from .spectra import as_symbol, gamma_qe
from .symbols import check_arity

FD_STEP = 1e-5


def _spec(spec):
    return DEFAULT_SPEC if spec is None else spec


# ---------------------------------------------------------------------------
# monomials


def monomial_norm(p, lam, n=None):
    """Squared norm ``||z^p||^2 = p! Gamma(n+lam+1) / Gamma(n+|p|+lam+1)`` in the weighted space."""
    p = MultiIndex(p)
    n = len(p) if n is None else n
    lam = check_weight(lam)
    return math.exp(p.log_factorial + math.lgamma(n + lam + 1.0) - math.lgamma(n + p.order + lam + 1.0))


def monomial_norm_quadrature(p, lam, spec=None):
    """``int |z^p|^2 dv_lambda`` by ball quadrature; cross-check for :func:`monomial_norm`."""
    p = MultiIndex(p)
    exps = np.array(p, dtype=float)
    return integrate_ball(lambda z: np.prod(np.abs(z) ** (2 * exps), axis=-1), lam, len(p), spec)


# ---------------------------------------------------------------------------
# Toeplitz matrices


@dataclass(frozen=True)
class ToeplitzMatrix:
    """``matrix[i, j] = <a e_{basis[j]}, e_{basis[i]}>``; ``err`` compares two radial node counts."""

    degree: int
    basis: tuple
    matrix: np.ndarray
    err: float
    lam: float
    n: int

    @property
    def diagonal(self):
        return np.diag(self.matrix).copy()

    @property
    def max_offdiag(self):
        off = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.max(np.abs(off))) if off.size else 0.0

    @property
    def hermitian_defect(self):
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def to_dict(self):
        return {
            "degree": self.degree,
            "n": self.n,
            "lambda": self.lam,
            "basis": [list(p) for p in self.basis],
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
            "err": self.err,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self):
        """Long format: one row per (p, q) entry."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "q", "re", "im"])
        for i, p in enumerate(self.basis):
            for j, q in enumerate(self.basis):
                v = self.matrix[i, j]
                w.writerow([" ".join(map(str, p)), " ".join(map(str, q)), f"{v.real:.17g}", f"{v.imag:.17g}"])
        return buf.getvalue()


def _moment_matrix(grid, a, basis, chunk=2048):
    n = grid.rho.shape[1]
    M = grid.M
    P = np.array(basis, dtype=float)
    B = len(basis)
    out = np.zeros((B, B), dtype=complex)
    diff = np.array([[tuple((np.array(p) - np.array(q)) % M) for q in basis] for p in basis])
    half_sum = 0.5 * (P[:, None, :] + P[None, :, :])
    axes = tuple(range(1, n + 1))
    for start in range(0, grid.rho.shape[0], chunk):
        rows = slice(start, start + chunk)
        z = grid.points(rows)
        vals = np.asarray(a(z))
        A = np.fft.ifftn(vals, axes=axes) * (2.0 * math.pi) ** n
        rho = grid.rho[rows]
        logrho = np.log(rho)
        w = grid.w[rows]
        for i in range(B):
            for j in range(B):
                mono = np.exp(logrho @ half_sum[i, j])
                coeff = A[(slice(None),) + tuple(diff[i, j])]
                out[i, j] += np.dot(w * mono, coeff)
    return out


def toeplitz_matrix_ball(a, lam, n, D, spec=None, planes=()):
    """Truncated Toeplitz matrix of ``a`` for monomials of degree at most ``D``.

    ``a`` is vectorised over complex arrays of shape ``(..., n)``.  ``planes``
    are hyperplanes in ``(|z_1|^2, ..., |z_n|^2)`` across which ``a`` jumps
    (see :func:`h_planes`).
    """
    lam = check_weight(lam)
    spec = _spec(spec)
    basis = tuple(multi_indices(n, D))
    norms = np.sqrt([monomial_norm(p, lam, n) for p in basis])
    M = spec.angular_nodes or default_angular_nodes(D)
    mats = []
    for nodes in (spec.nodes_per_axis, spec.coarse):
        grid = ball_grid(n, lam, nodes, M, planes, spec.subdivisions)
        # rows index q (the test vector), columns p
        raw = _moment_matrix(grid, a, basis).T
        mats.append(raw / np.outer(norms, norms))
    err = float(np.max(np.abs(mats[0] - mats[1])))
    return ToeplitzMatrix(D, basis, mats[0], err, lam, n)


def h_planes(f, n):
    """Hyperplanes in ``rho = |z|^2`` space where ``f(H(z))`` may jump.

    A breakpoint ``h_j = b`` is the plane ``rho_j + b * sum(rho) = b``.
    """
    planes = []
    for j in range(n):
        for b in f.h_breakpoints(j + 1):
            coef = np.full(n, float(b))
            coef[j] += 1.0
            planes.append((coef, float(b)))
    return tuple(planes)


def symbol_on_ball(f, n):
    """``z -> f(H(z))`` with ``H(z)_j = |z_j|^2 / (1 - |z|^2)``."""
    f = as_symbol(f)
    check_arity(f, "qe", n)

    def a(z):
        r2 = np.abs(z) ** 2
        h = r2 / (1.0 - r2.sum(axis=-1, keepdims=True))
        if f.is_constant:
            return np.full(h.shape[:-1], float(f.evaluate()))
        return f.evaluate(h)

    return a


def diagonalization_report(f, lam, n, D, spec=None):
    """Toeplitz matrix of ``f o H`` against the multipliers ``gamma_qe``."""
    f = as_symbol(f)
    mat = toeplitz_matrix_ball(symbol_on_ball(f, n), lam, n, D, spec, h_planes(f, n))
    gammas = np.array([gamma_qe(f, lam, n, p, spec)[0] for p in mat.basis])
    dev = np.abs(mat.diagonal - gammas)
    return {
        "n": n,
        "lambda": float(lam),
        "degree": D,
        "symbol": f.text,
        "max_offdiag": mat.max_offdiag,
        "max_diag_dev": float(dev.max()),
        "quadrature_err": mat.err,
        "diagonal": mat.diagonal.real.tolist(),
        "gamma": gammas.real.tolist(),
    }


def verify_diagonalization(f, lam, n, D, spec=None):
    """Return ``(max off-diagonal, max |M[p, p] - gamma_qe(p)|)``."""
    rep = diagonalization_report(f, lam, n, D, spec)
    return rep["max_offdiag"], rep["max_diag_dev"]


# ---------------------------------------------------------------------------
# holomorphy systems in moment coordinates


def _positive(h, what="h"):
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0):
        raise DomainError(f"{what} must be strictly positive")
    return h


def phi_qe(p, h):
    """``h^(p/2) / (1 + |h|_1)^(|p|/2)``."""
    p = np.asarray(MultiIndex(p), dtype=float)
    h = _positive(h)
    return float(np.prod(h ** (p / 2)) / (1.0 + h.sum()) ** (p.sum() / 2))


def _grad_phi_qe(p, h):
    p = np.asarray(MultiIndex(p), dtype=float)
    phi = phi_qe(p.astype(int), h)
    return phi * (p / (2.0 * h) - p.sum() / (2.0 * (1.0 + h.sum())))


def _fd_grad(func, h, step):
    h = np.asarray(h, dtype=float)
    out = []
    for j in range(h.size):
        e = np.zeros_like(h)
        e[j] = step
        out.append((func(h + e) - func(h - e)) / (2.0 * step))
    return np.array(out)


def _relative(lhs, rhs, *terms):
    """Max residual over the system, relative to the largest term appearing in it."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    scale = max([float(np.max(np.abs(x), initial=0.0)) for x in (lhs, rhs) + terms])
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(lhs - rhs))) / scale


def pde_residual_qe(p, h, fd_step=None):
    """Max relative residual of ``p_j/(2h_j) phi = d_j phi + sum_k h_k d_k phi``.

    Derivatives are analytic, or central differences with ``fd_step``.
    """
    p = MultiIndex(p)
    h = _positive(h)
    if len(p) != h.size:
        raise ValueError("p and h have different lengths")
    if fd_step:
        grad = _fd_grad(lambda x: phi_qe(p, x), h, fd_step)
    else:
        grad = _grad_phi_qe(p, h)
    phi = phi_qe(p, h)
    lhs = np.array(p, dtype=float) / (2.0 * h) * phi
    rhs = grad + np.dot(h, grad)
    return _relative(lhs, rhs, grad)


def _qh_exponent(p_prime, xi, n, lam):
    return 1j * xi - 0.5 * (MultiIndex(p_prime).order + n + lam + 1.0)


def phi_qh(p_prime, xi, h, lam=0.0):
    """``h'^(p'/2) (i (1 + |h'|_1) + h_n)^(i xi - (|p'| + n + lam + 1)/2)``.

    The power uses the logarithm with argument in ``(0, 2 pi)``; the base has
    positive imaginary part, where this agrees with the principal branch.
    """
    h = np.asarray(h, dtype=float)
    hp = _positive(h[:-1], "h'")
    pp = np.asarray(MultiIndex(p_prime), dtype=float)
    n = h.size
    w = 1j * (1.0 + hp.sum()) + h[-1]
    return np.prod(hp ** (pp / 2)) * np.exp(_qh_exponent(p_prime, xi, n, lam) * np.log(w))


def _grad_phi_qh(p_prime, xi, h, lam):
    h = np.asarray(h, dtype=float)
    pp = np.asarray(MultiIndex(p_prime), dtype=float)
    n = h.size
    c = _qh_exponent(p_prime, xi, n, lam)
    w = 1j * (1.0 + h[:-1].sum()) + h[-1]
    phi = phi_qh(p_prime, xi, h, lam)
    grad = np.empty(n, dtype=complex)
    grad[:-1] = phi * (pp / (2.0 * h[:-1]) + 1j * c / w)
    grad[-1] = phi * c / w
    return grad


def pde_residual_qh(p_prime, xi, h, fd_step=None, lam=0.0):
    """Max relative residual of the quasi-hyperbolic holomorphy system at ``h = (h', h_n)``."""
    p_prime = MultiIndex(p_prime)
    h = np.asarray(h, dtype=float)
    _positive(h[:-1], "h'")
    n = h.size
    if len(p_prime) != n - 1:
        raise ValueError("p' must have n - 1 entries")
    if fd_step:
        grad = _fd_grad(lambda x: phi_qh(p_prime, xi, x, lam), h, fd_step)
    else:
        grad = _grad_phi_qh(p_prime, xi, h, lam)
    c = _qh_exponent(p_prime, xi, n, lam)
    w = 1j * (1.0 + h[:-1].sum()) + h[-1]
    phi = phi_qh(p_prime, xi, h, lam)
    rhs = np.empty(n, dtype=complex)
    rhs[:-1] = (np.asarray(p_prime, dtype=float) / (2.0 * h[:-1]) + 1j * c / w) * phi
    rhs[-1] = c / w * phi
    return _relative(grad, rhs)


def arccot(u):
    """Branch with values in ``(0, pi)``."""
    return np.pi / 2 - np.arctan(u)


def f_weight(p_prime, xi, h_prime, u, lam=0.0):
    """``(F, |F|^2)`` with ``|F|^2`` from the real closed form.

    ``F = (1 + |h'|_1)^(i xi - (n+lam)/2) (i + u)^(i xi - (|p'|+n+lam+1)/2)`` and
    ``n = len(h') + 1``.
    """
    hp = _positive(np.atleast_1d(np.asarray(h_prime, dtype=float)), "h'") if np.size(h_prime) else np.zeros(0)
    p_prime = MultiIndex(p_prime)
    n = hp.size + 1
    lam = check_weight(lam)
    a = 1.0 + hp.sum()
    c1 = 1j * xi - 0.5 * (n + lam)
    c2 = _qh_exponent(p_prime, xi, n, lam)
    F = np.exp(c1 * math.log(a)) * np.exp(c2 * np.log(1j + u))
    q = 0.5 * (p_prime.order + n + lam + 1.0)
    mod2 = np.exp(-2.0 * xi * arccot(u)) / (a ** (n + lam) * (1.0 + u * u) ** q)
    return F, mod2


# ---------------------------------------------------------------------------
# isometry constants


def bargmann_constant_qe(p, lam, n):
    """Squared prefactor of the quasi-elliptic Bargmann-type transform (nominal constant)."""
    p = MultiIndex(p)
    return (2 * math.pi) ** n * pochhammer(n + lam + 1.0, p.order) / (p.factorial * pochhammer(lam + 1.0, n))


def bargmann_constant_qh(p_prime, xi, lam, n):
    p_prime = MultiIndex(p_prime)
    V = romanovski_total(2.0 * xi, -0.5 * (p_prime.order + n + lam - 1.0))
    return 2 * (2 * math.pi) ** n * pochhammer(n + lam, p_prime.order) / (
        p_prime.factorial * pochhammer(lam + 1.0, n) * V
    )


def bargmann_norm_qe(p, lam, n, spec=None):
    """Measured ``||W e_p||^2`` against ``c_lam dh / (2^n (1+|h|_1)^(n+lam+1))``, by quadrature."""
    p = MultiIndex(p)
    lam = check_weight(lam)
    integral, err = integrate_h_weighted(p, p.order + n + lam + 1.0, None, n, spec)
    k = bargmann_constant_qe(p, lam, n) * c_lambda(n, lam) / 2.0**n
    return k * integral, k * err


def bargmann_norm_qh(p_prime, xi, lam, n, spec=None):
    """Measured ``||W e_(p', xi)||^2`` per unit ``d xi`` against ``c_lam/2^(n+1) |F|^2``."""
    p_prime = MultiIndex(p_prime)
    lam = check_weight(lam)
    s_h = p_prime.order + n + lam
    q = 0.5 * (s_h + 1.0)
    ih, eh = integrate_h_weighted(p_prime, s_h, None, n - 1, spec)
    iu, eu = integrate_rr(2.0 * xi, q, None, spec)
    k = bargmann_constant_qh(p_prime, xi, lam, n) * c_lambda(n, lam) / 2.0 ** (n + 1)
    return k * ih * iu, k * (abs(ih) * eu + abs(iu) * eh)


def bargmann_normalization_check(p, lam, n, spec=None, case="qe", xi=0.0):
    """Deviation ``||W e_p||^2 - 1`` of the transform with its nominal constant."""
    if case == "qe":
        value, _ = bargmann_norm_qe(p, lam, n, spec)
    elif case == "qh":
        value, _ = bargmann_norm_qh(p, xi, lam, n, spec)
    else:
        raise ValueError("case must be 'qe' or 'qh'")
    return value - 1.0


def bargmann_report(lam, n, pmax=6, spec=None, case="qe", xi=0.0):
    """Measured isometry constant over ``|p| <= pmax``.

    ``spread`` is the relative spread across ``p`` (the constant may not
    depend on ``p``); ``ratio_to_nominal`` is measured / 1, since the nominal
    constant claims an isometry.  ``predicted`` is the value implied by the
    exact Dirichlet integral.
    """
    lam = check_weight(lam)
    dim = n if case == "qe" else n - 1
    values = []
    for p in multi_indices(dim, pmax):
        if case == "qe":
            v, _ = bargmann_norm_qe(p, lam, n, spec)
        else:
            v, _ = bargmann_norm_qh(p, xi, lam, n, spec)
        values.append((list(p), v))
    vals = np.array([v for _, v in values])
    mean = float(vals.mean())
    predicted = 1.0 / pochhammer(lam + 1.0, n if case == "qe" else n - 1)
    return {
        "case": case,
        "lambda": lam,
        "n": n,
        "xi": xi if case == "qh" else None,
        "measured": mean,
        "spread": float((vals.max() - vals.min()) / abs(mean)),
        "ratio_to_nominal": mean,
        "predicted": predicted,
        "corrected_constant_factor": 1.0 / mean,
        "values": values,
    }
