"""Integration engines for the three integral families.

* ``R^n_+`` with weight ``h^p (1 + |h|_1)^(-s)``: collapsed (Duffy) coordinates
  ``h_k = (1 + h_1 + ... + h_{k-1}) x_k / (1 - x_k)`` turn the weight into the
  product ``prod_k x_k^{p_k} (1 - x_k)^{b_k}``, integrated with Gauss-Jacobi
  nodes.  For ``f = 1`` the rule is exact.
* the Romanovski-Routh line integral, in angle form ``u = cot(theta)``.
* the weighted ball measure, in polar form: trapezoid rule on each angle and a
  collapsed simplex rule on ``rho_j = |z_j|^2``.

Every integrator splits its axes at registered discontinuities so indicator
symbols keep spectral accuracy, and returns ``(value, err_estimate)`` where the
estimate compares two node counts.
"""

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import special as sp

from ._rules import gauss_jacobi, piece_rule
from .errors import DivergenceError, SymbolArityError
from .special import MultiIndex, c_lambda, check_weight
from .symbols import SymbolSpec

METHODS = ("duffy-simplex", "tensor-gauss", "monte-carlo")


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and method selection for every integral.

    ``nodes_per_axis`` is the Gauss order on each smooth piece of an axis;
    ``subdivisions`` splits each piece into equal panels.  The error estimate
    repeats the computation with ``nodes_per_axis // 2`` nodes.
    """

    nodes_per_axis: int = 24
    subdivisions: int = 1
    target_rel_tol: float = 1e-10
    method: str = "duffy-simplex"
    rng_seed: int = 0
    mc_samples: int = 200_000
    angular_nodes: Optional[int] = None

    def __post_init__(self):
        if self.nodes_per_axis < 2:
            raise ValueError("nodes_per_axis must be at least 2")
        if self.subdivisions < 1:
            raise ValueError("subdivisions must be at least 1")
        if not self.target_rel_tol > 0:
            raise ValueError("target_rel_tol must be positive")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.angular_nodes is not None and self.angular_nodes < 1:
            raise ValueError("angular_nodes must be positive")

    @property
    def coarse(self):
        return max(2, self.nodes_per_axis // 2)

    def with_nodes(self, nodes):
        d = asdict(self)
        d["nodes_per_axis"] = int(nodes)
        return QuadratureSpec(**d)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


DEFAULT_SPEC = QuadratureSpec()


def _spec(spec):
    return DEFAULT_SPEC if spec is None else spec


# ---------------------------------------------------------------------------
# one axis


def axis_rule(lo, hi, cuts, n, left=0.0, right=0.0, subdivisions=1, absorb=True):
    """Composite rule for ``int_lo^hi (x - lo)^left (hi - x)^right g(x) dx``.

    ``lo`` and ``hi`` have shape ``(M,)``; ``cuts`` has shape ``(M, C)`` and may
    contain values outside ``(lo, hi)`` (or NaN), which are ignored.  The axis
    is split at the cuts; the piece touching ``lo`` (``hi``) absorbs the
    endpoint power into Gauss-Jacobi nodes, other pieces evaluate it.

    Returns nodes and weights of shape ``(M, K)``.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), lo.shape)
    cuts = np.asarray(cuts, dtype=float).reshape(lo.shape[0], -1)
    inside = (cuts > lo[:, None]) & (cuts < hi[:, None])
    cuts = np.where(inside, cuts, lo[:, None])
    # drop columns that never fall inside
    cuts = cuts[:, inside.any(axis=0)]
    edges = np.sort(np.concatenate([lo[:, None], cuts, hi[:, None]], axis=1), axis=1)
    if subdivisions > 1:
        frac = np.arange(subdivisions) / subdivisions
        a, b = edges[:, :-1], edges[:, 1:]
        inner = a[..., None] + (b - a)[..., None] * frac
        edges = np.concatenate([inner.reshape(lo.shape[0], -1), hi[:, None]], axis=1)
    a, b = edges[:, :-1], edges[:, 1:]
    touch_lo = (a == lo[:, None]) & (b > a)
    touch_hi = b == hi[:, None]

    xs, ws = None, None
    for use_l in (False, True):
        for use_r in (False, True):
            if not absorb and (use_l or use_r):
                continue
            sel = (touch_lo == use_l) & (touch_hi == use_r) if absorb else np.ones_like(a, dtype=bool)
            if not sel.any():
                continue
            x, w = piece_rule(a, b, n, left if use_l else 0.0, right if use_r else 0.0)
            if not use_l and left != 0.0:
                w = w * np.abs(x - lo[:, None, None]) ** left
            if not use_r and right != 0.0:
                w = w * np.abs(hi[:, None, None] - x) ** right
            if xs is None:
                xs, ws = np.zeros_like(x), np.zeros_like(w)
            xs = np.where(sel[..., None], x, xs)
            ws = np.where(sel[..., None], w, ws)
    M = lo.shape[0]
    return xs.reshape(M, -1), ws.reshape(M, -1)


# ---------------------------------------------------------------------------
# R^n_+ with (1 + |h|_1) power weight


@dataclass(frozen=True)
class Rule:
    points: np.ndarray
    weights: np.ndarray


def _level_exponents(p, s):
    # level k carries x^{p_k} (1 - x)^{b_k},  b_k = e_k - p_k - 2,  e_k = s - sum_{j>k}(p_j + 1)
    n = len(p)
    out = []
    for k in range(n):
        e_k = s - sum(p[j] + 1 for j in range(k + 1, n))
        out.append((float(p[k]), float(e_k - p[k] - 2)))
    return out


def _check_convergence(p, s):
    if not s > p.order + len(p):
        raise DivergenceError(
            f"integral over R^{len(p)}_+ diverges: need s > |p| + n = {p.order + len(p)}, got s = {s}"
        )


def h_rule(p, s, breakpoints=None, nodes=24, subdivisions=1, method="duffy-simplex"):
    """Nodes/weights for ``int_{R^n_+} h^p (1+|h|_1)^(-s) g(h) dh``.

    ``breakpoints[k]`` lists discontinuities of ``g`` in ``h_{k+1}``.
    """
    p = MultiIndex(p)
    n = len(p)
    _check_convergence(p, s)
    breakpoints = breakpoints or [()] * n
    pts = np.zeros((1, 0))
    wts = np.ones(1)
    absorb = method != "tensor-gauss"
    for k, (a_k, b_k) in enumerate(_level_exponents(p, s)):
        c = 1.0 + pts.sum(axis=1)
        bps = np.asarray(breakpoints[k] if k < len(breakpoints) else (), dtype=float)
        cuts = bps[None, :] / (c[:, None] + bps[None, :]) if bps.size else np.zeros((c.size, 0))
        x, w = axis_rule(np.zeros_like(c), np.ones_like(c), cuts, nodes, a_k, b_k, subdivisions, absorb)
        hk = c[:, None] * x / (1.0 - x)
        K = x.shape[1]
        pts = np.concatenate([np.repeat(pts, K, axis=0), hk.reshape(-1, 1)], axis=1)
        wts = (wts[:, None] * w).ravel()
    return Rule(pts, wts)


def h_sample(p, s, samples, rng):
    """Importance sample for the h-weight: returns points and the total weight mass."""
    p = MultiIndex(p)
    _check_convergence(p, s)
    pts = np.zeros((samples, 0))
    log_mass = 0.0
    for a_k, b_k in _level_exponents(p, s):
        x = rng.beta(a_k + 1.0, b_k + 1.0, size=samples)
        c = 1.0 + pts.sum(axis=1)
        pts = np.concatenate([pts, (c * x / (1.0 - x))[:, None]], axis=1)
        log_mass += sp.betaln(a_k + 1.0, b_k + 1.0)
    return pts, math.exp(log_mass)


def _as_h_function(f, n):
    if f is None:
        return None
    if isinstance(f, SymbolSpec):
        if f.uses_u:
            raise SymbolArityError("an h-integrand may not depend on u")
        if f.h_arity > n:
            raise SymbolArityError(f"symbol uses h{f.h_arity}, integral is over R^{n}_+")
        if f.is_constant:
            val = float(f.evaluate())
            return lambda h: np.full(h.shape[0], val)
        return lambda h: f.evaluate(h if n else None)
    if callable(f):
        return f
    val = float(f)
    return lambda h: np.full(h.shape[0], val)


def _h_breakpoints(f, n):
    if isinstance(f, SymbolSpec):
        return [f.h_breakpoints(j + 1) for j in range(n)]
    return [()] * n


def integrate_h_weighted(p, s, f, n, spec=None):
    """``int_{R^n_+} h^p (1+|h|_1)^(-s) f(h) dh`` with an error estimate.

    ``f`` may be ``None`` (the constant 1), a number, a :class:`SymbolSpec` or a
    vectorised callable on arrays of shape ``(K, n)``.
    """
    spec = _spec(spec)
    p = MultiIndex(p)
    if len(p) != n:
        raise ValueError(f"multi-index has {len(p)} entries, dimension is {n}")
    _check_convergence(p, s)
    func = _as_h_function(f, n)
    if spec.method == "monte-carlo":
        rng = np.random.default_rng(spec.rng_seed)
        pts, mass = h_sample(p, s, spec.mc_samples, rng)
        vals = np.ones(pts.shape[0]) if func is None else func(pts)
        return mass * float(vals.mean()), mass * float(vals.std(ddof=1) / math.sqrt(vals.size))
    bps = _h_breakpoints(f, n)
    out = []
    for nodes in (spec.nodes_per_axis, spec.coarse):
        rule = h_rule(p, s, bps, nodes, spec.subdivisions, spec.method)
        vals = 1.0 if func is None else func(rule.points)
        out.append(float(np.sum(rule.weights * vals)))
    return out[0], abs(out[0] - out[1])


# ---------------------------------------------------------------------------
# Romanovski-Routh line integrals


def theta_rule(alpha, q, u_breakpoints=(), nodes=24, subdivisions=1):
    """Rule for ``int_R e^{-alpha arccot u} (1+u^2)^{-q} g(u) du`` in angle form.

    Returns ``(theta, weights, log_scale)``; the integral is
    ``exp(log_scale) * sum(weights * g(cot(theta)))``.  Weights are normalised
    so that the exponential factor peaks at 1, which keeps large ``|alpha|``
    finite.
    """
    if not q > 0.5:
        raise DivergenceError(f"Romanovski-Routh integral diverges: need q > 1/2, got q = {q}")
    c = 2.0 * q - 2.0
    alpha = float(alpha)
    n = int(nodes) + int(math.ceil(abs(alpha)))
    cuts = np.array([0.5 * math.pi - math.atan(b) for b in u_breakpoints], dtype=float)[None, :]
    theta, w = axis_rule([0.0], [math.pi], cuts, n, c, c, subdivisions)
    theta, w = theta[0], w[0]
    # sin^c = (theta (pi - theta))^c * g^c with g smooth
    g = np.sin(theta) / (theta * (math.pi - theta))
    shift = 0.0 if alpha >= 0 else math.pi
    w = w * g**c * np.exp(-alpha * (theta - shift))
    return theta, w, -alpha * shift


def _as_u_function(g):
    if g is None:
        return None
    if isinstance(g, SymbolSpec):
        if g.h_arity:
            raise SymbolArityError("a u-integrand may not depend on h")
        if g.is_constant:
            val = float(g.evaluate())
            return lambda u: np.full(u.shape, val)
        return lambda u: g.evaluate(None, u)
    if callable(g):
        return g
    val = float(g)
    return lambda u: np.full(u.shape, val)


def cot(theta):
    return np.cos(theta) / np.sin(theta)


def integrate_rr(alpha, q, g, spec=None):
    """``int_R e^{-alpha arccot u} (1 + u^2)^(-q) g(u) du`` with an error estimate."""
    spec = _spec(spec)
    func = _as_u_function(g)
    bps = g.breakpoints.get("u", ()) if isinstance(g, SymbolSpec) else ()
    out = []
    for nodes in (spec.nodes_per_axis, spec.coarse):
        theta, w, log_scale = theta_rule(alpha, q, bps, nodes, spec.subdivisions)
        vals = 1.0 if func is None else func(cot(theta))
        out.append(math.exp(log_scale) * float(np.sum(w * vals)))
    return out[0], abs(out[0] - out[1])


# ---------------------------------------------------------------------------
# the ball


def _vertex_cuts(k, outer, R, planes, n, tol=1e-13):
    """rho_k-coordinates of arrangement vertices, given the outer coordinates.

    ``planes`` is a list of ``(coef (n,), rhs)`` hyperplanes in rho-space.  In
    the slice with ``rho_0..rho_{k-1}`` fixed, the inner integral is smooth in
    ``rho_k`` except where the combinatorics of the arrangement changes, i.e. at
    the projections of its vertices.
    """
    m = n - k
    M = outer.shape[0]
    hyper = []
    for coef, rhs in planes:
        coef = np.asarray(coef, dtype=float)
        hyper.append((coef[k:], rhs - outer @ coef[:k]))
    for j in range(m):
        e = np.zeros(m)
        e[j] = 1.0
        hyper.append((e, np.zeros(M)))
    hyper.append((np.ones(m), R))
    cands = []
    for combo in itertools.combinations(range(len(hyper)), m):
        A = np.array([hyper[i][0] for i in combo])
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        rhs = np.array([np.broadcast_to(hyper[i][1], (M,)) for i in combo])
        sol = np.linalg.solve(A, rhs)
        ok = np.all(sol >= -tol, axis=0) & (sol.sum(axis=0) <= R + tol)
        ok &= (sol[0] > tol) & (sol[0] < R - tol)
        if ok.any():
            cands.append(np.where(ok, sol[0], np.nan))
    if not cands:
        return np.zeros((M, 0))
    cands = np.array(cands).T
    if M == 1:
        vals = np.unique(np.round(cands[~np.isnan(cands)], 14))
        return vals[None, :]
    return cands


def simplex_rule(n, lam, nodes=24, planes=(), subdivisions=1):
    """Rule for ``int_{rho >= 0, sum rho < 1} G(rho) (1 - sum rho)^lam d rho``.

    Levels are nested ``rho_0`` (outer) to ``rho_{n-1}`` (inner); the piece
    touching the top of each level absorbs the power ``lam + (n - 1 - k)`` that
    the inner integrals produce there.  ``planes`` are hyperplanes across which
    ``G`` may jump.
    """
    pts = np.zeros((1, 0))
    wts = np.ones(1)
    for k in range(n):
        R = 1.0 - pts.sum(axis=1)
        power = lam + (n - 1 - k)
        cuts = _vertex_cuts(k, pts, R, planes, n) if planes else np.zeros((R.size, 0))
        x, w = axis_rule(np.zeros_like(R), R, cuts, nodes, 0.0, power, subdivisions)
        if k < n - 1:
            with np.errstate(divide="ignore"):
                w = w / np.where(w > 0, (R[:, None] - x), 1.0) ** power
        K = x.shape[1]
        pts = np.concatenate([np.repeat(pts, K, axis=0), x.reshape(-1, 1)], axis=1)
        wts = (wts[:, None] * w).ravel()
    keep = wts != 0
    return Rule(pts[keep], wts[keep])


def default_angular_nodes(degree):
    return 4 * int(degree) + 1


@dataclass(frozen=True)
class BallGrid:
    """Polar product grid for the weighted ball measure.

    ``rho`` (R, n) radial nodes with weights ``w`` (R,) already including the
    constant ``c_lambda / 2^n``; ``M`` equispaced angles per coordinate with
    weight ``2 pi / M`` each.
    """

    rho: np.ndarray
    w: np.ndarray
    M: int

    @property
    def theta(self):
        return 2.0 * math.pi * np.arange(self.M) / self.M

    def points(self, rows=slice(None)):
        """Complex points of shape ``(r, M, ..., M, n)`` for the selected radial rows."""
        rho = self.rho[rows]
        n = rho.shape[1]
        r = np.sqrt(rho)
        phases = np.exp(1j * self.theta)
        z = np.empty((rho.shape[0],) + (self.M,) * n + (n,), dtype=complex)
        for j in range(n):
            shape = [1] * n
            shape[j] = self.M
            z[..., j] = r[:, j].reshape((-1,) + (1,) * n) * phases.reshape(shape)
        return z

    @property
    def angular_weight(self):
        return (2.0 * math.pi / self.M) ** self.rho.shape[1]


def ball_grid(n, lam, nodes=24, angular=None, planes=(), subdivisions=1):
    lam = check_weight(lam)
    M = angular or default_angular_nodes(4)
    rule = simplex_rule(n, lam, nodes, planes, subdivisions)
    return BallGrid(rule.points, rule.weights * c_lambda(n, lam) / 2.0**n, M)


def _ball_sum(grid, g, chunk=4096):
    total = 0.0 + 0.0j
    for start in range(0, grid.rho.shape[0], chunk):
        rows = slice(start, start + chunk)
        z = grid.points(rows)
        vals = np.asarray(g(z))
        vals = vals.reshape(vals.shape[0], -1)
        total += np.dot(grid.w[rows], vals.sum(axis=1))
    total *= grid.angular_weight
    return total.real if total.imag == 0 else total


def integrate_ball(g, lam, n, spec=None, planes=()):
    """``int_{B^n} g dv_lambda`` with ``g`` vectorised over complex arrays ``(..., n)``.

    ``planes`` lists hyperplanes ``coef . (|z_1|^2, ..., |z_n|^2) = rhs`` across
    which ``g`` jumps.  The angular node count defaults to 17 per coordinate.
    """
    spec = _spec(spec)
    out = []
    for nodes in (spec.nodes_per_axis, spec.coarse):
        grid = ball_grid(n, lam, nodes, spec.angular_nodes, planes, spec.subdivisions)
        out.append(_ball_sum(grid, g))
    return out[0], abs(out[0] - out[1])
