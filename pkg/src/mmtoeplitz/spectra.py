"""Spectral multiplier functions gamma for invariant Toeplitz symbols.

All four cases are computed in normalised ratio form

    gamma = int f w / int w

with numerator and denominator sharing one node set, so ``gamma(1) == 1`` up
to roundoff and most of the quadrature error cancels.  Weights:

* quasi-elliptic, ``p`` in ``Z^n_+``:
  ``h^p (1 + |h|_1)^-(|p|+n+lam+1)`` on ``R^n_+``
* quasi-hyperbolic, ``(p', xi)``:
  ``h'^p' (1 + |h'|_1)^-(|p'|+n+lam)`` on ``R^{n-1}_+`` times
  ``exp(-2 xi arccot u) (1 + u^2)^-(|p'|+n+lam+1)/2`` on ``R``
* hyperbolic: the quasi-hyperbolic case with ``n = 1``
* ``H0``-symbols (no ``u``): the ``h'`` factor alone

Complex symbols are given as a pair ``(f_re, f_im)`` and handled as two real
computations.
"""

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .quadrature import DEFAULT_SPEC, cot, h_rule, h_sample, integrate_h_weighted, theta_rule
from .special import MultiIndex, check_weight, multi_indices, pochhammer, romanovski_total
from .symbols import SymbolSpec, check_arity, constant, parse, split_product

CASES = ("qe", "qh", "hyp", "qh-h0")
THREADS_ENV = "MMTOEPLITZ_THREADS"
_EPS = np.finfo(float).eps


def _floor(value):
    return 8 * _EPS * max(1.0, abs(value))


def as_symbol(f):
    """Coerce text, numbers or specs to a :class:`SymbolSpec`."""
    if isinstance(f, SymbolSpec):
        return f
    if isinstance(f, str):
        return parse(f)
    if isinstance(f, (int, float, np.integer, np.floating)):
        return constant(float(f))
    raise TypeError(f"cannot interpret {f!r} as a symbol")


def _components(f):
    """Split ``f`` into (re, im) real specs; ``im`` is None for real symbols."""
    if isinstance(f, tuple) and len(f) == 2:
        return as_symbol(f[0]), as_symbol(f[1])
    return as_symbol(f), None


def _combine(re, im):
    if im is None:
        return complex(re[0]), float(re[1])
    return complex(re[0], im[0]), float(math.hypot(re[1], im[1]))


def _spec(spec):
    return DEFAULT_SPEC if spec is None else spec


# ---------------------------------------------------------------------------
# real-valued kernels


def _h_breakpoints(f, n):
    return [f.h_breakpoints(j + 1) for j in range(n)]


def _h_gamma(f, p, s, n, spec):
    """Ratio over ``R^n_+`` with weight ``h^p (1+|h|_1)^-s``."""
    if spec.method == "monte-carlo":
        pts, _ = h_sample(p, s, spec.mc_samples, np.random.default_rng(spec.rng_seed))
        vals = np.broadcast_to(f.evaluate(pts), pts.shape[:1])
        return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))
    out = []
    bps = _h_breakpoints(f, n)
    for nodes in (spec.nodes_per_axis, spec.coarse):
        rule = h_rule(p, s, bps, nodes, spec.subdivisions, spec.method)
        vals = np.broadcast_to(f.evaluate(rule.points), rule.weights.shape)
        out.append(float(np.dot(rule.weights, vals) / rule.weights.sum()))
    return out[0], abs(out[0] - out[1]) + _floor(out[0])


def _u_gamma(f, alpha, q, spec):
    """Ratio over ``R`` with the Romanovski-Routh weight."""
    out = []
    for nodes in (spec.nodes_per_axis, spec.coarse):
        theta, w, _ = theta_rule(alpha, q, f.breakpoints.get("u", ()), nodes, spec.subdivisions)
        vals = np.broadcast_to(f.evaluate(None, cot(theta)), w.shape)
        out.append(float(np.dot(w, vals) / w.sum()))
    return out[0], abs(out[0] - out[1]) + _floor(out[0])


def _qh_exponents(p_prime, lam, n):
    s_h = p_prime.order + n + lam
    q = 0.5 * (p_prime.order + n + lam + 1.0)
    return s_h, q


def _hu_gamma(f, p_prime, lam, n, xi, spec):
    """Ratio over ``R^{n-1}_+ x R`` without factorisation."""
    s_h, q = _qh_exponents(p_prime, lam, n)
    alpha = 2.0 * xi
    bps = _h_breakpoints(f, n - 1)
    if spec.method == "monte-carlo":
        pts, _ = h_sample(p_prime, s_h, spec.mc_samples, np.random.default_rng(spec.rng_seed))
        theta, w, _ = theta_rule(alpha, q, f.breakpoints.get("u", ()), spec.nodes_per_axis, spec.subdivisions)
        rows = f.evaluate(pts[:, None, :], cot(theta)[None, :]) @ w / w.sum()
        return float(rows.mean()), float(rows.std(ddof=1) / math.sqrt(rows.size))
    out = []
    for nodes in (spec.nodes_per_axis, spec.coarse):
        rule = h_rule(p_prime, s_h, bps, nodes, spec.subdivisions, spec.method)
        theta, w, _ = theta_rule(alpha, q, f.breakpoints.get("u", ()), nodes, spec.subdivisions)
        vals = f.evaluate(rule.points[:, None, :], cot(theta)[None, :])
        num = rule.weights @ vals @ w
        out.append(float(num / (rule.weights.sum() * w.sum())))
    return out[0], abs(out[0] - out[1]) + _floor(out[0])


def _qh_gamma(f, p_prime, lam, n, xi, spec, factorize):
    s_h, q = _qh_exponents(p_prime, lam, n)
    if not f.uses_u:
        return _h_gamma(f, p_prime, s_h, n - 1, spec)
    if f.h_arity == 0:
        return _u_gamma(f, 2.0 * xi, q, spec)
    if factorize:
        parts = split_product(f)
        if parts is not None:
            g1, e1 = _h_gamma(parts[0], p_prime, s_h, n - 1, spec)
            g2, e2 = _u_gamma(parts[1], 2.0 * xi, q, spec)
            return g1 * g2, abs(g1) * e2 + abs(g2) * e1
    return _hu_gamma(f, p_prime, lam, n, xi, spec)


def _multi(p, dim, what):
    p = MultiIndex(p)
    if len(p) != dim:
        raise ValueError(f"{what} must have {dim} entries, got {len(p)}")
    return p


# ---------------------------------------------------------------------------
# public multipliers


def gamma_qe(f, lam, n, p, spec=None):
    """Quasi-elliptic multiplier ``gamma(p)``; returns ``(complex value, err)``."""
    lam = check_weight(lam)
    spec = _spec(spec)
    p = _multi(p, n, "p")
    re, im = _components(f)
    s = p.order + n + lam + 1.0
    parts = []
    for comp in (re, im):
        if comp is None:
            parts.append(None)
            continue
        check_arity(comp, "qe", n)
        parts.append(_h_gamma(comp, p, s, n, spec))
    return _combine(*parts)


def gamma_qh(f, lam, n, p_prime, xi, spec=None, factorize=True):
    """Quasi-hyperbolic multiplier ``gamma(p', xi)``; returns ``(complex value, err)``.

    When ``f`` is a top-level product ``f1(h') * f2(u)`` (and ``factorize`` is
    set) the two ratios are computed separately.
    """
    lam = check_weight(lam)
    spec = _spec(spec)
    if n < 1:
        raise ValueError("dimension must be at least 1")
    p_prime = _multi(p_prime, n - 1, "p'")
    re, im = _components(f)
    parts = []
    for comp in (re, im):
        if comp is None:
            parts.append(None)
            continue
        check_arity(comp, "qh", n)
        parts.append(_qh_gamma(comp, p_prime, lam, n, float(xi), spec, factorize))
    return _combine(*parts)


def gamma_hyperbolic(f, lam, xi, spec=None):
    """Hyperbolic (n = 1) multiplier ``gamma(xi)`` for a symbol in ``u``."""
    re, im = _components(f)
    for comp in (re, im):
        if comp is not None:
            check_arity(comp, "hyp", 1)
    return gamma_qh(f, lam, 1, (), xi, spec)


def gamma_qh_h0(f, lam, n, p_prime, spec=None):
    """Multiplier for quasi-hyperbolic symbols depending on ``h'`` only; free of ``xi``."""
    lam = check_weight(lam)
    spec = _spec(spec)
    if n < 2:
        raise ValueError("H0-symbols need n >= 2")
    p_prime = _multi(p_prime, n - 1, "p'")
    re, im = _components(f)
    s = p_prime.order + n + lam
    parts = []
    for comp in (re, im):
        if comp is None:
            parts.append(None)
            continue
        check_arity(comp, "qh-h0", n)
        parts.append(_h_gamma(comp, p_prime, s, n - 1, spec))
    return _combine(*parts)


# ---------------------------------------------------------------------------
# prefactor forms (cross-check only)


def gamma_qe_prefactor(f, lam, n, p, spec=None):
    """``(n+lam+1)_{|p|} / p! * int h^p (1+|h|_1)^-(|p|+n+lam+1) f dh``.

    With the exact Dirichlet integral this equals ``gamma(p) / (lam+1)_n``.
    """
    lam = check_weight(lam)
    p = _multi(p, n, "p")
    f = as_symbol(f)
    check_arity(f, "qe", n)
    pref = pochhammer(n + lam + 1.0, p.order) / p.factorial
    val, err = integrate_h_weighted(p, p.order + n + lam + 1.0, f, n, spec)
    return pref * val, pref * err


def gamma_qh_prefactor(f, lam, n, p_prime, xi, spec=None):
    """``(n+lam)_{|p'|} / (p'! V) * int int f |F|^2``; equals ``gamma / (lam+1)_{n-1}``."""
    lam = check_weight(lam)
    spec = _spec(spec)
    p_prime = _multi(p_prime, n - 1, "p'")
    f = as_symbol(f)
    check_arity(f, "qh", n)
    s_h, q = _qh_exponents(p_prime, lam, n)
    alpha = 2.0 * float(xi)
    out = []
    for nodes in (spec.nodes_per_axis, spec.coarse):
        rule = h_rule(p_prime, s_h, _h_breakpoints(f, n - 1), nodes, spec.subdivisions)
        theta, w, log_scale = theta_rule(alpha, q, f.breakpoints.get("u", ()), nodes, spec.subdivisions)
        if f.is_constant:
            vals = np.full((rule.points.shape[0], theta.size), float(f.evaluate()))
        elif f.uses_u:
            vals = f.evaluate(rule.points[:, None, :], cot(theta)[None, :])
        else:
            vals = np.broadcast_to(f.evaluate(rule.points)[:, None], (rule.points.shape[0], theta.size))
        out.append(float(rule.weights @ vals @ w) * math.exp(log_scale))
    pref = pochhammer(n + lam, p_prime.order) / (p_prime.factorial * romanovski_total(alpha, 1.0 - q))
    return pref * out[0], pref * abs(out[0] - out[1])


def prefactor_report(case, lam, n, p, xi=0.0, spec=None):
    """Compare the prefactor form with the ratio form at ``f = 1``.

    The ratio form is 1 by construction; ``ratio`` is the constant by which the
    prefactor form is off, and ``predicted`` its closed-form value.
    """
    lam = check_weight(lam)
    one = constant(1.0)
    if case == "qe":
        value, err = gamma_qe_prefactor(one, lam, n, p, spec)
        predicted = 1.0 / pochhammer(lam + 1.0, n)
    elif case == "qh":
        value, err = gamma_qh_prefactor(one, lam, n, p, xi, spec)
        predicted = 1.0 / pochhammer(lam + 1.0, n - 1)
    else:
        raise ValueError("prefactor forms exist for 'qe' and 'qh' only")
    return {
        "case": case,
        "lambda": lam,
        "n": n,
        "p": list(p),
        "xi": xi if case == "qh" else None,
        "prefactor_form": value,
        "ratio_form": 1.0,
        "ratio": value,
        "predicted": predicted,
        "err": err,
    }


# ---------------------------------------------------------------------------
# tables


class GammaEntry(NamedTuple):
    p: MultiIndex
    xi: Optional[float]
    value: complex
    err: float


def _index_dim(case, n):
    if case == "qe":
        return n
    if case in ("qh", "qh-h0"):
        return n - 1
    if case == "hyp":
        return 0
    raise ValueError(f"unknown case {case!r}; expected one of {CASES}")


def _fmt(x):
    return f"{x:.17g}"


@dataclass(frozen=True)
class GammaTable:
    """Immutable batch of multiplier values in deterministic (p, xi) order."""

    case: str
    lam: float
    n: int
    symbol: str
    entries: tuple
    quadrature: dict = field(default_factory=dict)

    @property
    def index_dim(self):
        return _index_dim(self.case, self.n)

    def lookup(self, p, xi=None):
        p = MultiIndex(p)
        for e in self.entries:
            if e.p == p and (xi is None or e.xi == xi):
                return e
        raise KeyError((tuple(p), xi))

    def values(self):
        return np.array([e.value for e in self.entries])

    @property
    def max_err(self):
        return max((e.err for e in self.entries), default=0.0)

    def summary(self):
        re = self.values().real
        return {
            "entries": len(self.entries),
            "gamma_min": float(re.min()) if re.size else None,
            "gamma_max": float(re.max()) if re.size else None,
            "max_err": float(self.max_err),
        }

    def metadata(self):
        from . import __version__

        return {
            "case": self.case,
            "n": self.n,
            "lambda": self.lam,
            "symbol": self.symbol,
            "quadrature": self.quadrature,
            "version": __version__,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"p{j + 1}" for j in range(self.index_dim)] + ["xi", "gamma_re", "gamma_im", "err"])
        for e in self.entries:
            xi = "" if e.xi is None else _fmt(e.xi)
            w.writerow(list(e.p) + [xi, _fmt(e.value.real), _fmt(e.value.imag), _fmt(e.err)])
        return buf.getvalue()

    def to_dict(self):
        return {
            "metadata": self.metadata(),
            "entries": [
                {"p": list(e.p), "xi": e.xi, "gamma_re": e.value.real, "gamma_im": e.value.imag, "err": e.err}
                for e in self.entries
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def write(self, path, fmt=None):
        fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
        text = self.to_json() if fmt == "json" else self.to_csv()
        with open(path, "w", newline="") as fh:
            fh.write(text)


def default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def gamma_table(case, f, lam, n, p_range, xi_grid=None, spec=None, threads=None):
    """Evaluate the multiplier for ``case`` over every ``p`` (and ``xi``).

    ``p_range`` is a maximal order or an explicit iterable of multi-indices.
    ``xi_grid`` is required for ``qh`` and ``hyp`` and rejected otherwise.
    """
    lam = check_weight(lam)
    spec = _spec(spec)
    dim = _index_dim(case, n)
    if case == "hyp" and n != 1:
        raise ValueError("the hyperbolic case has n = 1")
    if isinstance(p_range, (int, np.integer)):
        ps = multi_indices(dim, int(p_range))
    else:
        ps = [_multi(p, dim, "p") for p in p_range]
    with_xi = case in ("qh", "hyp")
    if with_xi and xi_grid is None:
        raise ValueError(f"case {case!r} needs a xi grid")
    if not with_xi and xi_grid is not None:
        raise ValueError(f"case {case!r} does not depend on xi")
    re, im = _components(f)
    for comp in (re, im):
        if comp is not None:
            check_arity(comp, case, n)
    sym = f if im is None else (re, im)
    text = re.text if im is None else f"({re.text}) + i*({im.text})"

    if case == "qe":
        jobs = [(p, None) for p in ps]
        run = lambda job: gamma_qe(sym, lam, n, job[0], spec)  # noqa: E731
    elif case == "qh-h0":
        jobs = [(p, None) for p in ps]
        run = lambda job: gamma_qh_h0(sym, lam, n, job[0], spec)  # noqa: E731
    else:
        jobs = [(p, float(x)) for p in ps for x in xi_grid]
        run = lambda job: gamma_qh(sym, lam, n, job[0], job[1], spec)  # noqa: E731

    threads = threads or default_threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    entries = tuple(GammaEntry(p, xi, val, err) for (p, xi), (val, err) in zip(jobs, results))
    return GammaTable(case, lam, n, text, entries, spec.to_dict())


__all__ = [
    "CASES",
    "GammaEntry",
    "GammaTable",
    "as_symbol",
    "gamma_hyperbolic",
    "gamma_qe",
    "gamma_qe_prefactor",
    "gamma_qh",
    "gamma_qh_h0",
    "gamma_qh_prefactor",
    "gamma_table",
    "prefactor_report",
]
