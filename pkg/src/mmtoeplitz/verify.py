"""Verification suites: every check reports its measured residual and tolerance."""

import math

import numpy as np

from . import coords, geometry, oracle

SUITES = ("moment", "coords", "pde", "isometry", "diagonal")


def check(name, residual, tolerance, **extra):
    residual = float(residual)
    return {"name": name, "residual": residual, "tolerance": tolerance, "passed": bool(residual < tolerance), **extra}


def _dims(n):
    return [n] if n else [1, 2, 3]


# ---------------------------------------------------------------------------


def moment_suite(n=None, samples=100, seed=0, step=1e-5):
    """Hamiltonian identity ``d mu_X = omega(X#, .)`` plus its second-order step scaling."""
    rng = np.random.default_rng(seed)
    out = []
    for dim in _dims(n):
        for which, sampler in (("qe", geometry.random_ball_points), ("qh", geometry.random_siegel_points)):
            z = sampler(rng, dim, samples)
            X = rng.normal(size=(samples, dim))
            res = [geometry.verify_hamiltonian(z[i], X[i], which, step) for i in range(samples)]
            out.append(check(f"hamiltonian_{which}_n{dim}", max(res), 1e-6))
            ratios = [
                geometry.verify_hamiltonian(z[i], X[i], which, 1e-2) / geometry.verify_hamiltonian(z[i], X[i], which, 5e-3)
                for i in range(min(samples, 20))
            ]
            # halving the step should divide the residual by ~4
            out.append(check(f"step_order_{which}_n{dim}", max(abs(r - 4.0) for r in ratios), 0.5))
    return out


def _fd_jacobian(func, x, step=1e-6):
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step * max(1.0, abs(x[j]))
        cols.append((func(x + e) - func(x - e)) / (2 * e[j]))
    return np.array(cols).T


def coords_suite(n=None, samples=1000, seed=0, jacobian_samples=200):
    """Round trips, Jacobian determinants against finite differences, total mass."""
    rng = np.random.default_rng(seed)
    out = []
    for dim in _dims(n):
        t = np.exp(2j * math.pi * rng.uniform(size=(samples, dim)))
        h = rng.exponential(size=(samples, dim)) + 1e-3
        back = coords.tau_qe(coords.kappa_qe(t, h))
        err = max(np.max(np.abs(back.t - t)), np.max(np.abs(back.h - h) / (1 + h)))
        out.append(check(f"tau_kappa_qe_n{dim}", err, 1e-12))
        z = geometry.random_ball_points(rng, dim, samples)
        err = np.max(np.abs(coords.kappa_qe(*coords.tau_qe(z)) - z))
        out.append(check(f"kappa_tau_qe_n{dim}", err, 1e-12))

        tp = np.exp(2j * math.pi * rng.uniform(size=(samples, dim - 1)))
        s = rng.exponential(size=samples) + 1e-2
        hq = np.concatenate([rng.exponential(size=(samples, dim - 1)) + 1e-3, rng.normal(size=(samples, 1))], axis=1)
        back = coords.tau_qh(coords.kappa_qh(tp, s, hq))
        err = max(
            np.max(np.abs(back.t_prime - tp), initial=0.0),
            np.max(np.abs(back.s - s) / s),
            np.max(np.abs(back.h - hq) / (1 + np.abs(hq))),
        )
        out.append(check(f"tau_kappa_qh_n{dim}", err, 1e-12))
        zs = geometry.random_siegel_points(rng, dim, samples)
        err = np.max(np.abs(coords.kappa_qh(*coords.tau_qh(zs)) - zs) / (1 + np.abs(zs)))
        out.append(check(f"kappa_tau_qh_n{dim}", err, 1e-12))

        rel = []
        for _ in range(jacobian_samples):
            r = rng.uniform(0.05, 1.0, dim)
            r *= rng.uniform(0.1, 0.9) / np.linalg.norm(r)
            fd = np.linalg.det(_fd_jacobian(coords.phi_qe, r))
            rel.append(abs(fd / coords.jacobian_det_qe(r) - 1))
        out.append(check(f"jacobian_qe_n{dim}", max(rel), 1e-6))
        rel = []
        for _ in range(jacobian_samples):
            rp = rng.uniform(0.1, 1.0, dim - 1)
            x = rng.normal()
            y = float(np.sum(rp**2)) + rng.uniform(0.2, 2.0)
            fd = np.linalg.det(_fd_jacobian(lambda v: coords.phi_qh(v[:-2], v[-2], v[-1]), np.r_[rp, x, y]))
            rel.append(abs(fd / coords.jacobian_det_qh(rp, x, y) - 1))
        out.append(check(f"jacobian_qh_n{dim}", max(rel), 1e-6))

        for lam in (-0.5, 0.0, 1.5):
            mass, _ = coords.total_mass_qe(dim, lam)
            out.append(check(f"total_mass_qe_n{dim}_lam{lam:g}", abs(mass - 1.0), 1e-8))
    return out


def pde_suite(n=None, samples=100, seed=0, lam=0.0):
    """Closed-form solutions of both holomorphy systems; ``|F|^2`` branch identity."""
    rng = np.random.default_rng(seed)
    out = []
    for dim in _dims(n):
        res_a, res_fd, res_h, res_hfd = [], [], [], []
        for _ in range(samples):
            p = rng.integers(0, 5, dim)
            h = rng.uniform(0.1, 3.0, dim)
            res_a.append(oracle.pde_residual_qe(p, h))
            res_fd.append(oracle.pde_residual_qe(p, h, oracle.FD_STEP))
            pp = rng.integers(0, 5, dim - 1)
            xi = rng.normal() * 2
            hq = np.r_[rng.uniform(0.1, 3.0, dim - 1), rng.normal() * 2]
            res_h.append(oracle.pde_residual_qh(pp, xi, hq, lam=lam))
            res_hfd.append(oracle.pde_residual_qh(pp, xi, hq, oracle.FD_STEP, lam=lam))
        out.append(check(f"pde_qe_analytic_n{dim}", max(res_a), 1e-12))
        out.append(check(f"pde_qe_fd_n{dim}", max(res_fd), 1e-8))
        out.append(check(f"pde_qh_analytic_n{dim}", max(res_h), 1e-12))
        out.append(check(f"pde_qh_fd_n{dim}", max(res_hfd), 1e-7))
    dev = 0.0
    for _ in range(10 * samples):
        dim = int(rng.integers(1, 4))
        F, mod2 = oracle.f_weight(rng.integers(0, 5, dim - 1), rng.normal() * 2, rng.uniform(0.05, 3, dim - 1),
                                  rng.normal() * 3, lam)
        dev = max(dev, abs(abs(F) ** 2 - mod2) / mod2)
    out.append(check("f_weight_modulus", dev, 1e-12))
    return out


def isometry_suite(n=None, lam=0.0, pmax=6, xi=0.5):
    """Measured Bargmann constants: must be independent of p; their value is reported."""
    out = []
    for dim in _dims(n):
        rep = oracle.bargmann_report(lam, dim, pmax, case="qe")
        out.append(check(f"bargmann_qe_n{dim}", rep["spread"], 1e-8, measured=rep["measured"],
                         ratio_to_nominal=rep["ratio_to_nominal"], predicted=rep["predicted"]))
        rep = oracle.bargmann_report(lam, dim, pmax, case="qh", xi=xi)
        out.append(check(f"bargmann_qh_n{dim}", rep["spread"], 1e-8, measured=rep["measured"],
                         ratio_to_nominal=rep["ratio_to_nominal"], predicted=rep["predicted"]))
    return out


def diagonal_suite(n=2, lam=0.0, symbol="h1/(1+h1+h2)", degree=4, spec=None):
    """Brute-force Toeplitz matrix of ``f o H`` is diagonal with diagonal ``gamma_qe``."""
    rep = oracle.diagonalization_report(symbol, lam, n, degree, spec)
    return [
        check("offdiag", rep["max_offdiag"], 1e-5, symbol=rep["symbol"]),
        check("diag_vs_gamma", rep["max_diag_dev"], 1e-5, symbol=rep["symbol"]),
    ]


def run(suite, **opts):
    """Run one suite (or ``all``) and return a report dictionary."""
    runners = {
        "moment": lambda: moment_suite(opts.get("n"), opts.get("samples", 100), opts.get("seed", 0)),
        "coords": lambda: coords_suite(opts.get("n"), opts.get("samples", 1000), opts.get("seed", 0)),
        "pde": lambda: pde_suite(opts.get("n"), min(opts.get("samples", 100), 100), opts.get("seed", 0),
                                 opts.get("lam", 0.0)),
        "isometry": lambda: isometry_suite(opts.get("n"), opts.get("lam", 0.0)),
        "diagonal": lambda: diagonal_suite(opts.get("n") or 2, opts.get("lam", 0.0),
                                           opts.get("symbol") or "h1/(1+h1+h2)", opts.get("degree", 4),
                                           opts.get("spec")),
    }
    names = SUITES if suite == "all" else (suite,)
    if any(s not in runners for s in names):
        raise ValueError(f"unknown suite {suite!r}")
    checks = []
    for s in names:
        for c in runners[s]():
            checks.append({"suite": s, **c})
    return {"suite": suite, "passed": all(c["passed"] for c in checks), "checks": checks}
