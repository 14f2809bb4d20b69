"""Command-line front end: ``mmtoeplitz gamma ...`` and ``mmtoeplitz verify ...``.

Exit codes: 0 success, 1 failed invariant, 2 invalid configuration,
3 divergent integral.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, verify
from .errors import DivergenceError, DomainError, SymbolError
from .quadrature import METHODS, QuadratureSpec
from .spectra import CASES, gamma_table
from .symbols import check_arity, load_symbols, parse

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3

log = logging.getLogger("mmtoeplitz")


class ConfigError(ValueError):
    pass


def parse_xi_grid(text):
    """``"min:max:count"`` -> evenly spaced grid; a single number is a one-point grid."""
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"xi grid must look like min:max:count, got {text!r}") from None
    if count < 1:
        raise ConfigError("xi grid count must be positive")
    return np.linspace(lo, hi, count).tolist()


@dataclass
class RunConfig:
    case: str = "qe"
    n: int = 1
    lam: float = 0.0
    symbol: str = "1"
    pmax: int = 4
    xi: Optional[list] = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    output: Optional[str] = None
    format: str = "csv"
    threads: Optional[int] = None
    symbols_file: Optional[str] = None

    def validate(self):
        if self.case not in CASES:
            raise ConfigError(f"case must be one of {CASES}")
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if self.case == "hyp" and self.n != 1:
            raise ConfigError("the hyperbolic case has n = 1")
        if self.case == "qh-h0" and self.n < 2:
            raise ConfigError("case qh-h0 needs n >= 2")
        if not self.lam > -1:
            raise ConfigError(f"lambda must exceed -1, got {self.lam}")
        if self.pmax < 0:
            raise ConfigError("pmax must be nonnegative")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.case in ("qh", "hyp") and not self.xi:
            raise ConfigError(f"case {self.case} needs --xi min:max:count")
        if self.case in ("qe", "qh-h0") and self.xi:
            raise ConfigError(f"case {self.case} does not take a xi grid")
        return self

    def resolve_symbol(self):
        if self.symbols_file:
            named = load_symbols(self.symbols_file)
            if self.symbol in named:
                return named[self.symbol]
        return parse(self.symbol)


_FLAG_KEYS = {"case", "n", "lam", "symbol", "pmax", "xi", "output", "format", "threads", "symbols_file"}
_QUAD_FLAGS = {"nodes": "nodes_per_axis", "subdivisions": "subdivisions", "method": "method", "seed": "rng_seed",
               "tol": "target_rel_tol"}


def load_config(path):
    """Read a JSON config; keys mirror the long flag names (``lambda`` for ``lam``)."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if "lambda" in data:
        data["lam"] = data.pop("lambda")
    return data


def build_config(args):
    data = load_config(args.config) if args.config else {}
    quad = dict(data.pop("quadrature", {}))
    unknown = set(data) - _FLAG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in _FLAG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    for flag, key in _QUAD_FLAGS.items():
        val = getattr(args, flag, None)
        if val is not None:
            quad[key] = val
    data["xi"] = parse_xi_grid(data.get("xi"))
    try:
        data["quadrature"] = QuadratureSpec.from_dict(quad)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid quadrature settings: {exc}") from None
    return RunConfig(**data).validate()


def cmd_gamma(args, out=None):
    out = out or sys.stdout
    cfg = build_config(args)
    f = cfg.resolve_symbol()
    check_arity(f, cfg.case, cfg.n)
    table = gamma_table(cfg.case, f, cfg.lam, cfg.n, cfg.pmax, cfg.xi, cfg.quadrature, cfg.threads)
    text = table.to_json() if cfg.format == "json" else table.to_csv()
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
        print(json.dumps(table.summary()), file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out=None):
    out = out or sys.stdout
    opts = {"n": args.n, "samples": args.samples, "seed": args.seed, "lam": args.lam or 0.0, "degree": args.degree,
            "symbol": args.symbol}
    if opts["lam"] <= -1:
        raise ConfigError("lambda must exceed -1")
    if args.nodes:
        opts["spec"] = QuadratureSpec(nodes_per_axis=args.nodes)
    report = verify.run(args.suite, **opts)
    report["version"] = __version__
    text = json.dumps(report, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text, file=out)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def _add_common(p):
    p.add_argument("--n", type=int, help="complex dimension")
    p.add_argument("--lambda", dest="lam", type=float, help="weight parameter, > -1")
    p.add_argument("--symbol", help="symbol expression, or a name from --symbols-file")
    p.add_argument("--output", "-o", help="output file (default: standard output)")


def build_parser():
    parser = argparse.ArgumentParser(prog="mmtoeplitz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", help="tabulate spectral multipliers")
    _add_common(g)
    g.add_argument("--case", choices=CASES)
    g.add_argument("--pmax", type=int, help="largest |p| tabulated")
    g.add_argument("--xi", help="xi grid as min:max:count (qh and hyp)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--config", help="JSON config file; flags override it")
    g.add_argument("--symbols-file", dest="symbols_file", help="JSON file of named symbols")
    g.add_argument("--threads", type=int, help="worker threads (default: $MMTOEPLITZ_THREADS, else 1)")
    g.add_argument("--nodes", type=int, help="Gauss nodes per axis piece")
    g.add_argument("--subdivisions", type=int)
    g.add_argument("--method", choices=METHODS)
    g.add_argument("--seed", type=int, help="RNG seed (monte-carlo)")
    g.add_argument("--tol", type=float, help="target relative tolerance")
    g.set_defaults(func=cmd_gamma)

    v = sub.add_parser("verify", help="run invariant checks and print a JSON report")
    v.add_argument("suite", choices=verify.SUITES + ("all",))
    _add_common(v)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--degree", type=int, default=4)
    v.add_argument("--nodes", type=int)
    v.set_defaults(func=cmd_verify)
    return parser


def _glue_xi(argv):
    # "--xi -20:20:81" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--xi":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--xi={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_xi(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (ConfigError, SymbolError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
