"""A small expression language for moment-map symbols.

A symbol is a real function of the moment variables ``h1, h2, ...`` and, for
the quasi-hyperbolic family, of ``u``.  See ``docs/symbol-grammar.md`` for the
grammar.  Typical use::

    >>> spec = parse("1/(1+h1)")
    >>> spec(1.0)
    0.5
    >>> parse("ind(u>0)").breakpoints
    {'u': (0.0,)}

Parsed specs are immutable; evaluation is vectorised over numpy arrays and
raises :class:`SymbolEvalError` instead of producing NaN.
"""

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from .errors import SymbolArityError, SymbolBoundError, SymbolEvalError, SymbolSyntaxError

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Node:
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Compare(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Logic(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    func: str
    args: tuple


@dataclass(frozen=True)
class Piecewise(Node):
    branches: tuple  # ((cond, value), ...)
    default: Node


FUNCTIONS = {
    "exp": 1,
    "log": 1,
    "sqrt": 1,
    "atan": 1,
    "arccot": 1,
    "abs": 1,
    "min": -2,
    "max": -2,
    "ind": 1,
}
ALIASES = {"arctan": "atan", "ln": "log", "indicator": "ind", "acot": "arccot"}
CONSTANTS = {"pi": math.pi}

_VAR_RE = re.compile(r"h([1-9][0-9]*)$")

# precedence used by the printer
_PREC = {"or": 1, "and": 2, "cmp": 3, "+": 4, "-": 4, "*": 5, "/": 5, "neg": 6, "^": 7, "atom": 8}


def _prec(node):
    if isinstance(node, Logic):
        return _PREC[node.op]
    if isinstance(node, Compare):
        return _PREC["cmp"]
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    if isinstance(node, Num) and node.value < 0:
        return _PREC["neg"]
    return _PREC["atom"]


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|==|!=|&&|\|\||[-+*/^(),<>])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SymbolSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tok_text = m.group()
            if kind == "name" and tok_text in ("and", "or"):
                kind = "op"
            if kind == "op" and tok_text == "&&":
                tok_text = "and"
            if kind == "op" and tok_text == "||":
                tok_text = "or"
            toks.append(_Tok(kind, tok_text, pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise SymbolSyntaxError(message, tok.pos, self.text)

    def expect(self, text):
        tok = self.peek()
        if tok.text != text or tok.kind not in ("op",):
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            self.error(f"expected {text!r}, found {what}")
        return self.next()

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression")
        node = self.or_expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().text!r}")
        return node

    def or_expr(self):
        left = self.and_expr()
        while self.peek().text == "or":
            self.next()
            right = self.and_expr()
            left = Logic("or", left, right, span=(left.span[0], right.span[1]))
        return left

    def and_expr(self):
        left = self.comparison()
        while self.peek().text == "and":
            self.next()
            right = self.comparison()
            left = Logic("and", left, right, span=(left.span[0], right.span[1]))
        return left

    def comparison(self):
        left = self.additive()
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("<", "<=", ">", ">=", "==", "!="):
            self.next()
            right = self.additive()
            if self.peek().text in ("<", "<=", ">", ">=", "==", "!="):
                self.error("chained comparisons are not supported")
            return Compare(tok.text, left, right, span=(left.span[0], right.span[1]))
        return left

    def additive(self):
        left = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.next().text
            right = self.term()
            left = BinOp(op, left, right, span=(left.span[0], right.span[1]))
        return left

    def term(self):
        left = self.unary()
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            op = self.next().text
            right = self.unary()
            left = BinOp(op, left, right, span=(left.span[0], right.span[1]))
        return left

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("-", "+"):
            self.next()
            operand = self.unary()
            if tok.text == "+":
                return operand
            return Neg(operand, span=(tok.pos, operand.span[1]))
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text == "^":
            self.next()
            exponent = self.unary()
            return BinOp("^", base, exponent, span=(base.span[0], exponent.span[1]))
        return base

    def atom(self):
        tok = self.next()
        if tok.kind == "num":
            return Num(float(tok.text), span=(tok.pos, tok.pos + len(tok.text)))
        if tok.kind == "op" and tok.text == "(":
            node = self.or_expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            if self.peek().text == "(":
                return self.call(tok)
            name = tok.text
            span = (tok.pos, tok.pos + len(name))
            if name in CONSTANTS:
                return Var(name, span=span)
            if name == "u" or _VAR_RE.match(name):
                return Var(name, span=span)
            self.error(f"unknown identifier {name!r}", tok)
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {tok.text!r}", tok)

    def call(self, name_tok):
        name = ALIASES.get(name_tok.text, name_tok.text)
        if name not in FUNCTIONS and name != "piecewise":
            self.error(f"unknown function {name_tok.text!r}", name_tok)
        self.expect("(")
        args = [self.or_expr()]
        while self.peek().text == ",":
            self.next()
            args.append(self.or_expr())
        close = self.expect(")")
        span = (name_tok.pos, close.pos + 1)
        if name == "piecewise":
            if len(args) < 3 or len(args) % 2 == 0:
                self.error("piecewise takes cond1, value1, ..., default", name_tok)
            branches = tuple((args[k], args[k + 1]) for k in range(0, len(args) - 1, 2))
            for cond, _ in branches:
                if not isinstance(cond, (Compare, Logic)):
                    raise SymbolSyntaxError("piecewise conditions must be comparisons", cond.span[0], self.text)
            return Piecewise(branches, args[-1], span=span)
        arity = FUNCTIONS[name]
        if arity > 0 and len(args) != arity:
            self.error(f"{name} takes {arity} argument(s), got {len(args)}", name_tok)
        if arity < 0 and len(args) < -arity:
            self.error(f"{name} takes at least {-arity} arguments", name_tok)
        if name == "ind" and not isinstance(args[0], (Compare, Logic)):
            raise SymbolSyntaxError("ind() expects a comparison", args[0].span[0], self.text)
        return Call(name, tuple(args), span=span)


# ---------------------------------------------------------------------------
# printing


def to_text(node):
    """Canonical text of an AST; ``parse(to_text(e)).expr == e``."""
    if isinstance(node, Num):
        v = node.value
        text = repr(float(v))
        if text.endswith(".0"):
            text = text[:-2]
        return text if v >= 0 else f"-{text[1:]}"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        if _prec(node.operand) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Piecewise):
        parts = [to_text(x) for pair in node.branches for x in pair]
        parts.append(to_text(node.default))
        return f"piecewise({', '.join(parts)})"
    if isinstance(node, Compare):
        lhs, rhs = to_text(node.left), to_text(node.right)
        if _prec(node.left) <= _PREC["cmp"]:
            lhs = f"({lhs})"
        if _prec(node.right) <= _PREC["cmp"]:
            rhs = f"({rhs})"
        return f"{lhs} {node.op} {rhs}"
    if isinstance(node, (BinOp, Logic)):
        p = _prec(node)
        lhs, rhs = to_text(node.left), to_text(node.right)
        if node.op == "^":
            if _prec(node.left) <= p:
                lhs = f"({lhs})"
            if _prec(node.right) < _PREC["neg"]:
                rhs = f"({rhs})"
            return f"{lhs}^{rhs}"
        if _prec(node.left) < p:
            lhs = f"({lhs})"
        if _prec(node.right) <= p:
            rhs = f"({rhs})"
        sep = f" {node.op} " if node.op in ("+", "-", "and", "or") else node.op
        return f"{lhs}{sep}{rhs}"
    raise TypeError(f"not an AST node: {node!r}")


# ---------------------------------------------------------------------------
# analysis


def variables(node):
    """Set of variable names (excluding constants) referenced by ``node``."""
    if isinstance(node, Var):
        return set() if node.name in CONSTANTS else {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Neg):
        return variables(node.operand)
    if isinstance(node, (BinOp, Compare, Logic)):
        return variables(node.left) | variables(node.right)
    if isinstance(node, Call):
        return set().union(*(variables(a) for a in node.args))
    if isinstance(node, Piecewise):
        out = variables(node.default)
        for c, v in node.branches:
            out |= variables(c) | variables(v)
        return out
    raise TypeError(node)


def _comparisons(node):
    if isinstance(node, Compare):
        yield node
    for child in _children(node):
        yield from _comparisons(child)


def _children(node):
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, (BinOp, Compare, Logic)):
        return (node.left, node.right)
    if isinstance(node, Call):
        return node.args
    if isinstance(node, Piecewise):
        return tuple(x for pair in node.branches for x in pair) + (node.default,)
    return ()


def _h_index(name):
    m = _VAR_RE.match(name)
    return int(m.group(1)) if m else None


def _var_grid(name):
    pos = np.logspace(-10, 10, 401)
    if name == "u":
        return np.concatenate([-pos[::-1], [0.0], pos])
    return np.concatenate([[0.0], pos])


def _single_var_roots(diff, name):
    """Sign changes of a one-variable function on its natural domain."""
    grid = _var_grid(name)
    with np.errstate(all="ignore"):
        try:
            vals = _evaluate(diff, {name: grid}, strict=False)
        except SymbolEvalError:
            return ()
    roots = []
    vals = np.broadcast_to(vals, grid.shape)
    for k in range(len(grid) - 1):
        a, b = vals[k], vals[k + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0 and k > 0:
            roots.append(float(grid[k]))
        elif np.sign(a) * np.sign(b) < 0:
            f = lambda x: float(_evaluate(diff, {name: np.array([x])}, strict=False)[0])
            try:
                roots.append(optimize.brentq(f, grid[k], grid[k + 1], xtol=1e-14))
            except (ValueError, RuntimeError):
                continue
    return tuple(sorted(set(roots)))


def find_breakpoints(node):
    """Discontinuity locations of indicator-type subexpressions, per variable.

    Only comparisons that involve a single variable are registered; those are
    the ones an axis-aligned quadrature split can resolve.
    """
    out = {}
    for cmp_node in _comparisons(node):
        if cmp_node.op in ("==", "!="):
            continue
        names = variables(cmp_node)
        if len(names) != 1:
            continue
        (name,) = names
        diff = BinOp("-", cmp_node.left, cmp_node.right)
        for r in _single_var_roots(diff, name):
            if name != "u" and r <= 0:
                continue
            out.setdefault(name, set()).add(r)
    return {k: tuple(sorted(v)) for k, v in sorted(out.items())}


# ---------------------------------------------------------------------------
# evaluation


def _fail(message):
    raise SymbolEvalError(message)


def _evaluate(node, env, strict=True):
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        if node.name in CONSTANTS:
            return np.float64(CONSTANTS[node.name])
        try:
            return env[node.name]
        except KeyError:
            _fail(f"no value supplied for variable {node.name!r}")
    if isinstance(node, Neg):
        return -_evaluate(node.operand, env, strict)
    if isinstance(node, BinOp):
        a = _evaluate(node.left, env, strict)
        b = _evaluate(node.right, env, strict)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if strict and np.any(b == 0):
                _fail("division by zero")
            with np.errstate(divide="ignore", invalid="ignore"):
                return a / b
        if node.op == "^":
            b_arr = np.asarray(b)
            integral = np.all(b_arr == np.round(b_arr))
            if strict and not integral and np.any(np.asarray(a) < 0):
                _fail("negative base raised to a non-integer power")
            if strict and np.any((np.asarray(a) == 0) & (b_arr < 0)):
                _fail("zero raised to a negative power")
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.power(a, b)
    if isinstance(node, Compare):
        a = _evaluate(node.left, env, strict)
        b = _evaluate(node.right, env, strict)
        res = {
            "<": np.less, "<=": np.less_equal, ">": np.greater,
            ">=": np.greater_equal, "==": np.equal, "!=": np.not_equal,
        }[node.op](a, b)
        return res.astype(float)
    if isinstance(node, Logic):
        a = _evaluate(node.left, env, strict) != 0
        b = _evaluate(node.right, env, strict) != 0
        return (a & b if node.op == "and" else a | b).astype(float)
    if isinstance(node, Call):
        args = [_evaluate(a, env, strict) for a in node.args]
        f = node.func
        x = args[0]
        if f == "exp":
            return np.exp(x)
        if f == "log":
            if strict and np.any(np.asarray(x) <= 0):
                _fail("log of a nonpositive number")
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.log(x)
        if f == "sqrt":
            if strict and np.any(np.asarray(x) < 0):
                _fail("sqrt of a negative number")
            with np.errstate(invalid="ignore"):
                return np.sqrt(x)
        if f == "atan":
            return np.arctan(x)
        if f == "arccot":
            # branch with values in (0, pi)
            return 0.5 * np.pi - np.arctan(x)
        if f == "abs":
            return np.abs(x)
        if f == "min":
            return np.minimum.reduce(np.broadcast_arrays(*args))
        if f == "max":
            return np.maximum.reduce(np.broadcast_arrays(*args))
        if f == "ind":
            return (np.asarray(x) != 0).astype(float)
    if isinstance(node, Piecewise):
        return _eval_piecewise(node, env, strict)
    raise TypeError(f"cannot evaluate {node!r}")


def _env_size(env):
    sizes = {np.size(v) for v in env.values()}
    return max(sizes) if sizes else 1


def _eval_piecewise(node, env, strict):
    size = _env_size(env)
    full = {k: np.broadcast_to(v, (size,)) for k, v in env.items()}
    out = np.empty(size)
    remaining = np.arange(size)
    for cond, value in node.branches:
        if remaining.size == 0:
            break
        sub = {k: v[remaining] for k, v in full.items()}
        hit = np.broadcast_to(_evaluate(cond, sub, strict) != 0, remaining.shape)
        chosen = remaining[hit]
        if chosen.size:
            out[chosen] = _evaluate(value, {k: v[chosen] for k, v in full.items()}, strict)
        remaining = remaining[~hit]
    if remaining.size:
        out[remaining] = _evaluate(node.default, {k: v[remaining] for k, v in full.items()}, strict)
    return out


# ---------------------------------------------------------------------------
# public API


@dataclass(frozen=True)
class SymbolSpec:
    """Parsed symbol with its arity, declared bound and registered breakpoints."""

    expr: Node
    text: str = ""
    declared_bound: Optional[float] = None
    h_arity: int = field(init=False)
    uses_u: bool = field(init=False)
    breakpoints: dict = field(init=False, compare=False)

    def __post_init__(self):
        names = variables(self.expr)
        idx = [_h_index(v) for v in names if v != "u"]
        object.__setattr__(self, "h_arity", max(idx, default=0))
        object.__setattr__(self, "uses_u", "u" in names)
        object.__setattr__(self, "breakpoints", find_breakpoints(self.expr))
        if not self.text:
            object.__setattr__(self, "text", to_text(self.expr))

    @property
    def arity(self):
        return (self.h_arity, self.uses_u)

    @property
    def is_constant(self):
        return not variables(self.expr)

    def h_breakpoints(self, j):
        """Breakpoints registered for ``h{j}`` (1-based)."""
        return self.breakpoints.get(f"h{j}", ())

    def __call__(self, *point):
        return eval_symbol(self, point)

    def evaluate(self, h=None, u=None):
        """Vectorised evaluation; ``h`` has shape ``(..., k)``, ``u`` shape ``(...)``."""
        cols = {}
        if h is not None:
            h = np.asarray(h, dtype=float)
            if h.shape[-1] < self.h_arity:
                raise SymbolArityError(f"symbol uses h{self.h_arity} but only {h.shape[-1]} h-values given")
            for j in range(h.shape[-1]):
                cols[f"h{j + 1}"] = h[..., j]
        elif self.h_arity:
            raise SymbolArityError("symbol depends on h but no h values given")
        if u is not None:
            cols["u"] = np.asarray(u, dtype=float)
        elif self.uses_u:
            raise SymbolArityError("symbol depends on u but no u values given")
        shape = np.broadcast_shapes(*(c.shape for c in cols.values())) if cols else ()
        env = {k: np.broadcast_to(v, shape).ravel() for k, v in cols.items()}
        size = int(np.prod(shape)) if shape else 1
        val = np.broadcast_to(np.asarray(_evaluate(self.expr, env), dtype=float), (size,))
        out = val.reshape(shape)
        if not np.all(np.isfinite(out)):
            _fail("symbol evaluated to a non-finite value")
        return out

    def check_case(self, case, n):
        check_arity(self, case, n)
        return self

    def validate_bound(self, n_h, samples=10_000, seed=0):
        return check_bound(self, n_h, samples=samples, seed=seed)

    def __str__(self):
        return self.text


def parse(text, bound=None):
    """Parse symbol text into a :class:`SymbolSpec`."""
    if not isinstance(text, str) or not text.strip():
        raise SymbolSyntaxError("empty expression", 0, text if isinstance(text, str) else None)
    expr = _Parser(text).parse()
    return SymbolSpec(expr, text=text.strip(), declared_bound=bound)


def eval_symbol(spec, point):
    """Evaluate at a single point ``(h1, ..., hk[, u])``."""
    point = np.atleast_1d(np.asarray(point, dtype=float)).ravel()
    k, uses_u = spec.arity
    need = k + (1 if uses_u else 0)
    if point.size < need:
        raise SymbolArityError(f"symbol needs {need} coordinates, got {point.size}")
    if uses_u:
        h, u = point[:-1], point[-1]
    else:
        h, u = point, None
    return float(spec.evaluate(h if h.size else None, u))


CASES = ("qe", "qh", "hyp", "qh-h0")


def check_arity(spec, case, n):
    """Raise :class:`SymbolArityError` unless ``spec`` fits the given case and dimension."""
    k, uses_u = spec.arity
    if case == "qe":
        if uses_u:
            raise SymbolArityError("quasi-elliptic symbols are functions of h1..hn only; 'u' is not allowed")
        if k > n:
            raise SymbolArityError(f"symbol uses h{k} but the quasi-elliptic case has n = {n}")
    elif case in ("qh", "qh-h0"):
        if n < 1:
            raise SymbolArityError("dimension must be at least 1")
        if k > n - 1:
            raise SymbolArityError(f"symbol uses h{k} but the quasi-hyperbolic case has only h1..h{n - 1}")
        if case == "qh-h0" and uses_u:
            raise SymbolArityError("H0-symbols may not depend on 'u'")
    elif case == "hyp":
        if k:
            raise SymbolArityError("hyperbolic symbols are functions of u only")
    else:
        raise ValueError(f"unknown case {case!r}")


def sample_domain(n_h, uses_u, samples=10_000, seed=0):
    """Quasi-random points covering R^k_+ (x R) through x/(1-x) and tan maps."""
    dim = n_h + (1 if uses_u else 0)
    if dim == 0:
        return np.zeros((1, 0)), None
    sob = qmc.Sobol(dim, scramble=True, seed=seed)
    # Sobol balance needs a power of two; round the request up
    x = sob.random_base2(max(1, math.ceil(math.log2(samples))))
    x = np.clip(x, 1e-12, 1 - 1e-12)
    h = x[:, :n_h] / (1.0 - x[:, :n_h])
    u = np.tan(np.pi * (x[:, -1] - 0.5)) if uses_u else None
    return h, u


def check_bound(spec, n_h=None, samples=10_000, seed=0):
    """Falsify the declared sup-bound on quasi-random samples; returns the sampled sup."""
    n_h = spec.h_arity if n_h is None else n_h
    h, u = sample_domain(n_h, spec.uses_u, samples, seed)
    vals = spec.evaluate(h if n_h else None, u)
    sup = float(np.max(np.abs(vals)))
    if spec.declared_bound is not None and sup > spec.declared_bound:
        raise SymbolBoundError(
            f"|f| reaches {sup:.6g} on sampled points, exceeding the declared bound {spec.declared_bound:g}"
        )
    return sup


# ---------------------------------------------------------------------------
# product splitting


def _flatten_product(node, out):
    if isinstance(node, BinOp) and node.op == "*":
        _flatten_product(node.left, out)
        _flatten_product(node.right, out)
    elif isinstance(node, BinOp) and node.op == "/":
        _flatten_product(node.left, out)
        out.append(BinOp("/", Num(1.0), node.right))
    else:
        out.append(node)


def split_product(spec):
    """Write ``f(h', u) = f1(h') * f2(u)`` if the top-level product allows it.

    Returns ``(f1, f2)`` as specs, or ``None`` when some factor mixes h and u.
    """
    factors = []
    _flatten_product(spec.expr, factors)
    h_part, u_part = [], []
    for fac in factors:
        names = variables(fac)
        if "u" in names and len(names) > 1:
            return None
        (u_part if "u" in names else h_part).append(fac)

    def product(nodes):
        if not nodes:
            return Num(1.0)
        out = nodes[0]
        for nd in nodes[1:]:
            out = BinOp("*", out, nd)
        return out

    return SymbolSpec(product(h_part)), SymbolSpec(product(u_part))


def lift(spec):
    """Same expression, re-parsed as a fresh spec (useful as an h'-only QH symbol)."""
    return SymbolSpec(spec.expr, text=spec.text, declared_bound=spec.declared_bound)


def constant(value=1.0):
    return SymbolSpec(Num(float(value)))


def load_symbols(path):
    """Read named symbols from a JSON file.

    Accepted layout::

        {"symbols": {"decay": "1/(1+h1)",
                     "step": {"expr": "ind(h1 < 2)", "bound": 1}}}
    """
    data = json.loads(Path(path).read_text())
    table = data.get("symbols", data)
    out = {}
    for name, entry in table.items():
        if isinstance(entry, str):
            out[name] = parse(entry)
        else:
            out[name] = parse(entry["expr"], bound=entry.get("bound"))
    return out
