"""Closed catalog of the expressions psi(r, s, t; z) under study.

Expressions are small immutable trees built with ordinary operators, e.g.
``R + BETA * S / R ** (n + 1)``.  Evaluation accepts scalars or numpy arrays
of equal shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analytic import AnalyticFunction


class PsiDivisionByZero(ZeroDivisionError):
    """A denominator of psi vanished at a scalar sample."""


class UnknownPsi(KeyError):
    pass


class Node:
    def __add__(self, other):
        return BinOp("+", self, _wrap(other))

    def __radd__(self, other):
        return BinOp("+", _wrap(other), self)

    def __sub__(self, other):
        return BinOp("-", self, _wrap(other))

    def __rsub__(self, other):
        return BinOp("-", _wrap(other), self)

    def __mul__(self, other):
        return BinOp("*", self, _wrap(other))

    def __rmul__(self, other):
        return BinOp("*", _wrap(other), self)

    def __truediv__(self, other):
        return BinOp("/", self, _wrap(other))

    def __rtruediv__(self, other):
        return BinOp("/", _wrap(other), self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise TypeError("only non-negative integer powers are supported")
        return Pow(self, k)


def _wrap(v) -> Node:
    return v if isinstance(v, Node) else Const(complex(v))


@dataclass(frozen=True)
class Var(Node):
    name: str

    def eval(self, env):
        return env[self.name]

    def names(self):
        return {self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Param(Node):
    name: str

    def eval(self, env):
        return env[self.name]

    def names(self):
        return set()

    def __str__(self):
        return {"beta": "β", "alpha": "α"}.get(self.name, self.name)


@dataclass(frozen=True)
class Const(Node):
    value: complex

    def eval(self, env):
        return self.value

    def names(self):
        return set()

    def __str__(self):
        v = self.value
        return f"{v.real:.6g}" if v.imag == 0 else f"({v:.6g})"


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def eval(self, env):
        x = self.left.eval(env)
        y = self.right.eval(env)
        if self.op == "+":
            return x + y
        if self.op == "-":
            return x - y
        if self.op == "*":
            return x * y
        if np.ndim(y) == 0 and np.ndim(x) == 0:
            if y == 0:
                raise PsiDivisionByZero(f"zero denominator in {self}")
            return x / y
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(y == 0, np.inf, x / np.where(y == 0, 1.0, y))

    def names(self):
        return self.left.names() | self.right.names()

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    k: int

    def eval(self, env):
        x = self.base.eval(env)
        out = x * 0 + 1
        for _ in range(self.k):
            out = out * x
        return out

    def names(self):
        return self.base.names() if self.k else set()

    def __str__(self):
        return f"{self.base}^{self.k}"


R, S, T, Z = Var("r"), Var("s"), Var("t"), Var("z")
BETA, ALPHA = Param("beta"), Param("alpha")
E = math.e


@dataclass(frozen=True)
class CatalogEntry:
    psi_id: str
    build: Callable[[int], Node]
    params: tuple[str, ...]
    description: str


def _fixed(tree: Node):
    return lambda n: tree


CATALOG: dict[str, CatalogEntry] = {}


def _entry(psi_id, build, params, description):
    CATALOG[psi_id] = CatalogEntry(psi_id, build, params, description)


_entry("E1", _fixed(R + (1 + 2 * E) * S), (), "r + (1+2e) s")
_entry("E2", _fixed(1 + (1 + math.sqrt(2)) * E * S), (), "1 + (1+sqrt2) e s")
_entry("E3a", _fixed(1 + S), (), "1 + s")
_entry("E3b", _fixed(R**2 - R + (1 + E) * S + 1), (), "r^2 - r + (1+e) s + 1")
_entry("E3c", _fixed(1 + S / R**2), (), "1 + s/r^2")
_entry("E4", _fixed(1 + S / R), (), "1 + s/r")
_entry("E5", _fixed(2 * S + T), (), "2s + t")
_entry("J1", lambda n: 1 + BETA * S / R**n, ("n", "beta"), "1 + β s/r^n")
_entry("J2", lambda n: 1 + BETA * S / R ** (n + 1), ("n", "beta"), "1 + β s/r^(n+1)")
_entry("J3", _fixed((1 - ALPHA) * R + ALPHA * R**2 + BETA * S), ("alpha", "beta"), "(1-α) r + α r^2 + β s")
_entry("J4a", _fixed(R + BETA * S), ("beta",), "r + β s")
_entry("J4b", _fixed(R + BETA * S / R), ("beta",), "r + β s/r")
_entry("X1", lambda n: 1 + BETA * S**n, ("n", "beta"), "1 + β s^n")
_entry("X2", lambda n: 1 + BETA * S / R ** (n + 1), ("n", "beta"), "1 + β s/r^(n+1)")
_entry("X3a", _fixed(R + BETA * S), ("beta",), "r + β s")
_entry("X3b", _fixed(R + BETA * S / R), ("beta",), "r + β s/r")
_entry("X4", lambda n: R + BETA * S / R ** (n + 1), ("n", "beta"), "r + β s/r^(n+1)")
_entry("X5a", _fixed(R + BETA * S**2), ("beta",), "r + β s^2")
_entry("X5b", _fixed(R + BETA * S**2 / R), ("beta",), "r + β s^2/r")
_entry("X5c", _fixed(R + BETA * S**2 / R**2), ("beta",), "r + β s^2/r^2")
_entry("X6a", _fixed(R**2 + BETA * S), ("beta",), "r^2 + β s")
_entry("X6b", _fixed(R**2 + BETA * S / R), ("beta",), "r^2 + β s/r")
_entry("X6c", _fixed(R**2 + BETA * S / R**2), ("beta",), "r^2 + β s/r^2")
_entry("X7a", _fixed(R + BETA * R * S), ("beta",), "r + β r s")
_entry("X7b", _fixed(R**2 + BETA * R * S), ("beta",), "r^2 + β r s")
_entry("X7c", _fixed(R**3 + BETA * R * S), ("beta",), "r^3 + β r s")
_entry("X8", _fixed(R**2 + R - 1 + BETA * S), ("beta",), "r^2 + r - 1 + β s")

# Lower bound on n accepted by each n-parameterized entry.
_MIN_N = {"J1": 0, "J2": 0, "X1": 1, "X2": 0, "X4": 1}


def _divides_by(node: Node, name: str) -> bool:
    if isinstance(node, BinOp):
        if node.op == "/" and name in node.right.names():
            return True
        return _divides_by(node.left, name) or _divides_by(node.right, name)
    if isinstance(node, Pow):
        return _divides_by(node.base, name)
    return False


@dataclass(frozen=True)
class PsiExpr:
    """A catalog expression with its parameters bound."""

    psi_id: str
    tree: Node = field(repr=False)
    beta: float | None = None
    alpha: float | None = None
    n: int | None = None

    @property
    def uses_t(self) -> bool:
        return "t" in self.tree.names()

    @property
    def divides_by_r(self) -> bool:
        """True when r occurs in a denominator, so psi(p, ...) needs p != 0."""
        return _divides_by(self.tree, "r")

    @property
    def description(self) -> str:
        return CATALOG[self.psi_id].description

    def env(self, r, s, t, z) -> dict:
        return {"r": r, "s": s, "t": t, "z": z, "beta": self.beta, "alpha": self.alpha}

    def __call__(self, r, s, t=0.0, z=0.0):
        return eval_psi(self, r, s, t, z)

    def with_params(self, **changes) -> "PsiExpr":
        return psi(self.psi_id, **{"beta": self.beta, "alpha": self.alpha, "n": self.n, **changes})

    def label(self) -> str:
        bits = [f"{k}={v:g}" for k, v in (("n", self.n), ("alpha", self.alpha), ("beta", self.beta)) if v is not None]
        return self.psi_id + (f"({', '.join(bits)})" if bits else "")


def psi(psi_id: str, beta: float | None = None, n: int | None = None, alpha: float | None = None) -> PsiExpr:
    """Look up a catalog entry and bind its parameters.

    Parameters an entry does not use are dropped, so callers may pass a
    uniform set of flags.
    """
    try:
        entry = CATALOG[psi_id]
    except KeyError:
        raise UnknownPsi(psi_id) from None
    if "n" in entry.params:
        if n is None:
            raise ValueError(f"{psi_id} needs an integer n")
        if int(n) != n or n < _MIN_N[psi_id]:
            raise ValueError(f"{psi_id} needs integer n >= {_MIN_N[psi_id]}, got {n}")
        n = int(n)
    else:
        n = None
    if "beta" in entry.params:
        if beta is None:
            raise ValueError(f"{psi_id} needs beta")
        beta = float(beta)
    else:
        beta = None
    if "alpha" in entry.params:
        if alpha is None:
            raise ValueError(f"{psi_id} needs alpha")
        alpha = float(alpha)
    else:
        alpha = None
    return PsiExpr(psi_id, entry.build(n if n is not None else 0), beta, alpha, n)


def catalog_ids() -> list[str]:
    return list(CATALOG)


def eval_psi(expr: PsiExpr, r, s, t=0.0, z=0.0):
    out = expr.tree.eval(expr.env(r, s, t, z))
    if np.ndim(out) == 0:
        return complex(out)
    return np.broadcast_to(out, np.broadcast(r, s, t, z).shape)


def eval_psi_on_function(expr: PsiExpr, p: AnalyticFunction, z):
    value, dz, d2z = p.jet(z)
    return eval_psi(expr, value, dz, d2z, z)
