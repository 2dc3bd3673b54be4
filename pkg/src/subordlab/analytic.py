"""Truncated analytic functions on the unit disk.

Every function used as a test instance exposes two things: pointwise
evaluation ``f(z)`` and the jet ``(p(z), z p'(z), z^2 p''(z))``.  Both accept
scalars or numpy arrays.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol, Sequence

import numpy as np

DEFAULT_ORDER = 64
QUOTIENT_FLOOR = 1e-12


class ZeroDenominator(ArithmeticError):
    """f(z) is too close to zero for z f'(z) / f(z) to be trusted."""


class InvalidZero(ValueError):
    """A Blaschke factor was given a zero outside the open unit disk."""


class CoefficientFormatError(ValueError):
    pass


class AnalyticFunction(Protocol):
    def __call__(self, z): ...

    def jet(self, z) -> tuple: ...


@dataclass(frozen=True)
class ClassTag:
    """Either H[a, n] or the normalized class (f(0) = 0, f'(0) = 1)."""

    kind: str
    a: complex = 1.0
    n: int = 1

    @classmethod
    def H(cls, a: complex = 1.0, n: int = 1) -> "ClassTag":
        if n < 1:
            raise ValueError("H[a, n] needs n >= 1")
        return cls("H", complex(a), int(n))

    @classmethod
    def normalized(cls) -> "ClassTag":
        return cls("normalized", 0.0, 1)

    def __str__(self) -> str:
        if self.kind == "normalized":
            return "NormalizedH"
        return f"H[{self.a:g},{self.n}]"


H1 = ClassTag.H(1.0, 1)
NORMALIZED = ClassTag.normalized()


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).ravel()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Finite coefficient list a_0 ... a_N tagged with its function class."""

    coefficients: np.ndarray
    class_tag: ClassTag = H1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _frozen(self.coefficients))
        a = self.coefficients
        tag = self.class_tag
        if a.size == 0:
            raise ValueError("empty coefficient list")
        if tag.kind == "normalized":
            if a.size < 2 or a[0] != 0 or a[1] != 1:
                raise ValueError("normalized series needs a_0 = 0 and a_1 = 1")
        else:
            if a.size - 1 < tag.n:
                raise ValueError(f"degree {a.size - 1} is below class order n={tag.n}")
            if a[0] != tag.a:
                raise ValueError(f"a_0 = {a[0]} but class is {tag}")
            if np.any(a[1 : tag.n] != 0):
                raise ValueError(f"a_1..a_{tag.n - 1} must vanish for {tag}")

    @property
    def order(self) -> int:
        """Truncation degree N."""
        return self.coefficients.size - 1

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coefficients[: order + 1], self.class_tag, self.name)

    def __call__(self, z):
        return eval_series(self, z)

    def jet(self, z):
        return eval_jet(self, z)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"PowerSeries({self.class_tag}, N={self.order}{label})"


def _horner(coeffs: np.ndarray, z):
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc if acc.ndim else complex(acc)


def eval_series(p: PowerSeries, z):
    return _horner(p.coefficients, z)


def eval_jet(p: PowerSeries, z):
    """Return ``(p(z), z p'(z), z^2 p''(z))`` from the stored coefficients."""
    a = p.coefficients
    k = np.arange(a.size)
    return _horner(a, z), _horner(k * a, z), _horner(k * (k - 1) * a, z)


def _quotient(f: PowerSeries, z, floor: float):
    # z f'(z) / f(z) = (sum (k+1) a_{k+1} z^k) / (sum a_{k+1} z^k); the
    # reduced form is regular at the removable point z = 0.
    a = f.coefficients
    k = np.arange(1, a.size)
    num = _horner(k * a[1:], z)
    den = _horner(a[1:], z)
    bad = np.abs(den) < floor
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(bad, np.nan, num / np.where(bad, 1.0, den))
    return q, bad


def log_quotient(f: PowerSeries, z, floor: float = QUOTIENT_FLOOR):
    """Compute z f'(z) / f(z) for a normalized series.

    The floor is applied to f(z)/z so that points close to the removable
    singularity at the origin are not rejected.
    """
    if f.class_tag.kind != "normalized":
        raise ValueError("log_quotient expects a normalized series")
    q, bad = _quotient(f, z, floor)
    if np.ndim(q) == 0:
        if bad:
            raise ZeroDenominator(f"|f(z)/z| < {floor:g} at z={z}")
        return complex(q)
    if np.any(bad):
        raise ZeroDenominator(f"{int(np.sum(bad))} sample(s) below the floor {floor:g}")
    return q


def quotient_values(f: PowerSeries, z, floor: float = QUOTIENT_FLOOR):
    """Array form of :func:`log_quotient`; rejected samples come back as NaN."""
    return _quotient(f, np.asarray(z, dtype=complex), floor)[0]


# --- Schwarz functions -----------------------------------------------------


@dataclass(frozen=True)
class SchwarzFunction:
    """w(z) = rotation * z * prod (z - z_k) / (1 - conj(z_k) z)."""

    blaschke_zeros: tuple = ()
    rotation: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "blaschke_zeros", tuple(complex(c) for c in self.blaschke_zeros))
        object.__setattr__(self, "rotation", complex(self.rotation))


class SchwarzMap:
    """Evaluator for a finite Blaschke product fixing the origin.

    Held as the rational function N(z)/D(z) so that derivatives stay
    regular at the zeros of w.
    """

    def __init__(self, s: SchwarzFunction):
        for zk in s.blaschke_zeros:
            if abs(zk) >= 1:
                raise InvalidZero(f"Blaschke zero {zk} has modulus >= 1")
        if abs(abs(s.rotation) - 1) > 1e-12:
            raise ValueError(f"rotation {s.rotation} is not unimodular")
        P = np.polynomial.Polynomial
        num = P([0, 1]) * s.rotation
        den = P([1])
        for zk in s.blaschke_zeros:
            num = num * P([-zk, 1])
            den = den * P([1, -np.conj(zk)])
        self.spec = s
        self._num = [num, num.deriv(1), num.deriv(2)]
        self._den = [den, den.deriv(1), den.deriv(2)]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        w = self._num[0](z) / self._den[0](z)
        return w if w.ndim else complex(w)

    def derivatives(self, z):
        """Return ``(w, w', w'')`` at z."""
        z = np.asarray(z, dtype=complex)
        n0, n1, n2 = (p(z) for p in self._num)
        d0, d1, d2 = (p(z) for p in self._den)
        w = n0 / d0
        w1 = (n1 * d0 - n0 * d1) / d0**2
        w2 = (n2 * d0 - n0 * d2) / d0**2 - 2 * d1 * (n1 * d0 - n0 * d1) / d0**3
        return w, w1, w2


def make_schwarz(s: SchwarzFunction) -> SchwarzMap:
    return SchwarzMap(s)


class ExpOfSchwarz:
    """p = exp(w(z)), a function subordinate to e^z by construction.

    Composition is evaluated pointwise, never as a series.
    """

    def __init__(self, w: SchwarzMap | SchwarzFunction):
        self.w = w if isinstance(w, SchwarzMap) else SchwarzMap(w)

    def __call__(self, z):
        v = np.exp(self.w(z))
        return v

    def jet(self, z):
        z = np.asarray(z, dtype=complex)
        w, w1, w2 = self.w.derivatives(z)
        p = np.exp(w)
        return p, z * w1 * p, z**2 * (w2 + w1**2) * p

    def __repr__(self) -> str:
        s = self.w.spec
        return f"ExpOfSchwarz(zeros={list(s.blaschke_zeros)}, rotation={s.rotation})"


@dataclass(frozen=True)
class ClosedForm:
    """A named function given by closed-form evaluators of value and jet."""

    name: str
    value: Callable
    jet_fn: Callable

    def __call__(self, z):
        return self.value(np.asarray(z, dtype=complex))

    def jet(self, z):
        return self.jet_fn(np.asarray(z, dtype=complex))

    def __repr__(self) -> str:
        return f"ClosedForm({self.name})"


def exp_scaled(c: complex) -> ClosedForm:
    """z -> e^{c z}; subordinate to e^z whenever |c| <= 1."""
    c = complex(c)

    def jet(z):
        p = np.exp(c * z)
        return p, c * z * p, (c * z) ** 2 * p

    return ClosedForm(f"exp({c:g} z)", lambda z: np.exp(c * z), jet)


def moebius_fn(a: complex, b: complex, c: complex, d: complex) -> ClosedForm:
    """z -> (a z + b) / (c z + d)."""
    det = a * d - b * c

    def jet(z):
        den = c * z + d
        return (a * z + b) / den, z * det / den**2, -2 * c * z**2 * det / den**3

    return ClosedForm(f"moebius({a},{b},{c},{d})", lambda z: (a * z + b) / (c * z + d), jet)


def koebe() -> ClosedForm:
    """z / (1 - z)^2."""

    def jet(z):
        u = 1 - z
        return z / u**2, z * (1 + z) / u**3, z**2 * (4 + 2 * z) / u**4

    return ClosedForm("koebe", lambda z: z / (1 - z) ** 2, jet)


# --- named truncations -----------------------------------------------------


def exp_series(order: int = DEFAULT_ORDER, scale: complex = 1.0) -> PowerSeries:
    """Truncated e^{scale z}."""
    k = np.arange(order + 1)
    coeffs = np.array([scale**j / math.factorial(j) for j in k], dtype=complex)
    return PowerSeries(coeffs, H1, name=f"exp({scale:g}z)")


def z_exp_series(order: int = DEFAULT_ORDER, scale: complex = 1.0) -> PowerSeries:
    """Truncated z e^{scale z} (normalized)."""
    coeffs = np.zeros(order + 1, dtype=complex)
    for j in range(order):
        coeffs[j + 1] = scale**j / math.factorial(j)
    return PowerSeries(coeffs, NORMALIZED, name=f"z exp({scale:g}z)")


def koebe_series(order: int = DEFAULT_ORDER) -> PowerSeries:
    return PowerSeries(np.arange(order + 1, dtype=complex), NORMALIZED, name="koebe")


def identity_series() -> PowerSeries:
    return PowerSeries([0, 1], NORMALIZED, name="identity")


def polynomial(coeffs: Sequence[complex]) -> PowerSeries:
    """Series with the class tag inferred from its leading coefficients."""
    return PowerSeries(coeffs, infer_class_tag(coeffs))


def infer_class_tag(coeffs: Sequence[complex]) -> ClassTag:
    a = np.asarray(coeffs, dtype=complex)
    if a.size >= 2 and a[0] == 0 and a[1] == 1:
        return NORMALIZED
    nz = np.flatnonzero(a[1:])
    n = int(nz[0]) + 1 if nz.size else max(1, a.size - 1)
    return ClassTag.H(a[0], n)


# --- coefficient files -----------------------------------------------------


def coefficients_to_json(p: PowerSeries) -> str:
    return json.dumps([[c.real, c.imag] for c in p.coefficients])


def parse_coefficients(payload) -> PowerSeries:
    """Build a series from a JSON array of ``[re, im]`` pairs (index = power)."""
    if not isinstance(payload, list) or not payload:
        raise CoefficientFormatError("expected a non-empty JSON array of [re, im] pairs")
    coeffs = []
    for i, item in enumerate(payload):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise CoefficientFormatError(f"entry {i} is not a [re, im] pair: {item!r}")
        coeffs.append(complex(item[0], item[1]))
    try:
        return polynomial(coeffs)
    except ValueError as exc:
        raise CoefficientFormatError(str(exc)) from exc


def load_coefficients(path: str | Path) -> PowerSeries:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CoefficientFormatError(f"{path}: {exc}") from exc
    return parse_coefficients(payload)


def save_coefficients(p: PowerSeries, path: str | Path) -> None:
    Path(path).write_text(coefficients_to_json(p) + "\n", encoding="utf-8")
