"""Closed-form beta bounds, transcendental root constants and the theorem registry."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from .psi import PsiExpr, psi
from .regions import Region, disk, exp_disk, lemniscate, moebius_disk

E = math.e
SQRT2 = math.sqrt(2)
CLOSED_FORM, ROOT_EQUATION = "closed_form", "root_equation"
CONSTANT_TOL = 5e-4
RESIDUAL_TOL = 1e-12
BRACKET_HALF_WIDTH = 2.5e-11


class UnknownTheorem(KeyError):
    pass


class UnknownEquation(KeyError):
    pass


class NoSignChange(ValueError):
    pass


# --- root equations -----------------------------------------------------------
#
# Each f(x, lib, n) is written once and evaluated with ``math`` (double),
# ``np`` or ``mpmath`` so that the residual can be checked at higher precision.


def _ln(lib):
    return lib.log


def _e(lib):
    return lib.e


def _eq_beta_n(x, lib, n):
    e = _e(lib)
    return (e ** (1 + n) - x * (n - 1)) ** 2 - (
        e ** (2 + 2 * n) * n - x**2 * n + x * e ** (1 + n) * (1 - n + n**2)
    ) * _ln(lib)(e + e ** (-n) * x)


def _eq_lem8c(x, lib, n):
    e3 = _e(lib) ** 3
    e6 = e3 * e3
    return 6 * e6 + 5 * x * e3 - x**2 + (-2 * e6 - 5 * x * e3 + x**2) * _ln(lib)(e3 + x)


def _eq_a1(x, lib, n):
    return x * (1 - x) + (1 - x + x**2) * _ln(lib)(x - 1)


def _eq_a2(x, lib, n):
    e = _e(lib)
    return (e + 2 * x) ** 2 - (e**2 + 2 * x * e + 2 * x**2) * _ln(lib)(e + x)


def _eq_a3(x, lib, n):
    e = _e(lib)
    return 2 * x * e * (1 + x * e) - (2 + x * e + x**2 * e**2) * _ln(lib)(x * e - 1)


def _eq_a4(x, lib, n):
    e = _e(lib)
    return 6 * x - 2 * e + (e - 2 * x) * _ln(lib)((e - x) ** 2)


def _eq_a5(x, lib, n):
    return x * (2 - 3 * x) + (2 - 3 * x + 2 * x**2) * _ln(lib)(x - 1)


def _eq_a6(x, lib, n):
    e = _e(lib)
    return x * e * (3 + 5 * x * e) - (3 - x * e + 2 * x**2 * e**2) * _ln(lib)(x * e - 1)


@dataclass(frozen=True)
class RootEquation:
    equation_id: str
    func: Callable
    bracket: Callable[[int | None], tuple[float, float]]
    text: str
    needs_n: bool = False

    def __call__(self, x, n: int | None = None, lib=math):
        return self.func(x, lib, n)


EQUATIONS: dict[str, RootEquation] = {
    "root": RootEquation(
        "root", _eq_beta_n, lambda n: (1e-9, 1e4),
        "(e^{1+n} - x(n-1))^2 - (e^{2+2n} n - x^2 n + x e^{1+n}(1-n+n^2)) ln(e + e^{-n} x) = 0", True,
    ),
    "lem8c": RootEquation(
        "lem8c", _eq_lem8c, lambda n: (E**3, 1e4),
        "6e^6 + 5x e^3 - x^2 + (-2e^6 - 5x e^3 + x^2) ln(e^3 + x) = 0",
    ),
    "A1": RootEquation("A1", _eq_a1, lambda n: (1 + 1e-9, 100.0), "x(1-x) + (1-x+x^2) ln(x-1) = 0"),
    "A2": RootEquation("A2", _eq_a2, lambda n: (0.0, 40.0), "(e+2x)^2 - (e^2+2xe+2x^2) ln(e+x) = 0"),
    "A3": RootEquation("A3", _eq_a3, lambda n: (1 / E + 1e-9, 30.0), "2xe(1+xe) - (2+xe+x^2e^2) ln(xe-1) = 0"),
    "A4": RootEquation("A4", _eq_a4, lambda n: (E + 1e-9, 80.0), "6x - 2e + (e-2x) ln((e-x)^2) = 0"),
    "A5": RootEquation("A5", _eq_a5, lambda n: (1 + 1e-9, 70.0), "x(2-3x) + (2-3x+2x^2) ln(x-1) = 0"),
    "A6": RootEquation("A6", _eq_a6, lambda n: (1 / E + 1e-9, 60.0), "xe(3+5xe) - (3-xe+2x^2e^2) ln(xe-1) = 0"),
}


@dataclass(frozen=True)
class RootResult:
    equation_id: str
    n: int | None
    root: float
    root_hp: str
    residual: float
    residual_double: float
    bracket: tuple[float, float]
    bracket_width: float
    sign_changes: int

    def as_dict(self) -> dict:
        return asdict(self)


def _sign_changes(f, a: float, b: float, points: int = 4001):
    # log-spaced scan when the bracket spans decades; exact zeros at a are skipped
    if a > 0 and b / a > 100:
        xs = np.geomspace(a, b, points)
    else:
        xs = np.linspace(a, b, points)
    with np.errstate(all="ignore"):
        ys = np.array([f(float(x)) for x in xs])
    ok = np.isfinite(ys)
    xs, ys = xs[ok], ys[ok]
    if ys.size and ys[0] == 0:
        xs, ys = xs[1:], ys[1:]
    sgn = np.sign(ys)
    idx = np.flatnonzero(sgn[:-1] * sgn[1:] < 0)
    return [(float(xs[i]), float(xs[i + 1])) for i in idx]


def solve_root(
    equation_id: str,
    n: int | None = None,
    bracket: tuple[float, float] | None = None,
    xtol: float = 1e-12,
    dps: int = 40,
) -> RootResult:
    """Bracketed root of a printed equation.

    The equation is scanned for sign changes, the first one is solved with
    Brent's method and the result is polished with mpmath.  The residual is
    reported at the polished root; in double precision it is limited to about
    |f'(x)| * ulp(x), which exceeds 1e-12 for the steeper equations.
    """
    try:
        eq = EQUATIONS[equation_id]
    except KeyError:
        raise UnknownEquation(equation_id) from None
    if eq.needs_n:
        if n is None or int(n) != n or n < 1:
            raise ValueError(f"equation {equation_id!r} needs a positive integer n")
        n = int(n)
    else:
        n = None
    a, b = bracket if bracket is not None else eq.bracket(n)

    def f(x):
        try:
            return eq(x, n)
        except (ValueError, ZeroDivisionError, OverflowError):
            return math.nan

    cells = _sign_changes(f, a, b)
    if not cells:
        raise NoSignChange(f"{equation_id}: no sign change on [{a}, {b}]")
    lo, hi = cells[0]
    x0 = brentq(f, lo, hi, xtol=xtol, rtol=8.9e-16, maxiter=200)
    with mp.workdps(dps):
        g = lambda x: eq(x, n, mp)  # noqa: E731
        w = BRACKET_HALF_WIDTH
        lo_mp, hi_mp = mp.mpf(x0) - w, mp.mpf(x0) + w
        if mp.sign(g(lo_mp)) == mp.sign(g(hi_mp)):
            lo_mp, hi_mp = mp.mpf(lo), mp.mpf(hi)
        xr = mp.findroot(g, (lo_mp, hi_mp), solver="anderson")
        residual = float(abs(g(xr)))
        # report a bracket that provably straddles the polished root
        if mp.sign(g(xr - w)) != mp.sign(g(xr + w)):
            width = 2 * w
        else:
            width = float(hi_mp - lo_mp)
        root = float(xr)
        root_hp = mp.nstr(xr, 30)
    return RootResult(
        equation_id=equation_id,
        n=n,
        root=root,
        root_hp=root_hp,
        residual=residual,
        residual_double=float(abs(f(root))),
        bracket=(float(lo), float(hi)),
        bracket_width=float(width),
        sign_changes=len(cells),
    )


# --- theorem registry ---------------------------------------------------------


def _region_exp(alpha):
    return exp_disk()


def _region_lem2(alpha):
    return disk(1.0, 1.0 - alpha)


def _region_lem3(alpha):
    return moebius_disk(2, -2, 1, 1, 1.0, anchor=1.0, label="|(2w-2)/(w+1)| < 1")


def _region_lem11(alpha):
    return disk(1.0, 1.0)


def _region_lem12(alpha):
    return moebius_disk(1, -1, 1, 2, 0.5, anchor=1.0, label="|(w-1)/(w+2)| < 1/2")


def _lem2_bound(n, alpha):
    return E * (1 - alpha) if n == 0 else E ** (n - 1) * (1 - alpha)


def _lem1_bound(n, alpha):
    return E ** (n + 1) + E**n if n % 2 else E ** (n + 1) - E**n


LEM12_NUM = E + 2 - SQRT2 * (E - 1)


@dataclass(frozen=True)
class Theorem:
    theorem_id: str
    psi_id: str
    region: Callable[[float], Region]
    bound: Callable[[int | None, float | None], float] | None
    kind: str = CLOSED_FORM
    equation_id: str | None = None
    extremal_theta: float | None = None
    tight_at_m1: bool = True
    n_values: tuple[int, ...] = ()
    alpha_values: tuple[float, ...] = ()
    paper_value: float | None = None
    formula: str = ""
    strict: bool = False


THEOREMS: dict[str, Theorem] = {}


def _thm(**kw):
    THEOREMS[kw["theorem_id"]] = Theorem(**kw)


PI = math.pi
_thm(theorem_id="lem2", psi_id="J1", region=_region_lem2, bound=_lem2_bound, n_values=(0, 1, 2, 3),
     alpha_values=(0.0, 0.5), formula="e(1-α) if n=0 else e^(n-1)(1-α)")
_thm(theorem_id="lem3", psi_id="J2", region=_region_lem3, bound=lambda n, a: 2 * E**n, n_values=(0, 1, 2, 3),
     formula="2e^n")
_thm(theorem_id="lem11", psi_id="J3", region=_region_lem11, bound=lambda n, a: (E - a * (E - 1)) / E,
     extremal_theta=PI, alpha_values=(0.0, 0.5), formula="(e - α(e-1))/e")
_thm(theorem_id="lem12a", psi_id="J4a", region=_region_lem12, bound=lambda n, a: LEM12_NUM / (E * (SQRT2 - 1)),
     extremal_theta=0.0, paper_value=2.0323, formula="(e+2-√2(e-1))/(e(√2-1))")
_thm(theorem_id="lem12b", psi_id="J4b", region=_region_lem12, bound=lambda n, a: LEM12_NUM / (SQRT2 - 1),
     extremal_theta=0.0, paper_value=5.52436, formula="(e+2-√2(e-1))/(√2-1)")
_thm(theorem_id="lem1", psi_id="X1", region=_region_exp, bound=_lem1_bound, extremal_theta=PI,
     n_values=(1, 2, 3), tight_at_m1=False, formula="e^(n+1)+e^n (n odd), e^(n+1)-e^n (n even)")
_thm(theorem_id="lem4", psi_id="X2", region=_region_exp, bound=lambda n, a: E ** (n + 1) - E**n, extremal_theta=0.0,
     n_values=(0, 1, 2, 3), formula="e^(n+1)-e^n")
_thm(theorem_id="lem5a", psi_id="X3a", region=_region_exp, bound=lambda n, a: E**2 + 1, extremal_theta=PI,
     paper_value=8.38906, formula="e^2+1")
_thm(theorem_id="lem5b", psi_id="X3b", region=_region_exp, bound=lambda n, a: E + 1 / E, extremal_theta=PI,
     paper_value=3.08616, formula="e+e^-1")
_thm(theorem_id="lem6", psi_id="X4", region=_region_exp, bound=None, kind=ROOT_EQUATION, equation_id="root",
     extremal_theta=0.0, n_values=(1, 2, 3), tight_at_m1=False, formula="positive root β_n", strict=True)
_thm(theorem_id="lem7a", psi_id="X5a", region=_region_exp, bound=lambda n, a: E**3 - E, extremal_theta=PI,
     paper_value=17.3673, formula="e^3-e")
_thm(theorem_id="lem7b", psi_id="X5b", region=_region_exp, bound=lambda n, a: E**2 - 1, extremal_theta=PI,
     paper_value=6.38906, formula="e^2-1")
_thm(theorem_id="lem7c", psi_id="X5c", region=_region_exp, bound=lambda n, a: E - 1 / E, extremal_theta=PI,
     paper_value=2.3504, formula="e-e^-1")
_thm(theorem_id="lem8a", psi_id="X6a", region=_region_exp, bound=lambda n, a: E**2 + 1 / E, extremal_theta=PI,
     paper_value=7.75694, formula="e^2+e^-1")
_thm(theorem_id="lem8b", psi_id="X6b", region=_region_exp, bound=lambda n, a: E + E**-2, extremal_theta=PI,
     paper_value=2.85362, formula="e+e^-2")
_thm(theorem_id="lem8c", psi_id="X6c", region=_region_exp, bound=None, kind=ROOT_EQUATION, equation_id="lem8c",
     extremal_theta=0.0, paper_value=104.122, tight_at_m1=False, formula="root of the lem8c equation", strict=True)
_thm(theorem_id="lem9a", psi_id="X7a", region=_region_exp, bound=lambda n, a: E**3 + E, extremal_theta=PI,
     paper_value=22.8038, formula="e^3+e")
_thm(theorem_id="lem9b", psi_id="X7b", region=_region_exp, bound=lambda n, a: E**3 + 1, extremal_theta=PI,
     paper_value=21.0855, formula="e^3+1")
_thm(theorem_id="lem9c", psi_id="X7c", region=_region_exp, bound=lambda n, a: E**3 + 1 / E, extremal_theta=PI,
     paper_value=20.4534, formula="e^3+e^-1")
_thm(theorem_id="lem10", psi_id="X8", region=_region_exp, bound=lambda n, a: E**2 + 1 / E - E + 1,
     extremal_theta=PI, paper_value=6.03865, formula="e^2+e^-1-e+1")


def theorem(theorem_id: str) -> Theorem:
    try:
        return THEOREMS[theorem_id]
    except KeyError:
        raise UnknownTheorem(theorem_id) from None


def closed_form_bound(theorem_id: str, n: int | None = None, alpha: float | None = None) -> float:
    """Minimal beta of a closed-form theorem (double precision)."""
    thm = theorem(theorem_id)
    if thm.kind != CLOSED_FORM:
        raise UnknownTheorem(f"{theorem_id} has no closed form; use solve_root")
    _check_params(thm, n, alpha)
    return float(thm.bound(n, alpha if alpha is not None else 0.0))


def _check_params(thm: Theorem, n, alpha):
    if thm.n_values and n is None:
        raise ValueError(f"{thm.theorem_id} needs n")
    if thm.alpha_values and alpha is None:
        raise ValueError(f"{thm.theorem_id} needs alpha")
    if thm.theorem_id == "lem2" and alpha is not None and not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")


def theorem_bound(theorem_id: str, n: int | None = None, alpha: float | None = None) -> float:
    thm = theorem(theorem_id)
    if thm.kind == CLOSED_FORM:
        return closed_form_bound(theorem_id, n, alpha)
    return solve_root(thm.equation_id, n=n).root


@dataclass(frozen=True)
class BoundSpec:
    theorem_id: str
    kind: str
    n: int | None = None
    alpha: float | None = None
    paper_value: float | None = None
    equation_id: str | None = None

    @property
    def params(self) -> dict:
        return {k: v for k, v in (("n", self.n), ("alpha", self.alpha)) if v is not None}

    def value(self) -> float:
        return theorem_bound(self.theorem_id, self.n, self.alpha)


@dataclass(frozen=True)
class TheoremInstance:
    theorem: Theorem
    n: int | None
    alpha: float | None
    beta: float
    extras: dict = field(default_factory=dict)

    @property
    def theorem_id(self) -> str:
        return self.theorem.theorem_id

    def label(self) -> str:
        bits = [f"{k}={v:g}" for k, v in (("n", self.n), ("alpha", self.alpha)) if v is not None]
        return self.theorem_id + (f"[{','.join(bits)}]" if bits else "")

    def expr(self, beta: float | None = None) -> PsiExpr:
        return psi(self.theorem.psi_id, beta=self.beta if beta is None else beta, n=self.n, alpha=self.alpha)

    def region(self) -> Region:
        return self.theorem.region(self.alpha if self.alpha is not None else 0.0)

    @property
    def psi_n(self) -> int | None:
        return self.n


def instances(theorem_ids=None) -> list[TheoremInstance]:
    """Every theorem at every registered (n, alpha), with beta at its bound."""
    out = []
    for tid, thm in THEOREMS.items():
        if theorem_ids is not None and tid not in theorem_ids:
            continue
        for n in thm.n_values or (None,):
            for alpha in thm.alpha_values or (None,):
                out.append(TheoremInstance(thm, n, alpha, theorem_bound(tid, n, alpha)))
    return out


# --- constants table ------------------------------------------------------------


@dataclass(frozen=True)
class ConstantRow:
    theorem_id: str
    params: dict
    computed: float
    paper_value: float
    abs_diff: float

    def as_dict(self) -> dict:
        return asdict(self)


# (row id, source, printed value); auxiliaries are interior constants of proofs.
_PRINTED = [
    ("lem5a", "theorem", 8.38906),
    ("lem5b", "theorem", 3.08616),
    ("lem7a", "theorem", 17.3673),
    ("lem7b", "theorem", 6.38906),
    ("lem7c", "theorem", 2.3504),
    ("lem8a", "theorem", 7.75694),
    ("lem8b", "theorem", 2.85362),
    ("lem8c", "theorem", 104.122),
    ("lem9a", "theorem", 22.8038),
    ("lem9b", "theorem", 21.0855),
    ("lem9c", "theorem", 20.4534),
    ("lem10", "theorem", 6.03865),
    ("lem12a", "theorem", 2.0323),
    ("lem12b", "theorem", 5.52436),
    ("A1", "equation", 3.4446),
    ("A2", "equation", 3.7586),
    ("A3", "equation", 2.9432),
    ("A4", "equation", 7.7065),
    ("A5", "equation", 6.46722),
    ("A6", "equation", 5.66489),
]

# Which proof each auxiliary root appears in.
AUXILIARY_OWNER = {"A1": "lem5a", "A2": "lem7a", "A3": "lem8a", "A4": "lem9a", "A5": "lem9b", "A6": "lem9c"}


def constants_table() -> list[ConstantRow]:
    rows = []
    for row_id, source, printed in _PRINTED:
        if source == "theorem":
            computed = theorem_bound(row_id)
            params = {}
        else:
            computed = solve_root(row_id).root
            params = {"equation": row_id, "proof_of": AUXILIARY_OWNER[row_id]}
        rows.append(ConstantRow(row_id, params, computed, printed, abs(computed - printed)))
    return rows


@dataclass(frozen=True)
class TypoFlag:
    theorem_id: str
    kind: str
    statement: str
    proof: str
    resolution: str

    def as_dict(self) -> dict:
        return asdict(self)


def typo_flags() -> list[TypoFlag]:
    e3p1 = E**3 + 1
    return [
        TypoFlag("lem9b", "value", "e^3+1 ≈ 21.0855", "e^3+1 ≈ 20.0855",
                 f"e^3+1 = {e3p1:.6f}; the statement value is used"),
        TypoFlag("lem4", "exponent", "1 + β zp'/p^(n+1), i.e. ψ = 1 + β s/r^(n+1)", "ψ = 1 + β s/r^n",
                 "the proof's μ, ν carry e^(-n cos θ), which belongs to s/r^(n+1); the statement form is used"),
        TypoFlag("lem12", "threshold", "|(w-1)/(w+2)| < 1/2", "squared ratio compared with 1/2",
                 "the squared ratio should be compared with 1/4; the printed bound is sufficient but not tight"),
        TypoFlag("E3b", "coefficient", "ψ = r^2 - r + (1+e) s + 1", "(2+e) s in the displayed estimate",
                 "the catalog form (1+e) s is used"),
    ]


# --- worked examples with fixed psi -------------------------------------------------


@dataclass(frozen=True)
class Example:
    psi_id: str
    region: Callable[[], Region]
    claim: str


EXAMPLES: dict[str, Example] = {
    "E1": Example("E1", lambda: disk(0.0, 2.0, anchor=1.0), "|p + (1+2e) zp'| < 2"),
    "E2": Example("E2", lemniscate, "|(1 + (1+√2) e zp')^2 - 1| < 1"),
    "E3a": Example("E3a", lambda: disk(1.0, 1 / E), "|zp'| < 1/e"),
    "E3b": Example("E3b", lambda: disk(1.0, 1 / E), "|p^2 - p + (1+e) zp'| < 1/e"),
    "E3c": Example("E3c", lambda: disk(1.0, 1 / E), "|zp'/p^2| < 1/e"),
    "E4": Example("E4", lambda: disk(1.0, 1.0), "1 + zp'/p < 1 + z"),
    "E5": Example("E5", lambda: disk(0.0, 1 / E), "|2zp' + z^2 p''| < 1/e"),
}
