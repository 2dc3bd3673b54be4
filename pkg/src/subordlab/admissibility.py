"""Numerical admissibility check for the superordinate q(z) = e^z.

On the boundary of the unit disk the admissibility set of e^z is

    r = exp(e^{i theta}),  s = m e^{i theta} r,  Re(1 + t/s) >= m (1 + cos theta),

with theta in [0, 2 pi) and m >= 1.  ``t`` is written as ``s (nu - 1)`` so the
last condition reads Re(nu) >= m (1 + cos theta).  A psi is admissible for a
region when psi(r, s, t) stays outside the region on that whole set; here
that is decided by a grid search followed by golden-section refinement.  The
result is a floating-point minimum, not an interval-arithmetic certificate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .psi import PsiExpr, eval_psi
from .regions import FOLDED, PRINCIPAL, Region, margin

TWO_PI = 2 * math.pi
INV_PHI = (math.sqrt(5) - 1) / 2
ADMISSIBLE_TOL = 1e-7
TIE_TOL = 1e-12


@dataclass(frozen=True)
class AdmissibilityPoint:
    theta: float
    m: float
    nu: complex | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        floor = self.m * (1 + math.cos(self.theta))
        if self.nu is None:
            object.__setattr__(self, "nu", complex(floor))
        elif complex(self.nu).real < floor - 1e-12:
            raise ValueError(f"Re(nu) = {complex(self.nu).real} is below m(1+cos theta) = {floor}")

    @property
    def r(self) -> complex:
        return complex(np.exp(np.exp(1j * self.theta)))

    @property
    def s(self) -> complex:
        return self.m * complex(np.exp(1j * self.theta)) * self.r

    @property
    def t(self) -> complex:
        return self.s * (complex(self.nu) - 1)

    def as_dict(self) -> dict:
        nu = complex(self.nu)
        return {"theta": self.theta, "m": self.m, "nu": [nu.real, nu.imag]}


def admissible_triple(theta, m, nu=None):
    """Arrays (r, s, t) on the admissibility set; nu defaults to its lower edge."""
    zeta = np.exp(1j * np.asarray(theta, dtype=float))
    r = np.exp(zeta)
    s = np.asarray(m) * zeta * r
    if nu is None:
        nu = np.asarray(m) * (1 + zeta.real)
    return r, s, s * (np.asarray(nu) - 1)


def exclusion_margin(expr: PsiExpr, region: Region, pt: AdmissibilityPoint, branch: str = PRINCIPAL) -> float:
    """margin(region, psi) at one admissibility point; >= 0 means excluded."""
    try:
        w = eval_psi(expr, pt.r, pt.s, pt.t, 0.0)
    except ZeroDivisionError:
        return math.inf
    return margin(region, w, branch)


@dataclass(frozen=True)
class GridSpec:
    theta_points: int = 4096
    m_points: int = 64
    m_max: float = 32.0
    nu_re_window: float = 50.0
    nu_im_window: float = 50.0
    nu_points: int = 9
    refine_tol: float = 1e-9
    refine_starts: int = 8
    max_sweeps: int = 60
    tol: float = ADMISSIBLE_TOL
    jobs: int = 1

    def __post_init__(self):
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if self.theta_points < 8 or self.m_points < 1 or self.nu_points < 1:
            raise ValueError("grid resolutions are too small")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    min_margin: float
    argmin: AdmissibilityPoint
    grid_spec: GridSpec
    branch: str = PRINCIPAL
    evaluations: int = 0
    method: str = field(default="grid + coordinate golden-section refinement (floating point, uncertified)")

    def as_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "min_margin": self.min_margin,
            "argmin": self.argmin.as_dict(),
            "grid_spec": self.grid_spec.as_dict(),
            "branch": self.branch,
            "evaluations": self.evaluations,
            "method": self.method,
        }


def golden_section(f, a: float, b: float, tol: float, x0: float | None = None, f0: float | None = None):
    """Minimize f on [a, b]; returns the best point seen, endpoints included."""
    best_x, best_f = (x0, f0) if x0 is not None else (a, f(a))
    fa = f(a) if x0 is not None else best_f
    if fa < best_f - TIE_TOL:
        best_x, best_f = a, fa
    fb = f(b)
    if fb < best_f - TIE_TOL:
        best_x, best_f = b, fb
    lo, hi = a, b
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f - TIE_TOL:
            best_x, best_f = x, fx
    return best_x, best_f


class _Objective:
    """Margin as a function of (theta, m, nu offset); counts evaluations."""

    def __init__(self, expr, region, branch):
        self.expr, self.region, self.branch = expr, region, branch
        self.count = 0

    def grid(self, theta, m, d_re, d_im):
        nu = m * (1 + np.cos(theta)) + d_re + 1j * d_im
        r, s, t = admissible_triple(theta, m, nu)
        self.count += np.size(r)
        return margin(self.region, eval_psi(self.expr, r, s, t, 0.0), self.branch)

    def __call__(self, x) -> float:
        theta, m, d_re, d_im = x
        self.count += 1
        nu = m * (1 + math.cos(theta)) + d_re + 1j * d_im
        zeta = complex(math.cos(theta), math.sin(theta))
        r = complex(np.exp(zeta))
        s = m * zeta * r
        try:
            w = eval_psi(self.expr, r, s, s * (nu - 1), 0.0)
        except ZeroDivisionError:
            return math.inf
        return margin(self.region, w, self.branch)


def _grid_axes(expr: PsiExpr, grid: GridSpec):
    thetas = np.arange(grid.theta_points) * (TWO_PI / grid.theta_points)
    ms = np.geomspace(1.0, grid.m_max, grid.m_points) if grid.m_max > 1 else np.array([1.0])
    if expr.uses_t:
        d_re = np.linspace(0.0, grid.nu_re_window, grid.nu_points)
        n_im = grid.nu_points if grid.nu_points % 2 else grid.nu_points + 1
        d_im = np.linspace(-grid.nu_im_window, grid.nu_im_window, n_im)
    else:
        d_re = np.zeros(1)
        d_im = np.zeros(1)
    return thetas, ms, d_re, d_im


def _evaluate_grid(obj: _Objective, axes, jobs: int) -> np.ndarray:
    thetas, ms, d_re, d_im = axes
    chunks = np.array_split(np.arange(thetas.size), max(1, min(jobs * 4, thetas.size)) if jobs > 1 else 1)

    def run(idx):
        T, M, DR, DI = np.meshgrid(thetas[idx], ms, d_re, d_im, indexing="ij")
        return obj.grid(T, M, DR, DI)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(idx) for idx in chunks]
    return np.concatenate(parts, axis=0)


def _starts(values: np.ndarray, count: int) -> list[tuple[int, ...]]:
    """Grid minimum plus the best distinct local minima in theta."""
    n_theta = values.shape[0]
    flat = values.reshape(n_theta, -1)
    per_theta = flat.min(axis=1)
    best = per_theta.min()
    picks: list[int] = [int(np.flatnonzero(per_theta <= best + TIE_TOL)[0])]
    left, right = np.roll(per_theta, 1), np.roll(per_theta, -1)
    local = np.flatnonzero((per_theta <= left) & (per_theta <= right))
    for i in local[np.argsort(per_theta[local], kind="stable")]:
        if len(picks) >= count:
            break
        if all(min(abs(int(i) - p), n_theta - abs(int(i) - p)) > 2 for p in picks):
            picks.append(int(i))
    out = []
    for i in picks:
        row = flat[i]
        j = int(np.flatnonzero(row <= row.min() + TIE_TOL)[0])
        out.append((i, *np.unravel_index(j, values.shape[1:])))
    return out


def _refine(obj: _Objective, x0, f0, bounds, tol: float, max_sweeps: int, active):
    x = list(x0)
    fx = f0
    for _ in range(max_sweeps):
        moved = 0.0
        for k in active:
            lo, hi = bounds[k]
            if hi - lo <= tol:
                continue

            def f1(v, k=k):
                y = list(x)
                y[k] = v
                return obj(y)

            v, fv = golden_section(f1, lo, hi, tol, x[k], fx)
            if fv < fx - TIE_TOL:
                moved = max(moved, abs(v - x[k]))
                x[k], fx = v, fv
        if moved <= tol:
            break
    return x, fx


def _key(theta: float, m: float, value: float):
    return (value, theta % TWO_PI, m)


def min_exclusion(
    expr: PsiExpr,
    region: Region,
    m_max: float | None = None,
    grid: GridSpec | None = None,
    branch: str = PRINCIPAL,
) -> AdmissibilityReport:
    """Smallest exclusion margin over the admissibility set.

    The coarse grid covers theta x m (x the nu-window when psi depends on t);
    the best grid points are then polished coordinate-wise by golden-section
    search.  Ties are broken towards the smallest theta, then the smallest m.
    """
    grid = grid or GridSpec()
    if m_max is not None and m_max != grid.m_max:
        grid = GridSpec(**{**grid.as_dict(), "m_max": float(m_max)})
    obj = _Objective(expr, region, branch)
    axes = _grid_axes(expr, grid)
    thetas, ms, d_re, d_im = axes
    values = _evaluate_grid(obj, axes, grid.jobs)
    h_theta = TWO_PI / grid.theta_points

    results = []
    for i, j, a, b in _starts(values, grid.refine_starts):
        x0 = [thetas[i], ms[j], d_re[a], d_im[b]]
        f0 = float(values[i, j, a, b])
        bounds = [
            (thetas[i] - 2 * h_theta, thetas[i] + 2 * h_theta),
            (ms[max(j - 1, 0)], ms[min(j + 1, ms.size - 1)]),
            (d_re[max(a - 1, 0)], d_re[min(a + 1, d_re.size - 1)]),
            (d_im[max(b - 1, 0)], d_im[min(b + 1, d_im.size - 1)]),
        ]
        active = [0, 1, 2, 3] if expr.uses_t else [0, 1]
        x, fx = _refine(obj, x0, f0, bounds, grid.refine_tol, grid.max_sweeps, active)
        x[0] %= TWO_PI
        results.append((x, fx))

    best_x, best_f = results[0]
    for x, fx in results[1:]:
        if fx < best_f - TIE_TOL or (abs(fx - best_f) <= TIE_TOL and _key(x[0], x[1], 0) < _key(best_x[0], best_x[1], 0)):
            best_x, best_f = x, fx
    theta, m, dr, di = best_x
    nu = m * (1 + math.cos(theta)) + dr + 1j * di
    point = AdmissibilityPoint(float(theta), float(m), complex(nu))
    return AdmissibilityReport(
        admissible=bool(best_f >= -grid.tol),
        min_margin=float(best_f),
        argmin=point,
        grid_spec=grid,
        branch=branch,
        evaluations=obj.count,
    )


def margin_trace(expr: PsiExpr, region: Region, thetas, m: float = 1.0, branch: str = PRINCIPAL):
    """Margin along theta at fixed m (nu on its lower edge)."""
    r, s, t = admissible_triple(thetas, m)
    return margin(region, eval_psi(expr, r, s, t, 0.0), branch)


# --- sharpness of the proof method ------------------------------------------


@dataclass(frozen=True)
class SharpnessResult:
    boundary_attained: bool
    fails_below: bool
    margin_at_bound: float
    margin_below: float
    beta_at_bound: float | None
    beta_below: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def sharpness_probe(
    expr: PsiExpr,
    region: Region,
    beta_at_bound: float | None,
    eps: float = 0.01,
    grid: GridSpec | None = None,
    branch: str = FOLDED,
    attained_tol: float = 1e-5,
) -> SharpnessResult:
    """Does the minimum touch zero at the bound and go negative just below it?

    Defaults to the folded logarithm, which is what the closed-form proofs
    minimise; this probes the proof method, not the implication itself.
    """
    at = expr.with_params(beta=beta_at_bound) if beta_at_bound is not None else expr
    below_beta = None if beta_at_bound is None else beta_at_bound * (1 - eps)
    below = expr.with_params(beta=below_beta) if below_beta is not None else expr
    rep_at = min_exclusion(at, region, grid=grid, branch=branch)
    rep_below = min_exclusion(below, region, grid=grid, branch=branch)
    return SharpnessResult(
        boundary_attained=abs(rep_at.min_margin) <= attained_tol,
        fails_below=not rep_below.admissible,
        margin_at_bound=rep_at.min_margin,
        margin_below=rep_below.min_margin,
        beta_at_bound=at.beta,
        beta_below=below.beta,
    )


# --- the closed-form g(theta) printed in each proof ---------------------------


class UndefinedRatio(ArithmeticError):
    pass


def _atan_ratio(num, den):
    # arctan(num/den) as printed; at den = 0 the squared term tends to (pi/2)^2.
    num, den = np.broadcast_arrays(np.asarray(num, float), np.asarray(den, float))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den == 0, np.pi / 2, np.arctan(num / np.where(den == 0, 1.0, den)))


def _logsq(modsq, num, den):
    with np.errstate(divide="ignore"):
        return 0.25 * np.log(modsq) ** 2 + _atan_ratio(num, den) ** 2


def _g_lem2(th, m, beta, n, alpha):
    return beta * m * np.exp(-(n - 1) * np.cos(th))


def _g_lem3(th, m, beta, n, alpha):
    x = beta * m * np.exp(-n * np.cos(th))
    return 2 * x / (2 + x)


def _g_lem11(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec, e2c = np.exp(c), np.exp(2 * c)
    re = (1 - alpha) * ec * np.cos(si) + alpha * e2c * np.cos(2 * si) + beta * m * ec * c * np.cos(si) \
        - beta * m * ec * si * np.sin(si) - 1
    im = (1 - alpha) * ec * np.sin(si) + alpha * e2c * np.sin(2 * si) + beta * m * ec * c * np.sin(si) \
        + beta * m * ec * si * np.cos(si)
    return re**2 + im**2


def _g_lem12a(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    emc = np.exp(-c)
    num = (1 + beta * m * c - emc * np.cos(si)) ** 2 + (beta * m * si + emc * np.sin(si)) ** 2
    den = (1 + beta * m * c + 2 * emc * np.cos(si)) ** 2 + (beta * m * si - 2 * emc * np.sin(si)) ** 2
    return num / den


def _g_lem12b(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec = np.exp(c)
    num = (ec * np.cos(si) + beta * m * c - 1) ** 2 + (ec * np.sin(si) + beta * m * si) ** 2
    den = (ec * np.cos(si) + beta * m * c + 2) ** 2 + (ec * np.sin(si) + beta * m * si) ** 2
    return num / den


def _g_lem1(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    k = beta * m**n * np.exp(n * c)
    mu = k * np.sin(n * th) * np.cos(n * si) + k * np.cos(n * th) * np.sin(n * si)
    nu = 1 + k * np.cos(n * th) * np.cos(n * si) - k * np.sin(n * th) * np.sin(n * si)
    return _logsq(mu**2 + nu**2, mu, nu)


def _g_lem4(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    k = beta * m * np.exp(-n * c)
    mu = k * si * np.cos(n * si) - k * c * np.sin(n * si)
    nu = 1 + k * c * np.cos(n * si) + k * si * np.sin(n * si)
    return _logsq(mu**2 + nu**2, mu, nu)


def _g_lem5a(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    e2c = np.exp(2 * c)
    bm = beta * m
    modsq = e2c + bm**2 * e2c + 2 * bm * e2c * c
    num = np.sin(si) + bm * c * np.sin(si) + bm * si * np.cos(si)
    den = np.cos(si) + bm * c * np.cos(si) - bm * si * np.sin(si)
    return _logsq(modsq, num, den)


def _g_lem5b(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec = np.exp(c)
    bm = beta * m
    modsq = np.exp(2 * c) + bm**2 + 2 * bm * ec * c * np.cos(si) + 2 * bm * ec * si * np.sin(si)
    return _logsq(modsq, ec * np.sin(si) + bm * si, ec * np.cos(si) + bm * c)


def _g_lem6(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    bm = beta * m
    k = 2 * bm * np.exp((1 - n) * c)
    modsq = (
        np.exp(2 * c) + bm**2 * np.exp(-2 * n * c)
        + k * c * np.cos(si) * np.cos(n * si)
        + k * si * np.cos(si) * np.sin(n * si)
        + k * si * np.sin(si) * np.cos(n * si)
        - k * c * np.sin(si) * np.sin(n * si)
    )
    en = np.exp((n + 1) * c)
    num = en * np.sin(si) + bm * si * np.cos(n * si) - bm * c * np.sin(n * si)
    den = en * np.cos(si) + bm * c * np.cos(n * si) + bm * si * np.sin(n * si)
    return _logsq(modsq, num, den)


def _g_lem7a(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec, e2c = np.exp(c), np.exp(2 * c)
    bm = beta * m**2
    mu = ec * np.sin(si) + bm * e2c * np.cos(2 * th) * np.sin(2 * si) + bm * e2c * np.sin(2 * th) * np.cos(2 * si)
    nu = ec * np.cos(si) + bm * e2c * np.cos(2 * th) * np.cos(2 * si) - bm * e2c * np.sin(2 * th) * np.sin(2 * si)
    return _logsq(mu**2 + nu**2, mu, nu)


def _g_lem7b(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    e2c = np.exp(2 * c)
    bm = beta * m**2
    modsq = e2c + bm**2 * e2c + 2 * bm * e2c * np.cos(2 * th)
    num = np.sin(si) + bm * np.cos(2 * th) * np.sin(si) + bm * np.sin(2 * th) * np.cos(si)
    den = np.cos(si) + bm * np.cos(2 * th) * np.cos(si) - bm * np.sin(2 * th) * np.sin(si)
    return _logsq(modsq, num, den)


def _g_lem7c(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec = np.exp(c)
    bm = beta * m**2
    modsq = np.exp(2 * c) + bm**2 + 2 * bm * ec * np.cos(2 * th) * np.cos(si) + 2 * bm * ec * np.sin(2 * th) * np.sin(si)
    num = ec * np.sin(si) + bm * np.sin(2 * th)
    den = ec * np.cos(si) + bm * np.cos(2 * th)
    return _logsq(modsq, num, den)


def _g_lem8a(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec, e2c = np.exp(c), np.exp(2 * c)
    bm = beta * m
    mu = e2c * np.sin(2 * si) + bm * ec * c * np.sin(si) + bm * ec * si * np.cos(si)
    nu = e2c * np.cos(2 * si) + bm * ec * c * np.cos(si) - bm * ec * si * np.sin(si)
    return _logsq(mu**2 + nu**2, mu, nu)


def _g_lem8b(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    e2c = np.exp(2 * c)
    bm = beta * m
    modsq = np.exp(4 * c) + bm**2 + 2 * bm * e2c * c * np.cos(2 * si) + 2 * bm * e2c * si * np.sin(2 * si)
    return _logsq(modsq, e2c * np.sin(2 * si) + bm * si, e2c * np.cos(2 * si) + bm * c)


def _g_lem8c(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    e2c, emc = np.exp(2 * c), np.exp(-c)
    bm = beta * m
    mu = e2c * np.sin(2 * si) - bm * emc * c * np.sin(si) + bm * emc * si * np.cos(si)
    nu = e2c * np.cos(2 * si) + bm * emc * c * np.cos(si) + bm * emc * si * np.sin(si)
    return _logsq(mu**2 + nu**2, mu, nu)


def _g_lem9a(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec, e2c = np.exp(c), np.exp(2 * c)
    bm = beta * m
    mu = ec * np.sin(si) + bm * e2c * c * np.sin(2 * si) + bm * e2c * si * np.cos(2 * si)
    nu = ec * np.cos(si) + bm * e2c * c * np.cos(2 * si) - bm * e2c * si * np.sin(2 * si)
    return _logsq(mu**2 + nu**2, mu, nu)


def _g_lem9b(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    bm = beta * m
    mu = np.sin(2 * si) + bm * si * np.cos(2 * si) + bm * c * np.sin(2 * si)
    nu = np.cos(2 * si) + bm * c * np.cos(2 * si) - bm * si * np.sin(2 * si)
    return _logsq(np.exp(4 * c) * (mu**2 + nu**2), mu, nu)


def _g_lem9c(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec = np.exp(c)
    bm = beta * m
    mu = ec * np.sin(3 * si) + bm * c * np.sin(2 * si) + bm * si * np.cos(2 * si)
    nu = ec * np.cos(3 * si) + bm * c * np.cos(2 * si) - bm * si * np.sin(2 * si)
    return _logsq(np.exp(4 * c) * (mu**2 + nu**2), mu, nu)


def _g_lem10(th, m, beta, n, alpha):
    c, si = np.cos(th), np.sin(th)
    ec, e2c = np.exp(c), np.exp(2 * c)
    bm = beta * m
    # here mu is the real part and nu the imaginary part, hence arctan(nu/mu)
    mu = e2c * np.cos(2 * si) + ec * np.cos(si) + bm * ec * c * np.cos(si) - bm * ec * si * np.sin(si) - 1
    nu = e2c * np.sin(2 * si) + ec * np.sin(si) + bm * ec * c * np.sin(si) + bm * ec * si * np.cos(si)
    return _logsq(mu**2 + nu**2, nu, mu)


@dataclass(frozen=True)
class GForm:
    """A printed g and how it converts to an exclusion margin.

    kind: "modulus" (g - k), "modulus_sq" (sqrt(g) - k), "lower" (g - k, a
    printed lower bound rather than an identity) or "log_sq" (sqrt(g) - 1).
    """

    func: object
    kind: str
    threshold: object

    def margin(self, g, params: dict):
        k = self.threshold(params)
        if self.kind in ("modulus", "lower"):
            return g - k
        return np.sqrt(g) - k


_ONE = lambda p: 1.0  # noqa: E731

G_FORMS: dict[str, GForm] = {
    "lem2": GForm(_g_lem2, "modulus", lambda p: 1 - p.get("alpha", 0.0)),
    "lem3": GForm(_g_lem3, "lower", _ONE),
    "lem11": GForm(_g_lem11, "modulus_sq", _ONE),
    "lem12a": GForm(_g_lem12a, "modulus_sq", lambda p: 0.5),
    "lem12b": GForm(_g_lem12b, "modulus_sq", lambda p: 0.5),
    "lem1": GForm(_g_lem1, "log_sq", _ONE),
    "lem4": GForm(_g_lem4, "log_sq", _ONE),
    "lem5a": GForm(_g_lem5a, "log_sq", _ONE),
    "lem5b": GForm(_g_lem5b, "log_sq", _ONE),
    "lem6": GForm(_g_lem6, "log_sq", _ONE),
    "lem7a": GForm(_g_lem7a, "log_sq", _ONE),
    "lem7b": GForm(_g_lem7b, "log_sq", _ONE),
    "lem7c": GForm(_g_lem7c, "log_sq", _ONE),
    "lem8a": GForm(_g_lem8a, "log_sq", _ONE),
    "lem8b": GForm(_g_lem8b, "log_sq", _ONE),
    "lem8c": GForm(_g_lem8c, "log_sq", _ONE),
    "lem9a": GForm(_g_lem9a, "log_sq", _ONE),
    "lem9b": GForm(_g_lem9b, "log_sq", _ONE),
    "lem9c": GForm(_g_lem9c, "log_sq", _ONE),
    "lem10": GForm(_g_lem10, "log_sq", _ONE),
}


def g_theta(theorem_id: str, theta, m, params: dict):
    """The proof's closed-form g at (theta, m), transcribed as printed."""
    try:
        form = G_FORMS[theorem_id]
    except KeyError:
        raise KeyError(f"no printed g for {theorem_id!r}") from None
    out = form.func(
        np.asarray(theta, float), np.asarray(m, float),
        float(params.get("beta", 0.0)), int(params.get("n", 0) or 0), float(params.get("alpha", 0.0) or 0.0),
    )
    return float(out) if np.ndim(out) == 0 else out


def g_margin(theorem_id: str, theta, m, params: dict):
    """g converted to the same scale as :func:`exclusion_margin`."""
    return G_FORMS[theorem_id].margin(g_theta(theorem_id, theta, m, params), params)
