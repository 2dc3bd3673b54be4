"""Sampled subordination, class-membership and implication checks.

A function p is declared subordinate to a univalent h when p(0) = h(0) and
p maps each sampling circle |z| = rho into h(D).  For an open simply connected
region the circle suffices: if p(|z| = rho) lies in the region, the argument
principle keeps every value of p on |z| < rho inside it as well.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .analytic import (
    DEFAULT_ORDER,
    H1,
    ExpOfSchwarz,
    PowerSeries,
    SchwarzFunction,
    exp_scaled,
    quotient_values,
)
from .psi import PsiExpr, eval_psi
from .regions import Region, exp_disk, margin

HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"
DEFAULT_RADII = (0.9, 0.99, 0.999)
DEFAULT_THETA_POINTS = 4096
DEFAULT_TOL = 1e-9
DEFAULT_SEED = 0x5EED


@dataclass(frozen=True)
class Witness:
    z: complex
    value: complex
    margin: float
    reason: str = "boundary"

    def as_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "value": [self.value.real, self.value.imag] if np.isfinite(self.value) else None,
            "margin": self.margin,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Witness | None
    samples_checked: int

    def __post_init__(self):
        if self.status == FAILS and (self.witness is None or not self.witness.margin >= 0):
            raise ValueError("a failing verdict needs a witness with margin >= 0")

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "samples_checked": self.samples_checked,
        }


@dataclass(frozen=True)
class SamplingGrid:
    radii: tuple[float, ...] = DEFAULT_RADII
    theta_points: int = DEFAULT_THETA_POINTS
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        radii = tuple(sorted(float(r) for r in self.radii))
        if not radii or radii[0] <= 0 or radii[-1] >= 1:
            raise ValueError("sampling radii must lie in (0, 1)")
        object.__setattr__(self, "radii", radii)

    def points(self) -> np.ndarray:
        """Sample points, shape (len(radii), theta_points)."""
        ang = np.exp(2j * np.pi * np.arange(self.theta_points) / self.theta_points)
        return np.asarray(self.radii)[:, None] * ang[None, :]

    def as_dict(self) -> dict:
        return asdict(self)


def _verdict_from_margins(z: np.ndarray, values: np.ndarray, margins: np.ndarray, tol: float) -> Verdict:
    """Classify margins sampled on circles (rows ordered by radius)."""
    count = int(margins.size)
    bad = ~np.isfinite(values)
    hard = (margins >= 0) & ~bad
    if hard.any():
        row = int(np.flatnonzero(hard.any(axis=1))[0])
        m_row = np.where(hard[row], margins[row], -np.inf)
        j = int(np.argmax(m_row))
        return Verdict(FAILS, Witness(complex(z[row, j]), complex(values[row, j]), float(margins[row, j])), count)
    if bad.any() or (margins >= -tol).any():
        if bad.any():
            idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
            w = Witness(complex(z[idx]), complex(np.nan), math.nan, "rejected sample")
        else:
            idx = np.unravel_index(int(np.argmax(margins)), margins.shape)
            w = Witness(complex(z[idx]), complex(values[idx]), float(margins[idx]), "within tolerance")
        return Verdict(INCONCLUSIVE, w, count)
    return Verdict(HOLDS, None, count)


def is_subordinate_numeric(
    p: Callable,
    region: Region,
    radii: Sequence[float] = DEFAULT_RADII,
    theta_points: int = DEFAULT_THETA_POINTS,
    tol: float = DEFAULT_TOL,
    check_origin: bool = True,
) -> Verdict:
    """Sampled test of p < h where h(D) = region and h(0) = region.anchor.

    With ``check_origin=False`` only the membership p(D_rho) in region is
    tested, which is what the hypothesis of an implication asks for.
    """
    grid = SamplingGrid(tuple(radii), theta_points, tol)
    z = grid.points()
    with np.errstate(all="ignore"):
        values = np.asarray(p(z), dtype=complex)
    return _check_values(z, values, region, tol, check_origin, origin_value=lambda: complex(p(0.0)))


def _check_values(z, values, region, tol, check_origin, origin_value) -> Verdict:
    if check_origin:
        if region.anchor is None:
            raise ValueError(f"region {region} has no designated centre value")
        v0 = origin_value()
        gap = abs(v0 - region.anchor)
        if not gap <= tol:
            return Verdict(FAILS, Witness(0j, v0, float(gap), "origin value differs from the centre"), 1)
    margins = np.asarray(margin(region, values), dtype=float)
    return _verdict_from_margins(z, values, margins, tol)


def winding_number(values: np.ndarray) -> int:
    """Winding of a closed sampled curve about the origin."""
    d = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(d)) / (2 * np.pi)))


# --- membership in the exponential starlike class -----------------------------


def starlike_e_membership(
    f: PowerSeries,
    radii: Sequence[float] = DEFAULT_RADII,
    theta_points: int = DEFAULT_THETA_POINTS,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    """Sampled test of |log(z f'/f)| < 1, i.e. z f'/f < e^z."""
    if f.class_tag.kind != "normalized":
        raise ValueError("membership needs a normalized series (a_0 = 0, a_1 = 1)")
    return is_subordinate_numeric(lambda z: quotient_values(f, z), exp_disk(), radii, theta_points, tol)


# --- corpora ------------------------------------------------------------------


SCHWARZ, SERIES = "schwarz", "series"


@dataclass(frozen=True)
class CorpusSpec:
    family: str
    count: int
    k: int = 3
    envelope: float = 0.5
    order: int = DEFAULT_ORDER
    zero_radius: float = 0.95

    def label(self) -> str:
        if self.family == SCHWARZ:
            return f"schwarz:k={self.k},count={self.count}"
        return f"series:envelope={self.envelope:g},count={self.count}"


def parse_corpus(text: str) -> CorpusSpec:
    """``schwarz:k=3,count=500`` or ``series:envelope=0.5,count=500``."""
    head, _, body = text.strip().partition(":")
    kv = {}
    for tok in body.replace(" ", ",").split(","):
        if tok:
            if "=" not in tok:
                raise ValueError(f"corpus option {tok!r} is not key=value")
            key, val = tok.split("=", 1)
            kv[key] = val
    try:
        if head == SCHWARZ:
            spec = CorpusSpec(SCHWARZ, int(kv.pop("count", 500)), k=int(kv.pop("k", 3)))
        elif head == SERIES:
            spec = CorpusSpec(
                SERIES, int(kv.pop("count", 500)), envelope=float(kv.pop("envelope", 0.5)),
                order=int(kv.pop("order", DEFAULT_ORDER)),
            )
        else:
            raise ValueError(f"unknown corpus family {head!r}")
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad corpus spec {text!r}: {exc}") from None
    if kv:
        raise ValueError(f"bad corpus spec {text!r}: unexpected {sorted(kv)}")
    if spec.count < 0 or spec.k < 0 or spec.envelope <= 0:
        raise ValueError(f"bad corpus spec {text!r}")
    return spec


def _random_disk(rng: np.random.Generator, size: int, radius: float) -> np.ndarray:
    rho = radius * np.sqrt(rng.random(size))
    return rho * np.exp(2j * np.pi * rng.random(size))


def _build(spec: CorpusSpec, rng: np.random.Generator) -> list:
    out = []
    if spec.family == SCHWARZ:
        for i in range(spec.count):
            nz = int(rng.integers(0, spec.k + 1))
            zeros = tuple(_random_disk(rng, nz, spec.zero_radius))
            rot = complex(np.exp(2j * np.pi * rng.random()))
            out.append(ExpOfSchwarz(SchwarzFunction(zeros, rot)))
    else:
        k = np.arange(1, spec.order + 1)
        for i in range(spec.count):
            coeffs = np.concatenate([[1.0], spec.envelope**k * _random_disk(rng, spec.order, 1.0)])
            out.append(PowerSeries(coeffs, H1, name=f"series#{i}"))
    return out


@dataclass
class Corpus:
    """An ordered list of test functions with batch jet evaluation."""

    members: list
    seed: int | None = None
    specs: tuple = ()
    chunk: int = 100

    def __len__(self) -> int:
        return len(self.members)

    def label(self) -> str:
        return " + ".join(s.label() for s in self.specs) if self.specs else f"{len(self)} functions"

    def jets(self, z: np.ndarray, start: int = 0, stop: int | None = None):
        """Jets of members[start:stop] at points z; arrays of shape (k, *z.shape)."""
        members = self.members[start:stop]
        shape = (len(members),) + z.shape
        p, dp, d2p = (np.empty(shape, dtype=complex) for _ in range(3))
        flat = z.ravel()
        series = [i for i, f in enumerate(members) if isinstance(f, PowerSeries)]
        if series:
            order = max(members[i].order for i in series)
            A = np.zeros((order + 1, len(series)), dtype=complex)
            for col, i in enumerate(series):
                c = members[i].coefficients
                A[: c.size, col] = c
            kk = np.arange(order + 1)[:, None]
            V = flat[:, None] ** np.arange(order + 1)[None, :]
            for arr, B in ((p, A), (dp, kk * A), (d2p, kk * (kk - 1) * A)):
                arr[series] = (V @ B).T.reshape((len(series),) + z.shape)
        for i, f in enumerate(members):
            if not isinstance(f, PowerSeries):
                with np.errstate(all="ignore"):
                    a, b, c = f.jet(z)
                p[i], dp[i], d2p[i] = a, b, c
        return p, dp, d2p

    def chunks(self):
        for start in range(0, len(self.members), self.chunk):
            yield start, min(start + self.chunk, len(self.members))


def make_corpus(specs: Iterable[CorpusSpec], seed: int = DEFAULT_SEED) -> Corpus:
    specs = tuple(specs)
    members = []
    for idx, spec in enumerate(specs):
        members.extend(_build(spec, np.random.default_rng([seed, idx])))
    return Corpus(members, seed, specs)


def standard_corpus(seed: int = DEFAULT_SEED) -> Corpus:
    """500 exponentials of Blaschke-type Schwarz functions and 500 random series."""
    return make_corpus((CorpusSpec(SCHWARZ, 500, k=3), CorpusSpec(SERIES, 500, envelope=0.5)), seed)


# --- implications ----------------------------------------------------------------


@dataclass
class ImplicationResult:
    violations: int
    hypothesis_holders: int
    checked: int
    conclusion_inconclusive: int
    hypothesis_inconclusive: int
    skipped_zero_of_p: int
    details: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def implication_test(
    expr: PsiExpr,
    hypothesis: Region,
    conclusion: Region,
    corpus: Corpus | Sequence,
    grid: SamplingGrid | None = None,
    max_details: int = 10,
) -> ImplicationResult:
    """Count functions for which psi(p, zp', z^2p'') stays in the hypothesis
    region while p fails to be subordinate to the conclusion's superordinate.
    """
    grid = grid or SamplingGrid()
    if not isinstance(corpus, Corpus):
        corpus = Corpus(list(corpus))
    z = grid.points()
    res = ImplicationResult(0, 0, len(corpus), 0, 0, 0)
    for start, stop in corpus.chunks():
        P, DP, D2P = corpus.jets(z, start, stop)
        with np.errstate(all="ignore"):
            W = np.asarray(eval_psi(expr, P, DP, D2P, z[None]), dtype=complex)
            hyp_margin = np.asarray(margin(hypothesis, W), dtype=float)
            con_margin = np.asarray(margin(conclusion, P), dtype=float)
        for i in range(stop - start):
            idx = start + i
            if expr.divides_by_r and any(winding_number(row) != 0 for row in P[i]):
                # p vanishes inside a sampling circle: psi(p, ...) has a pole there
                res.skipped_zero_of_p += 1
                continue
            hyp = _verdict_from_margins(z, W[i], hyp_margin[i], grid.tol)
            if hyp.status == INCONCLUSIVE:
                res.hypothesis_inconclusive += 1
                continue
            if hyp.status != HOLDS:
                continue
            res.hypothesis_holders += 1
            p0 = _origin_value(corpus.members[idx])
            con = _check_values(z, P[i], conclusion, grid.tol, True, lambda p0=p0: p0)
            if con.status == FAILS:
                res.violations += 1
                if len(res.details) < max_details:
                    res.details.append({"index": idx, "function": repr(corpus.members[idx]), **con.as_dict()})
            elif con.status == INCONCLUSIVE:
                res.conclusion_inconclusive += 1
    return res


def _origin_value(f) -> complex:
    return complex(np.asarray(f(np.zeros(1, dtype=complex)))[0])


# --- exploratory search --------------------------------------------------------


def exp_family(count: int = 201, lo: float = -1.0, hi: float = 1.0) -> list:
    """p_c(z) = exp(c z) for c on a uniform grid."""
    return [exp_scaled(c) for c in np.linspace(lo, hi, count)]


@dataclass(frozen=True)
class Counterexample:
    index: int
    function: object
    hypothesis: Verdict
    conclusion: Verdict


def counterexample_search(
    expr: PsiExpr,
    hypothesis: Region,
    conclusion: Region,
    beta_below: float | None,
    family: Sequence,
    budget: int,
    grid: SamplingGrid | None = None,
) -> Counterexample | None:
    """First family member whose psi-image stays in the hypothesis region while
    p is not subordinate; ``None`` when the budget runs out."""
    if budget <= 0 or not family:
        return None
    e = expr.with_params(beta=beta_below) if beta_below is not None and expr.beta is not None else expr
    grid = grid or SamplingGrid()
    z = grid.points()
    for idx, f in enumerate(list(family)[:budget]):
        with np.errstate(all="ignore"):
            P, DP, D2P = (np.asarray(v, dtype=complex) for v in f.jet(z))
            W = np.asarray(eval_psi(e, P, DP, D2P, z), dtype=complex)
        if e.divides_by_r and any(winding_number(row) != 0 for row in P):
            continue
        hyp = _check_values(z, W, hypothesis, grid.tol, False, None)
        if hyp.status != HOLDS:
            continue
        con = _check_values(z, P, conclusion, grid.tol, True, lambda f=f: _origin_value(f))
        if con.status == FAILS:
            return Counterexample(idx, f, hyp, con)
    return None
