import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subordlab.admissibility import (
    G_FORMS,
    AdmissibilityPoint,
    GridSpec,
    admissible_triple,
    exclusion_margin,
    g_margin,
    g_theta,
    golden_section,
    margin_trace,
    min_exclusion,
    sharpness_probe,
)
from subordlab.bounds import EXAMPLES, instances, theorem
from subordlab.psi import psi, eval_psi
from subordlab.regions import FOLDED, disk, exp_disk, margin

E = math.e
PI = math.pi
SMALL = GridSpec(theta_points=1024, m_points=24)

LOG_SQ = [k for k, f in G_FORMS.items() if f.kind == "log_sq"]
# Entries whose margin is not monotone in m on the admissibility set; see
# test_monotonicity_counterexamples.
NON_MONOTONE = {"lem3[n=0]", "lem3[n=1]", "lem3[n=2]", "lem3[n=3]", "lem12a", "lem12b", "lem4[n=0]", "lem7c"}
INSTANCES = {i.label(): i for i in instances()}


def test_point_invariants():
    pt = AdmissibilityPoint(PI / 3, 2.0)
    assert pt.nu == 2 * (1 + math.cos(PI / 3))
    assert abs(pt.r - cmath.exp(cmath.exp(1j * PI / 3))) < 1e-15
    assert abs((1 + pt.t / pt.s).real - pt.nu.real) < 1e-12
    with pytest.raises(ValueError):
        AdmissibilityPoint(0.0, 0.5)
    with pytest.raises(ValueError):
        AdmissibilityPoint(0.0, 1.0, nu=1.0)


def test_triple_matches_point():
    r, s, t = admissible_triple(np.array([0.4]), np.array([3.0]))
    pt = AdmissibilityPoint(0.4, 3.0)
    assert abs(r[0] - pt.r) < 1e-15 and abs(s[0] - pt.s) < 1e-14 and abs(t[0] - pt.t) < 1e-13


def test_exclusion_margin_examples():
    assert abs(exclusion_margin(psi("E3a"), disk(1, 1 / E), AdmissibilityPoint(PI, 1))) < 1e-15
    for th in (0.0, 1.0, 2.5, PI, 5.0):
        assert abs(exclusion_margin(psi("E4"), disk(1, 1), AdmissibilityPoint(th, 1))) < 1e-14
    v = exclusion_margin(psi("X3a", beta=E**2 + 1), exp_disk(), AdmissibilityPoint(PI, 1))
    assert abs(v - (math.sqrt(1 + PI**2) - 1)) < 1e-12


def test_min_exclusion_e1():
    ex = EXAMPLES["E1"]
    rep = min_exclusion(psi("E1"), ex.region(), m_max=32)
    assert rep.admissible
    # the printed estimate gives |psi| >= 2 with equality at theta = pi, m = 1
    assert abs(rep.min_margin) < 1e-12
    assert abs(rep.argmin.theta - PI) < 1e-6 and abs(rep.argmin.m - 1) < 1e-9


def test_min_exclusion_e5_on_nu_window():
    rep = min_exclusion(psi("E5"), EXAMPLES["E5"].region(), m_max=32, grid=GridSpec(theta_points=512, m_points=16))
    assert rep.admissible and rep.min_margin >= -1e-12
    pt = rep.argmin
    assert abs(pt.theta - PI) < 1e-6 and abs(pt.m - 1) < 1e-9
    assert abs(pt.nu.real - pt.m * (1 + math.cos(pt.theta))) < 1e-9


def test_min_exclusion_x3b():
    expr = psi("X3b", beta=E + 1 / E)
    rep = min_exclusion(expr, exp_disk(), grid=SMALL, branch=FOLDED)
    assert abs(rep.min_margin) < 1e-6
    assert abs(rep.argmin.theta - PI) < 1e-6 and abs(rep.argmin.m - 1) < 1e-9
    # with the principal logarithm theta = pi is far from the boundary
    principal = min_exclusion(expr, exp_disk(), grid=SMALL)
    assert principal.min_margin > 0.7 and principal.admissible


def test_report_fields():
    rep = min_exclusion(psi("E4"), disk(1, 1), grid=SMALL)
    d = rep.as_dict()
    assert d["admissible"] and d["grid_spec"]["theta_points"] == 1024
    assert "uncertified" in d["method"]
    assert rep.admissible == (rep.min_margin >= -rep.grid_spec.tol)


def test_tie_break_smallest_theta_then_m():
    # margin of E4 on Disk(1,1) is m - 1: every theta ties at m = 1
    rep = min_exclusion(psi("E4"), disk(1, 1), grid=SMALL)
    assert rep.argmin.theta == 0.0 and rep.argmin.m == 1.0


def test_deterministic_across_jobs():
    expr, region = psi("X5a", beta=17.3673), exp_disk()
    a = min_exclusion(expr, region, grid=GridSpec(theta_points=1024, m_points=16, jobs=1))
    b = min_exclusion(expr, region, grid=GridSpec(theta_points=1024, m_points=16, jobs=4))
    assert a.min_margin == b.min_margin and a.argmin == b.argmin


def test_golden_section_quadratic():
    x, fx = golden_section(lambda x: (x - 0.3) ** 2, -1.0, 2.0, 1e-10)
    assert abs(x - 0.3) < 1e-8 and fx < 1e-15


def test_margin_trace_shape():
    th = np.linspace(0, 2 * PI, 33)
    tr = margin_trace(psi("E4"), disk(1, 1), th, m=2.0)
    np.testing.assert_allclose(tr, 1.0, atol=1e-13)


def test_g_theta_examples():
    assert abs(g_theta("lem5a", PI, 1, {"beta": E**2 + 1}) - 1) < 1e-12
    assert abs(g_theta("lem1", PI, 1, {"beta": E**3 - E**2, "n": 2}) - 1) < 1e-12
    for beta in (0.5, E, 4.0):
        assert abs(g_theta("lem2", PI, 1, {"beta": beta, "n": 0}) - beta / E) < 1e-14


def test_g_theta_unknown():
    with pytest.raises(KeyError):
        g_theta("lem99", 0.0, 1.0, {})


def _psi_value(inst, theta, m):
    r, s, t = admissible_triple(theta, m)
    return eval_psi(inst.expr(), r, s, t, 0.0)


LOG_SQ_INSTANCES = [i for i in instances() if i.theorem_id in LOG_SQ]


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(LOG_SQ_INSTANCES), st.floats(0, 2 * PI), st.floats(1, 32))
def test_g_is_lower_bound_of_log_squared(inst, theta, m):
    w = complex(_psi_value(inst, theta, m))
    exact = abs(cmath.log(w)) ** 2
    g = g_theta(inst.theorem_id, theta, m, {"beta": inst.beta, "n": inst.n, "alpha": inst.alpha})
    assert g <= exact * (1 + 1e-12) + 1e-12
    if w.real > 0:
        assert abs(g - exact) <= 1e-9 * max(1.0, exact)


MODULUS_IDENTITY = [i for i in instances() if i.theorem_id in ("lem2", "lem11", "lem12a", "lem12b")]


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(MODULUS_IDENTITY), st.floats(0, 2 * PI), st.floats(1, 32))
def test_g_matches_exclusion_margin(inst, theta, m):
    params = {"beta": inst.beta, "n": inst.n, "alpha": inst.alpha}
    want = exclusion_margin(inst.expr(), inst.region(), AdmissibilityPoint(theta, m))
    assert abs(g_margin(inst.theorem_id, theta, m, params) - want) <= 1e-10 * max(1.0, abs(want))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([i for i in instances() if i.theorem_id == "lem3"]), st.floats(0, 2 * PI), st.floats(1, 32))
def test_printed_lower_bound_for_second_janowski(inst, theta, m):
    # the printed quantity bounds the exclusion margin from below
    params = {"beta": inst.beta, "n": inst.n}
    want = exclusion_margin(inst.expr(), inst.region(), AdmissibilityPoint(theta, m))
    assert g_margin("lem3", theta, m, params) <= want + 1e-12


MONOTONE = [i for i in instances() if i.label() not in NON_MONOTONE]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(MONOTONE), st.floats(0, 2 * PI))
def test_margin_monotone_in_m(inst, theta):
    ms = np.linspace(1, 32, 400)
    r, s, t = admissible_triple(np.full_like(ms, theta), ms)
    v = margin(inst.region(), eval_psi(inst.expr(), r, s, t, 0.0))
    assert np.all(np.diff(v) >= -1e-12 * np.maximum(1, np.abs(v[1:])))


@pytest.mark.parametrize(
    "label,theta,m0,m1",
    [
        ("lem3[n=2]", 2.609267231731523, 1.0, 1.1557788944723617),
        ("lem12a", 0.8552113334772214, 25.14572864321608, 25.301507537688444),
        ("lem4[n=0]", 3.097959422289935, 1.0, 1.1557788944723617),
        ("lem7c", 1.7278759594743862, 1.0, 1.1557788944723617),
    ],
)
def test_monotonicity_counterexamples(label, theta, m0, m1):
    inst = INSTANCES[label]
    a = exclusion_margin(inst.expr(), inst.region(), AdmissibilityPoint(theta, m0))
    b = exclusion_margin(inst.expr(), inst.region(), AdmissibilityPoint(theta, m1))
    assert b < a
    # the minimum over the whole set is still non-negative at the bound
    assert a > 0 and b > 0


def test_sharpness_examples():
    res = sharpness_probe(psi("X3a", beta=1.0), exp_disk(), E**2 + 1, 0.01, grid=SMALL)
    assert res.boundary_attained and res.fails_below
    res = sharpness_probe(psi("J1", beta=1.0, n=0), disk(1, 1), E, 0.01, grid=SMALL)
    assert res.boundary_attained and res.fails_below
    res = sharpness_probe(psi("E4"), disk(1, 1), None, grid=SMALL)
    assert res.boundary_attained and res.beta_below is None


def test_sharpness_uses_theorem_extremal_angle():
    thm = theorem("lem5a")
    rep = min_exclusion(psi("X3a", beta=E**2 + 1), thm.region(0.0), grid=SMALL, branch=FOLDED)
    assert abs(rep.argmin.theta - thm.extremal_theta) < 1e-3
