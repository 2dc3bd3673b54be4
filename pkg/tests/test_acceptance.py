"""Acceptance gate.

Each criterion prints one PASS/FAIL line; the lines are collected and shown
again in the pytest terminal summary.  Run directly with
``python tests/test_acceptance.py`` to print the lines without pytest.
"""

import cmath
import json
import math
import time

import numpy as np
import pytest

from subordlab.admissibility import G_FORMS, admissible_triple, g_theta, min_exclusion, sharpness_probe
from subordlab.analytic import H1, PowerSeries, eval_jet, eval_series, identity_series, koebe_series, z_exp_series
from subordlab.bounds import EQUATIONS, EXAMPLES, constants_table, instances, solve_root
from subordlab.cli import main
from subordlab.psi import eval_psi, psi
from subordlab.regions import FOLDED, exp_disk
from subordlab.subordination import FAILS, HOLDS, implication_test, standard_corpus, starlike_e_membership

LINES: list[str] = []
PI = math.pi

# claimed extremal angle of the proof for each theorem named in criterion 3
CLAIMED_ANGLE = {
    **{t: PI for t in ("lem5a", "lem5b", "lem7a", "lem7b", "lem7c", "lem8a", "lem8b", "lem9a", "lem9b", "lem9c",
                       "lem10", "lem11")},
    **{t: 0.0 for t in ("lem4", "lem6", "lem8c", "lem12a")},
}
TIGHT = ("lem2", "lem3", "lem4", "lem5a", "lem5b", "lem7a", "lem7b", "lem7c", "lem9a", "lem9b", "lem9c", "lem10",
         "lem11", "lem12a", "lem12b")


def record(number: int, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    LINES.append(line)
    print(line)
    return ok


def _angle_gap(a: float, b: float) -> float:
    d = (a - b) % (2 * PI)
    return min(d, 2 * PI - d)


# --- criteria ----------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    rows = constants_table()
    dt = time.perf_counter() - t0
    worst = max(rows, key=lambda r: r.abs_diff)
    ok = len(rows) == 20 and worst.abs_diff <= 5e-4 and dt < 5
    return record(1, ok, f"{len(rows)} constants, worst |diff| {worst.abs_diff:.2e} ({worst.theorem_id}), {dt:.2f} s")


def criterion_2():
    worst, count = 0.0, 0
    for eq, spec in EQUATIONS.items():
        for n in ((1, 2, 3) if spec.needs_n else (None,)):
            r = solve_root(eq, n=n)
            worst = max(worst, r.residual)
            count += 1
    lem8c = solve_root("lem8c").root
    ok = worst <= 1e-12 and 104.121 < lem8c < 104.123
    return record(2, ok, f"{count} roots, max residual {worst:.1e}, lem8c root {lem8c:.9f}")


def criterion_3():
    bad, slowest = [], 0.0
    for inst in instances():
        t0 = time.perf_counter()
        principal = min_exclusion(inst.expr(), inst.region())
        folded = min_exclusion(inst.expr(), inst.region(), branch=FOLDED)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        problems = []
        if principal.min_margin < -1e-7:
            problems.append(f"min {principal.min_margin:.2e}")
        claimed = CLAIMED_ANGLE.get(inst.theorem_id)
        if claimed is not None and _angle_gap(folded.argmin.theta, claimed) > 1e-3:
            problems.append(f"argmin theta {folded.argmin.theta:.4f} (folded min {folded.min_margin:.3f}) vs {claimed:.4f}")
        if dt >= 30:
            problems.append(f"{dt:.1f} s")
        if problems:
            bad.append(f"{inst.label()}: {', '.join(problems)}")
    detail = f"38 instances, slowest {slowest:.1f} s"
    return record(3, not bad, detail + ("" if not bad else "; " + "; ".join(bad)))


def criterion_4():
    bad, count = [], 0
    for inst in instances(TIGHT):
        res = sharpness_probe(inst.expr(), inst.region(), inst.beta, 0.01)
        count += 1
        if not (res.boundary_attained and res.fails_below):
            bad.append(f"{inst.label()} (attained={res.boundary_attained}, margin {res.margin_at_bound:.3g}; "
                       f"fails_below={res.fails_below})")
    detail = f"{count} instances probed"
    return record(4, not bad, detail + ("" if not bad else "; not tight: " + "; ".join(bad)))


def criterion_5():
    bad, parts = [], []
    for pid, ex in EXAMPLES.items():
        t0 = time.perf_counter()
        rep = min_exclusion(psi(pid), ex.region(), m_max=32)
        dt = time.perf_counter() - t0
        parts.append(f"{pid} {rep.min_margin:+.1e}/{dt:.1f}s")
        if not rep.admissible or dt >= 10:
            bad.append(pid)
    return record(5, not bad, ", ".join(parts) + ("" if not bad else f"; failing {bad}"))


_CORPUS = None


def _corpus():
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = standard_corpus()
    return _CORPUS


def criterion_6():
    corpus = _corpus()
    bad, holders = [], 0
    for inst in instances():
        res = implication_test(inst.expr(), inst.region(), exp_disk(), corpus)
        holders += res.hypothesis_holders
        if res.violations:
            bad.append(f"{inst.label()}: {res.violations}")
    detail = f"38 instances x {len(corpus)} functions (seed {corpus.seed:#x}), {holders} hypothesis holders in total"
    return record(6, not bad, detail + ("" if not bad else "; violations " + ", ".join(bad)))


def criterion_7():
    cases = [("identity", identity_series(), HOLDS), ("truncated Koebe", koebe_series(64), FAILS),
             ("z exp(z/2)", z_exp_series(40, 0.5), HOLDS)]
    bad, parts = [], []
    for name, f, want in cases:
        t0 = time.perf_counter()
        v = starlike_e_membership(f)
        dt = time.perf_counter() - t0
        ok = v.status == want and dt < 1 and (want != FAILS or (v.witness is not None and v.witness.margin >= 0))
        parts.append(f"{name} {v.status} {dt:.2f}s")
        if not ok:
            bad.append(name)
    return record(7, not bad, ", ".join(parts))


def criterion_8(capsys=None):
    if capsys is not None:
        main(["constants", "--json"])
        payload = json.loads(capsys.readouterr().out)
    else:
        import contextlib
        import io

        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            main(["constants", "--json"])
        payload = json.loads(buf.getvalue())
    flags = {f["theorem_id"]: f for f in payload["typo_flags"]}
    v = flags.get("lem9b", {})
    e = flags.get("lem4", {})
    ok = "21.0855" in v.get("statement", "") and "20.0855" in v.get("proof", "") and e.get("kind") == "exponent"
    return record(8, ok, f"flags present: {sorted(flags)}")


def criterion_9():
    rng = np.random.default_rng(0x5EED)
    worst_fd = 0.0
    h = 1e-5
    for _ in range(100):
        order = int(rng.integers(1, 13))
        c = 0.5 ** np.arange(1, order + 1) * (rng.uniform(-1, 1, order) + 1j * rng.uniform(-1, 1, order))
        p = PowerSeries(np.concatenate([[1.0], c]), H1)
        z = rng.uniform(0.05, 0.9) * cmath.exp(2j * PI * rng.random())
        fd = (eval_series(p, z + h) - eval_series(p, z - h)) / (2 * h)
        _, zdp, _ = eval_jet(p, z)
        worst_fd = max(worst_fd, abs(zdp / z - fd))
    worst_excess, worst_eq, samples = 0.0, 0.0, 0
    for inst in instances([k for k, f in G_FORMS.items() if f.kind == "log_sq"]):
        theta = rng.uniform(0, 2 * PI, 10_000)
        m = rng.uniform(1, 32, 10_000)
        r, s, t = admissible_triple(theta, m)
        w = eval_psi(inst.expr(), r, s, t, 0.0)
        exact = np.abs(np.log(w)) ** 2
        g = g_theta(inst.theorem_id, theta, m, {"beta": inst.beta, "n": inst.n, "alpha": inst.alpha})
        scale = np.maximum(1.0, exact)
        worst_excess = max(worst_excess, float(np.max((g - exact) / scale)))
        right = w.real > 0
        worst_eq = max(worst_eq, float(np.max(np.abs(g - exact)[right] / scale[right])))
        samples += theta.size
    ok = worst_fd <= 1e-6 and worst_excess <= 1e-12 and worst_eq <= 1e-9
    return record(9, ok, f"max FD error {worst_fd:.1e} over 100 series; {samples} (theta, m) samples, "
                         f"max g - |log psi|^2 = {worst_excess:.1e}, max gap where Re psi > 0 = {worst_eq:.1e}")


# --- pytest entry points ---------------------------------------------------------


def test_criterion_1_constants():
    assert criterion_1()


def test_criterion_2_roots():
    assert criterion_2()


@pytest.mark.xfail(strict=True, reason="the folded-metric argmin of lem7c and lem4[n=0] is not at the proof's "
                                        "claimed angle; see the decisions ledger")
def test_criterion_3_bounds_admissible():
    assert criterion_3()


@pytest.mark.xfail(strict=True, reason="lem4[n=0], lem7c, lem12a and lem12b do not reach zero at the printed "
                                        "bound; see the decisions ledger")
def test_criterion_4_tightness():
    assert criterion_4()


def test_criterion_5_examples():
    assert criterion_5()


def test_criterion_6_implications():
    assert criterion_6()


def test_criterion_7_membership():
    assert criterion_7()


def test_criterion_8_typo_flags(capsys):
    assert criterion_8(capsys)


def test_criterion_9_hygiene():
    assert criterion_9()


if __name__ == "__main__":
    results = [criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_6(),
               criterion_7(), criterion_8(), criterion_9()]
    raise SystemExit(0 if all(results) else 1)
