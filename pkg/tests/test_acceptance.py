"""Acceptance criteria: one PASS/FAIL line per criterion, each within its runtime budget."""

import time

import pytest

from qcurve_p1 import openfe, wkb
from qcurve_p1.toprec import WCache, closed_F, compute_W, variation_check
from qcurve_p1.verify.properties import all_properties
from qcurve_p1.verify.regressions import (
    CLOSED_F,
    CLOSED_F1,
    F_FORMS,
    F_LAX,
    G_LAX,
    P_FORMS,
    S1_DX,
    S_FORMS,
    W_FORMS,
    f_form,
    w_form,
    x_half_form,
    x_node_form,
)


def _stable(lo, hi):
    for chi in range(lo, hi + 1):
        for g in range(chi // 2 + 2):
            n = chi - 2 * g + 2
            if n >= 1:
                yield g, n


def criterion(number, title, budget, body, capsys):
    start = time.perf_counter()
    err = None
    try:
        body()
    except Exception as exc:  # reported below, then re-raised through the assert
        err = exc
    elapsed = time.perf_counter() - start
    if err is None and elapsed > budget:
        err = AssertionError(f"took {elapsed:.2f}s, budget {budget}s")
    verdict = "PASS" if err is None else "FAIL"
    with capsys.disabled():
        tail = "" if err is None else f"  [{type(err).__name__}: {err}]"
        print(f"\ncriterion {number:2d} {verdict}  {title}  ({elapsed:.2f}s / {budget}s){tail}")
    assert err is None, err


def test_criterion_01_w_regression(capsys):
    def body():
        c = WCache()
        for gn in W_FORMS:
            assert compute_W(*gn, c).to_mlaurent() == w_form(*gn), gn
    criterion(1, "W_{0,3}, W_{0,4}, W_{1,1}, W_{1,2}, W_{2,1} closed forms", 1, body, capsys)


def test_criterion_02_free_energies(capsys):
    def body():
        c = WCache()
        for gn in F_FORMS:
            assert openfe.integrate_W_to_F(compute_W(*gn, c)).to_mlaurent() == f_form(*gn), gn
        for g, v in CLOSED_F.items():
            assert closed_F(g, c).value == v, g
        f1 = closed_F(1, c)
        assert (f1.log_coeff, f1.log_arg) == CLOSED_F1
    criterion(2, "open F_{g,n} closed forms and F_0..F_3", 5, body, capsys)


def test_criterion_03_wkb_regression(capsys):
    def body():
        lax = wkb.scalar_lax(5)
        hP = wkb.riccati_P(4, lax)
        for m, form in P_FORMS.items():
            assert hP[m].as_laurent() == x_half_form(*form), m
        for k in range(1, 6):
            want = x_node_form(*F_LAX[k]) if k in F_LAX else None
            assert (lax.f[k] == want) if want is not None else not lax.f[k], k
        for k in range(0, 5):
            want = x_node_form(*G_LAX[k]) if k in G_LAX else None
            assert (lax.g[k] == want) if want is not None else not lax.g[k], k
    criterion(3, "P_1..P_4, f through hbar^5, g through hbar^4", 1, body, capsys)


def test_criterion_04_principal_specialization(capsys):
    def body():
        c = WCache()
        for m, form in S_FORMS.items():
            assert openfe.principal_special(m, c).value == x_half_form(*form), m
        s1 = openfe.principal_special(1, c)
        assert not s1.value and s1.dx() == x_half_form(*S1_DX)
    criterion(4, "S_0..S_4 in x-form", 1, body, capsys)


def test_criterion_05_quantum_curve(capsys):
    def body():
        r = wkb.quantum_curve_check(8, WCache())
        assert r.passed, f"{r.where}: {r.residual}"
        assert r.orders == "hbar^0..hbar^9; dS_m/dx = P_m for m <= 9", r.orders
    criterion(5, "quantum curve through N = 8, dS_m/dx = P_m for m <= 9", 300, body, capsys)


def test_criterion_06_tau(capsys):
    def body():
        r = wkb.tau_check(4, WCache())
        assert r.passed, f"{r.where}: {r.residual}"
        assert r.orders == "g=0..4", r.orders
    criterion(6, "dF_g/dt = sigma_2g for g <= 4", 600, body, capsys)


def test_criterion_07_diffrec(capsys):
    def body():
        c = WCache()
        for g, n in _stable(2, 4):
            r = openfe.diffrec_check(g, n, c)
            assert r.passed, f"({g},{n}) {r.residual}"
    criterion(7, "differential recursion for 2 <= 2g-2+n <= 4", 120, body, capsys)


def test_criterion_08_variation(capsys):
    def body():
        c = WCache()
        c.ensure_upto(5)
        for g, n in [(0, 2)] + list(_stable(1, 4)):
            r = variation_check(g, n, c)
            assert r.passed, f"W ({g},{n}) {r.residual}"
        for g, n in _stable(1, 4):
            r = openfe.e_vs_dt_check(g, n, c)
            assert r.passed, f"E ({g},{n}) {r.residual}"
    criterion(8, "variation of W_{g,n} and dF_{g,n}/dt = E_{g,n} for 2g-2+n <= 4", 120, body, capsys)


def test_criterion_09_residue_sigma(capsys):
    def body():
        r = wkb.jmu_tau_check(4)
        assert r.passed, f"{r.where}: {r.residual}"
        assert r.orders == "hbar^-2..hbar^2", r.orders
    criterion(9, "residue formula recovers sigma_0, sigma_2, sigma_4", 30, body, capsys)


def test_criterion_10_properties(capsys):
    def body():
        c = WCache()
        c.ensure_upto(8)
        results = all_properties(c, 8, 4, 4)
        bad = [r.line() for r in results if not r.passed]
        assert not bad, bad
        ids = {r.check_id for r in results}
        for needed in ("property/truncation", "property/roundtrip", "property/odd-cancellation",
                       "property/s-cancellation", "property/p-purity", "property/q-structure",
                       "property/derivation"):
            assert needed in ids, needed
    criterion(10, "property suites over all cached objects", 60, body, capsys)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
