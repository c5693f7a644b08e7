from fractions import Fraction

import pytest
import sympy as sp

import oracle
from conftest import Q0, ZS, coeff_sym, same, z_sym
from qcurve_p1 import wkb
from qcurve_p1.errors import DomainError, InternalConsistencyError
from qcurve_p1.openfe import principal_special
from qcurve_p1.verify.regressions import (
    F_LAX,
    G_LAX,
    P_FORMS,
    Q_SERIES,
    SIGMA,
    x_half_form,
    x_node_form,
)

# frozen from tests/oracle.py
P5_ORACLE = -(15255 * Q0**5 + 10170 * Q0**4 * ZS**2 + 4104 * Q0**3 * ZS**4 + 1242 * Q0**2 * ZS**6
              + 292 * Q0 * ZS**8 + 49 * ZS**10) / (11943936 * Q0**9 * ZS**14)
Q6_ORACLE = sp.Rational(-1225, 2579890176) * Q0**-14
SIGMA6_ORACLE = sp.Rational(1225, 2579890176) * Q0**-12
P5_HAMILTON_ORACLE = sp.Rational(-49, 7962624) * Q0**-11


@pytest.fixture(scope="module")
def hP():
    return wkb.riccati_P(9)


@pytest.fixture(scope="module")
def sym_oracle():
    return oracle.riccati(5), oracle.painleve(3)


def test_riccati_matches_sympy(hP, sym_oracle):
    P, _ = sym_oracle
    for m in range(6):
        assert same(z_sym(hP[m]), P[m]), m


def test_p5_frozen(hP):
    assert same(z_sym(hP[5]), P5_ORACLE)


@pytest.mark.parametrize("m", sorted(P_FORMS))
def test_p_closed_forms(hP, m):
    assert hP[m].as_laurent() == x_half_form(*P_FORMS[m])


def test_painleve_matches_sympy(sym_oracle):
    _, (qs, ps_, sig) = sym_oracle
    ps = wkb.painleve_series(3)
    for k in range(7):
        assert sp.simplify(coeff_sym(ps.q(k)) - qs[k]) == 0
        assert sp.simplify(coeff_sym(ps.p(k)) - ps_[k]) == 0
        assert sp.simplify(coeff_sym(ps.sigma(k)) - sig[k]) == 0


def test_painleve_frozen():
    ps = wkb.painleve_series(3)
    assert coeff_sym(ps.q(6)) == Q6_ORACLE
    assert coeff_sym(ps.sigma(6)) == SIGMA6_ORACLE
    assert coeff_sym(ps.p(5)) == P5_HAMILTON_ORACLE


def test_painleve_known_values():
    ps = wkb.painleve_series(2)
    for k, v in SIGMA.items():
        assert ps.sigma(k) == v
    for k, v in Q_SERIES.items():
        assert ps.q(k) == v
    assert ps.check_structure() == []
    with pytest.raises(DomainError):
        ps.q(6)


def test_lax_closed_forms():
    lax = wkb.scalar_lax(5)
    for k, form in F_LAX.items():
        assert lax.f[k] == x_node_form(*form)
    for k, form in G_LAX.items():
        assert lax.g[k] == x_node_form(*form)
    assert not lax.f[0] and not lax.f[2] and not lax.f[4]


def test_derivative_of_s_is_p(cache, hP):
    # independent of the package: sympy derivative of the oracle S_m against the oracle P_m
    P = oracle.riccati(4)
    for m in (2, 3, 4):
        assert same(sp.diff(oracle.S(m), ZS) / (2 * ZS), P[m])
        assert principal_special(m, cache).dx() == hP[m].as_laurent()


def test_p_parity(hP):
    for m in range(10):
        assert {e % 2 for e, _ in hP[m].as_laurent().items()} == {(m + 1) % 2}


def test_minus_branch_and_split(hP):
    minus = wkb.minus_branch(hP)
    assert minus[1] == hP[1]
    assert minus[2] == -hP[2]
    odd, even = wkb.parity_split(hP)
    assert odd[2] == hP[2] and not even[2]
    assert even[3] == hP[3] and not odd[3]


@pytest.mark.parametrize("check", ["odd_even_check", "podd_t_check", "asymp_sigma_check",
                                   "jmu_tau_check", "f_expansion_check"])
def test_single_order_checks(check):
    r = getattr(wkb, check)(6)
    assert r.passed, r.residual


def test_quantum_curve(cache):
    r = wkb.quantum_curve_check(8, cache)
    assert r.passed, r.residual
    assert r.orders.endswith("m <= 9")


def test_tau(cache):
    r = wkb.tau_check(4, cache)
    assert r.passed, r.residual


def test_v_infinity(cache):
    assert wkb.v_infty_check(6, cache).passed


def test_asymptotic_sigma_values():
    sig = wkb.asymp_sigma_extract(4)
    ps = wkb.painleve_series(2)
    assert sig == [ps.sigma(k) for k in range(5)]
    assert not sig[1] and not sig[3]


def _with_sigma2_doubled():
    ps = wkb.painleve_series(4)
    sig = list(ps.sigma_coeffs)
    sig[1] = sig[1] * 2
    return wkb.PainleveSeries(4, ps.q_coeffs, ps.p_coeffs, sig)


def test_wrong_sigma_is_caught(cache):
    bad = _with_sigma2_doubled()
    r = wkb.quantum_curve_check(4, cache, bad)
    assert not r.passed and "hbar^2" in r.where
    r = wkb.tau_check(3, cache, bad)
    assert not r.passed and r.where == "g=1"
    assert not wkb.asymp_sigma_check(4, bad).passed
    assert not wkb.jmu_tau_check(4, bad).passed


def test_wrong_q_leaves_a_node_pole():
    ps = wkb.painleve_series(4)
    qs = list(ps.q_coeffs)
    qs[1] = qs[1] * 2
    bad = wkb.PainleveSeries(4, qs, ps.p_coeffs, ps.sigma_coeffs)
    with pytest.raises(InternalConsistencyError):
        wkb.riccati_P(4, wkb.scalar_lax(4, bad))


def test_domain_errors():
    for fn in (wkb.painleve_series, wkb.scalar_lax, wkb.riccati_P):
        with pytest.raises(DomainError):
            fn(-1)
    with pytest.raises(DomainError):
        wkb.riccati_P(6, wkb.scalar_lax(3))
    with pytest.raises(DomainError):
        wkb.scalar_lax(9, wkb.painleve_series(2))


def test_p1_is_minus_quarter_over_z_squared(hP):
    assert same(z_sym(hP[1]), -sp.Rational(1, 4) / ZS**2)
    assert Fraction(-1, 4) == hP[1].as_laurent().coefficient(-2)
