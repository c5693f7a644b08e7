from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import Q0, ZS, ZV, m_sym, same, z_sym
from qcurve_p1.coeffring import CoeffElem
from qcurve_p1.errors import DomainError, InternalConsistencyError
from qcurve_p1.openfe import (
    OpenF,
    compute_E,
    compute_G,
    diffrec_check,
    diffrec_rhs,
    e_vs_dt_check,
    integrate_W_to_F,
    open_F,
    principal_special,
    roundtrip_check,
    section4_checks,
)
from qcurve_p1.toprec import StableW, compute_W
from qcurve_p1.verify.regressions import F_FORMS, S1_DX, S_FORMS, f_form, x_half_form

# frozen from tests/oracle.py
S5_ORACLE = (
    sp.Rational(565, 2654208) * Q0**-4 * ZS**-12 + sp.Rational(113, 663552) * Q0**-5 * ZS**-10
    + sp.Rational(19, 221184) * Q0**-6 * ZS**-8 + sp.Rational(23, 663552) * Q0**-7 * ZS**-6
    + sp.Rational(73, 5971968) * Q0**-8 * ZS**-4 + sp.Rational(49, 11943936) * Q0**-9 * ZS**-2
)

STABLE_UPTO_4 = [(g, n) for chi in range(1, 5) for g in range(chi // 2 + 2)
                 for n in [chi - 2 * g + 2] if n >= 1]
DIFFREC_RANGE = [(g, n) for g, n in STABLE_UPTO_4 if 2 * g - 2 + n >= 2]


@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)])
def test_open_f_matches_sympy_integral(cache, gn):
    assert same(m_sym(open_F(*gn, cache).to_mlaurent()), oracle.F_open(*gn))


@pytest.mark.parametrize("gn", sorted(F_FORMS))
def test_open_f_closed_forms(cache, gn):
    assert open_F(*gn, cache).to_mlaurent() == f_form(*gn)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_principal_specialization_matches_oracle(cache, m):
    assert same(z_sym(principal_special(m, cache).value), oracle.S(m))


def test_s5_frozen(cache):
    assert same(z_sym(principal_special(5, cache).value), S5_ORACLE)


@pytest.mark.parametrize("m", sorted(S_FORMS))
def test_principal_specialization_x_forms(cache, m):
    assert principal_special(m, cache).value == x_half_form(*S_FORMS[m])


def test_s1_is_a_logarithm(cache):
    s1 = principal_special(1, cache)
    assert s1.log_coeff == Fraction(-1, 2)
    assert not s1.value
    assert s1.dx() == x_half_form(*S1_DX)


def test_principal_agrees_with_substitution(cache):
    f = open_F(1, 3, cache)
    e = m_sym(f.to_mlaurent()).xreplace({v: ZS for v in ZV[:3]})
    assert same(z_sym(f.principal()), e)


@pytest.mark.parametrize("gn", STABLE_UPTO_4)
def test_roundtrip(cache, gn):
    assert roundtrip_check(*gn, cache).passed


@pytest.mark.parametrize("gn", DIFFREC_RANGE)
def test_differential_recursion(cache, gn):
    r = diffrec_check(*gn, cache)
    assert r.passed, r.residual


@pytest.mark.parametrize("gn", STABLE_UPTO_4)
def test_e_is_t_derivative(cache, gn):
    r = e_vs_dt_check(*gn, cache)
    assert r.passed, r.residual


@pytest.mark.parametrize("gn", DIFFREC_RANGE)
def test_g_routes_agree(cache, gn):
    assert (compute_G(*gn, cache, "direct") - compute_G(*gn, cache, "node")).is_zero()


def test_g21_value(cache):
    # 2 y/(dx/dz) G_{2,1} = 2 dF_2/dt, with dq0/dt = -1/(12 q0)
    g = compute_G(2, 1, cache).specialize()
    two_y = 2 * ZS**2 - 6 * Q0
    assert same(z_sym(g) * two_y, 2 * sp.diff(sp.Rational(7, 207360) * Q0**-5, Q0) * (-1 / (12 * Q0)))


def test_diffrec_rhs_equals_first_derivative(cache):
    f = open_F(1, 2, cache)
    rhs = diffrec_rhs(1, 2, cache).specialize()
    lhs = m_sym(f.to_mlaurent())
    d1 = sp.diff(lhs, ZV[0]).xreplace({ZV[0]: ZS, ZV[1]: ZS})
    assert same(z_sym(rhs), d1)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_principal_identities(cache, m):
    r = section4_checks(m, cache)
    assert r.passed, r.residual


def test_e_and_g_domain():
    with pytest.raises(DomainError):
        compute_G(0, 3, None)
    with pytest.raises(DomainError):
        compute_E(0, 2, None)
    with pytest.raises(DomainError):
        section4_checks(1, None)


def test_g_unknown_route(cache):
    with pytest.raises(DomainError):
        compute_G(1, 2, cache, "sideways")


def test_open_f_key_validation():
    with pytest.raises(InternalConsistencyError):
        OpenF(1, 1, {(0,): CoeffElem.monomial(1)})


keys = st.lists(st.integers(min_value=1, max_value=6), min_size=3, max_size=3).map(lambda k: tuple(sorted(k)))
tables = st.dictionaries(keys, st.fractions(max_denominator=50).filter(bool), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(tables)
def test_integrate_then_differentiate(table):
    w = StableW(0, 3, {k: CoeffElem.monomial(v, -1) for k, v in table.items()})
    assert integrate_W_to_F(w).differentiate() == w


@settings(max_examples=40, deadline=None)
@given(tables)
def test_open_f_is_odd_per_variable(table):
    f = integrate_W_to_F(StableW(0, 3, {k: CoeffElem.monomial(v, -1) for k, v in table.items()}))
    for key, _ in f.to_mlaurent().items():
        assert all(e % 2 for e in key)


def test_w_from_open_f(cache):
    assert open_F(2, 2, cache).differentiate() == compute_W(2, 2, cache)
