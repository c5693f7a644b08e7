import json
from fractions import Fraction

import pytest
import sympy as sp

import oracle
from conftest import Q0, ZV, coeff_sym, m_sym, same
from qcurve_p1.coeffring import CoeffElem
from qcurve_p1.errors import CacheCorruptionError, DependencyError, DomainError, InternalConsistencyError
from qcurve_p1.toprec import (
    StableW,
    WCache,
    closed_F,
    compute_W,
    dFg_dt,
    homogeneity_exponent,
    is_stable,
    variation_check,
)
from qcurve_p1.verify.regressions import W_FORMS, w_form

# frozen from tests/oracle.py (sympy residues of the recursion definition)
W41_ORACLE = (
    "7*(654729075*q0**10 + 929091735*q0**9*z1**2 + 751412376*q0**8*z1**4 + 454702248*q0**7*z1**6"
    " + 228972744*q0**6*z1**8 + 101355408*q0**5*z1**10 + 40743360*q0**4*z1**12 + 15205792*q0**3*z1**14"
    " + 5339376*q0**2*z1**16 + 1779792*q0*z1**18 + 593264*z1**20)/(95105071448064*q0**17*z1**22)"
)
W31_ORACLE = (
    "7*(289575*q0**7 + 297297*q0**6*z1**2 + 181764*q0**5*z1**4 + 85860*q0**4*z1**6 + 34740*q0**3*z1**8"
    " + 12600*q0**2*z1**10 + 4200*q0*z1**12 + 1400*z1**14)/(20639121408*q0**12*z1**16)"
)
F4_ORACLE = sp.Rational(259553, 7430083706880) * Q0**-15


def _parse(text):
    return sp.sympify(text, locals={"q0": Q0, **{f"z{i + 1}": v for i, v in enumerate(ZV)}})


@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (0, 5), (1, 3), (2, 2), (3, 1)])
def test_w_matches_sympy_recursion(cache, gn):
    g, n = gn
    assert same(m_sym(compute_W(g, n, cache).to_mlaurent()), oracle.W(g, n))


@pytest.mark.parametrize("gn", sorted(W_FORMS))
def test_w_matches_closed_forms(cache, gn):
    assert compute_W(*gn, cache).to_mlaurent() == w_form(*gn)


def test_w41_frozen(cache):
    assert same(m_sym(compute_W(4, 1, cache).to_mlaurent()), _parse(W41_ORACLE))
    assert same(m_sym(compute_W(3, 1, cache).to_mlaurent()), _parse(W31_ORACLE))


def test_closed_free_energies(cache):
    assert closed_F(0).value == CoeffElem.monomial(Fraction(-48, 5), 5)
    f1 = closed_F(1)
    assert f1.log_coeff == Fraction(-1, 24) and f1.log_arg == CoeffElem.monomial(-3, 1)
    assert closed_F(2, cache).value == CoeffElem.monomial(Fraction(7, 207360), -5)
    assert closed_F(3, cache).value == CoeffElem.monomial(Fraction(245, 429981696), -10)
    assert coeff_sym(closed_F(4, cache).value) == F4_ORACLE


@pytest.mark.parametrize("g", [2, 3])
def test_closed_free_energy_matches_oracle(cache, g):
    assert sp.simplify(coeff_sym(closed_F(g, cache).value) - oracle.closed_F(g)) == 0


def test_f1_derivative_is_sigma2():
    assert closed_F(1).d_dt() == CoeffElem.monomial(Fraction(1, 288), -2)


def test_dfg_dt_reads_z_minus_two_coefficient(cache):
    assert dFg_dt(2, cache) == closed_F(2, cache).value.d_dt()
    with pytest.raises(DomainError):
        dFg_dt(0, cache)


def test_symmetry_and_parity(cache):
    m = compute_W(1, 3, cache).to_mlaurent()
    e = m_sym(m)
    z1, z2, z3 = ZV[:3]
    assert sp.expand(e - e.xreplace({z1: z2, z2: z1})) == 0
    assert sp.expand(e.xreplace({z1: -z1}) - e) == 0  # even densities: the form is odd
    assert all(all(k < 0 and k % 2 == 0 for k in key) for key, _ in m.items())


@pytest.mark.parametrize("gn", [(0, 1), (0, 2), (0, 0), (-1, 3), (1, 0)])
def test_unstable_rejected(gn):
    assert not is_stable(*gn)
    with pytest.raises(DomainError):
        compute_W(*gn)


def test_homogeneity_exponent_matches_table(cache):
    for g, n in cache.keys():
        w = cache.require(g, n)
        for key, c in w.terms.items():
            (e, _), = c.items()
            assert e == homogeneity_exponent(g, n, key)


def test_truncation_independence(cache):
    for g, n in [(0, 3), (1, 2), (2, 1), (0, 5), (2, 2)]:
        assert compute_W(g, n, cache, extra=3, store=False) == cache.require(g, n)


@pytest.mark.parametrize("gn", [(0, 2), (0, 3), (1, 1), (1, 2), (2, 1), (0, 4), (1, 3)])
def test_variation_formula(cache, gn):
    assert variation_check(*gn, cache).passed


def test_cache_round_trip(tmp_path, cache):
    path = tmp_path / "w.json"
    cold = WCache(str(path))
    cold.ensure_upto(4)
    assert cold.dirty
    cold.save()
    assert not cold.dirty
    warm = WCache(str(path))
    assert warm.keys() == cold.keys()
    assert warm.loaded_keys() == cold.keys()
    for g, n in warm.keys():
        assert warm.require(g, n) == cache.require(g, n)
    assert warm.audit() == []
    assert json.loads(path.read_text())["version"] == 1


def test_cache_tampering_detected(tmp_path):
    path = tmp_path / "w.json"
    c = WCache(str(path))
    c.ensure_upto(3)
    c.save()
    doc = json.loads(path.read_text())
    entry = doc["entries"]["1,1"][0]["coeff"]["terms"][0]
    entry["num"] = str(int(entry["num"]) * 2)
    path.write_text(json.dumps(doc))
    bad = WCache(str(path))
    assert bad.audit() == [(1, 1)]


def test_cache_corruption_rejected(tmp_path):
    path = tmp_path / "w.json"
    path.write_text("{not json")
    with pytest.raises(CacheCorruptionError):
        WCache(str(path))
    path.write_text(json.dumps({"version": 99, "entries": {}}))
    with pytest.raises(CacheCorruptionError):
        WCache(str(path))
    # a coefficient with the wrong q0-scaling fails validation on load
    path.write_text(json.dumps({"version": 1, "entries": {"1,1": [
        {"k": ["1"], "coeff": {"terms": [{"exp": "0", "num": "1", "den": "1"}]}}]}}))
    with pytest.raises(CacheCorruptionError):
        WCache(str(path))


def test_cache_conflicting_insert():
    c = WCache()
    w = compute_W(1, 1, c)
    other = StableW(1, 1, {k: v * 2 for k, v in w.terms.items()})
    with pytest.raises(InternalConsistencyError):
        c.insert(other)
    with pytest.raises(DependencyError):
        WCache().require(1, 1)


def test_key_outside_basis_rejected():
    with pytest.raises(InternalConsistencyError):
        StableW(1, 1, {(0,): CoeffElem.monomial(1, -2)})
    with pytest.raises(InternalConsistencyError):
        StableW(0, 3, {(2, 1, 1): CoeffElem.monomial(1, -1)})
