from fractions import Fraction

import sympy as sp

import oracle
from conftest import Q0, coeff_sym
from qcurve_p1.coeffring import CoeffElem
from qcurve_p1.curve import CURVE, bergman_pair_expansion, kernel_factors, kernel_series


def test_invariants():
    assert CURVE.check_invariants() == []
    assert CURVE.node_prefactor() == CoeffElem.monomial(Fraction(1, 24), -1)


def test_kernel_expansion_matches_sympy():
    u, z1 = sp.Symbol("u"), oracle.Z[0]
    ref = sp.series(oracle.kernel(u, z1), u, 0, 8).removeO()
    got = 0
    for c, entry in enumerate(kernel_factors(8)):
        for b, v in entry.items():
            got += coeff_sym(v) * u ** (2 * c - 1) * z1 ** (-2 * b - 2)
    assert sp.simplify(sp.expand(ref.subs(oracle.q0, Q0)) - sp.expand(got)) == 0


def test_kernel_series_shape():
    s = kernel_series(6)
    assert all(e % 2 == 1 for e, _ in s.items())


def test_bergman_pair():
    u, w = sp.symbols("u w")
    ref = sp.series(1 / (u - w) ** 2 + 1 / (u + w) ** 2, u, 0, 9).removeO()
    table = bergman_pair_expansion(8)
    got = sum(v * u**m * w ** (-m - 2) for m, v in table.items())
    assert sp.expand(ref - got) == 0


def test_involution_signs():
    y = CURVE.y_of_z
    assert y.involution(0) == -y
    assert CURVE.dx_dz.involution(1) == CURVE.dx_dz
