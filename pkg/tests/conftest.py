import os
import sys

import pytest
import sympy as sp

sys.path.insert(0, os.path.dirname(__file__))

from qcurve_p1.coeffring import CoeffElem, CoeffFrac  # noqa: E402
from qcurve_p1.toprec import WCache  # noqa: E402
from qcurve_p1.zseries import ZLaurentPoly, ZRationalFn  # noqa: E402

Q0 = sp.Symbol("q0", positive=True)
ZS = sp.Symbol("z")
ZV = sp.symbols("z1:9")


def coeff_sym(c):
    if isinstance(c, CoeffFrac):
        return coeff_sym(c.num) / coeff_sym(c.den)
    if isinstance(c, CoeffElem):
        return sp.Add(*[sp.Rational(v.numerator, v.denominator) * Q0**e for e, v in c.items()])
    return sp.Rational(c.numerator, c.denominator) if hasattr(c, "denominator") else sp.Integer(c)


def z_sym(p, var=ZS):
    if isinstance(p, ZRationalFn):
        return z_sym(p.num, var) / z_sym(p.den, var)
    return sp.Add(*[coeff_sym(c) * var**e for e, c in p.items()])


def m_sym(m, vars=ZV):
    """MLaurent -> sympy expression in z1, z2, ..."""
    return sp.Add(*[coeff_sym(c) * sp.Mul(*[v**e for v, e in zip(vars, k)]) for k, c in m.items()])


def same(a, b) -> bool:
    return sp.simplify(sp.together(a - b)) == 0


@pytest.fixture(scope="session")
def cache():
    c = WCache()
    c.ensure_upto(5)
    return c
