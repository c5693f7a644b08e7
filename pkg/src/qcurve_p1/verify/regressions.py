"""Known closed forms of the low-order objects, and checks against them.

Each closed form is stored in the shape it is usually written in:
multivariate ones as a z-numerator over c q0^a prod z_i^b, the
single-variable WKB quantities as an x-numerator over
c q0^a (x + 2 q0)^(h/2) or c q0^a (x - q0)^j.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Tuple

from ..coeffring import CoeffElem
from ..curve import CURVE
from ..locpoly import MLaurent
from ..zseries import ZLaurentPoly, ZRationalFn
from .result import CheckResult, timed

Mono = Tuple[Tuple[int, ...], Fraction, int]  # (z-exponents, rational, q0-exponent)


def _sym(exps: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    return sorted(set(permutations(exps)))


def _multi(n: int, numerator: List[Mono], c: int, qpow: int, zpow: int) -> MLaurent:
    """sum numerator / (c q0^qpow prod z_i^zpow); numerator entries are symmetrized."""
    terms: Dict[Tuple[int, ...], CoeffElem] = {}
    for exps, r, qe in numerator:
        for e in _sym(exps):
            key = tuple(a - zpow for a in e)
            v = CoeffElem.monomial(Fraction(r) / c, qe - qpow)
            terms[key] = terms[key] + v if key in terms else v
    return MLaurent(n, terms)


# W_{g,n} as functions of z multiplying dz_1 ... dz_n
W_FORMS = {
    (0, 3): (3, [((0, 0, 0), 1, 0)], 12, 1, 2),
    (0, 4): (4, [((2, 2, 2, 2), 1, 0), ((2, 2, 2, 0), 3, 1)], 144, 3, 4),
    (1, 1): (1, [((2,), 1, 0), ((0,), 3, 1)], 288, 2, 4),
    (1, 2): (2, [((4, 4), 2, 0), ((4, 2), 6, 1), ((4, 0), 15, 2), ((2, 2), 9, 2)], 3456, 4, 6),
    (2, 1): (1, [((8,), 28, 0), ((6,), 84, 1), ((4,), 252, 2), ((2,), 609, 3), ((0,), 945, 4)],
             1990656, 7, 10),
}

F_FORMS = {
    (0, 3): (3, [((0, 0, 0), -1, 0)], 12, 1, 1),
    (0, 4): (4, [((2, 2, 2, 2), 1, 0), ((2, 2, 2, 0), 1, 1)], 144, 3, 3),
    (1, 1): (1, [((2,), -1, 0), ((0,), -1, 1)], 288, 2, 3),
    (1, 2): (2, [((4, 4), 2, 0), ((4, 2), 2, 1), ((4, 0), 3, 2), ((2, 2), 1, 2)], 3456, 4, 5),
    (2, 1): (1, [((8,), -140, 0), ((6,), -140, 1), ((4,), -252, 2), ((2,), -435, 3), ((0,), -525, 4)],
             9953280, 7, 9),
}


def w_form(g: int, n: int) -> MLaurent:
    return _multi(*W_FORMS[(g, n)])


def f_form(g: int, n: int) -> MLaurent:
    return _multi(*F_FORMS[(g, n)])


CLOSED_F = {
    0: CoeffElem.monomial(Fraction(-48, 5), 5),
    2: CoeffElem.monomial(Fraction(7, 207360), -5),
    3: CoeffElem.monomial(Fraction(245, 429981696), -10),
}
# F_1 = log_coeff * log(log_arg)
CLOSED_F1 = (Fraction(-1, 24), CoeffElem.monomial(-3, 1))


def _x_poly(coeffs: List[Tuple[int, int, int]]) -> ZLaurentPoly:
    """sum c x^i q0^j with x = z^2 - 2 q0."""
    x = CURVE.x_of_z
    out = ZLaurentPoly()
    for c, i, j in coeffs:
        out = out + (x ** i) * CoeffElem.monomial(c, j)
    return out


def x_half_form(num: List[Tuple[int, int, int]], c: Fraction, qpow: int, half: int) -> ZLaurentPoly:
    """num(x, q0) * (x + 2 q0)^(half/2) / (c q0^qpow), with (x + 2 q0)^(1/2) = z."""
    p = _x_poly(num).shift(half)
    return p * CoeffElem.monomial(Fraction(1) / Fraction(c), -qpow)


def x_node_form(num: List[Tuple[int, int, int]], c: Fraction, qpow: int, j: int) -> ZRationalFn:
    """num(x, q0) / (c q0^qpow (x - q0)^j)."""
    p = _x_poly(num) * CoeffElem.monomial(Fraction(1) / Fraction(c), -qpow)
    return ZRationalFn.from_poly(p) * ZRationalFn.node_power(-j)


# entries: (numerator [(c, x-exp, q0-exp)], denominator constant, q0-power, half-power)
S_FORMS = {
    0: ([(4, 1, 0), (-12, 0, 1)], 5, 0, 3),
    2: ([(-1, 1, 0), (-7, 0, 1)], 288, 2, -3),
    3: ([(2, 2, 0), (14, 1, 1), (35, 0, 2)], 6912, 4, -6),
    4: ([(-140, 4, 0), (-1580, 3, 1), (-7476, 2, 2), (-18739, 1, 3), (-23499, 0, 4)], 9953280, 7, -9),
}
# the x-derivative of S_1 = -(1/4) log(x + 2 q0)
S1_DX = ([(-1, 0, 0)], 4, 0, -2)

P_FORMS = {
    1: ([(-1, 0, 0)], 4, 0, -2),
    2: ([(1, 1, 0), (17, 0, 1)], 576, 2, -5),
    3: ([(-2, 2, 0), (-20, 1, 1), (-77, 0, 2)], 6912, 4, -8),
    4: ([(28, 4, 0), (500, 3, 1), (3684, 2, 2), (14273, 1, 3), (27307, 0, 4)], 3981312, 7, -11),
}

# hbar^k coefficients of f and g: (numerator, constant, q0-power, node power)
F_LAX = {
    1: ([(-1, 0, 0)], 1, 0, 1),
    3: ([(1, 0, 0)], 1728, 4, 2),
    5: ([(49, 1, 0), (-51, 0, 1)], 5971968, 9, 3),
}
G_LAX = {
    0: ([(-4, 3, 0), (12, 1, 2), (-8, 0, 3)], 1, 0, 0),
    2: ([(-1, 1, 0), (-11, 0, 1)], 144, 2, 1),
    4: ([(-7, 2, 0), (-34, 1, 1), (53, 0, 2)], 248832, 7, 2),
}

SIGMA = {
    0: CoeffElem.monomial(4, 3),
    2: CoeffElem.monomial(Fraction(1, 288), -2),
    4: CoeffElem.monomial(Fraction(7, 497664), -7),
}

Q_SERIES = {
    0: CoeffElem.monomial(1, 1),
    2: CoeffElem.monomial(Fraction(-1, 1728), -4),
    4: CoeffElem.monomial(Fraction(-49, 5971968), -9),
}


def _cmp(check_id: str, anchor: str, got, want, elapsed: float = 0.0) -> CheckResult:
    if got == want:
        return CheckResult(check_id, anchor, None, None, elapsed)
    return CheckResult(check_id, anchor, f"got {got!r}, expected {want!r}", check_id, elapsed)


def regression_checks(cache, N: int = 4) -> List[CheckResult]:
    """Compare every stored closed form with the computed object."""
    from ..openfe import open_F, principal_special
    from ..toprec import closed_F, compute_W
    from ..wkb import painleve_series, riccati_P, scalar_lax

    out = []
    with timed() as clock:
        for (g, n) in W_FORMS:
            out.append(_cmp(f"regression/W/{g},{n}", "closed form of W_{g,n}",
                            compute_W(g, n, cache).to_mlaurent(), w_form(g, n)))
        for (g, n) in F_FORMS:
            out.append(_cmp(f"regression/F/{g},{n}", "closed form of F_{g,n}",
                            open_F(g, n, cache).to_mlaurent(), f_form(g, n)))
        for g, v in CLOSED_F.items():
            out.append(_cmp(f"regression/Fg/{g}", "closed free energy F_g", closed_F(g, cache).value, v))
        f1 = closed_F(1, cache)
        out.append(_cmp("regression/Fg/1", "closed free energy F_1",
                        (f1.log_coeff, f1.log_arg), CLOSED_F1))
        for m, form in S_FORMS.items():
            out.append(_cmp(f"regression/S/{m}", "principal specialization S_m",
                            principal_special(m, cache).value, x_half_form(*form)))
        out.append(_cmp("regression/S/1", "x-derivative of S_1",
                        principal_special(1, cache).dx(), x_half_form(*S1_DX)))
        ps = painleve_series(max(N // 2 + 1, 3))
        lax = scalar_lax(max(N, 5), ps)
        hP = riccati_P(4, lax)
        for m, form in P_FORMS.items():
            out.append(_cmp(f"regression/P/{m}", "Riccati coefficient P_m", hP[m].as_laurent(), x_half_form(*form)))
        for k, form in F_LAX.items():
            out.append(_cmp(f"regression/f/{k}", "hbar-expansion of f", lax.f[k], x_node_form(*form)))
        for k, form in G_LAX.items():
            out.append(_cmp(f"regression/g/{k}", "hbar-expansion of g", lax.g[k], x_node_form(*form)))
        for k, v in SIGMA.items():
            out.append(_cmp(f"regression/sigma/{k}", "Hamiltonian value sigma", ps.sigma(k), v))
        for k, v in Q_SERIES.items():
            out.append(_cmp(f"regression/q/{k}", "formal Painleve-I solution", ps.q(k), v))
    share = clock.elapsed / max(len(out), 1)
    for r in out:
        r.elapsed = share
    return out
