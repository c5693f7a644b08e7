"""The spectral curve y^2 = 4 (x - q0)^2 (x + 2 q0) in its rational parametrization.

x = z^2 - 2 q0 and y = 2 z^3 - 6 q0 z.  The only zero of dx/dz is z = 0
(the branch point x = -2 q0); y also vanishes at z = +-s with s^2 = 3 q0,
the node over x = q0.  The covering involution is z -> -z.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List

from .coeffring import ONE, ZERO, CoeffElem, SExtended, coerce
from .errors import DomainError, InsufficientTruncationError, InternalConsistencyError
from .zseries import TruncSeries, ZLaurentPoly, ZRationalFn, geom_expand

__all__ = [
    "CurveData",
    "CURVE",
    "kernel_factors",
    "kernel_series",
    "bergman_pair_expansion",
    "involution_pullback",
]

_Q0 = CoeffElem.monomial(1, 1)


class CurveData:
    """Immutable record of the curve data in the z-coordinate."""

    __slots__ = ()

    x_of_z = ZLaurentPoly({2: 1, 0: CoeffElem.monomial(-2, 1)})
    y_of_z = ZLaurentPoly({3: 2, 1: CoeffElem.monomial(-6, 1)})
    dx_dz = ZLaurentPoly({1: 2})
    dy_dz = ZLaurentPoly({2: 6, 0: CoeffElem.monomial(-6, 1)})
    # antiderivative of y dx with the additive constant fixed to 0
    phi_of_z = ZLaurentPoly({5: Fraction(4, 5), 3: CoeffElem.monomial(-4, 1)})
    ramification_z = 0
    # x-coordinates of the turning points
    simple_turning_x = CoeffElem.monomial(-2, 1)
    double_turning_x = _Q0
    s = SExtended.s()

    def check_invariants(self) -> List[str]:
        """Return the list of violated curve identities (empty when all hold)."""
        bad = []
        x, y = self.x_of_z, self.y_of_z
        lhs = y * y
        rhs = (x - _Q0) * (x - _Q0) * (x + 2 * _Q0) * 4
        if lhs != rhs:
            bad.append("y^2 = 4 (x - q0)^2 (x + 2 q0)")
        if y.involution(0) != -y:
            bad.append("y(-z) = -y(z)")
        if x.involution(0) != x:
            bad.append("x(-z) = x(z)")
        if self.phi_of_z.dz() != y * self.dx_dz:
            bad.append("dPhi = y dx")
        if self.x_of_z.dz() != self.dx_dz or self.y_of_z.dz() != self.dy_dz:
            bad.append("stored derivatives")
        if set(self.dx_dz.exponents()) != {1}:
            bad.append("dx/dz vanishes only at z = 0")
        ys = self.y_of_z.eval_at(self.s)
        if ys:
            bad.append("y(s) = 0")
        return bad

    def node_prefactor(self):
        """s / (dy/dz(s) dx/dz(s)), which must be the s-free value 1/(24 q0)."""
        s = self.s
        val = s / (self.dy_dz.eval_at(s) * self.dx_dz.eval_at(s))
        return val.project()

    def two_y_over_dx(self) -> ZLaurentPoly:
        """2 y / (dx/dz) = 2 (z^2 - 3 q0)."""
        return ZLaurentPoly({2: 2, 0: CoeffElem.monomial(-6, 1)})

    def a_factor(self) -> ZRationalFn:
        """1 / (2 y dx/dz) = 1 / (8 z^2 (z^2 - 3 q0))."""
        return ZRationalFn(ZLaurentPoly({0: 1}), self.y_of_z * self.dx_dz * 2)

    def __repr__(self) -> str:
        return "CurveData(y^2 = 4(x-q0)^2(x+2q0); x = z^2 - 2q0, y = 2z^3 - 6q0 z)"


CURVE = CurveData()


def kernel_factors(order: int) -> List[Dict[int, CoeffElem]]:
    """Coefficients of the recursion-kernel density as a series in z.

    The kernel K(z, z1) dz / dz1 equals -1 / (8 z (z^2 - 3 q0) (z^2 - z1^2))
    because y(z) - y(-z) = 2 y(z), dx = 2 z dz and the Bergman antiderivative
    is 2 z dz1 / (z^2 - z1^2).  Expanding around z = 0,

        K = sum_c kappa_c(z1) z^(2c - 1),
        kappa_c = -(1/8) sum_{a+b=c} (3 q0)^(-a-1) z1^(-2b-2).

    Entry c of the returned list maps b -> coefficient of z1^(-2b-2); every
    z-exponent 2c - 1 below ``order`` is included.
    """
    if order < 2:
        raise InsufficientTruncationError("kernel expansion needs order >= 2")
    inv3q0 = CoeffElem.monomial(Fraction(1, 3), -1)
    zfac = geom_expand(3 * _Q0, order + 1)  # 1/(z^2 - 3 q0)
    out = []
    c = 0
    while 2 * c - 1 < order:
        entry = {}
        for b in range(c + 1):
            a = c - b
            # (-1/(3q0))^(a+1) from the node factor, (-1) z1^(-2b-2) from the second
            coeff = zfac.coefficient(2 * a) * (-1) * Fraction(-1, 8)
            entry[b] = coeff
        out.append(entry)
        c += 1
    # geometric coefficient check against the closed form
    for c, entry in enumerate(out):
        for b, v in entry.items():
            if v != Fraction(-1, 8) * inv3q0 ** (c - b + 1):
                raise InternalConsistencyError("kernel expansion disagrees with its closed form")
    return out


def kernel_series(order: int, z1_exp_slot: int = 0) -> TruncSeries:
    """The kernel density as a TruncSeries in z whose coefficients are
    univariate Laurent polynomials in z1 (for residue checks and tests)."""
    facs = kernel_factors(order)
    terms = {}
    for c, entry in enumerate(facs):
        terms[2 * c - 1] = ZLaurentPoly({-2 * b - 2: v for b, v in entry.items()})
    return TruncSeries(terms, "z", order)


def bergman_pair_expansion(max_m: int) -> Dict[int, Fraction]:
    """Expansion of 1/(z - w)^2 + 1/(z + w)^2 around z = 0.

    Each square is expanded separately (both contain odd powers of z and w);
    the return maps m -> coefficient of z^m w^(-m-2) of the sum, after
    asserting that the odd powers cancelled.
    """
    minus = {m: Fraction(m + 1) for m in range(max_m + 1)}
    plus = {m: Fraction((m + 1) * (-1) ** m) for m in range(max_m + 1)}
    total = {m: minus[m] + plus[m] for m in range(max_m + 1)}
    for m, v in total.items():
        if m % 2 and v:
            raise InternalConsistencyError("odd powers of z_j survived in the Bergman pair")
    return {m: v for m, v in total.items() if v}


def involution_pullback(w, as_form_degree: int = 0):
    """Substitute z -> -z and multiply by (-1)**form_degree."""
    if not hasattr(w, "involution"):
        raise DomainError("object does not support the covering involution")
    return w.involution(as_form_degree)
