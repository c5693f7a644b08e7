"""Univariate objects in the curve coordinate z.

* :class:`ZLaurentPoly` -- finite Laurent polynomials in z over the coefficient ring;
* :class:`ZRationalFn` -- quotients of those in lowest terms;
* :class:`TruncSeries` -- truncated expansions in z (around 0) or in zeta = 1/z;
* :class:`HSeries`     -- truncated formal series in hbar with ZRationalFn coefficients.

Two differential operators are used throughout.  With x = z^2 - 2 q0 we get
dx = 2 z dz, so d/dx = (1/(2z)) d/dz.  At fixed x, 0 = 2 z dz/dt - 2 dq0/dt and
dq0/dt = -1/(12 q0), hence dz/dt|_x = -1/(12 q0 z) and
d/dt|_x = (coefficientwise d/dt) - (1/(12 q0 z)) d/dz.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

from .coeffring import ONE, ZERO, CoeffElem, CoeffFrac, coerce, d_dt
from .errors import (
    DomainError,
    InsufficientTruncationError,
    InternalConsistencyError,
    NormalizationError,
)

__all__ = [
    "ZLaurentPoly",
    "ZRationalFn",
    "TruncSeries",
    "HSeries",
    "geom_expand",
    "residue_at_zero",
    "puiseux_binomial",
    "hseries_log_dx",
    "Z",
]

_SCALARS = (int, Fraction, CoeffElem, CoeffFrac)

# -1/(12 q0), the velocity dz/dt at fixed x multiplied by z
_DZDT = CoeffElem.monomial(Fraction(-1, 12), -1)


class ZLaurentPoly:
    """Finite Laurent polynomial ``sum c_e z**e`` with coefficient-ring entries."""

    __slots__ = ("_t",)

    def __init__(self, terms: Optional[Dict[int, object]] = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = coerce(c)
                if c:
                    clean[int(e)] = c
        self._t = clean

    @classmethod
    def _raw(cls, terms) -> "ZLaurentPoly":
        obj = object.__new__(cls)
        obj._t = terms
        return obj

    @classmethod
    def monomial(cls, coeff=1, exp: int = 0) -> "ZLaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c) -> "ZLaurentPoly":
        return cls({0: c})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> Dict[int, object]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def coefficient(self, e: int):
        return self._t.get(e, ZERO)

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def is_constant(self) -> bool:
        return not self._t or set(self._t) == {0}

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def exponents(self) -> List[int]:
        return sorted(self._t)

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return ZLaurentPoly._raw({e: -c for e, c in self._t.items()})

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = ZLaurentPoly.constant(other)
        if not isinstance(other, ZLaurentPoly):
            return NotImplemented
        out = dict(self._t)
        for e, c in other._t.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return ZLaurentPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _SCALARS + (ZLaurentPoly,)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                return ZLaurentPoly._raw({})
            return ZLaurentPoly._raw({e: c * other for e, c in self._t.items()})
        if not isinstance(other, ZLaurentPoly):
            return NotImplemented
        out: Dict[int, object] = {}
        for ea, ca in self._t.items():
            for eb, cb in other._t.items():
                e = ea + eb
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return ZLaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._t) != 1:
                raise DomainError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self._t.items()
            return ZLaurentPoly({-e * (-k): coerce(c).inverse() ** (-k)})
        out = ZLaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "ZLaurentPoly":
        """Multiply by ``z**k``."""
        return ZLaurentPoly._raw({e + k: c for e, c in self._t.items()})

    def scale_div(self, c) -> "ZLaurentPoly":
        return ZLaurentPoly._raw({e: v / c for e, v in self._t.items()})

    # -- calculus ---------------------------------------------------------
    def dz(self) -> "ZLaurentPoly":
        return ZLaurentPoly._raw({e - 1: c * e for e, c in self._t.items() if e})

    def dx(self) -> "ZLaurentPoly":
        # d/dx = (1/(2z)) d/dz
        return ZLaurentPoly._raw(
            {e - 2: c * Fraction(e, 2) for e, c in self._t.items() if e}
        )

    def d_dt(self) -> "ZLaurentPoly":
        """Coefficientwise t-derivative at fixed z."""
        return ZLaurentPoly({e: d_dt(c) for e, c in self._t.items()})

    def dt_x(self) -> "ZLaurentPoly":
        """t-derivative at fixed x."""
        return self.d_dt() + self.dz().shift(-1) * _DZDT

    def involution(self, form_degree: int = 0) -> "ZLaurentPoly":
        """Pull back along z -> -z, with the sign (-1)**form_degree from d(-z) = -dz."""
        sign = -1 if form_degree % 2 else 1
        return ZLaurentPoly._raw(
            {e: (-c if (e % 2) else c) * sign for e, c in self._t.items()}
        )

    def even_part(self) -> "ZLaurentPoly":
        return ZLaurentPoly._raw({e: c for e, c in self._t.items() if e % 2 == 0})

    def odd_part(self) -> "ZLaurentPoly":
        return ZLaurentPoly._raw({e: c for e, c in self._t.items() if e % 2})

    def eval_at(self, value):
        """Evaluate at a ring element (CoeffElem, CoeffFrac or SExtended)."""
        out = ZERO
        for e, c in self._t.items():
            out = out + (value ** e) * c
        return out

    def map_coeffs(self, fn) -> "ZLaurentPoly":
        return ZLaurentPoly({e: fn(c) for e, c in self._t.items()})

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, ZLaurentPoly):
            return self._t == other._t
        if isinstance(other, _SCALARS):
            return self == ZLaurentPoly.constant(other)
        if isinstance(other, ZRationalFn):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    def __repr__(self) -> str:
        from .render import zpoly_text

        return f"ZLaurentPoly({zpoly_text(self)!r})"


Z = ZLaurentPoly._raw({1: ONE})


# ---------------------------------------------------------------------------
# dense polynomial helpers over the coefficient field
# ---------------------------------------------------------------------------

def _dense(p: ZLaurentPoly) -> list:
    """Coefficient list of a polynomial with nonnegative exponents, index = exponent."""
    if not p:
        return []
    out = [ZERO] * (p.max_exp() + 1)
    for e, c in p.items():
        out[e] = c
    return out


def _undense(coeffs: Sequence, shift: int = 0) -> ZLaurentPoly:
    return ZLaurentPoly._raw({i + shift: c for i, c in enumerate(coeffs) if c})


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _pdivmod(a: list, b: list):
    a = list(a)
    lead = b[-1]
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        f = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            if c:
                a[shift + i] = a[shift + i] - f * c
        a.pop()
        _trim(a)
    return _trim(q), a


def _pgcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


# the factor z^2 - 3 q0 whose zeros are the double turning point
_X_MINUS_Q0 = [CoeffElem.monomial(-3, 1), ZERO, ONE]


def _divide_out_node(num: list, den: list):
    """Cancel common factors (z^2 - 3 q0) from dense num/den; returns new lists."""
    while len(den) >= 3:
        qd, rd = _pdivmod(den, _X_MINUS_Q0)
        if rd:
            break
        qn, rn = _pdivmod(num, _X_MINUS_Q0)
        if rn:
            break
        num, den = qn, qd
    return num, den


def _is_node_power(den: list) -> bool:
    """True if dense ``den`` is c (z^2 - 3 q0)^k for some k >= 0."""
    while len(den) >= 3:
        den, r = _pdivmod(den, _X_MINUS_Q0)
        if r:
            return False
    return len(den) == 1


class ZRationalFn:
    """Rational function ``num/den`` of z in canonical form.

    The denominator is a polynomial with nonzero constant term and leading
    coefficient 1, coprime to the numerator; powers of z live in the numerator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical: bool = False):
        if not isinstance(num, ZLaurentPoly):
            num = ZLaurentPoly.constant(num)
        if den is None:
            den = ZLaurentPoly.constant(1)
        elif not isinstance(den, ZLaurentPoly):
            den = ZLaurentPoly.constant(den)
        if _canonical:
            self.num, self.den = num, den
        else:
            self.num, self.den = _canonicalize(num, den)

    @classmethod
    def from_poly(cls, p: ZLaurentPoly) -> "ZRationalFn":
        return cls(p, ZLaurentPoly.constant(1), _canonical=True)

    @classmethod
    def node_power(cls, k: int) -> "ZRationalFn":
        """``(z^2 - 3 q0)**k`` for any integer k, i.e. ``(x - q0)**k``."""
        base = _undense(_X_MINUS_Q0)
        if k >= 0:
            return cls.from_poly(base ** k)
        return cls(ZLaurentPoly.constant(1), base ** (-k), _canonical=True)

    # -- inspection -------------------------------------------------------
    def is_laurent(self) -> bool:
        return self.den.is_constant()

    def as_laurent(self) -> ZLaurentPoly:
        if not self.is_laurent():
            raise InternalConsistencyError(
                "expected a Laurent polynomial in z, found a nontrivial denominator"
            )
        return self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, ZRationalFn):
            return other
        if isinstance(other, ZLaurentPoly):
            return ZRationalFn.from_poly(other)
        if isinstance(other, _SCALARS):
            return ZRationalFn.from_poly(ZLaurentPoly.constant(other))
        return None

    def __neg__(self):
        return ZRationalFn(-self.num, self.den, _canonical=True)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            if self.den.is_constant():
                return ZRationalFn(self.num + o.num, self.den, _canonical=True)
            return ZRationalFn(self.num + o.num, self.den)
        if o.den.is_constant():
            return ZRationalFn(self.num + o.num * self.den, self.den, _canonical=True)
        if self.den.is_constant():
            return ZRationalFn(self.num * o.den + o.num, o.den, _canonical=True)
        return ZRationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                return ZRationalFn.from_poly(ZLaurentPoly())
            return ZRationalFn(self.num * other, self.den, _canonical=True)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den.is_constant() and o.den.is_constant():
            return ZRationalFn(self.num * o.num, self.den, _canonical=True)
        return ZRationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "ZRationalFn":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return ZRationalFn(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return ZRationalFn(self.num ** k, self.den ** k, _canonical=True)

    # -- calculus ---------------------------------------------------------
    def dz(self) -> "ZRationalFn":
        if self.den.is_constant():
            return ZRationalFn(self.num.dz(), self.den, _canonical=True)
        return ZRationalFn(
            self.num.dz() * self.den - self.num * self.den.dz(), self.den * self.den
        )

    def dx(self) -> "ZRationalFn":
        return self.dz() * ZLaurentPoly.monomial(Fraction(1, 2), -1)

    def d_dt(self) -> "ZRationalFn":
        if self.den.is_constant():
            return ZRationalFn(self.num.d_dt(), self.den, _canonical=True)
        return ZRationalFn(
            self.num.d_dt() * self.den - self.num * self.den.d_dt(), self.den * self.den
        )

    def dt_x(self) -> "ZRationalFn":
        return self.d_dt() + self.dz() * ZLaurentPoly.monomial(_DZDT, -1)

    def involution(self, form_degree: int = 0) -> "ZRationalFn":
        return ZRationalFn(self.num.involution(form_degree), self.den.involution(0))

    # -- expansions -------------------------------------------------------
    def expand_at_zero(self, order: int) -> "TruncSeries":
        return TruncSeries.from_poly(self.num, "z", None) * TruncSeries.from_poly(
            self.den, "z", order - self.num.min_exp() if self.num else order
        ).inverse()

    def expand_at_infinity(self, order: int) -> "TruncSeries":
        """Expansion in zeta = 1/z, truncated at zeta**order."""
        if not self.num:
            return TruncSeries({}, "zeta", order)
        num = _poly_to_zeta(self.num)
        den = _poly_to_zeta(self.den)
        vn, vd = num.valuation(), den.valuation()
        inv = den.with_order(order - vn + 2 * vd).inverse()
        return (num * inv).truncate(order)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        from .render import zrat_text

        return f"ZRationalFn({zrat_text(self)!r})"


def _poly_to_zeta(p: ZLaurentPoly) -> "TruncSeries":
    return TruncSeries({-e: c for e, c in p.items()}, "zeta", None)


def _canonicalize(num: ZLaurentPoly, den: ZLaurentPoly):
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    one = ZLaurentPoly.constant(1)
    if not num:
        return ZLaurentPoly._raw({}), one
    lo = den.min_exp()
    if lo:
        num = num.shift(-lo)
        den = den.shift(-lo)
    if den.is_constant():
        c = den.coefficient(0)
        return num.scale_div(c), one
    nlo = num.min_exp()
    dn = _dense(num.shift(-nlo))
    dd = _dense(den)
    dn, dd = _divide_out_node(dn, dd)
    # z^2 - 3 q0 is irreducible over Q(q0), so after cancelling it no gcd remains
    if len(dd) > 1 and not _is_node_power(dd):
        g = _pgcd(dn, dd)
        if len(g) > 1:
            dn, r1 = _pdivmod(dn, g)
            dd, r2 = _pdivmod(dd, g)
            if r1 or r2:
                raise InternalConsistencyError("inexact division by a z-polynomial gcd")
    lead = dd[-1]
    if lead != ONE:
        dn = [c / lead for c in dn]
        dd = [c / lead for c in dd]
    return _undense(dn, nlo), _undense(dd)


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------

class TruncSeries:
    """Truncated Laurent series in ``z`` (around 0) or in ``zeta`` = 1/z.

    ``order`` is the exclusive truncation exponent: coefficients of
    ``var**e`` are known for ``e < order``.  ``order=None`` marks an exact,
    finitely supported series.  Coefficients may be any ring elements
    (coefficient-ring scalars or multivariate carriers from :mod:`locpoly`).
    """

    __slots__ = ("var", "_t", "order")

    def __init__(self, terms: Optional[Dict[int, object]], var: str = "z", order: Optional[int] = None):
        if var not in ("z", "zeta"):
            raise DomainError(f"unknown series variable {var!r}")
        self.var = var
        self.order = order
        clean = {}
        if terms:
            for e, c in terms.items():
                if order is not None and e >= order:
                    continue
                if c:
                    clean[e] = c
        self._t = clean

    @classmethod
    def from_poly(cls, p: ZLaurentPoly, var: str = "z", order: Optional[int] = None):
        return cls(dict(p.items()), var, order)

    @property
    def terms(self):
        return dict(self._t)

    def items(self):
        return self._t.items()

    def start(self) -> Optional[int]:
        return min(self._t) if self._t else None

    def valuation(self) -> int:
        if not self._t:
            raise DomainError("valuation of a zero series")
        return min(self._t)

    def with_order(self, order: Optional[int]) -> "TruncSeries":
        if order is not None and self.order is not None and order > self.order:
            raise InsufficientTruncationError(
                f"cannot extend a series known below {self.order} to order {order}"
            )
        return TruncSeries(self._t, self.var, order)

    def truncate(self, order: Optional[int]) -> "TruncSeries":
        if order is None:
            return self
        if self.order is not None:
            order = min(order, self.order)
        return TruncSeries(self._t, self.var, order)

    def coefficient(self, e: int):
        if self.order is not None and e >= self.order:
            raise InsufficientTruncationError(
                f"coefficient of {self.var}^{e} requested from a series truncated at {self.order}"
            )
        return self._t.get(e, ZERO)

    def residue(self):
        """Coefficient of ``var**-1``."""
        return self.coefficient(-1)

    def _check(self, other: "TruncSeries"):
        if self.var != other.var:
            raise DomainError("series in different variables")

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            order = _min_order(self.order, other.order)
            out = dict(self._t)
            for e, c in other._t.items():
                out[e] = out[e] + c if e in out else c
            return TruncSeries(out, self.var, order)
        return self + TruncSeries({0: other}, self.var, None)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries({e: -c for e, c in self._t.items()}, self.var, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries({e: c * other for e, c in self._t.items()}, self.var, self.order)
        self._check(other)
        if not self._t or not other._t:
            va = self.start() if self._t else None
            vb = other.start() if other._t else None
            cands = []
            if self.order is not None and vb is not None:
                cands.append(self.order + vb)
            if other.order is not None and va is not None:
                cands.append(other.order + va)
            if self.order is not None and other.order is not None and va is None and vb is None:
                cands.append(self.order + other.order)
            return TruncSeries({}, self.var, min(cands) if cands else None)
        va, vb = self.start(), other.start()
        cands = []
        if self.order is not None:
            cands.append(self.order + vb)
        if other.order is not None:
            cands.append(other.order + va)
        order = min(cands) if cands else None
        out: Dict[int, object] = {}
        for ea, ca in self._t.items():
            for eb, cb in other._t.items():
                e = ea + eb
                if order is not None and e >= order:
                    continue
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return TruncSeries(out, self.var, order)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse; the result is known to relative precision of self."""
        if not self._t:
            raise ZeroDivisionError("inverse of a zero series")
        v = self.valuation()
        lead = self._t[v]
        inv_lead = lead.inverse() if hasattr(lead, "inverse") else Fraction(1) / lead
        if self.order is None:
            if len(self._t) == 1:
                return TruncSeries({-v: inv_lead}, self.var, None)
            raise DomainError("inverse of an exact non-monomial series needs a truncation order")
        rel = self.order - v
        out_order = rel - v
        # u = self / (lead var^v) - 1, then 1/(1+u) by the recursion b_k = -sum a_j b_{k-j}
        a = {e - v: c * inv_lead for e, c in self._t.items()}
        b = {0: ONE}
        for k in range(1, rel):
            acc = None
            for j in range(1, k + 1):
                aj = a.get(j)
                bk = b.get(k - j)
                if aj is None or bk is None:
                    continue
                term = aj * bk
                acc = term if acc is None else acc + term
            if acc is not None and acc:
                b[k] = -acc
        return TruncSeries({k - v: c * inv_lead for k, c in b.items()}, self.var, out_order)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncSeries({0: ONE}, self.var, None)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.var == other.var and self.order == other.order and self._t == other._t

    def __repr__(self) -> str:
        body = " + ".join(f"({c!r})*{self.var}^{e}" for e, c in sorted(self._t.items()))
        tail = "" if self.order is None else f" + O({self.var}^{self.order})"
        return f"TruncSeries({body or '0'}{tail})"


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _inv(a):
    if isinstance(a, (int, Fraction)):
        return Fraction(1) / a
    return a.inverse()


def geom_expand(a, order: int) -> TruncSeries:
    """Expansion of ``1/(z^2 - a)`` about z = 0, truncated at ``z**order``.

    ``a`` may be any invertible ring element, for instance ``3 q0`` or a
    monomial ``z1**2`` of a multivariate carrier.
    """
    if order < 0:
        raise DomainError("truncation order must be nonnegative")
    if not a:
        raise DomainError("geometric expansion around a pole: a = 0")
    if isinstance(a, (int, Fraction)):
        a = CoeffElem.constant(a)
    ainv = _inv(a)
    terms = {}
    c = -ainv
    for k in range(0, (order + 1) // 2):
        terms[2 * k] = c
        c = c * ainv
    return TruncSeries(terms, "z", order)


def residue_at_zero(s: TruncSeries):
    """Residue at z = 0 of a z-ascending truncated series."""
    if s.var != "z":
        raise DomainError("residue_at_zero expects a z-series")
    if s.order is not None and s.order <= -1:
        raise InsufficientTruncationError(
            f"residue needs the series through z^-1, truncated at z^{s.order}"
        )
    return s.coefficient(-1)


def _binom(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (alpha - i) / (i + 1)
    return out


def puiseux_binomial(u: TruncSeries, alpha, order: int) -> TruncSeries:
    """``(1 + u)**alpha`` as a truncated series, for u of positive valuation."""
    alpha = Fraction(alpha)
    if u._t and u.valuation() < 1:
        raise DomainError("binomial expansion needs a series with positive valuation")
    order = order if u.order is None else min(order, u.order)
    result = TruncSeries({0: ONE}, u.var, order)
    if not u._t:
        return result
    v = u.valuation()
    power = TruncSeries({0: ONE}, u.var, None)
    k = 1
    while k * v < order:
        power = (power * u).truncate(order)
        c = _binom(alpha, k)
        if c:
            result = result + power * c
        k += 1
    return result.truncate(order)


# ---------------------------------------------------------------------------
# formal hbar-series
# ---------------------------------------------------------------------------

def _as_zrat(c) -> ZRationalFn:
    if isinstance(c, ZRationalFn):
        return c
    if isinstance(c, ZLaurentPoly):
        return ZRationalFn.from_poly(c)
    return ZRationalFn.from_poly(ZLaurentPoly.constant(c))


class HSeries:
    """Truncated formal series ``sum_{k=base}^{top} hbar**k c_k``.

    Coefficients are ZRationalFn.  ``top`` is the highest hbar-power that
    is known; requesting anything above raises InsufficientTruncationError.
    """

    __slots__ = ("base", "coeffs", "top")

    def __init__(self, base: int, coeffs: Iterable, top: Optional[int] = None):
        self.base = base
        self.coeffs = [_as_zrat(c) for c in coeffs]
        known = base + len(self.coeffs) - 1
        self.top = known if top is None else top
        if self.top > known:
            zero = ZRationalFn.from_poly(ZLaurentPoly())
            self.coeffs.extend([zero] * (self.top - known))
        elif self.top < known:
            del self.coeffs[self.top - base + 1:]

    @classmethod
    def from_dict(cls, coeffs: Dict[int, object], top: int) -> "HSeries":
        base = min(coeffs) if coeffs else top
        base = min(base, top)
        lst = [coeffs.get(k, 0) for k in range(base, top + 1)]
        return cls(base, lst, top)

    def coefficient(self, k: int) -> ZRationalFn:
        if k > self.top:
            raise InsufficientTruncationError(
                f"hbar^{k} requested from a series known through hbar^{self.top}"
            )
        if k < self.base:
            return ZRationalFn.from_poly(ZLaurentPoly())
        return self.coeffs[k - self.base]

    __getitem__ = coefficient

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield self.base + i, c

    def truncate(self, top: int) -> "HSeries":
        if top > self.top:
            raise InsufficientTruncationError(f"cannot extend hbar-series to hbar^{top}")
        return HSeries(self.base, self.coeffs[: max(top - self.base + 1, 0)], top)

    def __add__(self, other):
        if not isinstance(other, HSeries):
            other = HSeries(0, [other], None if self.top < 0 else self.top)
        top = min(self.top, other.top)
        base = min(self.base, other.base)
        return HSeries(
            base,
            [self.coefficient(k) + other.coefficient(k) for k in range(base, top + 1)],
            top,
        )

    __radd__ = __add__

    def __neg__(self):
        return HSeries(self.base, [-c for c in self.coeffs], self.top)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HSeries):
            return HSeries(self.base, [c * other for c in self.coeffs], self.top)
        base = self.base + other.base
        top = min(self.top + other.base, other.top + self.base)
        out = []
        for k in range(base, top + 1):
            acc = ZRationalFn.from_poly(ZLaurentPoly())
            for i in range(self.base, k - other.base + 1):
                a = self.coefficient(i)
                b = other.coefficient(k - i)
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return HSeries(base, out, top)

    __rmul__ = __mul__

    def shift(self, k: int) -> "HSeries":
        """Multiply by ``hbar**k``."""
        return HSeries(self.base + k, self.coeffs, self.top + k)

    def inverse(self) -> "HSeries":
        """Inverse of a series whose lowest coefficient is invertible."""
        lead = self.coefficient(self.base)
        if not lead:
            raise ZeroDivisionError("leading hbar-coefficient vanishes")
        inv_lead = lead.inverse()
        depth = self.top - self.base
        out = [inv_lead]
        for k in range(1, depth + 1):
            acc = ZRationalFn.from_poly(ZLaurentPoly())
            for j in range(1, k + 1):
                c = self.coefficient(self.base + j)
                if c:
                    acc = acc + c * out[k - j]
            out.append(-(acc * inv_lead))
        return HSeries(-self.base, out, -self.base + depth)

    def dx(self) -> "HSeries":
        return HSeries(self.base, [c.dx() for c in self.coeffs], self.top)

    def dz(self) -> "HSeries":
        return HSeries(self.base, [c.dz() for c in self.coeffs], self.top)

    def dt_x(self) -> "HSeries":
        return HSeries(self.base, [c.dt_x() for c in self.coeffs], self.top)

    def involution(self, form_degree: int = 0) -> "HSeries":
        return HSeries(self.base, [c.involution(form_degree) for c in self.coeffs], self.top)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HSeries):
            return NotImplemented
        if self.top != other.top:
            return False
        lo = min(self.base, other.base)
        return all(self.coefficient(k) == other.coefficient(k) for k in range(lo, self.top + 1))

    def __repr__(self) -> str:
        return f"HSeries(base={self.base}, top={self.top}, coeffs={self.coeffs!r})"


def hseries_log_dx(h: HSeries) -> HSeries:
    """Return ``-(1/2) d/dx log h`` for an hbar-series with leading term ``z``.

    The logarithm is split as log z + log(1 + u) with u of positive hbar
    order; only the x-derivative is produced, so no branch constant appears.
    """
    lead = h.coefficient(0) if h.base <= 0 else None
    if h.base != 0 or lead != ZRationalFn.from_poly(Z):
        raise NormalizationError("logarithm needs an hbar-series starting with z at hbar^0")
    zinv = ZRationalFn.from_poly(ZLaurentPoly.monomial(1, -1))
    u = HSeries(1, [h.coefficient(k) * zinv for k in range(1, h.top + 1)], h.top)
    if h.top < 1:
        log1pu = HSeries(0, [0], h.top)
    else:
        log1pu = HSeries(0, [0], h.top)
        power = HSeries(0, [1], h.top)
        for j in range(1, h.top + 1):
            power = power * u
            log1pu = log1pu + power * Fraction((-1) ** (j + 1), j)
    # d/dx log z = 1/(2 z^2)
    dlog = log1pu.dx() + HSeries(0, [ZLaurentPoly.monomial(Fraction(1, 2), -2)], h.top)
    return dlog * Fraction(-1, 2)
