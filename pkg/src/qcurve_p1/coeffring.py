"""Exact coefficient arithmetic.

Every coefficient in the engine is a Laurent polynomial in ``q0`` over the
rationals, where ``q0`` is the branch of ``sqrt(-t/6)``; the time variable
itself never appears and is recovered as ``t = -6 q0**2``.  Three layers are
provided:

* :class:`CoeffElem`  -- Laurent polynomials ``sum c_e q0**e``;
* :class:`CoeffFrac`  -- quotients of those, kept in lowest terms;
* :class:`SExtended`  -- ``a + b s`` with ``s**2 = 3 q0``.

Big rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Union

from .errors import InternalConsistencyError

Rational = Union[int, Fraction]

__all__ = [
    "CoeffElem",
    "CoeffFrac",
    "SExtended",
    "Q0",
    "ONE",
    "ZERO",
    "T",
    "coerce",
    "d_dt",
    "s_reduce",
    "warn_if_non_monomial",
]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    return Fraction(c)


class CoeffElem:
    """Laurent polynomial in ``q0`` with rational coefficients.

    Instances are immutable and hashable.  Arithmetic accepts ints and
    Fractions on either side.

    >>> (Q0 + 1) * (Q0 - 1)
    CoeffElem('q0^2 - 1')
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    clean[int(e)] = c
        self._t = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[int, Fraction]) -> "CoeffElem":
        obj = object.__new__(cls)
        obj._t = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff: Rational, exp: int = 0) -> "CoeffElem":
        coeff = _frac(coeff)
        return cls._raw({int(exp): coeff} if coeff else {})

    @classmethod
    def constant(cls, c: Rational) -> "CoeffElem":
        return cls.monomial(c, 0)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def coefficient(self, e: int) -> Fraction:
        return self._t.get(e, Fraction(0))

    def leading(self) -> Fraction:
        return self._t[max(self._t)]

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "CoeffElem":
        return CoeffElem._raw({e: -c for e, c in self._t.items()})

    def __pos__(self) -> "CoeffElem":
        return self

    def __add__(self, other):
        if isinstance(other, CoeffElem):
            if not other._t:
                return self
            if not self._t:
                return other
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
            return CoeffElem._raw(out)
        if isinstance(other, (int, Fraction)):
            return self + CoeffElem.constant(other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (CoeffElem, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return CoeffElem.constant(other) + (-self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, CoeffElem):
            a, b = self._t, other._t
            if not a or not b:
                return ZERO
            if len(a) == 1 and len(b) == 1:
                (ea, ca), = a.items()
                (eb, cb), = b.items()
                return CoeffElem._raw({ea + eb: ca * cb})
            out: Dict[int, Fraction] = {}
            for ea, ca in a.items():
                for eb, cb in b.items():
                    e = ea + eb
                    out[e] = out.get(e, 0) + ca * cb
            return CoeffElem._raw({e: c for e, c in out.items() if c})
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return CoeffElem._raw({e: c * other for e, c in self._t.items()})
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> Union["CoeffElem", "CoeffFrac"]:
        if not self._t:
            raise ZeroDivisionError("inverse of zero coefficient")
        if len(self._t) == 1:
            (e, c), = self._t.items()
            return CoeffElem._raw({-e: 1 / c})
        return CoeffFrac.make(ONE, self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of coefficient by zero")
            return CoeffElem._raw({e: c / other for e, c in self._t.items()})
        if isinstance(other, CoeffElem):
            if not other._t:
                raise ZeroDivisionError("division of coefficient by zero")
            if len(other._t) == 1:
                return self * other.inverse()
            return CoeffFrac.make(self, other)
        if isinstance(other, CoeffFrac):
            return CoeffFrac.make(self * other.den, other.num)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CoeffElem.constant(other) / self
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result: CoeffElem = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def d_dt(self) -> "CoeffElem":
        # 6 q0^2 + t = 0  =>  dq0/dt = -1/(12 q0), so q0^a -> -(a/12) q0^(a-2)
        return CoeffElem._raw(
            {e - 2: Fraction(-e, 12) * c for e, c in self._t.items() if e}
        )

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, CoeffElem):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._t
            return self._t == {0: other}
        if isinstance(other, SExtended):
            return other == self
        if isinstance(other, CoeffFrac):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._t.get(0, Fraction(0)))
            else:
                self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- rendering --------------------------------------------------------
    def text(self) -> str:
        """Canonical text form, terms by descending exponent: ``7/207360 * q0^-5``."""
        if not self._t:
            return "0"
        parts = []
        for i, e in enumerate(sorted(self._t, reverse=True)):
            c = self._t[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(mag) if e == 0 else f"{mag} * q0^{e}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"CoeffElem({self._pretty()!r})"

    def _pretty(self) -> str:
        if not self._t:
            return "0"
        out = []
        for i, e in enumerate(sorted(self._t, reverse=True)):
            c = self._t[e]
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                q = "q0" if e == 1 else f"q0^{e}"
                body = q if mag == 1 else f"{mag}*{q}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def to_json(self) -> list:
        return [
            {"exp": str(e), "num": str(self._t[e].numerator), "den": str(self._t[e].denominator)}
            for e in sorted(self._t, reverse=True)
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, str]]) -> "CoeffElem":
        terms: Dict[int, Fraction] = {}
        for item in data:
            terms[int(item["exp"])] = Fraction(int(item["num"]), int(item["den"]))
        return cls(terms)


ZERO = CoeffElem._raw({})
ONE = CoeffElem._raw({0: Fraction(1)})
Q0 = CoeffElem._raw({1: Fraction(1)})
#: the time variable, t = -6 q0^2
T = CoeffElem._raw({2: Fraction(-6)})


def coerce(x) -> Union[CoeffElem, "CoeffFrac", "SExtended"]:
    """Lift ints and Fractions into :class:`CoeffElem`; pass ring elements through."""
    if isinstance(x, (CoeffElem, CoeffFrac, SExtended)):
        return x
    if isinstance(x, (int, Fraction)):
        return CoeffElem.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a coefficient")


# ---------------------------------------------------------------------------
# polynomial gcd over Q for the fraction field
# ---------------------------------------------------------------------------

def _to_dense(p: CoeffElem) -> list:
    lo = p.min_exp()
    hi = p.max_exp()
    dense = [Fraction(0)] * (hi - lo + 1)
    for e, c in p.items():
        dense[e - lo] = c
    return dense


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _divmod(a: list, b: list):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        _trim(a)
    return _trim(q), a


def _gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def _from_dense(p: list, shift: int = 0) -> CoeffElem:
    return CoeffElem({i + shift: c for i, c in enumerate(p) if c})


class CoeffFrac:
    """Quotient of two :class:`CoeffElem` in canonical form.

    The denominator has lowest exponent 0 and leading coefficient 1; any
    monomial part is folded into the numerator.  :meth:`make` returns a plain
    :class:`CoeffElem` whenever the reduced denominator is 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: CoeffElem, den: CoeffElem):
        # use CoeffFrac.make; direct construction skips canonicalization
        self.num = num
        self.den = den

    @staticmethod
    def make(num, den) -> Union[CoeffElem, "CoeffFrac"]:
        num = coerce(num)
        den = coerce(den)
        if isinstance(num, CoeffFrac) or isinstance(den, CoeffFrac):
            n1, d1 = (num.num, num.den) if isinstance(num, CoeffFrac) else (num, ONE)
            n2, d2 = (den.num, den.den) if isinstance(den, CoeffFrac) else (den, ONE)
            return CoeffFrac.make(n1 * d2, d1 * n2)
        if not den:
            raise ZeroDivisionError("coefficient fraction with zero denominator")
        if not num:
            return ZERO
        if den.is_monomial():
            return num * den.inverse()
        dn = _to_dense(num)
        dd = _to_dense(den)
        shift = num.min_exp() - den.min_exp()
        g = _gcd(dn, dd)
        if len(g) > 1:
            dn, r1 = _divmod(dn, g)
            dd, r2 = _divmod(dd, g)
            if r1 or r2:
                raise InternalConsistencyError("inexact division by polynomial gcd")
        lead = dd[-1]
        dn = [c / lead for c in dn]
        dd = [c / lead for c in dd]
        # dd[0] != 0 after trimming shifts, fold any residual low zeros
        k = 0
        while not dd[k]:
            k += 1
        dd = dd[k:]
        shift -= k
        den_e = _from_dense(dd)
        num_e = _from_dense(dn, shift)
        if den_e == ONE:
            return num_e
        return CoeffFrac(num_e, den_e)

    def __bool__(self) -> bool:
        return True

    def is_zero(self) -> bool:
        return False

    def _parts(self, other):
        if isinstance(other, CoeffFrac):
            return other.num, other.den
        if isinstance(other, CoeffElem):
            return other, ONE
        if isinstance(other, (int, Fraction)):
            return CoeffElem.constant(other), ONE
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        n, d = p
        if d == self.den:
            return CoeffFrac.make(self.num + n, d)
        return CoeffFrac.make(self.num * d + n * self.den, self.den * d)

    __radd__ = __add__

    def __neg__(self):
        return CoeffFrac(-self.num, self.den)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self + CoeffFrac.make(-p[0], p[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return CoeffFrac.make(self.num * p[0], self.den * p[1])

    __rmul__ = __mul__

    def inverse(self):
        return CoeffFrac.make(self.den, self.num)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return CoeffFrac.make(self.num * p[1], self.den * p[0])

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return CoeffFrac.make(p[0] * self.den, p[1] * self.num)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return CoeffFrac.make(self.num ** k, self.den ** k)

    def d_dt(self):
        return CoeffFrac.make(
            self.num.d_dt() * self.den - self.num * self.den.d_dt(), self.den * self.den
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, CoeffFrac):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (CoeffElem, int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def text(self) -> str:
        return f"({self.num.text()}) / ({self.den.text()})"

    def __repr__(self) -> str:
        return f"CoeffFrac({self.num._pretty()!r}, {self.den._pretty()!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def d_dt(a):
    """t-derivative of a coefficient, acting as q0^a -> -(a/12) q0^(a-2)."""
    if isinstance(a, (int, Fraction)):
        return ZERO
    return a.d_dt()


def warn_if_non_monomial(values: Iterable, where: str = "result") -> bool:
    """Emit a warning if any coefficient has a non-monomial q0 denominator."""
    bad = [v for v in values if isinstance(v, CoeffFrac)]
    if bad:
        warnings.warn(
            f"{where}: {len(bad)} coefficient(s) with non-monomial q0 denominator, "
            f"e.g. {bad[0].text()}",
            RuntimeWarning,
            stacklevel=2,
        )
        return True
    return False


# ---------------------------------------------------------------------------
# quadratic extension by s, s^2 = 3 q0
# ---------------------------------------------------------------------------

_THREE_Q0 = CoeffElem._raw({1: Fraction(3)})


class SExtended:
    """Element ``even + odd * s`` of the extension by ``s = sqrt(3 q0)``."""

    __slots__ = ("even", "odd")

    def __init__(self, even=ZERO, odd=ZERO):
        self.even = coerce(even)
        self.odd = coerce(odd)

    @classmethod
    def s(cls) -> "SExtended":
        return cls(ZERO, ONE)

    @classmethod
    def s_power(cls, k: int) -> "SExtended":
        """``s**k`` for any integer k, reduced with ``s**2 = 3 q0``."""
        half, parity = divmod(k, 2)
        c = _THREE_Q0 ** half
        return cls(ZERO, c) if parity else cls(c, ZERO)

    def __bool__(self) -> bool:
        return bool(self.even) or bool(self.odd)

    def is_zero(self) -> bool:
        return not self

    def is_s_free(self) -> bool:
        return not self.odd

    def project(self):
        """Return the s-free part, insisting the s-component vanished."""
        if self.odd:
            raise InternalConsistencyError(
                f"s-component survived reduction: {self.odd!r}"
            )
        return self.even

    def _lift(self, other):
        if isinstance(other, SExtended):
            return other
        if isinstance(other, (CoeffElem, CoeffFrac, int, Fraction)):
            return SExtended(other, ZERO)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return SExtended(self.even + o.even, self.odd + o.odd)

    __radd__ = __add__

    def __neg__(self):
        return SExtended(-self.even, -self.odd)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return SExtended(self.even - o.even, self.odd - o.odd)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (CoeffElem, CoeffFrac, int, Fraction)):
            return SExtended(self.even * other, self.odd * other)
        if not isinstance(other, SExtended):
            return NotImplemented
        a, b, c, d = self.even, self.odd, other.even, other.odd
        return SExtended(a * c + _THREE_Q0 * (b * d), a * d + b * c)

    __rmul__ = __mul__

    def norm(self):
        """``(a + b s)(a - b s) = a^2 - 3 q0 b^2``."""
        return self.even * self.even - _THREE_Q0 * (self.odd * self.odd)

    def inverse(self) -> "SExtended":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero in the s-extension")
        ninv = CoeffFrac.make(ONE, n)
        return SExtended(self.even * ninv, -self.odd * ninv)

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
        out = SExtended(ONE, ZERO)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def d_dt(self) -> "SExtended":
        # ds/dt = 3 q0' / (2 s) = s q0' / (2 q0) = -s / (24 q0^2)
        ds = CoeffElem._raw({-2: Fraction(-1, 24)})
        return SExtended(d_dt(self.even), d_dt(self.odd)) + SExtended(ZERO, self.odd * ds)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.even == o.even and self.odd == o.odd

    def __hash__(self) -> int:
        if not self.odd:
            return hash(self.even)
        return hash((self.even, self.odd))

    def __repr__(self) -> str:
        return f"SExtended({self.even!r}, {self.odd!r})"

    def text(self) -> str:
        if not self.odd:
            return self.even.text()
        return f"({self.even.text()}) + ({self.odd.text()}) * s"


def s_reduce(coeffs: Sequence) -> SExtended:
    """Reduce ``sum coeffs[i] * s**i`` to the form ``a + b s``."""
    out = SExtended()
    for i, c in enumerate(coeffs):
        if c:
            out = out + SExtended.s_power(i) * coerce(c)
    return out
