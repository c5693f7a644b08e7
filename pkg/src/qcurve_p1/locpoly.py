"""Multivariate carriers for identities in several curve variables.

:class:`MLaurent` is a Laurent polynomial in z_0, ..., z_{m-1} over the
coefficient ring.  :class:`RatM` divides one by a product of powers of
(z_i^2 - 3 q0), the only finite poles besides z_i = 0 that the open free
energies and their recursions produce.  Poles at z_1 = +-z_j never survive:
they are removed exactly by :func:`divided_difference`.

Equality of RatM values is decided by cross-multiplication, so no
canonical form is needed; :meth:`RatM.reduce` cancels node factors when a
pole-free statement has to be certified.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .coeffring import ONE, ZERO, CoeffElem, coerce, d_dt
from .errors import DomainError, InternalConsistencyError
from .zseries import ZLaurentPoly, ZRationalFn

__all__ = ["MLaurent", "RatM", "divided_difference", "node_poly"]

_THREE_Q0 = CoeffElem.monomial(3, 1)
_DZDT = CoeffElem.monomial(Fraction(-1, 12), -1)
# d/dt (z^2 - 3 q0) at fixed z
_NODE_DT = d_dt(-_THREE_Q0)


class MLaurent:
    """Laurent polynomial in a fixed number of variables; keys are exponent tuples."""

    __slots__ = ("nvars", "_t")

    def __init__(self, nvars: int, terms: Optional[Dict[Tuple[int, ...], object]] = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for k, c in terms.items():
                if len(k) != nvars:
                    raise DomainError(f"exponent tuple {k} does not have {nvars} entries")
                c = coerce(c)
                if c:
                    clean[tuple(k)] = c
        self._t = clean

    @classmethod
    def _raw(cls, nvars, terms) -> "MLaurent":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj._t = terms
        return obj

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coeff=1) -> "MLaurent":
        return cls(nvars, {tuple(exps): coeff})

    @classmethod
    def constant(cls, nvars: int, c=1) -> "MLaurent":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var_poly(cls, nvars: int, slot: int, p: ZLaurentPoly) -> "MLaurent":
        """Embed a univariate Laurent polynomial into variable ``slot``."""
        terms = {}
        for e, c in p.items():
            k = [0] * nvars
            k[slot] = e
            terms[tuple(k)] = c
        return cls._raw(nvars, terms)

    def items(self):
        return self._t.items()

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def inverse(self) -> "MLaurent":
        if len(self._t) != 1:
            raise DomainError("only monomials are invertible")
        (k, c), = self._t.items()
        return MLaurent._raw(self.nvars, {tuple(-e for e in k): c.inverse()})

    def __neg__(self):
        return MLaurent._raw(self.nvars, {k: -c for k, c in self._t.items()})

    def __add__(self, other):
        if not isinstance(other, MLaurent):
            other = MLaurent.constant(self.nvars, other)
        out = dict(self._t)
        for k, c in other._t.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return MLaurent._raw(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MLaurent):
            if not other:
                return MLaurent._raw(self.nvars, {})
            return MLaurent._raw(self.nvars, {k: c * other for k, c in self._t.items()})
        out: Dict[Tuple[int, ...], object] = {}
        for ka, ca in self._t.items():
            for kb, cb in other._t.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                v = out.get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return MLaurent._raw(self.nvars, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MLaurent":
        if k < 0:
            return self.inverse() ** (-k)
        out = MLaurent.constant(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, MLaurent):
            return self.nvars == other.nvars and self._t == other._t
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._t.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"({c.text()})*z^{k}" for k, c in sorted(self._t.items(), reverse=True))
        return f"MLaurent({body or '0'})"

    # -- structure --------------------------------------------------------
    def deriv(self, slot: int) -> "MLaurent":
        out = {}
        for k, c in self._t.items():
            e = k[slot]
            if e:
                nk = list(k)
                nk[slot] = e - 1
                out[tuple(nk)] = c * e
        return MLaurent._raw(self.nvars, out)

    def d_dt(self) -> "MLaurent":
        return MLaurent(self.nvars, {k: d_dt(c) for k, c in self._t.items()})

    def shift(self, slot: int, e: int) -> "MLaurent":
        out = {}
        for k, c in self._t.items():
            nk = list(k)
            nk[slot] += e
            out[tuple(nk)] = c
        return MLaurent._raw(self.nvars, out)

    def embed(self, nvars: int, slots: Sequence[int]) -> "MLaurent":
        """Move variable i to position ``slots[i]`` of a ring with ``nvars`` variables.

        Several variables may be sent to the same slot (their exponents add).
        """
        out: Dict[Tuple[int, ...], object] = {}
        for k, c in self._t.items():
            nk = [0] * nvars
            for e, s in zip(k, slots):
                nk[s] += e
            nk = tuple(nk)
            v = out.get(nk)
            out[nk] = c if v is None else v + c
        return MLaurent._raw(nvars, {k: c for k, c in out.items() if c})

    def specialize(self) -> ZLaurentPoly:
        """Set every variable equal to a single z."""
        out: Dict[int, object] = {}
        for k, c in self._t.items():
            e = sum(k)
            v = out.get(e)
            out[e] = c if v is None else v + c
        return ZLaurentPoly({e: c for e, c in out.items() if c})

    def eval_slot_at_s(self, slot: int) -> Tuple["MLaurent", "MLaurent"]:
        """Substitute z_slot = s with s^2 = 3 q0; returns the s-free part and the s-coefficient."""
        even: Dict[Tuple[int, ...], object] = {}
        odd: Dict[Tuple[int, ...], object] = {}
        for k, c in self._t.items():
            e = k[slot]
            half, par = divmod(e, 2)
            val = c * _THREE_Q0 ** half
            nk = list(k)
            nk[slot] = 0
            nk = tuple(nk)
            tgt = odd if par else even
            v = tgt.get(nk)
            tgt[nk] = val if v is None else v + val
        return (
            MLaurent._raw(self.nvars, {k: c for k, c in even.items() if c}),
            MLaurent._raw(self.nvars, {k: c for k, c in odd.items() if c}),
        )

    def parity_in(self, slot: int) -> Optional[int]:
        pars = {k[slot] % 2 for k in self._t}
        if len(pars) == 1:
            return pars.pop()
        return None if pars else 0

    def divide_node(self, slot: int) -> Optional["MLaurent"]:
        """Exact quotient by (z_slot^2 - 3 q0), or None if not divisible."""
        groups: Dict[Tuple, Dict[int, object]] = {}
        for k, c in self._t.items():
            e = k[slot]
            half, par = divmod(e, 2)
            rest = k[:slot] + (par,) + k[slot + 1:]
            groups.setdefault(rest, {})[half] = c
        out = {}
        for rest, poly in groups.items():
            lo = min(poly)
            hi = max(poly)
            coeffs = [poly.get(a, ZERO) for a in range(lo, hi + 1)]
            if len(coeffs) < 2:
                return None
            # synthetic division of sum coeffs[i] U^i by (U - 3 q0)
            d = len(coeffs) - 1
            q = [ZERO] * d
            q[d - 1] = coeffs[d]
            for i in range(d - 1, 0, -1):
                q[i - 1] = coeffs[i] + _THREE_Q0 * q[i]
            if coeffs[0] + _THREE_Q0 * q[0]:
                return None
            par = rest[slot]
            for i, c in enumerate(q):
                if c:
                    nk = list(rest)
                    nk[slot] = 2 * (lo + i) + par
                    out[tuple(nk)] = c
        return MLaurent._raw(self.nvars, out)


def node_poly(nvars: int, slot: int, power: int = 1) -> MLaurent:
    """``(z_slot^2 - 3 q0)**power`` as an MLaurent."""
    base = MLaurent.var_poly(nvars, slot, ZLaurentPoly({2: ONE, 0: -_THREE_Q0}))
    return base ** power


class RatM:
    """``num / prod_i (z_i^2 - 3 q0)**den[i]`` with num an MLaurent."""

    __slots__ = ("num", "den")

    def __init__(self, num: MLaurent, den: Optional[Sequence[int]] = None):
        self.num = num
        self.den = tuple(den) if den is not None else (0,) * num.nvars
        if len(self.den) != num.nvars or min(self.den, default=0) < 0:
            raise DomainError("invalid node-power denominator")

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def from_laurent(cls, m: MLaurent) -> "RatM":
        return cls(m)

    @classmethod
    def node_inverse(cls, nvars: int, slot: int, power: int = 1) -> "RatM":
        den = [0] * nvars
        den[slot] = power
        return cls(MLaurent.constant(nvars), den)

    def __bool__(self) -> bool:
        return bool(self.num)

    def _raise_to(self, den: Sequence[int]) -> MLaurent:
        num = self.num
        for i, (a, b) in enumerate(zip(self.den, den)):
            if b > a:
                num = num * node_poly(self.nvars, i, b - a)
        return num

    def __add__(self, other):
        if not isinstance(other, RatM):
            other = RatM(other if isinstance(other, MLaurent) else MLaurent.constant(self.nvars, other))
        if self.den == other.den:
            return RatM(self.num + other.num, self.den)
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return RatM(self._raise_to(den) + other._raise_to(den), den)

    __radd__ = __add__

    def __neg__(self):
        return RatM(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatM):
            return RatM(self.num * other.num, tuple(a + b for a, b in zip(self.den, other.den)))
        return RatM(self.num * other, self.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatM):
            return NotImplemented
        return not (self - other).num

    def is_zero(self) -> bool:
        return not self.num

    def reduce(self) -> "RatM":
        """Cancel node factors shared by numerator and denominator."""
        num, den = self.num, list(self.den)
        for i in range(self.nvars):
            while den[i] > 0:
                q = num.divide_node(i)
                if q is None:
                    break
                num = q
                den[i] -= 1
        return RatM(num, den)

    def is_regular_at_node(self) -> bool:
        return not any(self.reduce().den) or not self.num

    def deriv(self, slot: int) -> "RatM":
        b = self.den[slot]
        out = RatM(self.num.deriv(slot), self.den)
        if b:
            den = list(self.den)
            den[slot] += 1
            # d/dz (z^2 - 3q0)^-b = -2 b z (z^2 - 3q0)^-(b+1)
            out = out + RatM(self.num.shift(slot, 1) * (-2 * b), den)
        return out

    def d_dt(self) -> "RatM":
        """Coefficientwise t-derivative at fixed z_i."""
        out = RatM(self.num.d_dt(), self.den)
        for i, b in enumerate(self.den):
            if b:
                den = list(self.den)
                den[i] += 1
                out = out + RatM(self.num * (_NODE_DT * (-b)), den)
        return out

    def dt_x(self, slots: Optional[Iterable[int]] = None) -> "RatM":
        """t-derivative with every x_i = x(z_i) held fixed."""
        out = self.d_dt()
        for i in range(self.nvars) if slots is None else slots:
            di = self.deriv(i)
            out = out + RatM(di.num.shift(i, -1) * _DZDT, di.den)
        return out

    def embed(self, nvars: int, slots: Sequence[int]) -> "RatM":
        if len(set(slots)) != len(slots):
            raise DomainError("RatM.embed needs distinct target slots; use specialize to merge")
        den = [0] * nvars
        for b, s in zip(self.den, slots):
            den[s] = b
        return RatM(self.num.embed(nvars, slots), den)

    def eval_slot_at_s(self, slot: int) -> Tuple["RatM", "RatM"]:
        r = self.reduce()
        if r.den[slot]:
            raise DomainError("evaluation at z = s of a function with a pole there")
        even, odd = r.num.eval_slot_at_s(slot)
        return RatM(even, r.den), RatM(odd, r.den)

    def specialize(self) -> ZRationalFn:
        """All variables set equal to z."""
        num = self.num.specialize()
        total = sum(self.den)
        if not total:
            return ZRationalFn.from_poly(num)
        return ZRationalFn(num) * ZRationalFn.node_power(-total)

    def to_zrational(self) -> ZRationalFn:
        if self.nvars != 1:
            raise DomainError("to_zrational expects a univariate RatM")
        return self.specialize()

    def __repr__(self) -> str:
        return f"RatM({self.num!r} / node^{self.den})"


def _dd_power(a: int):
    """(U^a - V^a)/(U - V) as a list of (i, j, coeff) meaning coeff U^i V^j."""
    if a > 0:
        return [(i, a - 1 - i, 1) for i in range(a)]
    if a < 0:
        m = -a
        return [(i - m, m - 1 - i - m, -1) for i in range(m)]
    return []


def divided_difference(h: RatM, u: int, v: int) -> RatM:
    """``(h(z_u) - h(z_v)) / (z_u^2 - z_v^2)`` for h even in z_u and free of z_v.

    The result is a genuine RatM: the pole along z_u = +-z_v cancels exactly.
    """
    if any(k[v] for k, _ in h.num.items()) or h.den[v]:
        raise DomainError("divided difference target variable already present")
    if h.num.parity_in(u) == 1:
        raise DomainError("divided difference needs a function even in its variable")
    n = h.nvars
    b = h.den[u]
    # DD[N] * P_u^-b
    dd_terms: Dict[Tuple[int, ...], object] = {}
    for k, c in h.num.items():
        e = k[u]
        if e % 2:
            raise InternalConsistencyError("odd power met in a divided difference")
        for i, j, s in _dd_power(e // 2):
            nk = list(k)
            nk[u] = 2 * i
            nk[v] = 2 * j
            nk = tuple(nk)
            val = c * s
            prev = dd_terms.get(nk)
            dd_terms[nk] = val if prev is None else prev + val
    dd_n = MLaurent._raw(n, {k: c for k, c in dd_terms.items() if c})
    den = list(h.den)
    den[v] = b
    if not b:
        return RatM(dd_n, den)
    # N(V) * DD[P^-b] with DD[P^-b] = -sum_{alpha+beta=b-1} P_u^-(alpha+1) P_v^-(beta+1)
    swap = list(range(n))
    swap[u] = v
    n_v = h.num.embed(n, swap)
    corr = MLaurent._raw(n, {})
    for alpha in range(b):
        beta = b - 1 - alpha
        corr = corr + node_poly(n, u, b - alpha - 1) * node_poly(n, v, b - beta - 1)
    num = dd_n * node_poly(n, v, b) - n_v * corr
    return RatM(num, den)
