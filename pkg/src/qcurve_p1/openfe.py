"""Open free energies F_{g,n}, their principal specializations S_m, and the
G/E combinations used to prove the quantum curve equations.

F_{g,n} is the per-variable half of the integral of W_{g,n} from -z_i to
z_i.  On the basis z^(-2k) dz the antiderivative z^(1-2k)/(1-2k) is odd,
so the half-difference between z and -z is exactly z^(1-2k)/(1-2k).

Multivariate identities are checked in :class:`locpoly.RatM`.  Variables
z_1..z_n occupy slots 0..n-1; one extra scratch slot holds the variable
that is evaluated at the node z = s (s^2 = 3 q0).  Every evaluation at s
returns an s-free part and an s-coefficient, and the s-coefficient is
required to vanish.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .coeffring import CoeffElem, ZERO
from .curve import CURVE
from .errors import DomainError, InternalConsistencyError
from .locpoly import MLaurent, RatM, divided_difference
from .toprec import StableW, WCache, _distinct_perms, compute_W, is_stable
from .verify.result import CheckResult, combine, timed
from .zseries import ZLaurentPoly, ZRationalFn

__all__ = [
    "OpenF",
    "SpecializedS",
    "integrate_W_to_F",
    "open_F",
    "principal_special",
    "compute_G",
    "compute_E",
    "e_vs_dt_check",
    "diffrec_check",
    "section4_checks",
    "roundtrip_check",
    "NODE_PREFACTOR",
]

Key = Tuple[int, ...]

# s / (dy/dz(s) dx/dz(s)) = 1/(24 q0)
NODE_PREFACTOR = CURVE.node_prefactor()
_A_COEFF = Fraction(1, 8)  # 1/(2 y dx/dz) = (1/8) z^-2 (z^2 - 3 q0)^-1


class OpenF:
    """Symmetric table of F_{g,n} = sum_k c_k prod z_i^(-(2 k_i - 1))."""

    __slots__ = ("g", "n", "terms")

    def __init__(self, g: int, n: int, terms: Dict[Key, CoeffElem]):
        self.g = g
        self.n = n
        self.terms = dict(terms)
        for k in self.terms:
            if len(k) != n or list(k) != sorted(k) or (k and k[0] < 1):
                raise InternalConsistencyError(f"F_{g},{n}: key {k} outside the odd basis")

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpenF):
            return NotImplemented
        return (self.g, self.n, self.terms) == (other.g, other.n, other.terms)

    def __repr__(self) -> str:
        return f"OpenF(g={self.g}, n={self.n}, {len(self.terms)} terms)"

    def coefficient(self, key: Iterable[int]) -> CoeffElem:
        return self.terms.get(tuple(sorted(key)), ZERO)

    def as_laurent(self) -> ZLaurentPoly:
        if self.n != 1:
            raise DomainError("as_laurent is only defined for n = 1")
        return ZLaurentPoly({1 - 2 * k[0]: c for k, c in self.terms.items()})

    def to_mlaurent(self, nvars: Optional[int] = None, slots: Optional[List[int]] = None) -> MLaurent:
        nvars = self.n if nvars is None else nvars
        slots = list(range(self.n)) if slots is None else slots
        terms: Dict[Key, object] = {}
        for key, c in self.terms.items():
            for perm in _distinct_perms(key):
                ek = [0] * nvars
                for s, v in zip(slots, perm):
                    ek[s] += 1 - 2 * v
                ek = tuple(ek)
                terms[ek] = terms[ek] + c if ek in terms else c
        return MLaurent(nvars, terms)

    def principal(self) -> ZLaurentPoly:
        """F_{g,n}(z, ..., z)."""
        out: Dict[int, object] = {}
        for key, c in self.terms.items():
            cnt = Counter(key)
            perms = math.factorial(self.n)
            for m in cnt.values():
                perms //= math.factorial(m)
            e = sum(1 - 2 * k for k in key)
            out[e] = out[e] + c * perms if e in out else c * perms
        return ZLaurentPoly(out)

    def differentiate(self) -> StableW:
        """Apply d/dz_i in every variable, recovering W_{g,n}."""
        terms = {}
        for key, c in self.terms.items():
            f = 1
            for k in key:
                f *= 1 - 2 * k
            terms[key] = c * f
        return StableW(self.g, self.n, terms)


def integrate_W_to_F(w: StableW) -> OpenF:
    """Per variable, (1/2) [z^(1-2k)/(1-2k)] evaluated from -z to z."""
    terms = {}
    for key, c in w.terms.items():
        f = Fraction(1)
        for k in key:
            # antiderivative at z minus antiderivative at -z, halved: the two
            # endpoint values are negatives of each other since 1 - 2k is odd
            at_z = Fraction(1, 1 - 2 * k)
            at_minus_z = -at_z
            f *= (at_z - at_minus_z) / 2
        terms[key] = c * f
    return OpenF(w.g, w.n, terms)


def open_F(g: int, n: int, cache: WCache) -> OpenF:
    return cache.memo(("F", g, n), lambda: integrate_W_to_F(compute_W(g, n, cache)))


# ---------------------------------------------------------------------------
# principal specialization
# ---------------------------------------------------------------------------

class SpecializedS:
    """S_m(z).  S_1 = -(1/2) log z is kept symbolically via its derivatives."""

    __slots__ = ("m", "value", "log_coeff")

    def __init__(self, m: int, value: ZLaurentPoly, log_coeff: Fraction = Fraction(0)):
        self.m = m
        self.value = value
        self.log_coeff = Fraction(log_coeff)

    def dz(self) -> ZLaurentPoly:
        out = self.value.dz()
        if self.log_coeff:
            out = out + ZLaurentPoly.monomial(self.log_coeff, -1)
        return out

    def dx(self) -> ZLaurentPoly:
        return self.dz().shift(-1) * Fraction(1, 2)

    def dxx(self) -> ZLaurentPoly:
        return self.dx().dx()

    def dt_x(self) -> ZLaurentPoly:
        out = self.value.dt_x()
        if self.log_coeff:
            # d/dt log z at fixed x = (dz/dt)/z = -1/(12 q0 z^2)
            out = out + ZLaurentPoly({-2: CoeffElem.monomial(self.log_coeff * Fraction(-1, 12), -1)})
        return out

    def text(self) -> str:
        from .render import zpoly_text

        if self.log_coeff:
            return f"{self.log_coeff} * log(z)"
        return zpoly_text(self.value)

    def __repr__(self) -> str:
        return f"SpecializedS(m={self.m}, {self.text()})"


def _chi_range(chi: int):
    """All stable (g, n) with 2g - 2 + n = chi."""
    for g in range(0, chi // 2 + 2):
        n = chi - 2 * g + 2
        if n >= 1 and is_stable(g, n):
            yield g, n


def principal_special(m: int, cache: WCache) -> SpecializedS:
    """S_m = sum_{2g-2+n = m-1} F_{g,n}(z, ..., z)/n!, with S_0 and S_1 as stored data."""
    if not isinstance(m, int) or m < 0:
        raise DomainError("m must be a nonnegative integer")
    if m == 0:
        return SpecializedS(0, CURVE.phi_of_z)
    if m == 1:
        return SpecializedS(1, ZLaurentPoly(), Fraction(-1, 2))

    def build():
        total = ZLaurentPoly()
        for g, n in _chi_range(m - 1):
            total = total + open_F(g, n, cache).principal() * Fraction(1, math.factorial(n))
        if total and total.max_exp() >= 0:
            raise InternalConsistencyError(f"S_{m} has a non-negative z-power")
        return SpecializedS(m, total)

    return cache.memo(("S", m), build)


# ---------------------------------------------------------------------------
# building blocks in RatM
# ---------------------------------------------------------------------------

def _a_factor(nvars: int, slot: int) -> RatM:
    """1/(2 y(z) dx/dz(z)) = (1/8) z^-2 / (z^2 - 3 q0) in variable ``slot``."""
    num = MLaurent.monomial(nvars, [(-2 if i == slot else 0) for i in range(nvars)], _A_COEFF)
    den = [0] * nvars
    den[slot] = 1
    return RatM(num, den)


def _node_inv(nvars: int, slot: int) -> RatM:
    return RatM.node_inverse(nvars, slot)


def _zmono(nvars: int, slot: int, e: int, c=1) -> MLaurent:
    return MLaurent.monomial(nvars, [(e if i == slot else 0) for i in range(nvars)], c)


def _dF(f: OpenF, nvars: int, slots: List[int], wrt: Iterable[int] = (0,)) -> MLaurent:
    """Differentiate F in its own variables ``wrt`` then place variable i at slots[i]."""
    m = f.to_mlaurent()
    for i in wrt:
        m = m.deriv(i)
    return m.embed(nvars, slots)


def _eval_s(r: RatM, slot: int, what: str) -> RatM:
    even, odd = r.eval_slot_at_s(slot)
    if not odd.is_zero():
        raise InternalConsistencyError(f"s-component survived in {what}")
    return even


def _stable_splits(g: int, rest: List[int]):
    """(g1, I, g2, J) over genus splits and subsets I of ``rest`` with both sides stable."""
    k = len(rest)
    for g1 in range(g + 1):
        g2 = g - g1
        for mask in range(1 << k):
            I = [rest[i] for i in range(k) if mask >> i & 1]
            J = [rest[i] for i in range(k) if not mask >> i & 1]
            if is_stable(g1, len(I) + 1) and is_stable(g2, len(J) + 1):
                yield g1, I, g2, J


def _t_block(g: int, others: List[int], nvars: int, u_slot: int, cache: WCache) -> MLaurent:
    """d^2/du1 du2 [F_{g-1,k+2}(u1, u2, z_others) + sum_stable F(u1, z_I) F(u2, z_J)] at u1 = u2.

    Both u-variables are placed at ``u_slot``.
    """
    total = MLaurent(nvars)
    if g >= 1 and is_stable(g - 1, len(others) + 2):
        f = open_F(g - 1, len(others) + 2, cache)
        total = total + _dF(f, nvars, [u_slot, u_slot] + others, wrt=(0, 1))
    for g1, I, g2, J in _stable_splits(g, others):
        a = _dF(open_F(g1, len(I) + 1, cache), nvars, [u_slot] + I)
        b = _dF(open_F(g2, len(J) + 1, cache), nvars, [u_slot] + J)
        total = total + a * b
    return total


def _dd_block(g: int, n: int, nvars: int, cache: WCache) -> RatM:
    """sum_j -2 z_j (h(z_1) - h(z_j))/(z_1^2 - z_j^2), h(u) = A(u) dF_{g,n-1}/du (u, z_rest)."""
    total = RatM(MLaurent(nvars))
    if n < 2:
        return total
    f = open_F(g, n - 1, cache)
    for j in range(1, n):
        rest = [i for i in range(1, n) if i != j]
        h = _a_factor(nvars, 0) * RatM(_dF(f, nvars, [0] + rest))
        dd = divided_difference(h, 0, j)
        total = total + dd * _zmono(nvars, j, 1, -2)
    return total


def _node_block(g: int, n: int, nvars: int, cache: WCache, what: str) -> RatM:
    """(1/(24 q0)) [sum_j -2 z_j/(z_j^2 - s^2) dF_{g,n-1}/du(s, ..) + T(s, s)], scratch slot = nvars-1.

    The prefactor 1/(z_1^2 - s^2) is not included.
    """
    u = nvars - 1
    total = RatM(MLaurent(nvars))
    if n >= 2:
        f = open_F(g, n - 1, cache)
        for j in range(1, n):
            rest = [i for i in range(1, n) if i != j]
            val = _eval_s(RatM(_dF(f, nvars, [u] + rest)), u, what)
            total = total + val * RatM(_zmono(nvars, j, 1, -2)) * _node_inv(nvars, j)
    tb = _t_block(g, list(range(1, n)), nvars, u, cache)
    total = total + _eval_s(RatM(tb), u, what)
    return total * NODE_PREFACTOR


# ---------------------------------------------------------------------------
# G, E and the differential recursion
# ---------------------------------------------------------------------------

def compute_G(g: int, n: int, cache: WCache, route: str = "direct") -> RatM:
    """G_{g,n}(z_1, ..., z_n) as a RatM in n + 1 slots (last slot unused).

    ``route="direct"`` uses the defining combination with the divided
    differences and the u = z_1 block; ``route="node"`` uses the equivalent
    form built only from evaluations at z = s.
    """
    if not isinstance(g, int) or not isinstance(n, int) or n < 1 or 2 * g - 2 + n < 2:
        raise DomainError("G_{g,n} needs 2g-2+n >= 2")
    nvars = n + 1
    if route == "direct":
        df = RatM(_dF(open_F(g, n, cache), nvars, list(range(n))))
        tb = RatM(_t_block(g, list(range(1, n)), nvars, 0, cache))
        return df - _dd_block(g, n, nvars, cache) + _a_factor(nvars, 0) * tb
    if route == "node":
        return _node_inv(nvars, 0) * _node_block(g, n, nvars, cache, f"G_{g},{n}")
    raise DomainError(f"unknown route {route!r}")


def diffrec_rhs(g: int, n: int, cache: WCache) -> RatM:
    """Right-hand side of the differential recursion for dF_{g,n}/dz_1."""
    if 2 * g - 2 + n < 2:
        raise DomainError("the differential recursion needs 2g-2+n >= 2")
    nvars = n + 1
    tb = RatM(_t_block(g, list(range(1, n)), nvars, 0, cache))
    node = _node_inv(nvars, 0) * _node_block(g, n, nvars, cache, f"diff-rec {g},{n}")
    return _dd_block(g, n, nvars, cache) - _a_factor(nvars, 0) * tb + node


def compute_E(g: int, n: int, cache: WCache) -> RatM:
    """E_{g,n}(z_1, ..., z_n) as a RatM in n + 1 slots."""
    if not isinstance(g, int) or not isinstance(n, int) or n < 1 or 2 * g - 2 + n < 1:
        raise DomainError("E_{g,n} needs 2g-2+n >= 1")
    nvars = n + 1
    u = n
    f = open_F(g, n, cache)
    fm = f.to_mlaurent(nvars, list(range(n)))
    total = RatM(MLaurent(nvars))
    for j in range(n):
        # 2 z_j / (2 y dx/dz) (z_j) dF/dz_j
        total = total + _a_factor(nvars, j) * RatM(fm.deriv(j).shift(j, 1) * 2)
    node = RatM(MLaurent(nvars))
    for j in range(n):
        rest = [i for i in range(n) if i != j]
        val = _eval_s(RatM(_dF(f, nvars, [u] + rest)), u, f"E_{g},{n}")
        node = node + val * RatM(_zmono(nvars, j, 1, -2)) * _node_inv(nvars, j)
    tb = _t_block(g, list(range(n)), nvars, u, cache)
    node = node + _eval_s(RatM(tb), u, f"E_{g},{n}")
    return total + node * NODE_PREFACTOR


def _result(check_id: str, anchor: str, diff: RatM, where: str, elapsed: float) -> CheckResult:
    residual = None if diff.is_zero() else repr(diff.reduce())
    return CheckResult(check_id, anchor, residual, where, elapsed)


def e_vs_dt_check(g: int, n: int, cache: WCache) -> CheckResult:
    """d/dt F_{g,n}(z(x_1), ..) at fixed x equals E_{g,n}."""
    with timed() as clock:
        nvars = n + 1
        lhs = RatM(open_F(g, n, cache).to_mlaurent(nvars, list(range(n)))).dt_x(range(n))
        diff = lhs - compute_E(g, n, cache)
    return _result(f"variation/E/{g},{n}", "t-derivative of F_{g,n} at fixed x equals E_{g,n}",
                   diff, f"(g,n)=({g},{n})", clock.elapsed)


def diffrec_check(g: int, n: int, cache: WCache) -> CheckResult:
    """Differential recursion for dF_{g,n}/dz_1, with regularity at z_j = s."""
    with timed() as clock:
        nvars = n + 1
        rhs = diffrec_rhs(g, n, cache)
        lhs = RatM(_dF(open_F(g, n, cache), nvars, list(range(n))))
        diff = lhs - rhs
        residual = None
        if not diff.is_zero():
            residual = repr(diff.reduce())
        elif any(rhs.reduce().den):
            residual = "right-hand side keeps a pole at z_j = s"
        else:
            direct = compute_G(g, n, cache, "direct")
            node = compute_G(g, n, cache, "node")
            if not (direct - node).is_zero():
                residual = "G routes disagree: " + repr((direct - node).reduce())
    return CheckResult(f"diff-rec/{g},{n}", "differential recursion for open free energies",
                       residual, f"(g,n)=({g},{n})", clock.elapsed)


def roundtrip_check(g: int, n: int, cache: WCache) -> CheckResult:
    with timed() as clock:
        w = compute_W(g, n, cache)
        ok = open_F(g, n, cache).differentiate() == w
    return CheckResult(f"property/roundtrip/{g},{n}", "d/dz of F_{g,n} in every variable is W_{g,n}",
                       None if ok else "mismatch", f"(g,n)=({g},{n})", clock.elapsed)


# ---------------------------------------------------------------------------
# principal-specialization lemmas
# ---------------------------------------------------------------------------

def _principal_G(g: int, n: int, cache: WCache) -> ZRationalFn:
    return cache.memo(("Gprin", g, n), lambda: compute_G(g, n, cache, "direct").specialize())


def _principal_E(g: int, n: int, cache: WCache) -> ZRationalFn:
    return cache.memo(("Eprin", g, n), lambda: compute_E(g, n, cache).specialize())


def _sdx(m: int, cache: WCache) -> ZRationalFn:
    return ZRationalFn.from_poly(principal_special(m, cache).dx())


def section4_checks(m: int, cache: WCache, dfg_dt=None) -> CheckResult:
    """Three principal-specialization identities at level m.

    (a) 2y/(dx/dz) sum_{n>=1} G_{g,n}(z..z)/(n-1)! =
        sum_{a+b=m+1} S_a' S_b' + S_m'' - S_m'/(x - q0);
    (b) sum_{n>=2} [2y/(dx/dz) G_{g,n}/(n-1)! - 2 E_{g,n-1}/(n-1)!] = -S_m'/(x - q0);
    (c) for odd m >= 3: 2y/(dx/dz) G_{(m+1)/2,1} = 2 dF_g/dt.
    Primes are x-derivatives.
    """
    if m < 2:
        raise DomainError("principal-specialization identities need m >= 2")
    with timed() as clock:
        two_y = ZRationalFn.from_poly(CURVE.two_y_over_dx())
        inv_node = ZRationalFn.node_power(-1)
        parts = []
        lhs_a = ZRationalFn(ZLaurentPoly())
        lhs_b = ZRationalFn(ZLaurentPoly())
        for g, n in _chi_range(m):
            gp = _principal_G(g, n, cache) * two_y * Fraction(1, math.factorial(n - 1))
            lhs_a = lhs_a + gp
            if n >= 2:
                lhs_b = lhs_b + gp - _principal_E(g, n - 1, cache) * Fraction(2, math.factorial(n - 1))
        rhs_a = ZRationalFn(ZLaurentPoly())
        for a in range(m + 2):
            rhs_a = rhs_a + _sdx(a, cache) * _sdx(m + 1 - a, cache)
        sm = _sdx(m, cache)
        rhs_a = rhs_a + sm.dx() - sm * inv_node
        rhs_b = -(sm * inv_node)
        parts.append(("a", lhs_a - rhs_a))
        parts.append(("b", lhs_b - rhs_b))
        if m % 2 == 1 and m >= 3:
            g = (m + 1) // 2
            target = (dfg_dt(g) if dfg_dt else compute_W(g, 1, cache).coefficient((1,))) * 2
            parts.append(("c", _principal_G(g, 1, cache) * two_y - target))
    for label, diff in parts:
        if diff:
            return CheckResult(f"section4/m={m}", "G/E principal-specialization identities",
                               repr(diff), f"m={m} ({label})", clock.elapsed)
    return CheckResult(f"section4/m={m}", "G/E principal-specialization identities",
                       None, None, clock.elapsed, orders="a,b" + (",c" if len(parts) == 3 else ""))
