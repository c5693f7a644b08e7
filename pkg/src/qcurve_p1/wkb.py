"""WKB side: the formal Painleve-I solution, the scalar Lax coefficients,
the Riccati solutions P_m, and the checks tying them to the recursion side.

Everything lives in the z-coordinate (x = z^2 - 2 q0, sqrt(x + 2 q0) = z),
so half-integer powers of x + 2 q0 are ordinary powers of z.  hbar-series
are HSeries; ``hbar P`` is stored with base 0 so that its hbar^m
coefficient is P_m.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional

from .coeffring import ONE, ZERO, CoeffElem, T, d_dt
from .curve import CURVE
from .errors import DomainError, InternalConsistencyError
from .verify.result import CheckResult, timed
from .zseries import (
    HSeries,
    TruncSeries,
    ZLaurentPoly,
    ZRationalFn,
    hseries_log_dx,
    puiseux_binomial,
)

__all__ = [
    "PainleveSeries",
    "painleve_series",
    "ScalarLax",
    "scalar_lax",
    "riccati_P",
    "minus_branch",
    "parity_split",
    "odd_even_check",
    "podd_t_check",
    "asymp_sigma_extract",
    "asymp_sigma_check",
    "jmu_tau_check",
    "quantum_curve_check",
    "tau_check",
    "f_expansion_check",
    "v_infty_check",
]

_Q0 = CoeffElem.monomial(1, 1)
_X = CURVE.x_of_z
_P0 = CURVE.y_of_z


def _zr(c) -> ZRationalFn:
    if isinstance(c, ZRationalFn):
        return c
    if isinstance(c, ZLaurentPoly):
        return ZRationalFn.from_poly(c)
    return ZRationalFn.from_poly(ZLaurentPoly.constant(c))


# ---------------------------------------------------------------------------
# formal Painleve-I solution
# ---------------------------------------------------------------------------

class PainleveSeries:
    """q = sum hbar^(2n) q_(2n), p = hbar dq/dt and the Hamiltonian value sigma.

    ``q_coeffs[n]`` is q_(2n), ``p_coeffs[n]`` is p_(2n+1) and
    ``sigma_coeffs[n]`` is sigma_(2n), for n = 0..order.
    """

    __slots__ = ("order", "q_coeffs", "p_coeffs", "sigma_coeffs")

    def __init__(self, order: int, q_coeffs, p_coeffs, sigma_coeffs):
        self.order = order
        self.q_coeffs = list(q_coeffs)
        self.p_coeffs = list(p_coeffs)
        self.sigma_coeffs = list(sigma_coeffs)

    def q(self, k: int) -> CoeffElem:
        """hbar^k coefficient of q."""
        return self._pick(self.q_coeffs, k, 0)

    def p(self, k: int) -> CoeffElem:
        """hbar^k coefficient of p."""
        return self._pick(self.p_coeffs, k, 1)

    def sigma(self, k: int) -> CoeffElem:
        """hbar^k coefficient of sigma."""
        return self._pick(self.sigma_coeffs, k, 0)

    def _pick(self, lst, k, parity):
        if k < 0 or k % 2 != parity:
            return ZERO
        i = (k - parity) // 2
        if i >= len(lst):
            raise DomainError(f"hbar^{k} is beyond the computed Painleve order {self.order}")
        return lst[i]

    def max_hbar(self) -> int:
        return 2 * self.order

    def check_structure(self) -> List[str]:
        """q_(2k) must be a single monomial in q0 with exponent 1 - 5k."""
        bad = []
        for k, c in enumerate(self.q_coeffs):
            if not c.is_monomial() or c.min_exp() != 1 - 5 * k:
                bad.append(f"q_{2 * k}")
        return bad

    def __repr__(self) -> str:
        return f"PainleveSeries(order={self.order})"


def painleve_series(N: int) -> PainleveSeries:
    """q_(2n), p_(2n+1), sigma_(2n) for n = 0..N from hbar^2 q'' = 6 q^2 + t."""
    if not isinstance(N, int) or N < 0:
        raise DomainError("N must be a nonnegative integer")
    qs = [_Q0]
    inv12q0 = CoeffElem.monomial(Fraction(1, 12), -1)
    for k in range(N):
        conv = ZERO
        for k1 in range(1, k + 1):
            conv = conv + qs[k1] * qs[k + 1 - k1]
        qs.append((d_dt(d_dt(qs[k])) - conv * 6) * inv12q0)
    ps = [d_dt(q) for q in qs]
    # H = p^2/2 - 2 q^3 - t q, order by order in hbar^(2n)
    sig = []
    for n in range(N + 1):
        pp = ZERO
        for a in range(n):
            b = n - 1 - a
            pp = pp + ps[a] * ps[b]
        qqq = ZERO
        for a in range(n + 1):
            for b in range(n + 1 - a):
                qqq = qqq + qs[a] * qs[b] * qs[n - a - b]
        sig.append(pp * Fraction(1, 2) - qqq * 2 - T * qs[n])
    return PainleveSeries(N, qs, ps, sig)


# ---------------------------------------------------------------------------
# scalar Lax coefficients
# ---------------------------------------------------------------------------

class ScalarLax:
    """f, g and the Lax entries A11 = p, A12 = 4 (x - q) as hbar-series in z.

    ``inv_x_minus_q`` is 1/(x - q) with base 0.
    """

    __slots__ = ("order", "ps", "f", "g", "A11", "A12", "inv_x_minus_q")

    def __init__(self, order, ps, f, g, A11, A12, inv_x_minus_q):
        self.order = order
        self.ps = ps
        self.f = f
        self.g = g
        self.A11 = A11
        self.A12 = A12
        self.inv_x_minus_q = inv_x_minus_q

    def __repr__(self) -> str:
        return f"ScalarLax(order={self.order})"


def _q_series(ps: PainleveSeries, top: int) -> HSeries:
    return HSeries(0, [ZLaurentPoly.constant(ps.q(k)) for k in range(top + 1)], top)


def _p_series(ps: PainleveSeries, top: int) -> HSeries:
    return HSeries(0, [ZLaurentPoly.constant(ps.p(k)) for k in range(top + 1)], top)


def scalar_lax(N: int, ps: Optional[PainleveSeries] = None) -> ScalarLax:
    """f = -hbar/(x - q), g = -(4x^3 + 2tx + p^2 - 4q^3 - 2tq) + hbar p/(x - q), through hbar^N."""
    if not isinstance(N, int) or N < 0:
        raise DomainError("N must be a nonnegative integer")
    ps = ps if ps is not None else painleve_series(N // 2 + 1)
    if ps.max_hbar() < N:
        raise DomainError(f"Painleve series known through hbar^{ps.max_hbar()}, need hbar^{N}")
    q = _q_series(ps, N)
    p = _p_series(ps, N)
    x = HSeries(0, [_X], N)
    inv = (x - q).inverse()
    f = -inv.shift(1).truncate(N)
    poly = x * x * x * 4 + x * T * 2 + p * p - q * q * q * 4 - q * T * 2
    g = -poly + (p * inv).shift(1).truncate(N)
    A12 = (x - q) * 4
    return ScalarLax(N, ps, f, g, p, A12, inv)


# ---------------------------------------------------------------------------
# Riccati solutions
# ---------------------------------------------------------------------------

def riccati_P(N: int, lax: Optional[ScalarLax] = None) -> HSeries:
    """hbar P^(+) = sum_m hbar^m P_m through hbar^N, plus branch P_0 = 2 z^3 - 6 q0 z.

    From hbar^2 (P^2 + dP/dx) + f hbar P + g = 0 at order hbar^(m+1):
    2 P_0 P_(m+1) = -[sum_{a+b=m+1, a,b>=1} P_a P_b + sum_{c=1}^{m+1} f_c P_(m+1-c)
                      + dP_m/dx + g_(m+1)].
    Each P_m must be a Laurent polynomial in z (no pole at the node).
    """
    if not isinstance(N, int) or N < 0:
        raise DomainError("N must be a nonnegative integer")
    lax = lax if lax is not None else scalar_lax(N)
    if lax.order < N:
        raise DomainError(f"scalar Lax data known through hbar^{lax.order}, need hbar^{N}")
    if _zr(_P0) * _zr(_P0) != -lax.g[0]:
        raise InternalConsistencyError("P_0^2 does not cancel the leading term of g")
    inv2p0 = _zr(_P0 * 2).inverse()
    P: List[ZLaurentPoly] = [_P0]
    for m in range(N):
        k = m + 1
        acc = _zr(P[m].dx()) + lax.g[k]
        for a in range(1, k):
            acc = acc + _zr(P[a] * P[k - a])
        for c in range(1, k + 1):
            fc = lax.f[c]
            if fc:
                acc = acc + fc * P[k - c]
        nxt = -(acc * inv2p0)
        if not nxt.is_laurent():
            raise InternalConsistencyError(f"P_{k} keeps a pole at the double turning point")
        P.append(nxt.as_laurent())
    return HSeries(0, P, N)


def minus_branch(hP: HSeries) -> HSeries:
    """The minus-branch solution as functions of z: P^(-)(z) = P^(+)(-z)."""
    return hP.involution(0)


def parity_split(hP: HSeries):
    """(hbar P_odd, hbar P_even): odd and even parts in z, i.e. even and odd m."""
    minus = minus_branch(hP)
    return (hP - minus) * Fraction(1, 2), (hP + minus) * Fraction(1, 2)


def _laurent_coeffs(h: HSeries) -> List[ZLaurentPoly]:
    return [h[k].as_laurent() for k in range(0, h.top + 1)]


def _result(check_id, anchor, bad, elapsed, orders):
    if bad:
        where, residual = bad
        return CheckResult(check_id, anchor, residual, where, elapsed, orders)
    return CheckResult(check_id, anchor, None, None, elapsed, orders)


def odd_even_check(N: int, lax: Optional[ScalarLax] = None) -> CheckResult:
    """P_even = -(1/2) d/dx log(hbar P_odd/(2(x - q))) through hbar^N, and P_odd odd under z -> -z."""
    with timed() as clock:
        lax = lax if lax is not None else scalar_lax(N)
        hP = riccati_P(N, lax)
        hodd, heven = parity_split(hP)
        bad = None
        # P_even = sum hbar^(m-1) P_m (odd m): base 0 when indexed by hbar^(m-1)
        target = heven.shift(-1).truncate(N - 1) if N >= 1 else None
        inv = lax.inv_x_minus_q.truncate(N)
        arg = hodd * inv * Fraction(1, 2)
        lhs = hseries_log_dx(arg)
        for k in range(0, N):
            if lhs[k] != target[k]:
                bad = (f"hbar^{k}", repr(lhs[k] - target[k]))
                break
        if bad is None and hodd.involution(0) != -hodd:
            bad = ("parity", "P_odd is not odd under the covering involution")
    return _result("wkb/odd-even", "even part of P from the log-derivative of its odd part",
                   bad, clock.elapsed, f"hbar^0..hbar^{N - 1}")


def podd_t_check(N: int, lax: Optional[ScalarLax] = None) -> CheckResult:
    """hbar dP/dt = d/dx((hbar P - p)/(2(x - q))) at fixed x, and the P_odd form, through hbar^N."""
    with timed() as clock:
        lax = lax if lax is not None else scalar_lax(N)
        hP = riccati_P(N, lax)
        inv = lax.inv_x_minus_q.truncate(N)
        lhs = hP.dt_x()
        rhs = ((hP - lax.A11.truncate(N)) * inv * Fraction(1, 2)).dx()
        hodd, _ = parity_split(hP)
        lhs_odd = hodd.dt_x()
        rhs_odd = (hodd * inv * Fraction(1, 2)).dx()
        bad = None
        for k in range(N + 1):
            if lhs[k] != rhs[k]:
                bad = (f"hbar^{k}", repr(lhs[k] - rhs[k]))
                break
            if lhs_odd[k] != rhs_odd[k]:
                bad = (f"hbar^{k} (odd part)", repr(lhs_odd[k] - rhs_odd[k]))
                break
    return _result("wkb/dt-P", "t-derivative of P at fixed x", bad, clock.elapsed, f"hbar^0..hbar^{N}")


# ---------------------------------------------------------------------------
# asymptotics at x = oo
# ---------------------------------------------------------------------------

def _x_power(alpha2: int, order: int) -> TruncSeries:
    """x^(alpha2/2) = z^alpha2 (1 - 2 q0 zeta^2)^(alpha2/2) as a zeta-series below zeta^order."""
    u = TruncSeries({2: _Q0 * -2}, "zeta", None)
    body = puiseux_binomial(u, Fraction(alpha2, 2), order + alpha2)
    return (TruncSeries({-alpha2: ONE}, "zeta", None) * body).truncate(order)


def _template(m: int, order: int) -> TruncSeries:
    """hbar^m part of 2 x^(3/2) + (t/2) x^(-1/2) - (hbar/4) x^-1 (hbar P normalization)."""
    if m == 0:
        return _x_power(3, order) * 2 + _x_power(-1, order) * (T * Fraction(1, 2))
    if m == 1:
        return _x_power(-2, order) * Fraction(-1, 4)
    return TruncSeries({}, "zeta", order)


def asymp_sigma_extract(N: int, hP: Optional[HSeries] = None) -> List[CoeffElem]:
    """sigma_m = 2 * (coefficient of x^(-3/2) in P_m) for m = 0..N.

    After subtracting the template, every term of P_m above x^(-3/2) must
    vanish, and x^(-3/2) ~ z^-3 at leading order; any mismatch raises.
    """
    hP = hP if hP is not None else riccati_P(N)
    order = 4  # zeta^3 = z^-3 is the last coefficient needed
    out = []
    for m in range(N + 1):
        pm = hP[m].as_laurent()
        series = TruncSeries({-e: c for e, c in pm.items()}, "zeta", None).truncate(order)
        rest = series - _template(m, order)
        for e in range(rest.start() if rest.start() is not None else order, 3):
            if rest.coefficient(e):
                raise InternalConsistencyError(
                    f"P_{m} disagrees with its large-x template at z^{-e}"
                )
        out.append(rest.coefficient(3) * 2)
    return out


def asymp_sigma_check(N: int, ps: Optional[PainleveSeries] = None) -> CheckResult:
    with timed() as clock:
        ps = ps if ps is not None else painleve_series(N // 2 + 1)
        bad = None
        try:
            sig = asymp_sigma_extract(N, riccati_P(N, scalar_lax(N, ps)))
        except InternalConsistencyError as exc:
            sig, bad = [], ("template", str(exc))
        for m, v in enumerate(sig):
            if v != ps.sigma(m):
                bad = (f"hbar^{m}", f"{v.text()} != {ps.sigma(m).text()}")
                break
    return _result("wkb/asymptotics", "x^(-3/2) coefficient of P at infinity gives sigma",
                   bad, clock.elapsed, f"hbar^0..hbar^{N}")


def jmu_tau_check(N: int, ps: Optional[PainleveSeries] = None) -> CheckResult:
    """-2 Res_{x=oo} (1/hbar) x^(1/2) W1 dx = sigma/hbar^2, with
    W1 = P + (A12/(2 hbar P_odd)) d/dx((hbar P - A11)/A12).

    A loop around x = oo is half a loop around z = oo, so the x-residue
    doubled is the z-residue of x^(1/2) W1 (2z) dz.  In zeta = 1/z, the
    hbar^(k-1) coefficient of sigma/hbar^2 reads sigma_k = [zeta^1] 2 z x^(1/2) W1_(k-1).
    """
    if N < 2:
        raise DomainError("the residue check needs N >= 2")
    with timed() as clock:
        top = N + 1
        ps = ps if ps is not None else painleve_series(top // 2 + 1)
        lax = scalar_lax(top, ps)
        hP = riccati_P(top, lax)
        hodd, _ = parity_split(hP)
        inv_a12 = (lax.A12.truncate(top)).inverse()
        inner = ((hP - lax.A11.truncate(top)) * inv_a12).dx()
        corr = lax.A12.truncate(top) * hodd.inverse() * inner * Fraction(1, 2)
        # hbar W1 = hbar P + hbar * corr
        hW = hP + corr.shift(1)
        # W1 starts at zeta^-3, so the weight is needed through zeta^4
        weight = (_x_power(1, 6) * TruncSeries({-1: ONE}, "zeta", None) * 2).truncate(5)
        bad = None
        for k in range(0, N + 1):
            wk = hW[k].expand_at_infinity(4)
            val = (weight * wk).truncate(2).coefficient(1)
            if val != ps.sigma(k):
                bad = (f"hbar^{k - 2}", f"{val.text()} != {ps.sigma(k).text()}")
                break
    return _result("wkb/jmu-tau", "residue of W1 at infinity gives sigma",
                   bad, clock.elapsed, f"hbar^-2..hbar^{N - 2}")


# ---------------------------------------------------------------------------
# comparison with the recursion side
# ---------------------------------------------------------------------------

def quantum_curve_check(N: int, cache, ps: Optional[PainleveSeries] = None) -> CheckResult:
    """S = sum hbar^(m-1) S_m solves both scalar Lax equations through hbar^(N+1).

    (a) sum_{a+b=k} S_a' S_b' + S_(k-1)'' = sum_{m+j+1=k} r_j (S_m' - p_m) + [4x^3 + 2tx + 2 sigma]_k
    (b) dS_k/dt at fixed x = sum_{m+j=k} r_j (S_m' - p_m)/2
    (c) S_m' = P_m for m <= N + 1
    with r_j the hbar^j coefficients of 1/(x - q) and primes x-derivatives.
    """
    from .openfe import principal_special

    if not isinstance(N, int) or N < 0:
        raise DomainError("N must be a nonnegative integer")
    with timed() as clock:
        top = N + 1
        ps = ps if ps is not None else painleve_series(top // 2 + 1)
        lax = scalar_lax(top, ps)
        hP = riccati_P(top, lax)
        S = [principal_special(m, cache) for m in range(top + 1)]
        d1 = [_zr(s.dx()) for s in S]
        d2 = [_zr(s.dxx()) for s in S]
        dt = [_zr(s.dt_x()) for s in S]
        r = [lax.inv_x_minus_q[j] for j in range(top + 1)]
        shifted = [d1[m] - ps.p(m) for m in range(top + 1)]
        bad = None
        for k in range(top + 1):
            if d1[k] != _zr(hP[k]):
                bad = (f"(c) m={k}", repr(d1[k] - hP[k]))
                break
            lhs = sum((d1[a] * d1[k - a] for a in range(k + 1)), _zr(0))
            if k >= 1:
                lhs = lhs + d2[k - 1]
            rhs = _zr(ps.sigma(k) * 2)
            if k == 0:
                rhs = rhs + _zr(_X * _X * _X * 4 + _X * (T * 2))
            for m in range(k):
                rhs = rhs + r[k - 1 - m] * shifted[m]
            if lhs != rhs:
                bad = (f"(a) hbar^{k}", repr(lhs - rhs))
                break
            rhs_b = sum((r[k - m] * shifted[m] for m in range(k + 1)), _zr(0)) * Fraction(1, 2)
            if dt[k] != rhs_b:
                bad = (f"(b) hbar^{k}", repr(dt[k] - rhs_b))
                break
    return _result("quantum-curve", "principal specialization solves the scalar isomonodromy system",
                   bad, clock.elapsed, f"hbar^0..hbar^{top}; dS_m/dx = P_m for m <= {top}")


def tau_check(gmax: int, cache, ps: Optional[PainleveSeries] = None) -> CheckResult:
    """dF_g/dt = sigma_(2g) for g <= gmax; F_g from the recursion, sigma from the Hamiltonian."""
    from .toprec import closed_F, dFg_dt

    if not isinstance(gmax, int) or gmax < 0:
        raise DomainError("gmax must be a nonnegative integer")
    with timed() as clock:
        ps = ps if ps is not None else painleve_series(gmax)
        bad = None
        for g in range(gmax + 1):
            closed = closed_F(g, cache)
            lhs = closed.d_dt()
            if g >= 2:
                res = dFg_dt(g, cache)
                if res != lhs:
                    bad = (f"g={g}", f"residue route {res.text()} != closed form {lhs.text()}")
                    break
            if lhs != ps.sigma(2 * g):
                bad = (f"g={g}", f"{lhs.text()} != {ps.sigma(2 * g).text()}")
                break
    return _result("tau", "t-derivative of F_g equals the hbar^(2g) coefficient of sigma",
                   bad, clock.elapsed, f"g=0..{gmax}")


def f_expansion_check(N: int, ps: Optional[PainleveSeries] = None) -> CheckResult:
    """f from the series inverse of x - q agrees with sum_j delta^j/(x - q0)^(j+1), delta = q - q0."""
    with timed() as clock:
        ps = ps if ps is not None else painleve_series(N // 2 + 1)
        lax = scalar_lax(N, ps)
        delta = _q_series(ps, N) - HSeries(0, [_Q0], N)
        explicit = HSeries(0, [0], N)
        power = HSeries(0, [1], N)
        for j in range(N // 2 + 1):
            explicit = explicit + power * ZRationalFn.node_power(-(j + 1))
            power = power * delta
        explicit = -explicit.shift(1).truncate(N)
        bad = None
        for k in range(N + 1):
            if explicit[k] != lax.f[k]:
                bad = (f"hbar^{k}", repr(explicit[k] - lax.f[k]))
                break
    return _result("wkb/f-expansion", "geometric expansion of f around x = q0",
                   bad, clock.elapsed, f"hbar^0..hbar^{N}")


def v_infty_check(N: int, cache) -> CheckResult:
    """For even m >= 2, the integral of P_m dx from the branch point equals the one from infinity.

    With x = z^2 - 2 q0 the branch point is z = 0 and the half-contour
    integral from -z to z is (A(z) - A(-z))/2 for any antiderivative A of
    P_m dx/dz.  This agrees with the integral from infinity exactly when A
    has only odd negative powers; both are compared with S_m.
    """
    from .openfe import principal_special

    with timed() as clock:
        hP = riccati_P(N)
        bad = None
        for m in range(2, N + 1, 2):
            density = hP[m].as_laurent() * CURVE.dx_dz
            anti: Dict[int, object] = {}
            for e, c in density.items():
                if e == -1:
                    bad = (f"m={m}", "logarithmic term in the integral of P_m")
                    break
                anti[e + 1] = c * Fraction(1, e + 1)
            if bad:
                break
            A = ZLaurentPoly(anti)
            half = (A - A.involution(0)) * Fraction(1, 2)
            from_infinity = A if all(e < 0 for e in anti) else None
            if from_infinity is None or half != from_infinity:
                bad = (f"m={m}", "integrals from the branch point and from infinity differ")
                break
            if half != principal_special(m, cache).value:
                bad = (f"m={m}", "integral of P_m differs from S_m")
                break
    return _result("wkb/v-infinity", "integrals of P_m from the branch point and from infinity agree",
                   bad, clock.elapsed, f"even m <= {N}")
