"""Structural invariants checked over every cached object."""

from __future__ import annotations

from fractions import Fraction
from typing import List

from ..coeffring import CoeffElem, d_dt
from ..curve import CURVE, bergman_pair_expansion
from ..errors import InternalConsistencyError
from .result import CheckResult, timed


def _run(check_id: str, anchor: str, body) -> CheckResult:
    with timed() as clock:
        try:
            bad = body()
        except InternalConsistencyError as exc:
            bad = ("exception", str(exc))
    if bad:
        where, residual = bad
        return CheckResult(check_id, anchor, residual, where, clock.elapsed)
    return CheckResult(check_id, anchor, None, None, clock.elapsed)


def truncation_check(cache, extra: int = 4) -> CheckResult:
    """Recomputing every entry with all truncation orders raised leaves it unchanged."""
    from ..toprec import compute_W

    def body():
        for g, n in cache.keys():
            if compute_W(g, n, cache, extra=extra, store=False) != cache.require(g, n):
                return (f"(g,n)=({g},{n})", f"value changed with truncation +{extra}")
        return None

    return _run("property/truncation", "residues do not depend on truncation order", body)


def roundtrip_all(cache) -> CheckResult:
    from ..openfe import open_F

    def body():
        for g, n in cache.keys():
            if open_F(g, n, cache).differentiate() != cache.require(g, n):
                return (f"(g,n)=({g},{n})", "d/dz of F_{g,n} differs from W_{g,n}")
        return None

    return _run("property/roundtrip", "open free energies differentiate back to W_{g,n}", body)


def stored_invariants(cache) -> CheckResult:
    """Homogeneity, decay and monomial coefficients of every cached W_{g,n}."""

    def body():
        for g, n in cache.keys():
            cache.require(g, n).validate()
        return None

    return _run("property/w-structure", "cached W_{g,n} are homogeneous monomial tables", body)


def odd_cancellation(max_m: int = 40) -> CheckResult:
    """Odd powers cancel between the two Bergman squares (asserted inside)."""

    def body():
        table = bergman_pair_expansion(max_m)
        for m, v in table.items():
            if m % 2 or v != 2 * (m + 1):
                return (f"m={m}", f"unexpected coefficient {v}")
        return None

    return _run("property/odd-cancellation", "odd powers cancel in the Bergman pair expansion", body)


def curve_invariants() -> CheckResult:
    def body():
        bad = CURVE.check_invariants()
        if bad:
            return ("curve", "; ".join(bad))
        if CURVE.node_prefactor() != CoeffElem.monomial(Fraction(1, 24), -1):
            return ("node", "s/(dy/dz(s) dx/dz(s)) is not 1/(24 q0)")
        return None

    return _run("property/curve", "curve identities and the node prefactor", body)


def g_routes_and_s_freeness(cache, euler_max: int) -> CheckResult:
    """Both G-routes agree and every evaluation at z = s is s-free (asserted inside)."""
    from ..openfe import compute_E, compute_G
    from ..toprec import is_stable

    def body():
        for chi in range(1, euler_max + 1):
            for g in range(chi // 2 + 2):
                n = chi - 2 * g + 2
                if n < 1 or not is_stable(g, n):
                    continue
                compute_E(g, n, cache)
                if chi >= 2:
                    diff = compute_G(g, n, cache, "direct") - compute_G(g, n, cache, "node")
                    if not diff.is_zero():
                        return (f"(g,n)=({g},{n})", "G routes disagree")
        return None

    return _run("property/s-cancellation", "s-components cancel in E and G; G routes agree", body)


def p_purity(N: int) -> CheckResult:
    """P_m are Laurent polynomials in z with a single parity (m even: odd in z)."""
    from ..wkb import riccati_P

    def body():
        hP = riccati_P(N)
        for m in range(N + 1):
            pm = hP[m]
            if not pm.is_laurent():
                return (f"m={m}", "denominator is not a power of z")
            parities = {e % 2 for e, _ in pm.as_laurent().items()}
            if parities - {(m + 1) % 2}:
                return (f"m={m}", "mixed parity")
        return None

    return _run("property/p-purity", "P_m are Laurent polynomials of fixed parity", body)


def painleve_structure(N: int) -> CheckResult:
    from ..wkb import painleve_series

    def body():
        ps = painleve_series(N)
        bad = ps.check_structure()
        if bad:
            return ("q", "not a single q0-monomial of the expected degree: " + ", ".join(bad))
        for k in range(1, 2 * N, 2):
            if ps.sigma(k):
                return (f"hbar^{k}", "odd coefficient of sigma")
        return None

    return _run("property/q-structure", "q_(2k) = c q0^(1-5k); sigma is even in hbar", body)


def derivation_property(cache) -> CheckResult:
    """d/dt(a b) = a d/dt b + b d/dt a on pairs of cached coefficients."""

    def body():
        coeffs = []
        for g, n in cache.keys():
            for c in cache.require(g, n).terms.values():
                coeffs.append(c)
                if len(coeffs) >= 40:
                    break
        coeffs = coeffs[:40]
        for i, a in enumerate(coeffs):
            b = coeffs[(7 * i + 3) % len(coeffs)]
            if d_dt(a * b) != a * d_dt(b) + b * d_dt(a):
                return (f"pair {i}", "Leibniz rule fails")
        return None

    return _run("property/derivation", "the t-derivative is a derivation", body)


def closed_f_normalization(cache, gmax: int) -> CheckResult:
    """F_g for g >= 2 is a single negative power of q0 (no integration constant)."""
    from ..toprec import closed_F

    def body():
        for g in range(2, gmax + 1):
            v = closed_F(g, cache).value
            if not v.is_monomial() or v.max_exp() >= 0:
                return (f"g={g}", f"F_{g} = {v.text()}")
        return None

    return _run("property/fg-normalization", "F_g for g >= 2 carries no constant term", body)


def all_properties(cache, N: int, euler_max: int, gmax: int) -> List[CheckResult]:
    return [
        curve_invariants(),
        odd_cancellation(),
        stored_invariants(cache),
        truncation_check(cache),
        roundtrip_all(cache),
        g_routes_and_s_freeness(cache, min(euler_max, 4)),
        p_purity(max(N + 1, 2)),
        painleve_structure(max(N // 2 + 1, 2)),
        derivation_property(cache),
        closed_f_normalization(cache, gmax),
    ]
