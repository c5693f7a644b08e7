"""Independent sympy implementation used only to produce expected values.

Everything is done with plain symbolic rational functions and sympy's
residue/series machinery, without any of the package's data structures.
"""

from functools import lru_cache
from itertools import combinations

import sympy as sp

q0 = sp.Symbol("q0", positive=True)
z = sp.Symbol("z")
x = sp.Symbol("x")
hb = sp.Symbol("hbar")
Z = sp.symbols("z1:9")


def y_of(u):
    return 2 * u * (u**2 - 3 * q0)


def kernel(u, z1):
    # -omega^{ubar-u}(z1) / (2 (y(u) - y(ubar)) dx(u)), as a multiple of dz1/du
    omega = sp.integrate(1 / (sp.Symbol("w") - z1) ** 2, (sp.Symbol("w"), u, -u))
    return sp.simplify(-omega / (2 * (y_of(u) - y_of(-u)) * 2 * u))


def _stable(g, n):
    return 2 * g - 2 + n >= 1 and n >= 1


@lru_cache(maxsize=None)
def W(g, n):
    """Coefficient of dz_1...dz_n in W_{g,n}(Z[0], ..., Z[n-1])."""
    vs = Z[:n]
    u = sp.Symbol("u")
    bar = lambda e: -e  # noqa: E731  (dz-bar = -dz)

    def w(gg, args):
        if (gg, len(args)) == (0, 2):
            return 1 / (args[0] - args[1]) ** 2
        sub = dict(zip(Z[: len(args)], args))
        return W(gg, len(args)).xreplace(sub) if sub else W(gg, len(args))

    rest = vs[1:]
    br = 0
    if (g, n) == (0, 3):
        br = w(0, (u, vs[1])) * bar(w(0, (-u, vs[2]))) + w(0, (u, vs[2])) * bar(w(0, (-u, vs[1])))
    elif (g, n) == (1, 1):
        br = bar(w(0, (u, -u)))
    else:
        for j in range(1, n):
            others = tuple(v for v in rest if v != vs[j])
            if _stable(g, n - 1):
                br += w(0, (u, vs[j])) * bar(w(g, (-u,) + others))
                br += bar(w(0, (-u, vs[j]))) * w(g, (u,) + others)
        if g >= 1 and _stable(g - 1, n + 1):
            br += bar(w(g - 1, (u, -u) + tuple(rest)))
        idx = list(range(len(rest)))
        for g1 in range(g + 1):
            for k in range(len(rest) + 1):
                for I in combinations(idx, k):
                    J = [i for i in idx if i not in I]
                    if _stable(g1, len(I) + 1) and _stable(g - g1, len(J) + 1):
                        a = w(g1, (u,) + tuple(rest[i] for i in I))
                        b = bar(w(g - g1, (-u,) + tuple(rest[i] for i in J)))
                        br += a * b
    return sp.factor(residue0(kernel(u, vs[0]) * br, u))


def residue0(expr, u):
    """Coefficient of u^-1 at u = 0, by power-series division num/(u^k D)."""
    num, den = sp.fraction(sp.together(expr))
    dp = sp.Poly(den, u)
    k = min(m[0] for m in dp.monoms())
    D = sp.Poly(sp.expand(den / u**k), u)
    if k == 0:
        return sp.Integer(0)
    need = k  # Taylor coefficients 0..k-1 of num/D
    nc = sp.Poly(num, u).all_coeffs()[::-1] + [0] * need
    dc = D.all_coeffs()[::-1] + [0] * need
    q = []
    for i in range(need):
        acc = nc[i] - sum(q[j] * dc[i - j] for j in range(i))
        q.append(sp.cancel(acc / dc[0]))
    return q[k - 1]


@lru_cache(maxsize=None)
def _half_integral(a):
    """(1/2) int_{-v}^{v} w^a dw as an expression in v."""
    w, v = sp.Symbol("w"), sp.Symbol("v")
    return sp.integrate(w**a, (w, -v, v)) / 2


def F_open(g, n):
    """(1/2^n) int_{-z_i}^{z_i} ... W_{g,n}, integrating monomial by monomial."""
    vs = Z[:n]
    poly = sp.Poly(sp.expand(W(g, n) * sp.Mul(*[v**40 for v in vs])), *vs)
    v = sp.Symbol("v")
    out = 0
    for exps, c in poly.terms():
        term = c
        for var, e in zip(vs, exps):
            term *= _half_integral(e - 40).xreplace({v: var})
        out += term
    return sp.factor(out)


def S(m):
    """Principal specialization sum_{2g-2+n=m-1} F_{g,n}(z..z)/n! for m >= 2."""
    total = 0
    for g in range(0, m // 2 + 2):
        n = m - 1 - 2 * g + 2
        if n >= 1 and _stable(g, n):
            total += F_open(g, n).xreplace({v: z for v in Z[:n]}) / sp.factorial(n)
    return sp.expand(total)


def closed_F(g):
    """(1/(2-2g)) Res_{z=0} Phi(z) W_{g,1}(z), Phi = int y dx."""
    phi = sp.Rational(4, 5) * z**5 - 4 * q0 * z**3
    return sp.simplify(residue0(phi * W(g, 1).xreplace({Z[0]: z}), z) / (2 - 2 * g))


def painleve(order):
    """q, p, sigma as polynomials in hbar through hbar^(2 order), from hbar^2 q'' = 6 q^2 + t."""
    t = sp.Symbol("t")
    # work with q0 as a function of t: q0^2 = -t/6
    qt = sp.sqrt(-t / 6)
    cs = sp.symbols(f"c0:{order + 1}")
    q = sum(cs[k] * hb ** (2 * k) * qt ** (1 - 5 * k) for k in range(order + 1))
    eq = sp.expand(hb**2 * sp.diff(q, t, 2) - 6 * q**2 - t)
    sol = {cs[0]: 1}
    for k in range(1, order + 1):
        coeff = eq.coeff(hb, 2 * k).xreplace(sol)
        sol[cs[k]] = sp.solve(sp.simplify(coeff), cs[k])[0]
    q = q.xreplace(sol)
    p = hb * sp.diff(q, t)
    H = p**2 / 2 - 2 * q**3 - t * q
    back = {t: -6 * q0**2}
    series = lambda e: [sp.simplify(sp.expand(e).coeff(hb, k).xreplace(back)) for k in range(2 * order + 1)]  # noqa: E731
    return series(q), series(p), series(H)


def riccati(N):
    """P_m in z through hbar^N from hbar^2 (P^2 + P') + f hbar P + g = 0, computed with sympy series."""
    qs, ps, sig = painleve(N // 2 + 1)
    qh = sum(qs[k] * hb**k for k in range(N + 2))
    ph = sum(ps[k] * hb**k for k in range(N + 2))
    X = z**2 - 2 * q0
    t = -6 * q0**2
    f = -hb / (X - qh)
    g = -(4 * X**3 + 2 * t * X + ph**2 - 4 * qh**3 - 2 * t * qh) + hb * ph / (X - qh)
    fs = sp.series(f, hb, 0, N + 2).removeO()
    gs = sp.series(g, hb, 0, N + 2).removeO()
    fc = [sp.together(fs.coeff(hb, k)) for k in range(N + 2)]
    gc = [sp.together(gs.coeff(hb, k)) for k in range(N + 2)]
    P = [2 * z**3 - 6 * q0 * z]
    dx = lambda e: sp.diff(e, z) / (2 * z)  # noqa: E731
    for m in range(N):
        k = m + 1
        acc = dx(P[m]) + gc[k]
        acc += sum(P[a] * P[k - a] for a in range(1, k))
        acc += sum(fc[c] * P[k - c] for c in range(1, k + 1))
        P.append(sp.factor(sp.cancel(-acc / (2 * P[0]))))
    return P
