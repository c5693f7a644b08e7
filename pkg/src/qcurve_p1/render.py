"""Text, JSON and LaTeX renderings of coefficients and z-functions.

Orderings are deterministic: descending z-exponent, then descending
q0-exponent inside a coefficient.  The x-form renderer rewrites an
expression in z through z^2 = x + 2 q0 in the style
``(polynomial in x and q0) / (N q0^a (x+2q0)^(k/2))``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .coeffring import CoeffElem, CoeffFrac, coerce


def _coeff_text(c) -> str:
    c = coerce(c)
    return c.text()


def zpoly_text(p) -> str:
    """``(c) * z^e + ...`` with descending exponents."""
    if not p:
        return "0"
    parts = []
    for e in sorted((e for e, _ in p.items()), reverse=True):
        c = p.coefficient(e)
        parts.append(f"({_coeff_text(c)}) * z^{e}")
    return " + ".join(parts)


def zrat_text(f) -> str:
    if f.den.is_constant():
        return zpoly_text(f.num)
    return f"[{zpoly_text(f.num)}] / [{zpoly_text(f.den)}]"


def coeff_json(c):
    c = coerce(c)
    if isinstance(c, CoeffFrac):
        return c.to_json()
    return {"terms": c.to_json()}


def zpoly_json(p) -> list:
    return [
        {"exp": str(e), "coeff": coeff_json(p.coefficient(e))}
        for e in sorted((e for e, _ in p.items()), reverse=True)
    ]


def zrat_json(f) -> dict:
    return {"num": zpoly_json(f.num), "den": zpoly_json(f.den)}


# ---------------------------------------------------------------------------
# LaTeX
# ---------------------------------------------------------------------------

def _frac_latex(c: Fraction) -> str:
    if c.denominator == 1:
        return str(abs(c.numerator))
    return f"\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def _q0_latex(e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "q_0"
    return f"q_0^{{{e}}}"


def _var_latex(name: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return name
    return f"{name}^{{{e}}}"


def coeff_latex(c) -> str:
    c = coerce(c)
    if isinstance(c, CoeffFrac):
        return f"\\frac{{{coeff_latex(c.num)}}}{{{coeff_latex(c.den)}}}"
    if not c:
        return "0"
    out = []
    for i, e in enumerate(sorted(c.terms, reverse=True)):
        v = c.coefficient(e)
        sign = "-" if v < 0 else "+"
        body = _frac_latex(v) if (abs(v) != 1 or e == 0) else ""
        body = body + _q0_latex(e)
        out.append((("-" if v < 0 else "") if i == 0 else f" {sign} ") + body)
    return "".join(out)


def _split_common(terms: Dict[Tuple, Fraction]):
    """Pull out a positive integer content and common denominator from rational terms."""
    nums = [v.numerator for v in terms.values()]
    dens = [v.denominator for v in terms.values()]
    lcm = 1
    for d in dens:
        lcm = lcm * d // math.gcd(lcm, d)
    ints = {k: v * lcm for k, v in terms.items()}
    g = 0
    for v in ints.values():
        g = math.gcd(g, int(v))
    ints = {k: int(v) // g for k, v in ints.items()}
    return Fraction(g, lcm), ints


def _poly_latex(ints: Dict[Tuple[int, int], int], names=("z", "q_0")) -> str:
    """Render sum c * a^i * b^j, ordered by descending first exponent."""
    out = []
    for i, key in enumerate(sorted(ints, key=lambda k: (-k[0], k[1]))):
        v = ints[key]
        sign = "-" if v < 0 else "+"
        mono = _var_latex(names[1], key[1]) + _var_latex(names[0], key[0])
        body = str(abs(v)) if (abs(v) != 1 or not mono) else ""
        out.append((("-" if v < 0 else "") if i == 0 else f" {sign} ") + body + mono)
    return "".join(out) if out else "0"


def _laurent_to_terms(p) -> Dict[Tuple[int, int], Fraction]:
    terms = {}
    for e, c in p.items():
        c = coerce(c)
        if isinstance(c, CoeffFrac):
            raise ValueError("x-form rendering needs monomial q0 denominators")
        for qe, v in c.items():
            terms[(e, qe)] = v
    return terms


def laurent_latex(p, var: str = "z") -> str:
    """LaTeX for a Laurent polynomial in z as a single fraction.

    Writes ``(content) * N(z, q0) / (q0^a z^b)`` with integer numerator
    expanded in descending z-powers.
    """
    if not p:
        return "0"
    terms = _laurent_to_terms(p)
    zmin = min(k[0] for k in terms)
    qmin = min(k[1] for k in terms)
    shift_z = -zmin if zmin < 0 else 0
    shift_q = -qmin if qmin < 0 else 0
    content, ints = _split_common(terms)
    ints = {(k[0] + shift_z, k[1] + shift_q): v for k, v in ints.items()}
    lead_key = max(ints, key=lambda k: (k[0], -k[1]))
    if ints[lead_key] < 0:
        content = -content
        ints = {k: -v for k, v in ints.items()}
    num = _poly_latex(ints, (var, "q_0"))
    den_parts = []
    if content.denominator != 1:
        den_parts.append(str(content.denominator))
    den_parts.append(_q0_latex(shift_q))
    den_parts.append(_var_latex(var, shift_z))
    den = "".join(p for p in den_parts if p)
    sign = "-" if content < 0 else ""
    top = num if abs(content.numerator) == 1 else f"{abs(content.numerator)}\\left({num}\\right)"
    if len(ints) > 1 and abs(content.numerator) == 1 and den:
        top = num
    if not den:
        return f"{sign}{top}"
    return f"{sign}\\frac{{{top}}}{{{den}}}"


def zrat_latex(f) -> str:
    if f.den.is_constant():
        return laurent_latex(f.num)
    return f"\\frac{{{laurent_latex(f.num)}}}{{{laurent_latex(f.den)}}}"


# ---------------------------------------------------------------------------
# x-form: z^2 = x + 2 q0
# ---------------------------------------------------------------------------

def _binom_int(n: int, k: int) -> int:
    return math.comb(n, k)


def x_form(p) -> Tuple[Fraction, Dict[Tuple[int, int], int], int, int]:
    """Rewrite a parity-homogeneous Laurent polynomial in z into x-form.

    Returns ``(content, numerator, q0_power, half_power)`` meaning
    ``content * numerator(x, q0) * q0**q0_power * (x + 2 q0)**(half_power/2)``,
    where numerator is an integer polynomial keyed by (x-exponent, q0-exponent)
    with positive leading coefficient.
    """
    terms = _laurent_to_terms(p)
    parities = {k[0] % 2 for k in terms}
    if len(parities) != 1:
        raise ValueError("x-form needs a polynomial with only even or only odd z-powers")
    zmin = min(k[0] for k in terms)
    # p = z^zmin * sum c z^(e - zmin), e - zmin even, so sum is a polynomial in z^2 = x + 2q0
    poly: Dict[Tuple[int, int], Fraction] = {}
    for (e, qe), v in terms.items():
        m = (e - zmin) // 2
        # (x + 2 q0)^m = sum C(m,i) x^i (2 q0)^(m-i)
        for i in range(m + 1):
            key = (i, qe + m - i)
            poly[key] = poly.get(key, 0) + v * _binom_int(m, i) * 2 ** (m - i)
    poly = {k: v for k, v in poly.items() if v}
    qmin = min(k[1] for k in poly)
    poly = {(k[0], k[1] - qmin): v for k, v in poly.items()}
    content, ints = _split_common(poly)
    lead_key = max(ints, key=lambda k: (k[0], -k[1]))
    if ints[lead_key] < 0:
        content = -content
        ints = {k: -v for k, v in ints.items()}
    return content, ints, qmin, zmin


def x_form_latex(p) -> str:
    content, ints, qpow, half = x_form(p)
    num = _poly_latex(ints, ("x", "q_0"))
    if len(ints) > 1 and content.numerator not in (1, -1):
        num = f"{abs(content.numerator)}\\left({num}\\right)"
    elif content.numerator not in (1, -1):
        num = f"{abs(content.numerator)}{num}" if num != "1" else str(abs(content.numerator))
    sign = "-" if content < 0 else ""
    den_parts = []
    if content.denominator != 1:
        den_parts.append(str(content.denominator))
    if qpow < 0:
        den_parts.append(_q0_latex(-qpow))
    if half < 0:
        den_parts.append(_halfpow_latex(-half))
    tail = ""
    if qpow > 0:
        tail += _q0_latex(qpow)
    if half > 0:
        tail += _halfpow_latex(half)
    if tail:
        num = f"{num} {tail}" if num != "1" else tail
    if not den_parts:
        return f"{sign}{num}"
    return f"{sign}\\frac{{{num}}}{{{''.join(den_parts)}}}"


def _halfpow_latex(k: int) -> str:
    if k % 2 == 0:
        return "(x+2q_0)" if k == 2 else f"(x+2q_0)^{{{k // 2}}}"
    return f"(x+2q_0)^{{{k}/2}}"


def x_form_text(p) -> str:
    content, ints, qpow, half = x_form(p)
    parts = []
    for i, key in enumerate(sorted(ints, key=lambda k: (-k[0], k[1]))):
        v = ints[key]
        mono = "*".join(
            s for s in (
                f"x^{key[0]}" if key[0] > 1 else ("x" if key[0] == 1 else ""),
                f"q0^{key[1]}" if key[1] > 1 else ("q0" if key[1] == 1 else ""),
            ) if s
        )
        body = str(abs(v)) if not mono else (mono if abs(v) == 1 else f"{abs(v)}*{mono}")
        parts.append((("-" if v < 0 else "") if i == 0 else (" - " if v < 0 else " + ")) + body)
    num = "".join(parts)
    pieces = [f"({content})", f"({num})"]
    if qpow:
        pieces.append(f"q0^{qpow}")
    if half:
        pieces.append(f"(x+2*q0)^({half // 2})" if half % 2 == 0 else f"(x+2*q0)^({half}/2)")
    return " * ".join(pieces)


# ---------------------------------------------------------------------------
# several variables
# ---------------------------------------------------------------------------

def _mlaurent_terms(m) -> Dict[Tuple[int, ...], Fraction]:
    terms = {}
    for key, c in m.items():
        c = coerce(c)
        if isinstance(c, CoeffFrac):
            raise ValueError("multivariate rendering needs monomial q0 coefficients")
        for qe, v in c.items():
            terms[tuple(key) + (qe,)] = v
    return terms


def mlaurent_latex(m, form: bool = False) -> str:
    """``N(z_1..z_n, q0) / (c q0^a prod z_i^b)``, numerator ordered by descending total degree.

    With ``form=True`` the product dz_1 ... dz_n is appended.
    """
    n = m.nvars
    suffix = "".join(f"dz_{{{i + 1}}}" for i in range(n)) if form else ""
    if not m:
        return "0"
    terms = _mlaurent_terms(m)
    zshift = [max(0, -min(k[i] for k in terms)) for i in range(n)]
    qmin = min(k[n] for k in terms)
    qshift = -qmin if qmin < 0 else 0
    content, ints = _split_common(terms)
    ints = {tuple(k[i] + zshift[i] for i in range(n)) + (k[n] + qshift,): v for k, v in ints.items()}
    order = sorted(ints, key=lambda k: (-sum(k[:n]), [-e for e in k[:n]], k[n]))
    # keep the integer content in the numerator: one integer denominator only
    ints = {k: v * content.numerator for k, v in ints.items()}
    content = Fraction(1, content.denominator)
    if ints[order[0]] < 0:
        content = -content
        ints = {k: -v for k, v in ints.items()}
    parts = []
    for i, k in enumerate(order):
        v = ints[k]
        mono = _q0_latex(k[n]) + "".join(_var_latex(f"z_{{{j + 1}}}", k[j]) for j in range(n))
        body = str(abs(v)) if (abs(v) != 1 or not mono) else ""
        parts.append((("-" if v < 0 else "") if i == 0 else (" - " if v < 0 else " + ")) + body + mono)
    num = "".join(parts)
    den = ""
    if content.denominator != 1:
        den += str(content.denominator)
    den += _q0_latex(qshift)
    den += "".join(_var_latex(f"z_{{{j + 1}}}", zshift[j]) for j in range(n))
    sign = "-" if content < 0 else ""
    body = f"\\frac{{{num}}}{{{den}}}" if den else num
    return f"{sign}{body}" + (f" {suffix}" if suffix else "")


def mlaurent_text(m) -> str:
    """``(c) * z1^e1 * z2^e2 + ...`` in a deterministic order."""
    if not m:
        return "0"
    n = m.nvars
    table = {tuple(k): c for k, c in m.items()}
    out = []
    for k in sorted(table, key=lambda k: [-e for e in k]):
        c = coerce(table[k])
        mono = " * ".join(f"z{j + 1}^{k[j]}" for j in range(n) if k[j])
        out.append(f"({c.text()})" + (f" * {mono}" if mono else ""))
    return " + ".join(out)
