"""Stable differentials W_{g,n} by topological recursion, and closed free energies.

A stable W_{g,n} is stored as a symmetric table

    W_{g,n} = sum_k c_k prod_i z_i^(-2 k_i) dz_i,   k sorted, every k_i >= 1,

and every coefficient is a single q0-monomial.  The exponent is fixed by
scaling: z has weight 1/2 relative to q0, W_{g,n} has total weight
-5(2g-2+n)/2, so c_k is proportional to q0^e with

    e = (2 sum(k) - n - 5 (2g - 2 + n)) / 2.

The recursion tracks exponents explicitly; the formula above is only used
to validate results and cache entries.

Recursion bookkeeping.  With the kernel density
K = sum_c kappa_c(z1) z^(2c-1) (see :func:`curve.kernel_factors`) and a
bracket B(z; z_2..z_n) = sum_k beta_k z^(-2k), the residue at z = 0 is
sum_k kappa_k beta_k.  In dz^2 units, using W(-z) = -W(z) for stable
entries, the bracket is

    - sum_j w_{g,n-1}(z, ..) [1/(z - z_j)^2 + 1/(z + z_j)^2]
    - w_{g-1,n+1}(z, z, ..)
    - sum_stable w_{g1}(z, z_I) w_{g2}(z, z_J).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
import threading
from collections import Counter, defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from .coeffring import CoeffElem, ZERO
from .curve import CURVE, bergman_pair_expansion, kernel_factors
from .errors import (
    CacheCorruptionError,
    DependencyError,
    DomainError,
    InsufficientTruncationError,
    InternalConsistencyError,
)
from .locpoly import MLaurent, RatM
from .zseries import ZLaurentPoly

__all__ = [
    "StableW",
    "ClosedF",
    "WCache",
    "compute_W",
    "closed_F",
    "dFg_dt",
    "variation_check",
    "homogeneity_exponent",
    "is_stable",
    "CACHE_VERSION",
]

CACHE_VERSION = 1

Key = Tuple[int, ...]


def is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 1 and 2 * g - 2 + n >= 1


def _check_stable(g: int, n: int) -> None:
    if not isinstance(g, int) or not isinstance(n, int) or not is_stable(g, n):
        raise DomainError(f"(g, n) = ({g}, {n}) is not in the stable range 2g-2+n >= 1, n >= 1")


def homogeneity_exponent(g: int, n: int, key: Iterable[int]) -> int:
    twice = 2 * sum(key) - n - 5 * (2 * g - 2 + n)
    if twice % 2:
        raise InternalConsistencyError(f"odd weight for key {tuple(key)} of W_{g},{n}")
    return twice // 2


def _distinct_perms(key: Key) -> List[Key]:
    out = [()]
    counts = Counter(key)
    total = len(key)

    def rec(prefix, counts, left):
        if not left:
            yield tuple(prefix)
            return
        for v in sorted(counts):
            if counts[v]:
                counts[v] -= 1
                prefix.append(v)
                yield from rec(prefix, counts, left - 1)
                prefix.pop()
                counts[v] += 1

    return list(rec([], counts, total)) if key else out


class StableW:
    """Symmetric coefficient table of a stable W_{g,n}; immutable after construction."""

    __slots__ = ("g", "n", "terms", "max_index", "_index1", "_index2")

    def __init__(self, g: int, n: int, terms: Dict[Key, CoeffElem]):
        _check_stable(g, n)
        self.g = g
        self.n = n
        self.terms = dict(terms)
        for k in self.terms:
            if len(k) != n or list(k) != sorted(k) or (k and k[0] < 1):
                raise InternalConsistencyError(f"W_{g},{n}: key {k} outside the basis")
        self.max_index = max((max(k) for k in self.terms), default=0)
        self._index1 = None
        self._index2 = None

    @property
    def chi(self) -> int:
        return 2 * self.g - 2 + self.n

    def pole_order(self) -> int:
        """Maximal pole order at z_i = 0 in any single variable."""
        return 2 * self.max_index

    def coefficient(self, key: Iterable[int]) -> CoeffElem:
        return self.terms.get(tuple(sorted(key)), ZERO)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StableW):
            return NotImplemented
        return (self.g, self.n, self.terms) == (other.g, other.n, other.terms)

    def __repr__(self) -> str:
        return f"StableW(g={self.g}, n={self.n}, {len(self.terms)} terms)"

    # -- views ------------------------------------------------------------
    def as_laurent(self) -> ZLaurentPoly:
        """For n = 1, the coefficient of dz as a Laurent polynomial in z."""
        if self.n != 1:
            raise DomainError("as_laurent is only defined for n = 1")
        return ZLaurentPoly({-2 * k[0]: c for k, c in self.terms.items()})

    def to_mlaurent(self, nvars: Optional[int] = None, slots: Optional[List[int]] = None) -> MLaurent:
        """Full (unsymmetrized) Laurent polynomial, variable i placed at slots[i]."""
        nvars = self.n if nvars is None else nvars
        slots = list(range(self.n)) if slots is None else slots
        terms = {}
        for key, c in self.terms.items():
            for perm in _distinct_perms(key):
                ek = [0] * nvars
                for s, v in zip(slots, perm):
                    ek[s] += -2 * v
                ek = tuple(ek)
                terms[ek] = terms[ek] + c if ek in terms else c
        return MLaurent(nvars, terms)

    def full_terms(self) -> Dict[Key, CoeffElem]:
        out = {}
        for key, c in self.terms.items():
            for perm in _distinct_perms(key):
                out[perm] = c
        return out

    def index1(self) -> Dict[Key, List[Tuple[int, int, Fraction]]]:
        """rest -> [(k, q0-exponent, rational)] for W(z, rest) with z carrying k."""
        if self._index1 is None:
            idx = defaultdict(list)
            for key, c in self.terms.items():
                (e, v), = c.items()
                for kz in sorted(set(key)):
                    lst = list(key)
                    lst.remove(kz)
                    idx[tuple(lst)].append((kz, e, v))
            self._index1 = dict(idx)
        return self._index1

    def index2(self) -> List[Tuple[Key, int, int, Fraction]]:
        """[(rest, a + b, exponent, rational)] summed over ordered value pairs (a, b)."""
        if self._index2 is None:
            out = []
            for key, c in self.terms.items():
                (e, v), = c.items()
                cnt = Counter(key)
                vals = sorted(cnt)
                for a in vals:
                    for b in vals:
                        if a == b and cnt[a] < 2:
                            continue
                        lst = list(key)
                        lst.remove(a)
                        lst.remove(b)
                        out.append((tuple(lst), a + b, e, v))
            self._index2 = out
        return self._index2

    # -- validation -------------------------------------------------------
    def validate(self) -> None:
        """Structural checks: monomial coefficients with the scaling exponent, decay bound."""
        chi = self.chi
        for key, c in self.terms.items():
            if not c.is_monomial():
                raise InternalConsistencyError(f"W_{self.g},{self.n}{key}: coefficient {c!r} is not a q0-monomial")
            (e, _), = c.items()
            if e != homogeneity_exponent(self.g, self.n, key):
                raise InternalConsistencyError(f"W_{self.g},{self.n}{key}: q0-exponent {e} breaks scaling")
            if e > -chi:
                raise InternalConsistencyError(f"W_{self.g},{self.n}{key}: q0-exponent {e} exceeds decay bound {-chi}")

    # -- persistence --------------------------------------------------------
    def to_json(self) -> list:
        return [
            {"k": [str(i) for i in key], "coeff": {"terms": self.terms[key].to_json()}}
            for key in sorted(self.terms)
        ]

    @classmethod
    def from_json(cls, g: int, n: int, data: list) -> "StableW":
        terms = {}
        for item in data:
            key = tuple(int(i) for i in item["k"])
            terms[key] = CoeffElem.from_json(item["coeff"]["terms"])
        return cls(g, n, terms)


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

class WCache:
    """Insert-once store of StableW keyed by (g, n), optionally backed by a JSON file.

    Readers only ever see complete entries: an entry is published under the
    lock after it has been fully built and validated.
    """

    def __init__(self, path: Optional[str] = None, load: bool = True):
        self.path = path
        self._data: Dict[Tuple[int, int], StableW] = {}
        self._lock = threading.RLock()
        self._dirty = False
        self._memo: Dict[object, object] = {}
        self._loaded: set = set()
        if path and load and os.path.exists(path):
            self.load(path)

    def __contains__(self, gn) -> bool:
        return tuple(gn) in self._data

    def keys(self):
        with self._lock:
            return sorted(self._data)

    def get(self, g: int, n: int) -> Optional[StableW]:
        return self._data.get((g, n))

    def require(self, g: int, n: int) -> StableW:
        w = self._data.get((g, n))
        if w is None:
            raise DependencyError(f"W_{g},{n} is not in the cache")
        return w

    def insert(self, w: StableW) -> StableW:
        with self._lock:
            old = self._data.get((w.g, w.n))
            if old is not None:
                if old != w:
                    raise InternalConsistencyError(f"conflicting values for W_{w.g},{w.n}")
                return old
            self._data[(w.g, w.n)] = w
            self._dirty = True
            return w

    def memo(self, key, build):
        """Memoize a value derived from cached entries (open free energies, S_m, ...)."""
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = build()
        with self._lock:
            return self._memo.setdefault(key, value)

    def ensure(self, g: int, n: int) -> StableW:
        """Return W_{g,n}, computing it and its dependencies if needed."""
        return compute_W(g, n, self)

    def ensure_upto(self, chi_max: int, g_max: Optional[int] = None) -> None:
        for chi in range(1, chi_max + 1):
            for g in range(0, chi // 2 + 2):
                n = chi - 2 * g + 2
                if n >= 1 and (g_max is None or g <= g_max):
                    self.ensure(g, n)

    # -- persistence --------------------------------------------------------
    def to_json(self) -> dict:
        with self._lock:
            return {
                "version": CACHE_VERSION,
                "entries": {f"{g},{n}": self._data[(g, n)].to_json() for g, n in sorted(self._data)},
            }

    def save(self, path: Optional[str] = None) -> None:
        path = path or self.path
        if not path:
            raise DomainError("no cache path configured")
        doc = self.to_json()
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(prefix=".wcache-", suffix=".json", dir=directory)
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
            os.chmod(tmp, 0o644)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self._dirty = False

    def load(self, path: str) -> None:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, ValueError) as exc:
            raise CacheCorruptionError(f"cannot read cache {path}: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("version") != CACHE_VERSION:
            raise CacheCorruptionError(f"cache {path}: unsupported or missing version")
        entries = doc.get("entries", {})
        for name, data in entries.items():
            try:
                g, n = (int(x) for x in name.split(","))
                w = StableW.from_json(g, n, data)
                w.validate()
            except (InternalConsistencyError, DomainError, KeyError, ValueError, TypeError) as exc:
                raise CacheCorruptionError(f"cache {path}: entry {name} failed validation: {exc}") from exc
            with self._lock:
                self._data[(g, n)] = w
                self._loaded.add((g, n))
        self._dirty = False

    @property
    def dirty(self) -> bool:
        return self._dirty

    def loaded_keys(self) -> List[Tuple[int, int]]:
        """Entries that came from disk rather than from this process."""
        return sorted(self._loaded)

    def audit(self, keys: Optional[Iterable[Tuple[int, int]]] = None) -> List[Tuple[int, int]]:
        """Recompute entries from scratch and return those that disagree."""
        fresh = WCache()
        bad = []
        for g, n in sorted(keys if keys is not None else self.keys()):
            if self.require(g, n) != compute_W(g, n, fresh):
                bad.append((g, n))
        return bad


# ---------------------------------------------------------------------------
# recursion
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _split_multiplicity(r: Key, part: Key) -> int:
    cr = Counter(r)
    cp = Counter(part)
    out = 1
    for v, m in cp.items():
        out *= math.comb(cr[v], m)
    return out


def _insert_sorted(rest: Key, v: int) -> Key:
    lst = list(rest)
    i = 0
    while i < len(lst) and lst[i] < v:
        i += 1
    lst.insert(i, v)
    return tuple(lst)


def _bracket(g: int, n: int, cache: WCache, extra: int):
    """Bracket coefficients beta[rest][k] as {(q0-exponent): rational} accumulators."""
    beta: Dict[Key, Dict[int, Dict[int, Fraction]]] = defaultdict(lambda: defaultdict(dict))

    def push(rest, k, e, val):
        d = beta[rest][k]
        d[e] = d.get(e, 0) + val

    if (g, n) == (1, 1):
        # w_{0,2}(z, -z) in dz^2 units: d(-z) dz / (2z)^2 = -1/(4 z^2)
        push((), 1, 0, Fraction(-1, 4))
        return beta
    if (g, n) == (0, 3):
        # -[1/((z - z2)^2 (z + z3)^2) + 1/((z + z2)^2 (z - z3)^2)], each square expanded separately
        order = 1 + extra
        acc: Dict[Tuple[int, int, int], Fraction] = defaultdict(Fraction)
        for m2 in range(order):
            for m3 in range(order - m2):
                c_minus2, c_plus2 = m2 + 1, (m2 + 1) * (-1) ** m2
                c_minus3, c_plus3 = m3 + 1, (m3 + 1) * (-1) ** m3
                acc[(m2 + m3, m2, m3)] -= c_minus2 * c_plus3 + c_plus2 * c_minus3
        for (ez, m2, m3), v in acc.items():
            # only z^0 reaches the residue (the kernel starts at z^-1); above it,
            # terms odd in both z2 and z3 are genuinely present
            if ez > 0 or not v:
                continue
            if m2 % 2 or m3 % 2:
                raise InternalConsistencyError("odd powers of z_j survived in the W_0,3 bracket")
            if ez % 2 == 0:
                push(tuple(sorted((m2 // 2 + 1, m3 // 2 + 1))), -ez // 2, 0, v)
        return beta

    # (a) terms with the Bergman kernel
    if n >= 2 and is_stable(g, n - 1):
        src = cache.require(g, n - 1)
        pair = bergman_pair_expansion(2 * src.max_index + 1 + extra)
        for rest1, lst in src.index1().items():
            for kz, e, c in lst:
                for m, pc in pair.items():
                    if m > 2 * kz:
                        continue
                    v = m // 2 + 1
                    r = _insert_sorted(rest1, v)
                    mult = r.count(v)
                    push(r, kz - m // 2, e, -c * pc * mult)
    # (b) genus-reducing term
    if g >= 1 and is_stable(g - 1, n + 1):
        src = cache.require(g - 1, n + 1)
        for rest, kk, e, c in src.index2():
            push(rest, kk, e, -c)
    # (c) products over stable splittings of genus and of the variables z_2..z_n
    m = n - 1
    parts = []
    for g1 in range(g + 1):
        for n1 in range(m + 1):
            g2, n2 = g - g1, m - n1
            if is_stable(g1, n1 + 1) and is_stable(g2, n2 + 1):
                parts.append(((g1, n1), (g2, n2)))
    for (g1, n1), (g2, n2) in parts:
        if (g1, n1) > (g2, n2):
            continue
        weight = 1 if (g1, n1) == (g2, n2) else 2
        idx1 = cache.require(g1, n1 + 1).index1()
        idx2 = cache.require(g2, n2 + 1).index1()
        for rest1, lst1 in idx1.items():
            for rest2, lst2 in idx2.items():
                r = tuple(sorted(rest1 + rest2))
                mult = _split_multiplicity(r, rest1) * weight
                d = beta[r]
                for a, e1, c1 in lst1:
                    for b, e2, c2 in lst2:
                        dd = d[a + b]
                        e = e1 + e2
                        dd[e] = dd.get(e, 0) - c1 * c2 * mult
    return beta


def compute_W(g: int, n: int, cache: Optional[WCache] = None, extra: int = 0, store: bool = True) -> StableW:
    """Compute W_{g,n} by the recursion, using and filling ``cache``.

    ``extra`` raises every truncation order used during assembly; results
    must not depend on it.
    """
    _check_stable(g, n)
    if cache is None:
        cache = WCache()
    if extra == 0:
        hit = cache.get(g, n)
        if hit is not None:
            return hit
    # dependencies, lowest first
    if n >= 2 and is_stable(g, n - 1):
        compute_W(g, n - 1, cache)
    if g >= 1 and is_stable(g - 1, n + 1):
        compute_W(g - 1, n + 1, cache)
    for g1 in range(g + 1):
        for n1 in range(n):
            if is_stable(g1, n1 + 1) and (g1, n1 + 1) != (g, n):
                if 2 * g1 - 2 + n1 + 1 < 2 * g - 2 + n:
                    compute_W(g1, n1 + 1, cache)

    beta = _bracket(g, n, cache, extra)
    kmax = 0
    for ks in beta.values():
        if ks:
            kmax = max(kmax, max(ks))
    # the integrand kernel * bracket has a pole of order 2 kmax + 1 at z = 0
    order = 2 * kmax + 1 + 2 + extra
    kf = kernel_factors(order)
    if len(kf) <= kmax:
        raise InsufficientTruncationError(f"kernel truncated below the bracket pole order for W_{g},{n}")

    # residue: W(z1, r) = sum_k kappa_k(z1) beta_k(r), every z1 index kept
    full: Dict[Tuple[int, Key], Dict[int, Fraction]] = defaultdict(dict)
    for r, ks in beta.items():
        for k, coeffs in ks.items():
            for e, v in coeffs.items():
                if not v:
                    continue
                for b, kc in kf[k].items():
                    (ke, kv), = kc.items()
                    d = full[(b + 1, r)]
                    d[e + ke] = d.get(e + ke, 0) + kv * v

    terms: Dict[Key, CoeffElem] = {}
    seen: Dict[Key, CoeffElem] = {}
    for (k1, r), coeffs in full.items():
        c = CoeffElem({e: v for e, v in coeffs.items() if v})
        key = tuple(sorted((k1,) + r))
        if key in seen:
            if seen[key] != c:
                raise InternalConsistencyError(
                    f"W_{g},{n} is not symmetric at {key}: {seen[key]!r} vs {c!r}"
                )
        else:
            seen[key] = c
    # every representative (value at z1, rest) of a sorted key must be present or zero
    for key, c in seen.items():
        for v in set(key):
            lst = list(key)
            lst.remove(v)
            rep = full.get((v, tuple(lst)))
            rc = CoeffElem({e: x for e, x in rep.items() if x}) if rep else ZERO
            if rc != c:
                raise InternalConsistencyError(f"W_{g},{n} is not symmetric at {key}")
        if c:
            terms[key] = c
    w = StableW(g, n, terms)
    w.validate()
    if store and extra == 0:
        w = cache.insert(w)
    return w


# ---------------------------------------------------------------------------
# closed free energies
# ---------------------------------------------------------------------------

class ClosedF:
    """Closed free energy F_g.

    For g >= 2 ``value`` is a CoeffElem.  F_0 and F_1 are stored data;
    F_1 = -(1/24) log(-3 q0) is kept as a symbolic record whose t-derivative
    is the CoeffElem 1/(288 q0^2).
    """

    __slots__ = ("g", "value", "log_coeff", "log_arg")

    def __init__(self, g: int, value: Optional[CoeffElem] = None, log_coeff: Fraction = Fraction(0), log_arg: Optional[CoeffElem] = None):
        self.g = g
        self.value = value if value is not None else ZERO
        self.log_coeff = Fraction(log_coeff)
        self.log_arg = log_arg

    def d_dt(self) -> CoeffElem:
        out = self.value.d_dt()
        if self.log_coeff:
            # d/dt log(c q0^a) = a (dq0/dt) / q0 = -a / (12 q0^2)
            (a, _), = self.log_arg.items()
            out = out + CoeffElem.monomial(self.log_coeff * Fraction(-a, 12), -2)
        return out

    def is_log(self) -> bool:
        return bool(self.log_coeff)

    def text(self) -> str:
        if self.log_coeff:
            arg = self.log_arg
            (a, c), = arg.items()
            inner = f"{c} * q0^{a}" if a != 1 else f"{c} * q0"
            return f"{self.log_coeff} * log({inner})"
        return self.value.text()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosedF):
            return NotImplemented
        return (self.g, self.value, self.log_coeff, self.log_arg) == (other.g, other.value, other.log_coeff, other.log_arg)

    def __repr__(self) -> str:
        return f"ClosedF(g={self.g}, {self.text()})"


F0 = ClosedF(0, CoeffElem.monomial(Fraction(-48, 5), 5))
F1 = ClosedF(1, None, Fraction(-1, 24), CoeffElem.monomial(-3, 1))


def closed_F(g: int, cache: Optional[WCache] = None) -> ClosedF:
    """F_g = (1/(2-2g)) Res_{z=0} Phi(z) W_{g,1}(z) for g >= 2; stored data for g = 0, 1."""
    if not isinstance(g, int) or g < 0:
        raise DomainError("genus must be a nonnegative integer")
    if g == 0:
        return F0
    if g == 1:
        return F1
    cache = cache if cache is not None else WCache()
    w = compute_W(g, 1, cache)
    # Phi = (4/5) z^5 - 4 q0 z^3 pairs with the z^-6 and z^-4 coefficients
    res = ZERO
    for e, c in CURVE.phi_of_z.items():
        res = res + c * w.coefficient(((e + 1) // 2,))
    val = res / (2 - 2 * g)
    for e in val.terms:
        if e >= 0:
            raise InternalConsistencyError(f"F_{g} has a non-negative q0-exponent {e}")
    return ClosedF(g, val)


def dFg_dt(g: int, cache: Optional[WCache] = None) -> CoeffElem:
    """dF_g/dt = -Res_{z=oo} z W_{g,1}(z), i.e. the z^-2 coefficient of W_{g,1}."""
    if not isinstance(g, int) or g < 1:
        raise DomainError("dFg_dt needs g >= 1")
    cache = cache if cache is not None else WCache()
    return compute_W(g, 1, cache).coefficient((1,))


# ---------------------------------------------------------------------------
# variation formula
# ---------------------------------------------------------------------------

def _x_density(w: RatM) -> RatM:
    """Divide a dz-density by prod (2 z_i), giving the dx-density."""
    num = w.num
    for i in range(w.nvars):
        num = num.shift(i, -1)
    return RatM(num * Fraction(1, 2 ** w.nvars), w.den)


def variation_sides(g: int, n: int, cache: WCache) -> Tuple[RatM, RatM]:
    """Both sides of d/dt W_{g,n} = -2 Res_{x_{n+1}=oo} z W_{g,n+1} in x-densities."""
    if n < 1 or 2 * g - 2 + n < 0:
        raise DomainError(f"variation formula needs 2g-2+n >= 0, got ({g}, {n})")
    if (g, n) == (0, 2):
        # W_{0,2} is not a stable table; its x-density is differentiated by hand
        lhs = _w02_variation()
    else:
        if cache.get(g, n) is None:
            raise DependencyError(f"W_{g},{n} is not in the cache")
        w = cache.require(g, n)
        lhs = _x_density(RatM(w.to_mlaurent())).dt_x()
    if cache.get(g, n + 1) is None:
        raise DependencyError(f"W_{g},{n + 1} is not in the cache")
    w1 = cache.require(g, n + 1)
    # -2 Res_{x=oo} z W dx-form = -Res_{z=oo} z w(z) dz = z^-2 coefficient of w
    terms = {}
    for key, c in w1.full_terms().items():
        if key[-1] == 1:
            ek = tuple(-2 * k for k in key[:-1])
            terms[ek] = c
    rhs = _x_density(RatM(MLaurent(n, terms)))
    return lhs, rhs


def _w02_variation() -> RatM:
    # h = 1/(4 u v (u - v)^2) with u = z1, v = z2 and du/dt = -1/(12 q0 u) at fixed x:
    # d log h/dt = -u'/u - v'/v - 2 (u' - v')/(u - v)
    #            = (1/(12 q0)) (1/u^2 + 1/v^2 - 2/(u v)) = (u - v)^2 / (12 q0 u^2 v^2),
    # so dh/dt = 1/(48 q0 u^3 v^3).
    return RatM(MLaurent(2, {(-3, -3): CoeffElem.monomial(Fraction(1, 48), -1)}))


def variation_check(g: int, n: int, cache: WCache):
    """Check the variation formula for W_{g,n}; returns a CheckResult."""
    from .verify.result import CheckResult, timed

    with timed() as clock:
        lhs, rhs = variation_sides(g, n, cache)
        diff = lhs - rhs
    residual = None if diff.is_zero() else repr(diff.reduce())
    return CheckResult(
        f"variation/W/{g},{n}",
        "t-derivative of W_{g,n} at fixed x equals the z^-2 coefficient of W_{g,n+1}",
        residual=residual,
        where=f"(g,n)=({g},{n})",
        elapsed=clock.elapsed,
    )
