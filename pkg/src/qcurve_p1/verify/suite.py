"""The full verification suite.

Checks run in dependency order: the W-cache is filled first (single
threaded, lowest Euler characteristic first), then independent checks are
dispatched, optionally on a thread pool, and the Report is assembled in
check-id order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

from ..errors import CacheCorruptionError, DomainError
from ..toprec import WCache, is_stable, variation_check
from .properties import all_properties, curve_invariants
from .regressions import regression_checks
from .result import CheckResult, Report, combine

SUITES = ("all", "quantum-curve", "tau", "diff-rec", "variation", "appendix", "section4")


def _gn_with_chi(chi: int):
    for g in range(chi // 2 + 2):
        n = chi - 2 * g + 2
        if n >= 1 and (is_stable(g, n) or (g, n) == (0, 2)):
            yield g, n


def _stable_upto(lo: int, hi: int):
    for chi in range(lo, hi + 1):
        for g, n in _gn_with_chi(chi):
            if is_stable(g, n):
                yield g, n


def _plan(N: int, euler_max: int, gmax: int, suite: str, cache: WCache):
    """Return (tasks, skipped); each task yields a list of CheckResults."""
    from .. import openfe, wkb

    tasks: List[Tuple[str, Callable[[], List[CheckResult]]]] = []
    skipped: List[str] = []
    want = (lambda name: suite in ("all", name))
    semiclassical_only = N == 0

    if suite == "all":
        if semiclassical_only:
            tasks.append(("curve", lambda: [curve_invariants()]))
            skipped.append("regression: needs N >= 1")
        else:
            tasks.append(("regression", lambda: regression_checks(cache, N)))

    if want("quantum-curve"):
        tasks.append(("quantum-curve", lambda: [wkb.quantum_curve_check(N, cache)]))
        if semiclassical_only:
            skipped.append("wkb/dt-P, wkb/odd-even: need N >= 1")
        else:
            tasks.append(("dt-P", lambda: [wkb.podd_t_check(N)]))
            tasks.append(("odd-even", lambda: [wkb.odd_even_check(N)]))

    if want("tau"):
        tasks.append(("tau", lambda: [wkb.tau_check(gmax, cache)]))
        tasks.append(("asymptotics", lambda: [wkb.asymp_sigma_check(N)]))

    if want("diff-rec"):
        if semiclassical_only or euler_max < 2:
            skipped.append("diff-rec: needs N >= 1 and euler_max >= 2")
        else:
            def diffrec():
                parts = [openfe.diffrec_check(g, n, cache) for g, n in _stable_upto(2, euler_max)]
                return [combine("diff-rec", "differential recursion for open free energies", parts,
                                orders=f"2 <= 2g-2+n <= {euler_max}")]
            tasks.append(("diff-rec", diffrec))

    if want("variation"):
        if semiclassical_only:
            skipped.append("variation: needs N >= 1")
        else:
            def variation():
                w_parts = [variation_check(g, n, cache)
                           for chi in range(0, euler_max + 1) for g, n in _gn_with_chi(chi)]
                e_parts = [openfe.e_vs_dt_check(g, n, cache) for g, n in _stable_upto(1, euler_max)]
                return [
                    combine("variation/W", "t-derivative of W_{g,n} at fixed x", w_parts,
                            orders=f"0 <= 2g-2+n <= {euler_max}"),
                    combine("variation/E", "t-derivative of F_{g,n} at fixed x equals E_{g,n}", e_parts,
                            orders=f"1 <= 2g-2+n <= {euler_max}"),
                ]
            tasks.append(("variation", variation))

    if want("section4"):
        if semiclassical_only or euler_max < 2:
            skipped.append("section4: needs N >= 1 and euler_max >= 2")
        else:
            def section4():
                parts = [openfe.section4_checks(m, cache) for m in range(2, euler_max + 1)]
                return [combine("section4", "G/E principal-specialization identities", parts,
                                orders=f"2 <= m <= {euler_max}")]
            tasks.append(("section4", section4))

    if want("appendix"):
        if N < 2:
            skipped.append("appendix: the residue check needs N >= 2")
        else:
            tasks.append(("appendix", lambda: [wkb.jmu_tau_check(N)]))

    if suite == "all" and not semiclassical_only:
        tasks.append(("f-expansion", lambda: [wkb.f_expansion_check(N)]))
        tasks.append(("v-infinity", lambda: [wkb.v_infty_check(N, cache)]))
        tasks.append(("properties", lambda: all_properties(cache, N, euler_max, gmax)))
    elif suite == "all":
        skipped.append("properties, f-expansion, v-infinity: need N >= 1")
    return tasks, skipped


def run_all(N: int = 8, euler_max: int = 4, cache: Optional[WCache] = None, jobs: int = 1,
            gmax: Optional[int] = None, suite: str = "all") -> Report:
    """Run the selected checks and return a deterministic Report."""
    for name, v in (("N", N), ("euler_max", euler_max), ("jobs", jobs)):
        if not isinstance(v, int) or v < 0:
            raise DomainError(f"{name} must be a nonnegative integer")
    if jobs < 1:
        raise DomainError("jobs must be at least 1")
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    gmax = N // 2 if gmax is None else gmax
    if not isinstance(gmax, int) or gmax < 0:
        raise DomainError("gmax must be a nonnegative integer")
    cache = cache if cache is not None else WCache()

    # entries read from disk are recomputed before anything relies on them
    loaded = cache.loaded_keys()
    if loaded:
        bad = cache.audit(loaded)
        if bad:
            raise CacheCorruptionError(f"cache entries disagree with the recursion: {bad}")

    need = max(N, euler_max + 1, 2 * gmax - 1, 5 if suite == "all" and N else 1)
    cache.ensure_upto(need)

    tasks, skipped = _plan(N, euler_max, gmax, suite, cache)
    if jobs == 1:
        batches = [fn() for _, fn in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(lambda t: t[1](), tasks))
    checks = [c for batch in batches for c in batch]
    params = {"N": N, "euler_max": euler_max, "gmax": gmax, "suite": suite}
    return Report(params, checks, skipped)
