"""Verification layer: individual check results and the full identity suite."""

from .result import CheckResult, Report, combine, timed

__all__ = ["CheckResult", "Report", "combine", "timed", "run_all"]


def run_all(*args, **kwargs):
    from .suite import run_all as _run_all

    return _run_all(*args, **kwargs)
