"""Ritt diagnostics of matrices, subordination checks and property suites."""

from .estimates import *  # noqa: F401,F403
from .estimates import __all__ as _est_all
from .suites import CheckResult, SuiteResult, SUITES, SUITE_NAMES, run_suite
from .verify import *  # noqa: F401,F403
from .verify import __all__ as _ver_all

__all__ = list(_est_all) + list(_ver_all) + [
    "CheckResult", "SuiteResult", "SUITES", "SUITE_NAMES", "run_suite"]
