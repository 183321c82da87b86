import os
import time

from hypothesis import HealthCheck, settings

import helpers

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SUITE_BUDGET = 180.0
_start = time.perf_counter()


def pytest_sessionstart(session):
    global _start
    _start = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if not helpers.ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, label, ok in sorted(helpers.ACCEPTANCE, key=lambda r: r[0]):
        tr.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {label}")
    elapsed = time.perf_counter() - _start
    verdict = "PASS" if elapsed < SUITE_BUDGET else "FAIL"
    tr.write_line(f"criterion 10: {verdict}  full suite runtime {elapsed:.1f} s (budget {SUITE_BUDGET:.0f} s)")
