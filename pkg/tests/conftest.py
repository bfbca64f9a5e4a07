import os
import re

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_AC_RE = re.compile(r"test_acceptance\.py::test_ac(\d+)_(\w+)")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria (slow)")


def pytest_terminal_summary(terminalreporter):
    outcome = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            m = _AC_RE.search(getattr(rep, "nodeid", ""))
            if not m:
                continue
            if rep.when == "call" or rep.failed:
                outcome[rep.nodeid] = outcome.get(rep.nodeid, True) and rep.passed
    rows = {}
    for nodeid, ok in outcome.items():
        crit = int(_AC_RE.search(nodeid).group(1))
        rows[crit] = rows.get(crit, True) and ok
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(rows):
        terminalreporter.write_line(f"criterion {crit:2d}: {'PASS' if rows[crit] else 'FAIL'}")


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    from bmm import set_backend

    prev = set_backend(request.param)
    yield request.param
    set_backend(prev)
