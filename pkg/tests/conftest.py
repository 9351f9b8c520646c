import numpy as np
import pytest

from mdsarray import build, encode_systematic
from mdsarray.codec import random_message

# one desk-scale instance per construction family
INSTANCES = [
    ("C1", 5, 3, None),
    ("C2", 5, 2, 3),
    ("C3", 4, 2, None),
    ("C4", 5, 3, None),
    ("C5", 5, 3, 4),
    ("C6", 4, 2, None),
    ("C7", 5, 3, 4),
]


@pytest.fixture(scope="session", params=INSTANCES,
                ids=[i[0] for i in INSTANCES])
def instance(request):
    cons, n, k, d = request.param
    spec = build(cons, n, k, d=d)
    rng = np.random.default_rng(12345)
    message = random_message(spec, rng)
    cw = encode_systematic(spec, message)
    return spec, message, cw


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One verdict line per acceptance criterion at the end of the run."""
    try:
        from tests.test_acceptance import CRITERIA
    except ImportError:
        from test_acceptance import CRITERIA
    verdicts = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            location = getattr(rep, "location", None)
            if not location:
                continue
            name = location[2].split("[")[0]
            if name in CRITERIA:
                ok = outcome == "passed" and verdicts.get(name, True)
                verdicts[name] = ok
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, (num, desc) in sorted(CRITERIA.items(), key=lambda kv: kv[1]):
        if name not in verdicts:
            continue
        word = "PASS" if verdicts[name] else "FAIL"
        terminalreporter.write_line(f"criterion {num} ({desc}): {word}")
