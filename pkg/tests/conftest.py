import math
import sys

import numpy as np
import pytest

from twoframe import random_frame, tightness_frame, validate_frame


@pytest.fixture
def identity2():
    return validate_frame([[1.0, 0.0], [0.0, 1.0]])


@pytest.fixture
def tight4():
    return tightness_frame(4)


def rotation_array(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@pytest.fixture(params=[2, 3, 5, 17, 64])
def rand_frame(request):
    return random_frame(request.param, 1000 + request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key, (ok, detail) in results.items():
        terminalreporter.write_line("%s %s: %s" % ("PASS" if ok else "FAIL", key, detail))
