import sys

import numpy as np
import pytest
from hypothesis import settings

from advverify.grid import make_irregular, make_regular, make_tiled_irregular

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(params=["regular", "random", "tiled"])
def any_grid(request):
    if request.param == "regular":
        return make_regular(16)
    if request.param == "random":
        return make_irregular(16, seed=7, perturb_fraction=0.3)
    return make_tiled_irregular(16, seed=3, perturb_fraction=0.3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for line in results:
        terminalreporter.write_line(line)
