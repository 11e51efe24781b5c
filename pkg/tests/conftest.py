import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from weylrbm import rootsys, weyl

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FAMILIES = [str(s) for s in rootsys.family_matrix()]
RANK2 = ["orth2", "B2", "I2(3)", "I2(5)", "I2(6)"]


@pytest.fixture(scope="session")
def systems():
    cache = {}

    def get(name):
        if name not in cache:
            rs = rootsys.build_root_system(name)
            cache[name] = (rs, rootsys.gram_data(rs), weyl.enumerate_group(rs))
        return cache[name]
    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    n_pass = sum(line.startswith("PASS") for line in lines)
    terminalreporter.write_line(f"{n_pass}/{len(lines)} criteria pass")
