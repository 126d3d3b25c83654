import sys
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_euler_prim(rng, n, rho=(0.2, 5.0), u=(-2.0, 2.0), p=(0.1, 10.0)):
    """n admissible primitive states, sampled log-uniformly in rho and p."""
    r = np.exp(rng.uniform(np.log(rho[0]), np.log(rho[1]), n))
    v = rng.uniform(u[0], u[1], n)
    pr = np.exp(rng.uniform(np.log(p[0]), np.log(p[1]), n))
    return np.stack([r, v, pr], axis=-1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
