import sys
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))  # for the oracles module

from scalefree import primes

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

TIMINGS: dict[str, float] = {}


@pytest.fixture(scope="session")
def table_1m() -> primes.PrimeTable:
    return primes.build_table(10**6)


@pytest.fixture(scope="session")
def table_1e8() -> primes.PrimeTable:
    t0 = time.perf_counter()
    pt = primes.build_table(10**8, threads=4)
    TIMINGS["sieve_1e8_4threads"] = time.perf_counter() - t0
    return pt
