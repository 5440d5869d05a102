"""Shared fixtures; the long Monte Carlo stream is session-scoped so the
convergence criterion and the statistics tests pay for it once."""

import time
from typing import NamedTuple

import pytest

import atomslit as al

# frozen parameters of the long reference run (standard geometry, equal
# drives 0.3): ~1.0e6 clicks at the stationary rate 0.1525
LONG_RUN_SEED = 20260823
LONG_RUN_DURATION = 6.6e6
LONG_RUN_DT = 0.01
LONG_RUN_BURN_IN = 20.0


class TimedStream(NamedTuple):
    stream: al.ClickStream
    build_seconds: float


@pytest.fixture(scope="session")
def standard_cfg():
    return al.standard_config()


@pytest.fixture(scope="session")
def long_stream(standard_cfg):
    """About 10^6 detector clicks; takes a couple of minutes once per session."""
    t0 = time.perf_counter()
    stream = al.run_trajectory(standard_cfg, duration=LONG_RUN_DURATION,
                               dt=LONG_RUN_DT, seed=LONG_RUN_SEED)
    return TimedStream(stream, time.perf_counter() - t0)
