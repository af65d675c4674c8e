import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

VERDICTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def verdict():
    """Record one acceptance line; the summary is printed after the run."""

    def record(number: int, ok: bool, detail: str) -> bool:
        VERDICTS[number] = (bool(ok), detail)
        return bool(ok)

    return record


@pytest.fixture(scope="session")
def full_sweeps():
    """100-point sweeps and hardest instances for every NNS kind, computed once."""
    from codesieve.costmodel import NNS_KINDS
    from codesieve.optimizer import hardest, sweep

    out, t0 = {}, time.perf_counter()
    for kind in NNS_KINDS:
        curve = sweep(kind, 100)
        w, r = hardest(kind, curve=curve)
        out[kind] = (curve, w, r)
    out["seconds"] = time.perf_counter() - t0
    return out


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(VERDICTS):
        ok, detail = VERDICTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
