from __future__ import annotations

from fractions import Fraction

import pytest

from p2cert.curvature.connection import UnitFrameCurvature
from p2cert.curvature.frame import compute_frame
from p2cert.metricdef.metric import build_p2_metric

GAMMA2_NUM = [2720, 4620, -5253, -9240, 5066, 4620, 374]


@pytest.fixture(scope="session")
def p2():
    return build_p2_metric()


@pytest.fixture(scope="session")
def frames(p2):
    return [compute_frame(p2, p) for p in range(p2.num_pieces)]


@pytest.fixture(scope="session")
def oracles(frames):
    return [UnitFrameCurvature(fr) for fr in frames]


@pytest.fixture(scope="session")
def certificate(p2):
    """The full leading-mode certificate (the expensive run, shared by all tests)."""
    from p2cert import certify
    return certify.verify(p2, certify.VerifyConfig())


def frac(s) -> Fraction:
    return Fraction(s)


def direct_N(vals, ders, k):
    """N_k straight from values and first derivatives of v at one point."""
    i, j = [x for x in range(3) if x != k]
    vi, vj, vk = vals[i], vals[j], vals[k]
    di, dj, dk = ders[i], ders[j], ders[k]
    return (-2 * dk / (vi * vj)
            + di / vi * (vi ** 2 + vk ** 2 - vj ** 2) / (vi * vj * vk)
            + dj / vj * (vj ** 2 + vk ** 2 - vi ** 2) / (vi * vj * vk))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
