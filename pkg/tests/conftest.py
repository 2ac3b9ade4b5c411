import math

import numpy as np
import pytest

from relqng import _kernels

BACKENDS = [_kernels.python_backend]
try:
    from relqng import _ckernels
except ImportError:
    _ckernels = None
else:
    BACKENDS.append(_ckernels)


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernels(request):
    return request.param


@pytest.fixture(scope="session")
def env():
    from relqng.roof import solve_envelope

    return solve_envelope()


def family_matrix(p, r, theta, dim):
    m = np.zeros((dim, dim), dtype=complex)
    m[0, 0], m[1, 1] = 1 - p, p
    m[0, 1] = r * np.exp(1j * theta)
    m[1, 0] = np.conj(m[0, 1])
    return m


def binary_entropy(x):
    return -sum(v * math.log(v) for v in (x, 1 - x) if v > 0)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, title, ok, detail)``."""

    def record(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
