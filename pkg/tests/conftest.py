import numpy as np
import pytest

from powerset_cnn.core import SetFunction, ShiftModel, cardinalities
from powerset_cnn.filtering import convolve_direct


def brute_force_operator(h, n, model):
    """Dense matrix of ``s -> h * s`` built column by column from the direct sum."""
    eye = np.eye(1 << n)
    return np.column_stack([convolve_direct(h, SetFunction.from_values(e), model).values
                            for e in eye])


def closed_form_forward(model, n):
    """Forward transform matrices written entrywise from subset relations."""
    size = 1 << n
    A = np.arange(size)[:, None]
    B = np.arange(size)[None, :]
    card = cardinalities(n)
    if model is ShiftModel.ABSORB:
        # F[A, B] = (-1)^|B| if B inside A
        return np.where((B & ~A) == 0, (-1.0) ** card[B], 0.0)
    if model is ShiftModel.UNION:
        # F[A, B] = (-1)^|B \ A| if A inside B
        return np.where((A & ~B) == 0, (-1.0) ** card[B & ~A], 0.0)
    return (-1.0) ** card[A & B]


def closed_form_response(model, n):
    """Frequency-response matrices written entrywise."""
    A = np.arange(1 << n)[:, None]
    B = np.arange(1 << n)[None, :]
    if model is ShiftModel.ABSORB:
        return ((A & B) == 0).astype(float)
    if model is ShiftModel.UNION:
        return ((B & ~A) == 0).astype(float)
    return (-1.0) ** cardinalities(n)[A & B]


@pytest.fixture
def rng():
    return np.random.default_rng(20191205)


@pytest.fixture(params=list(ShiftModel), ids=lambda m: m.name)
def model(request):
    return request.param


# one line per acceptance criterion, printed after the test run
ACCEPTANCE_LINES = {}


def record_criterion(number, passed, detail):
    status = {True: "PASS", False: "FAIL", None: "SKIP"}[passed]
    ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {status}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
