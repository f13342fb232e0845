import pytest

from bspec import BilinearForm, Field, PointSet
from bspec.engine import backend
from bspec.harness import SetFamily, generate_set


@pytest.fixture(params=sorted(backend.BACKENDS))
def kernel_backend(request):
    """Run the test once per available kernel backend."""
    previous = backend.active()
    backend.set_backend(request.param)
    yield request.param
    backend.set_backend(previous)


@pytest.fixture
def f3():
    return Field(3)


@pytest.fixture
def f5():
    return Field(5)


@pytest.fixture
def plane3(f3):
    return PointSet.full_space(f3, 2)


@pytest.fixture
def dot3(f3):
    return BilinearForm.identity(f3, 2)


def random_set(q, d, n, seed):
    return generate_set(SetFamily("random_uniform", {"n": n}, seed), Field(q), d)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for i, (ok, detail) in sorted(test_acceptance.RESULTS.items()):
            terminalreporter.write_line(test_acceptance.format_line(i, ok, detail))
