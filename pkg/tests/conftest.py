import pytest

from hrlab.spectral import Params, compute_spectral, mu_star

N5_STAR = mu_star(5)


@pytest.fixture
def spec_n5():
    return compute_spectral(5, 1.0)


@pytest.fixture
def spec_n5_star():
    return compute_spectral(5, N5_STAR)


@pytest.fixture
def params_p8():
    return Params(5, 1.0, 0.0, 8.0)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])
