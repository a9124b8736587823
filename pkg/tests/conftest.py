import pytest

from isopoint import kernels

ACCEPTANCE: list[str] = []


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    prev = kernels.backend()
    kernels.use(request.param)
    yield request.param
    kernels.use(prev)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
