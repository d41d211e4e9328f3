import pytest

from qfridge.baths import refrigerator_baths

# Reference parameter sets used across the suite.
ME_GAMMAS = (0.02, 0.08, 0.06)
NEGF_GAMMAS = (0.02, 0.02, 0.02)


@pytest.fixture
def fig3_baths():
    def make(delta_z=0.4, delta_T=0.3):
        return refrigerator_baths(2.0, 2.0, delta_z, ME_GAMMAS, 1.0, delta_T, 20.0)

    return make


@pytest.fixture
def fig9_baths():
    def make(delta_T=0.3, gamma_L=0.02, delta_z=0.2):
        return refrigerator_baths(2.0, 2.0, delta_z, (gamma_L, 0.02, 0.02), 1.0, delta_T, 7.0, "hot_left")

    return make


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Collect one summary line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])
    return lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=_criterion_order):
        terminalreporter.write_line(line)


def _criterion_order(line):
    label = line.split()[1].rstrip(":")
    digits = "".join(c for c in label if c.isdigit())
    return int(digits), label
