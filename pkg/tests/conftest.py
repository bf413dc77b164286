import pytest

from gapsolitons.medium import MediumParams
from gapsolitons.rapidity import AtomChainParams, taylor_ab

# Reference parameter set used throughout: gap (1, 2), transition at 1.5.
OMEGA_PERP, OMEGA_PAR, OMEGA12, BETA = 1.0, 2.0, 1.5, 0.01

# Frozen finite-difference oracles (plain formulas, step 1e-6; see test_medium / test_rapidity)
KAPPA_PRIME_FD_15 = -2.4678504235708942
PHI_SLOPE_FD_15 = 2.2154156881781795
PHI_15 = 0.4024544070135794


@pytest.fixture
def med():
    return MediumParams(OMEGA_PERP, OMEGA_PAR)


@pytest.fixture
def atoms():
    return AtomChainParams(omega12=OMEGA12, beta=BETA, gamma=BETA * OMEGA12, rho=1.0)


@pytest.fixture
def ab(med, atoms):
    return taylor_ab(med, atoms)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
