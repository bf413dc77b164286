
import pytest
from hypothesis import given, settings, strategies as st

from gapsolitons.errors import ConsistencyError, OutOfGapError, RangeError
from gapsolitons.medium import Band, MediumParams, Side
from gapsolitons.rapidity import (AtomChainParams, RapidityMode, invert_rapidity, phi, rapidity,
                                  rapidity_derivative, real_rapidity, taylor_ab,
                                  upper_branch_turning_point)

from conftest import PHI_15, PHI_SLOPE_FD_15

M = MediumParams(1.0, 2.0)
A = AtomChainParams(omega12=1.5, beta=0.01)

# Finite-difference oracles of h(xi) = (xi - 1.5) / (xi n^3), step 1e-6, from plain formulas
HPRIME_FD = {0.5: 0.8228730156850661, 3.0: -0.3457423575214946}


def test_reference_rapidities():
    assert real_rapidity(0.5, M, A) == pytest.approx(-0.1788854, abs=1e-7)
    assert real_rapidity(3.0, M, A) == pytest.approx(1.0119288, abs=1e-7)
    # printed reference value is truncated at 7 digits
    assert phi(1.5, M) == pytest.approx(0.4024543, abs=5e-7)
    assert phi(1.5, M) == pytest.approx(1 / (1.5 * 1.4 ** 1.5), rel=1e-14)


def test_complex_rapidity_matches_real_on_bands():
    for xi in (0.5, 3.0):
        h = rapidity(complex(xi, 0.0), Side.UpperHalfPlane, M, A)
        assert h.imag == pytest.approx(0.0, abs=1e-14)
        assert h.real == pytest.approx(real_rapidity(xi, M, A), abs=1e-14)


@pytest.mark.parametrize("xi", [0.5, 3.0])
def test_derivative_against_fd_oracle(xi):
    assert rapidity_derivative(xi, M, A) == pytest.approx(HPRIME_FD[xi], rel=1e-8)


def test_taylor_ab():
    ab = taylor_ab(M, A)
    assert ab.a == pytest.approx(PHI_15, rel=1e-14)
    assert ab.b == pytest.approx(PHI_SLOPE_FD_15, rel=1e-8)


def test_taylor_ab_needs_gap_transition():
    with pytest.raises(OutOfGapError):
        taylor_ab(M, AtomChainParams(omega12=0.5, beta=0.01))


def test_linear_gap_behaviour():
    # h(omega12 + i0 + d) ~ i a d on the upper sheet
    ab = taylor_ab(M, A)
    d = 1e-5
    h = rapidity(complex(1.5 + d, 1e-15), Side.UpperHalfPlane, M, A)
    assert h.imag == pytest.approx(ab.a * d, rel=1e-4)


def test_vacuum_mode():
    assert rapidity(2.0, Side.UpperHalfPlane, M, A, RapidityMode.VACUUM) == pytest.approx(1 / 3)
    assert invert_rapidity(0.2, Band.Gap, M, A, RapidityMode.VACUUM) == pytest.approx(1.8)


def test_upper_turning_point():
    xs = upper_branch_turning_point(M, A)
    assert xs == pytest.approx(5.202777544353294, rel=1e-9)
    assert abs(rapidity_derivative(xs, M, A)) < 1e-10


def test_invert_gap_raises():
    with pytest.raises(RangeError):
        invert_rapidity(0.1, Band.Gap, M, A)


def test_invert_below_upper_minimum():
    with pytest.raises(RangeError):
        invert_rapidity(0.5, Band.UpperBranch, M, A)


@given(st.floats(-10.0, -1e-3))
def test_invert_round_trip_lower(H):
    xi = invert_rapidity(H, Band.LowerBranch, M, A)
    assert 0 < xi < 1
    assert real_rapidity(xi, M, A) == pytest.approx(H, abs=1e-12 * max(1, abs(H)))


@given(st.floats(0.9, 50.0))
def test_invert_round_trip_upper(H):
    xi = invert_rapidity(H, Band.UpperBranch, M, A)
    assert 2 < xi < 5.21
    assert real_rapidity(xi, M, A) == pytest.approx(H, abs=1e-12 * max(1, abs(H)))


@settings(max_examples=50)
@given(st.floats(0.05, 0.95))
def test_lower_branch_monotone(xi):
    assert rapidity_derivative(xi, M, A) > 0


@pytest.mark.parametrize("kw", [dict(omega12=0.0, beta=0.1), dict(omega12=1.0, beta=0.0),
                                dict(omega12=1.0, beta=0.1, rho=-1.0),
                                dict(omega12=1.0, beta=0.1, rho=1.0, length=10.0, m_atoms=3)])
def test_atom_params_validation(kw):
    with pytest.raises(ValueError):
        AtomChainParams(**kw)


def test_m_atoms_default():
    assert AtomChainParams(1.5, 0.01, rho=2.0, length=10.4).m_atoms == 21


def test_consistency_error_is_numerical():
    assert issubclass(ConsistencyError, ArithmeticError)
