import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfridge.baths import (
    BathSpec,
    DomainError,
    UnitsConvention,
    as_baths,
    bias_temperatures,
    bose_occupation,
    rate_in,
    rate_out,
    refrigerator_baths,
    spectral_density,
    thermal_weight_limit,
    transition_rate,
)


def test_bose_closed_form_values():
    assert bose_occupation(math.log(2.0), 1.0) == pytest.approx(1.0, rel=1e-14)
    assert bose_occupation(2.0, 1.0) == pytest.approx(0.156518, abs=5e-7)
    assert bose_occupation(2.0, 1.0) == pytest.approx(1.0 / (math.e**2 - 1.0), rel=1e-14)
    assert bose_occupation(800.0, 1.0) == 0.0


def test_bose_rejects_non_positive_energy():
    with pytest.raises(DomainError):
        bose_occupation(0.0, 1.0)
    with pytest.raises(DomainError):
        bose_occupation(np.array([1.0, -1.0]), 1.0)


def test_bose_classical_limit():
    T = 1.7
    ws = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    gaps = np.abs(ws * bose_occupation(ws, T) - T)
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 1e-4


def test_bose_is_decreasing():
    w = np.linspace(0.01, 10, 500)
    assert np.all(np.diff(bose_occupation(w, 0.8)) < 0)


def test_spectral_density_peak_and_support():
    b = BathSpec("C", 1.0, 0.06, 2.2, 10.0)
    assert spectral_density(2.2, b) == pytest.approx(1.0 / (0.06 * 2.2), rel=1e-14)
    assert spectral_density(0.0, b) == 0.0
    assert spectral_density(-1.0, b) == 0.0
    assert spectral_density(10.0, b) == 0.0
    assert spectral_density(12.0, b) == 0.0
    w = np.linspace(-2, 15, 1001)
    K = spectral_density(w, b)
    assert np.all(K >= 0)
    assert np.all(K[(w <= 0) | (w >= 10)] == 0)


def test_rate_example():
    b = BathSpec("C", 1.0, 0.06, 2.0, 20.0)
    expected = (1.0 / (0.06 * 2.0)) * (1.0 / (math.e**2 - 1.0))
    assert rate_in(2.0, b) == pytest.approx(expected, rel=1e-13)


def test_rates_vanish_without_channel():
    b = BathSpec("L", 1.0, 0.02, 2.0, 20.0)
    assert rate_in(0.0, b) == rate_out(0.0, b) == 0.0
    assert rate_in(-1.0, b) == rate_out(-1.0, b) == 0.0


def test_zero_temperature_bath():
    b = BathSpec("C", 0.0, 0.06, 2.0, 20.0)
    assert rate_in(2.0, b) == 0.0
    assert rate_out(2.0, b) == pytest.approx(spectral_density(2.0, b))
    assert rate_in(2.0, b.with_temperature(1e-3)) < 1e-300


@settings(max_examples=300, deadline=None)
@given(
    w=st.floats(0.01, 15.0),
    T=st.floats(0.05, 5.0),
    gamma=st.floats(0.005, 1.0),
    omega=st.floats(0.1, 10.0),
)
def test_detailed_balance(w, T, gamma, omega):
    b = BathSpec("R", T, gamma, omega, 20.0)
    rin, rout = rate_in(w, b), rate_out(w, b)
    if rin == 0.0:
        return
    assert rout / rin == pytest.approx(math.exp(w / T), rel=1e-12)


def test_transition_rate_direction():
    b = BathSpec("L", 1.0, 0.02, 2.0, 20.0)
    assert transition_rate(0.0, 2.0, b) == rate_in(2.0, b)
    assert transition_rate(2.0, 0.0, b) == rate_out(2.0, b)
    assert transition_rate(1.0, 1.0, b) == 0.0


def test_thermal_weight_limit():
    b = BathSpec("L", 1.3, 0.02, 2.0, 20.0)
    w = 1e-7
    assert spectral_density(w, b) * bose_occupation(w, b.temperature) == pytest.approx(
        thermal_weight_limit(b), rel=1e-5
    )


def test_bath_validation():
    with pytest.raises(ValueError):
        BathSpec("X", 1.0, 0.02, 2.0, 20.0)
    with pytest.raises(ValueError):
        BathSpec("L", -1.0, 0.02, 2.0, 20.0)
    with pytest.raises(ValueError):
        BathSpec("L", 1.0, 0.0, 2.0, 20.0)
    with pytest.raises(ValueError):
        BathSpec("L", 1.0, 0.02, 2.0, 0.0)


def test_refrigerator_baths_filters_and_schemes():
    b = refrigerator_baths(2.0, 2.1, 0.3, delta_T=0.2)
    assert (b.L.omega, b.R.omega, b.C.omega) == (2.0, 2.3, pytest.approx(2.4))
    assert (b.L.temperature, b.R.temperature, b.C.temperature) == (1.2, 1.0, 0.8)
    assert bias_temperatures(1.0, 0.2, "hot_left") == (1.2, 1.0, 1.0)
    with pytest.raises(ValueError):
        bias_temperatures(1.0, 0.2, "cold_right")
    with pytest.raises(ValueError):
        as_baths((b.R, b.L, b.C))


def test_units_round_trip():
    u = UnitsConvention(temperature=0.5)
    assert u.from_reduced(u.to_reduced(3.0)) == pytest.approx(3.0)
