import itertools
import math

import numpy as np
import pytest

from qfridge.baths import BathSpec, Baths, refrigerator_baths, spectral_density
from qfridge.qubit_me import (
    QubitSystem,
    build_rates_zz,
    cooling_condition,
    exchange_rate,
    global_me_solve,
    heat_current_C_zz,
    jc_perturbative,
    local_me_solve,
    mixing_angle,
    rate_matrix,
    solve_zz,
)
from qfridge.steady import evolve

GAMMAS = (0.02, 0.08, 0.06)


def equal_baths(T=1.0, eps1=2.0, eps2=2.0, dz=0.3, cutoff=20.0):
    return refrigerator_baths(eps1, eps2, dz, GAMMAS, T, 0.0, cutoff)


def identical_baths(delta_T, gamma=0.06, omega=2.0, T=1.0):
    return Baths(
        BathSpec("L", T + delta_T, gamma, omega, 20.0),
        BathSpec("R", T, gamma, omega, 20.0),
        BathSpec("C", T - delta_T, gamma, omega, 20.0),
    )


def test_rate_matrix_is_a_generator(fig3_baths):
    sys = QubitSystem(2.0, 2.0, 0.4)
    W = rate_matrix(build_rates_zz(sys, fig3_baths()))
    assert np.abs(W.sum(axis=0)).max() < 1e-14
    off = W - np.diag(np.diag(W))
    assert off.min() >= 0


def test_narrow_left_filter_suppresses_upper_channel(fig3_baths):
    b = fig3_baths(delta_z=0.4)
    ratio = spectral_density(2.4, b.L) / spectral_density(2.0, b.L)
    assert ratio < 0.05
    rates = build_rates_zz(QubitSystem(2.0, 2.0, 0.4), b)
    assert rates["L"][2, 3] < 0.05 * rates["L"][0, 1]


@pytest.mark.parametrize("T", [0.5, 1.0, 2.0])
def test_equilibrium_is_gibbs_with_no_current(T):
    sys = QubitSystem(2.0, 2.0, 0.3)
    sol = solve_zz(sys, equal_baths(T))
    ref = np.exp(-sys.energies / T)
    assert np.allclose(sol.populations.values, ref / ref.sum(), rtol=1e-12)
    assert abs(sol.J_C) < 1e-10
    currents = sol.heat_currents()
    assert abs(sum(currents.values())) < 1e-10
    assert currents["C"] == pytest.approx(sol.J_C, abs=1e-15)


def test_no_zz_coupling_no_current(fig3_baths):
    sol = solve_zz(QubitSystem(2.0, 2.0, 0.0), fig3_baths(delta_z=0.0))
    assert abs(sol.J_C) < 1e-14


def test_energy_conservation_out_of_equilibrium(fig3_baths):
    sol = solve_zz(QubitSystem(2.0, 2.0, 0.4), fig3_baths())
    assert abs(sum(sol.heat_currents().values())) < 1e-14


def test_steady_state_agrees_with_long_time_dynamics(fig3_baths):
    sys = QubitSystem(2.0, 2.0, 0.4)
    sol = solve_zz(sys, fig3_baths())
    p_late = evolve(sol.generator, np.array([1.0, 0, 0, 0]), 5000.0)
    assert np.allclose(sol.populations.values, p_late, atol=1e-10)
    assert heat_current_C_zz(sys, fig3_baths(), p_late) == pytest.approx(sol.J_C, rel=1e-7)


def test_fig3_point_cools_near_maximum(fig3_baths):
    sys = QubitSystem(2.0, 2.0, 0.4)
    J = solve_zz(sys, fig3_baths(0.4, 0.3)).J_C
    assert J > 0
    grid = [solve_zz(sys, fig3_baths(0.4, dT)).J_C for dT in np.linspace(0.05, 0.95, 19)]
    assert J > 0.75 * max(grid)


def test_cooling_condition_fig3(fig3_baths):
    cc = cooling_condition(QubitSystem(2.0, 2.0, 0.4), fig3_baths(0.4, 0.3))
    assert cc.simple and cc.general and cc.optimal


def test_simple_condition_is_strict():
    # b_C dz = b_L e1 exactly: T_C = dz, T_L = e1
    dz, e1 = 0.5, 2.0
    b = Baths(
        BathSpec("L", 2.0, 0.02, e1, 20.0),
        BathSpec("R", 1.0, 0.08, e1 + dz, 20.0),
        BathSpec("C", 0.5, 0.06, 2.0 + dz, 20.0),
    )
    assert not cooling_condition(QubitSystem(e1, 2.0, dz), b).simple


def test_sign_matches_general_condition_on_grid():
    mismatches = []
    for dz, dT in itertools.product(np.linspace(0.02, 1.0, 20), np.linspace(0.02, 0.98, 20)):
        sys = QubitSystem(2.0, 2.0, dz)
        b = refrigerator_baths(2.0, 2.0, dz, (0.002, 0.008, 0.006), 1.0, dT, 20.0)
        J = solve_zz(sys, b).J_C
        if abs(J) < 1e-13:
            continue
        if (J > 0) != cooling_condition(sys, b).general:
            mismatches.append((dz, dT, J))
    assert not mismatches


def test_perturbative_formula_trivial_zeros():
    b = identical_baths(0.0)
    assert jc_perturbative(2.0, 0.01, 0.0, b.C) == 0.0
    assert jc_perturbative(2.0, 0.0, 0.01, b.C) == 0.0


def _oracle_error(dz, dT):
    b = identical_baths(dT)
    J = solve_zz(QubitSystem(2.0, 2.0, dz), b).J_C
    ref = jc_perturbative(2.0, dz, dT, b.C, 1.0)
    return abs(J - ref) / abs(ref)


_ORACLE_GRID = list(itertools.product([0.005, 0.01, 0.02], [0.005, 0.01, 0.02]))


@pytest.mark.parametrize(
    "dz,dT",
    [
        pytest.param(
            dz,
            dT,
            marks=pytest.mark.xfail(
                strict=True,
                reason="leading-order formula: relative error grows linearly in delta_z and reaches 2.2-2.8% at 0.02",
            ),
        )
        if dz == 0.02
        else (dz, dT)
        for dz, dT in _ORACLE_GRID
    ],
)
def test_perturbative_oracle_within_two_percent(dz, dT):
    assert _oracle_error(dz, dT) <= 0.02


def test_perturbative_error_vanishes_linearly():
    errs = [_oracle_error(s, s) for s in (0.0025, 0.005, 0.01)]
    assert errs[0] < errs[1] < errs[2]
    assert errs[1] / errs[0] == pytest.approx(2.0, rel=0.05)
    assert errs[2] / errs[1] == pytest.approx(2.0, rel=0.05)


def test_perturbative_filter_independent():
    # the oracle only sees K(eps) and K(eps + dz); any common filter works
    for gamma, omega in [(0.02, 2.0), (0.5, 3.0)]:
        b = identical_baths(0.005, gamma, omega)
        J = solve_zz(QubitSystem(2.0, 2.0, 0.005), b).J_C
        ref = jc_perturbative(2.0, 0.005, 0.005, b.C)
        assert J == pytest.approx(ref, rel=0.01)


# ---- XX coupling --------------------------------------------------------


def fig5_baths(dz, dT=0.1):
    return refrigerator_baths(2.0, 2.1, dz, GAMMAS, 1.0, dT, 10.0)


@pytest.mark.parametrize("eps2", [2.1, 1.9, 2.0])
def test_global_and_local_reduce_to_zz_without_xx(eps2):
    sys = QubitSystem(2.0, eps2, 0.15)
    b = refrigerator_baths(2.0, eps2, 0.15, GAMMAS, 1.0, 0.1, 10.0)
    J = solve_zz(sys, b).J_C
    assert global_me_solve(sys, b).J_C == pytest.approx(J, abs=1e-12)
    assert local_me_solve(sys, b).J_C == pytest.approx(J, abs=1e-12)


def test_mixing_angle_branch():
    assert mixing_angle(QubitSystem(2.0, 2.0, 0.1, 0.01)) == pytest.approx(math.pi / 2)
    assert mixing_angle(QubitSystem(2.0, 2.1, 0.1, 0.0)) == pytest.approx(math.pi)
    th = mixing_angle(QubitSystem(2.1, 2.0, 0.1, 0.01))
    assert th == pytest.approx(math.atan(0.02 / 0.1))


def test_global_eigen_rates_are_generator():
    sol = global_me_solve(QubitSystem(2.0, 2.1, 0.1, 0.002), fig5_baths(0.1))
    assert np.abs(sol.generator.sum(axis=0)).max() < 1e-14
    assert sol.site_populations().values.sum() == pytest.approx(1.0)


def test_global_equilibrium_null():
    sys = QubitSystem(2.0, 2.1, 0.1, 0.02)
    sol = global_me_solve(sys, fig5_baths(0.1, 0.0))
    assert abs(sol.J_C) < 1e-10
    assert abs(sum(sol.heat_currents().values())) < 1e-10


def test_local_equilibrium_null_for_resonant_qubits():
    sys = QubitSystem(2.0, 2.0, 0.1, 0.02)
    b = refrigerator_baths(2.0, 2.0, 0.1, GAMMAS, 1.0, 0.0, 10.0)
    assert abs(local_me_solve(sys, b).J_C) < 1e-10


def test_exchange_rate_quadratic():
    sys = QubitSystem(2.0, 2.1, 0.1, 0.0)
    rates = build_rates_zz(sys, fig5_baths(0.1))
    k1 = exchange_rate(QubitSystem(2.0, 2.1, 0.1, 1e-3), rates)
    k2 = exchange_rate(QubitSystem(2.0, 2.1, 0.1, 2e-3), rates)
    assert exchange_rate(sys, rates) == 0.0
    assert k2 / k1 == pytest.approx(4.0, rel=1e-12)


def test_global_heats_local_cools_at_small_dz():
    for dz in (0.05, 0.1):
        sys = QubitSystem(2.0, 2.1, dz, 0.002)
        assert global_me_solve(sys, fig5_baths(dz)).J_C < 0
        assert local_me_solve(sys, fig5_baths(dz)).J_C > 0


@pytest.mark.parametrize("solver", [local_me_solve, global_me_solve])
def test_xx_coupling_is_detrimental(solver):
    for dz in (0.1, 0.3, 0.5):
        J = [solver(QubitSystem(2.0, 2.1, dz, dx), fig5_baths(dz)).J_C for dx in (0.0, 0.002, 0.005, 0.01, 0.02)]
        assert np.all(np.diff(J) < 0)


def test_negative_eps1_heats():
    for e1 in (-3.0, -1.0, -0.2):
        b = refrigerator_baths(e1, 2.0, 0.1, GAMMAS, 1.0, 0.3, 10.0)
        assert solve_zz(QubitSystem(e1, 2.0, 0.1), b).J_C < 0


def test_system_validation():
    with pytest.raises(ValueError):
        QubitSystem(2.0, 2.0, -0.1)
    with pytest.raises(ValueError):
        QubitSystem(float("nan"), 2.0, 0.1)


def _root(f, a, b):
    from scipy.optimize import brentq

    return brentq(f, a, b, xtol=1e-10)


def test_eps1_sign_change_follows_simple_condition():
    # b_C dz < b_L eps1 with T_L = 1.3, T_C = 0.7 gives eps1* = 0.1 * 1.3 / 0.7
    def J(e1):
        b = refrigerator_baths(e1, 2.0, 0.1, GAMMAS, 1.0, 0.3, 10.0)
        return solve_zz(QubitSystem(e1, 2.0, 0.1), b).J_C

    assert _root(J, 0.05, 1.0) == pytest.approx(0.1 * 1.3 / 0.7, rel=0.05)


@pytest.mark.parametrize("dz", [0.2, 0.4])
def test_bias_sign_change_follows_simple_condition(dz):
    # b_C dz < b_L eps1 with T_L,C = 1 +- dT gives dT* = (eps1 - dz) / (eps1 + dz)
    def J(dT):
        return solve_zz(QubitSystem(2.0, 2.0, dz), refrigerator_baths(2.0, 2.0, dz, GAMMAS, 1.0, dT, 20.0)).J_C

    predicted = (2.0 - dz) / (2.0 + dz)
    found = _root(J, 0.4, 0.85)
    assert found < predicted
    assert found == pytest.approx(predicted, rel=0.12)
