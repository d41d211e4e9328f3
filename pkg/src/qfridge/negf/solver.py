"""Self-consistent mean-field solve and the Meir-Wingreen heat current."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from qfridge.baths import as_baths
from qfridge.negf.grid import FrequencyGrid
from qfridge.negf.selfenergy import AliasingError, SelfEnergy, tunneling_self_energy, xc_self_energy


class NonConvergenceError(RuntimeError):
    def __init__(self, residuals):
        super().__init__(
            f"self-consistency not reached after {len(residuals)} iterations "
            f"(last residual {residuals[-1]:.3e})"
        )
        self.residuals = list(residuals)


class BroadeningError(ValueError):
    """A retarded propagator has an undamped pole on the grid."""


def mean_field_retarded(eps: float, delta_z: float, n_other: float, sigma_r, grid: FrequencyGrid):
    """``G^r(w) = 1 / (w - eps - delta_z <n_other> - Sigma^r(w))``."""
    w = grid.w
    denom = w - eps - delta_z * n_other - sigma_r
    undamped = np.imag(sigma_r) == 0.0
    re = denom.real
    crossing = np.zeros_like(undamped)
    crossing[:-1] = np.signbit(re[:-1]) != np.signbit(re[1:])
    crossing[1:] |= crossing[:-1].copy()
    bad = undamped & (crossing | (np.abs(denom) == 0.0))
    if np.any(bad):
        where = w[np.argmax(bad)]
        raise BroadeningError(f"undamped pole of G^r near w = {where:.4g}")
    return 1.0 / denom


def keldysh_lesser_greater(G_r, sigma_lesser, sigma_greater):
    """``G^< = G^r Sigma^< G^a`` and ``G^> = G^r Sigma^> G^a`` samplewise."""
    weight = G_r * np.conj(G_r)
    return weight * sigma_lesser, weight * sigma_greater


def occupation(G_lesser, grid: FrequencyGrid) -> float:
    """``<n> = i int dw/2pi G^<(w)``."""
    return float(np.real(1j * grid.integrate(G_lesser)))


@dataclass
class SelfConsistentState:
    n1: float
    n2: float
    iterations: int
    residuals: list = field(default_factory=list)

    @property
    def residual(self) -> float:
        return self.residuals[-1] if self.residuals else 0.0


@dataclass
class NEGFSolution:
    eps1: float
    eps2: float
    delta_z: float
    grid: FrequencyGrid
    sigma_1: SelfEnergy  # L + R tunnelling
    sigma_C: SelfEnergy
    state: SelfConsistentState
    G1_r: np.ndarray
    G2_r: np.ndarray
    G1_lesser: np.ndarray
    G1_greater: np.ndarray
    G2_lesser: np.ndarray
    G2_greater: np.ndarray

    def spectral_functions(self):
        return -2.0 * self.G1_r.imag, -2.0 * self.G2_r.imag

    def xc_resonator_2(self, check_tails: bool = True):
        """``(Sigma^<, Sigma^>)`` of resonator 2 from the mean-field G's."""
        return xc_self_energy(
            (self.G2_lesser, self.G2_greater),
            (self.G1_lesser, self.G1_greater),
            self.delta_z,
            self.grid,
            check_tails=check_tails,
        )


def _propagators(eps1, eps2, dz, n1, n2, s1, sc, grid):
    G1 = mean_field_retarded(eps1, dz, n2, s1.retarded, grid)
    G2 = mean_field_retarded(eps2, dz, n1, sc.retarded, grid)
    G1l, G1g = keldysh_lesser_greater(G1, s1.lesser, s1.greater)
    G2l, G2g = keldysh_lesser_greater(G2, sc.lesser, sc.greater)
    return G1, G2, G1l, G1g, G2l, G2g


def self_consistent_loop(
    eps1: float,
    eps2: float,
    delta_z: float,
    baths,
    grid: FrequencyGrid | None = None,
    mixing: float = 0.5,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> NEGFSolution:
    """Find the Hartree occupations ``<n1>, <n2>`` by damped fixed-point iteration.

    The starting point is the non-interacting occupation pair, so with
    ``delta_z = 0`` the first update is already a fixed point.
    """
    if not 0 < mixing <= 1:
        raise ValueError("mixing must lie in (0, 1]")
    if not tol > 0:
        raise ValueError("tol must be positive")
    baths = as_baths(baths)
    if grid is None:
        grid = FrequencyGrid.for_baths(baths)
    s1 = tunneling_self_energy(baths.L, grid) + tunneling_self_energy(baths.R, grid)
    sc = tunneling_self_energy(baths.C, grid)

    def update(n1, n2):
        G = _propagators(eps1, eps2, delta_z, n1, n2, s1, sc, grid)
        return occupation(G[2], grid), occupation(G[4], grid), G

    n1, n2, _ = update(0.0, 0.0)
    residuals = []
    for it in range(1, max_iter + 1):
        m1, m2, G = update(n1, n2)
        res = max(abs(m1 - n1), abs(m2 - n2))
        residuals.append(res)
        if res < tol:
            n1, n2 = m1, m2
            break
        n1 = (1.0 - mixing) * n1 + mixing * m1
        n2 = (1.0 - mixing) * n2 + mixing * m2
    else:
        raise NonConvergenceError(residuals)
    state = SelfConsistentState(n1, n2, it, residuals)
    # propagators consistent with the returned occupations
    G1, G2, G1l, G1g, G2l, G2g = _propagators(eps1, eps2, delta_z, n1, n2, s1, sc, grid)
    return NEGFSolution(eps1, eps2, delta_z, grid, s1, sc, state, G1, G2, G1l, G1g, G2l, G2g)


def meir_wingreen_current(G_lesser, G_greater, sigma_lesser, sigma_greater, grid: FrequencyGrid) -> float:
    """Heat leaving a bath, ``int dw/2pi w [G^< Sigma^> - G^> Sigma^<]``.

    Positive when the bath loses energy to the system.
    """
    integrand = grid.w * (G_lesser * sigma_greater - G_greater * sigma_lesser)
    return float(np.real(grid.integrate(integrand)))


def heat_current_C_negf(solution: NEGFSolution, check_tails: bool = True) -> float:
    """Heat extracted from bath C (positive = cooling).

    Only the exchange-correlation part of resonator 2's self-energy carries a
    net current, giving
    ``int dw/2pi w |G2^r|^2 [Sigma_xc^< Sigma_C^> - Sigma_xc^> Sigma_C^<]``.
    """
    xl, xg = solution.xc_resonator_2(check_tails=check_tails)
    sc = solution.sigma_C
    weight = np.abs(solution.G2_r) ** 2
    integrand = solution.grid.w * weight * (xl * sc.greater - xg * sc.lesser)
    return float(np.real(solution.grid.integrate(integrand)))


def solve_negf(
    eps1,
    eps2,
    delta_z,
    baths,
    grid=None,
    mixing=0.5,
    tol=1e-8,
    max_iter=200,
    max_doublings: int = 4,
):
    """Converge the mean-field state and return ``(J_C, solution)``.

    If the time-domain tails of the propagators have not decayed inside the
    FFT window, the grid spacing is halved and the solve repeated, at most
    ``max_doublings`` times; after that the :class:`AliasingError` propagates.
    """
    baths = as_baths(baths)
    if grid is None:
        grid = FrequencyGrid.for_baths(baths)
    for attempt in range(max_doublings + 1):
        sol = self_consistent_loop(eps1, eps2, delta_z, baths, grid, mixing, tol, max_iter)
        try:
            return heat_current_C_negf(sol), sol
        except AliasingError:
            if attempt == max_doublings:
                raise
            grid = grid.refined(2)
