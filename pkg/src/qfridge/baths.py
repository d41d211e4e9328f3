"""Bosonic reservoirs seen through a Lorentzian energy filter.

Each bath is characterised by its temperature and by a filtered spectral
density

    K(w) = g(w) / ((w - Omega)^2 + g(w)^2),    g(w) = gamma * w,

supported on ``0 < w < cutoff``.  Transition rates follow from the golden
rule: absorption of a quantum ``w`` from the bath occurs at ``K(w) n(w)`` and
emission at ``K(w) (1 + n(w))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

BATH_LABELS = ("L", "R", "C")


class DomainError(ValueError):
    """Raised when a function is evaluated outside its domain."""


@dataclass(frozen=True)
class UnitsConvention:
    """Energy scale shared by all solvers.

    All energies handed to the library are multiples of ``k_B * temperature``
    with ``hbar = k_B = 1``.  ``to_reduced`` converts an energy in absolute
    units (same unit as ``temperature``) into the library's reduced units.
    """

    temperature: float = 1.0

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError("reference temperature must be positive")

    def to_reduced(self, energy: float) -> float:
        return energy / self.temperature

    def from_reduced(self, energy: float) -> float:
        return energy * self.temperature

    def current_unit(self) -> float:
        """Scale factor turning a reduced heat current into (k_B T)^2/hbar."""
        return self.temperature**2


@dataclass(frozen=True)
class BathSpec:
    """One reservoir and its Lorentzian filter.

    Parameters
    ----------
    label : str
        ``"L"``, ``"R"`` or ``"C"``.
    temperature : float
        Bath temperature (``T = 0`` is accepted as the zero-temperature limit).
    gamma : float
        Dimensionless filter width; the Lorentzian half width at ``w`` is
        ``gamma * w``.
    omega : float
        Filter resonance.  May be negative (when it tracks a negative qubit
        energy), in which case the filter only has a weak tail on the physical axis.
    cutoff : float
        Upper edge of the spectral support.
    """

    label: str
    temperature: float
    gamma: float
    omega: float
    cutoff: float

    def __post_init__(self):
        if self.label not in BATH_LABELS:
            raise ValueError(f"unknown bath label {self.label!r}")
        if self.temperature < 0 or not math.isfinite(self.temperature):
            raise ValueError(f"bath {self.label}: temperature must be >= 0")
        if not self.gamma > 0:
            raise ValueError(f"bath {self.label}: gamma must be > 0")
        if not self.cutoff > 0:
            raise ValueError(f"bath {self.label}: cutoff must be > 0")

    @property
    def beta(self) -> float:
        return math.inf if self.temperature == 0 else 1.0 / self.temperature

    def with_temperature(self, temperature: float) -> "BathSpec":
        return replace(self, temperature=temperature)


def bose_occupation(w, temperature):
    """Bose-Einstein occupation ``1 / (exp(w/T) - 1)``.

    Only defined for positive ``w``; a zero temperature gives 0.
    Accepts scalars or arrays (arrays must be strictly positive too).
    """
    w_arr = np.asarray(w, dtype=float)
    if np.any(w_arr <= 0):
        raise DomainError("Bose occupation is only evaluated at w > 0")
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    if temperature == 0:
        out = np.zeros_like(w_arr)
    else:
        with np.errstate(over="ignore"):
            out = 1.0 / np.expm1(w_arr / temperature)
    return float(out) if out.ndim == 0 else out


def spectral_density(w, bath: BathSpec):
    """Filtered spectral density ``K(w)``; zero outside ``0 < w < cutoff``."""
    w_arr = np.asarray(w, dtype=float)
    inside = (w_arr > 0) & (w_arr < bath.cutoff)
    g = bath.gamma * np.where(inside, w_arr, 0.0)
    denom = (w_arr - bath.omega) ** 2 + g**2
    out = np.where(inside, g / np.where(inside, denom, 1.0), 0.0)
    return float(out) if out.ndim == 0 else out


def rate_in(w: float, bath: BathSpec) -> float:
    """Rate at which the system absorbs a quantum ``w`` from ``bath``."""
    if w <= 0:
        return 0.0
    k = spectral_density(w, bath)
    if k == 0.0:
        return 0.0
    return k * bose_occupation(w, bath.temperature)


def rate_out(w: float, bath: BathSpec) -> float:
    """Rate at which the system emits a quantum ``w`` into ``bath``."""
    if w <= 0:
        return 0.0
    k = spectral_density(w, bath)
    if k == 0.0:
        return 0.0
    return k * (1.0 + bose_occupation(w, bath.temperature))


def transition_rate(energy_from: float, energy_to: float, bath: BathSpec) -> float:
    """Rate of a system transition ``from -> to`` assisted by ``bath``.

    A downward transition emits ``energy_from - energy_to`` into the bath,
    an upward one absorbs ``energy_to - energy_from``.  Degenerate levels
    exchange nothing and get zero rate.
    """
    gap = energy_from - energy_to
    if gap > 0:
        return rate_out(gap, bath)
    if gap < 0:
        return rate_in(-gap, bath)
    return 0.0


def thermal_weight_limit(bath: BathSpec) -> float:
    """``lim_{w->0+} K(w) n(w) = gamma T / Omega^2``.

    Used at the ``w = 0`` sample of frequency grids where ``K`` and ``n``
    are individually 0 and infinite.
    """
    if bath.omega == 0:
        return 0.0
    return bath.gamma * bath.temperature / bath.omega**2


class Baths(NamedTuple):
    """The three reservoirs of the refrigerator: hot L, reference R, cold C."""

    L: BathSpec
    R: BathSpec
    C: BathSpec


def as_baths(baths) -> Baths:
    """Coerce a 3-sequence of :class:`BathSpec` to :class:`Baths`, checking labels."""
    if isinstance(baths, Baths):
        out = baths
    else:
        out = Baths(*baths)
    for name, bath in zip(Baths._fields, out):
        if bath.label != name:
            raise ValueError(f"expected bath {name} in that slot, got {bath.label}")
    return out


# Temperature assignments:
#   symmetric: T_L = T + dT, T_R = T, T_C = T - dT   (master-equation sweeps)
#   hot_left:  T_L = T + dT, T_R = T, T_C = T        (Green's-function sweeps)
BIAS_SCHEMES = ("symmetric", "hot_left")


def bias_temperatures(T: float, delta_T: float, scheme: str = "symmetric"):
    if scheme == "symmetric":
        return T + delta_T, T, T - delta_T
    if scheme == "hot_left":
        return T + delta_T, T, T
    raise ValueError(f"unknown bias scheme {scheme!r}; expected one of {BIAS_SCHEMES}")


def refrigerator_baths(
    eps1: float,
    eps2: float,
    delta_z: float,
    gammas=(0.02, 0.08, 0.06),
    T: float = 1.0,
    delta_T: float = 0.0,
    cutoff: float = 20.0,
    scheme: str = "symmetric",
) -> Baths:
    """Baths with the filters tuned for cooling.

    ``Omega_L = eps1``, ``Omega_R = eps1 + delta_z`` and
    ``Omega_C = eps2 + delta_z``, the choice used by every bundled configuration.
    """
    TL, TR, TC = bias_temperatures(T, delta_T, scheme)
    gL, gR, gC = gammas
    return Baths(
        BathSpec("L", TL, gL, eps1, cutoff),
        BathSpec("R", TR, gR, eps1 + delta_z, cutoff),
        BathSpec("C", TC, gC, eps2 + delta_z, cutoff),
    )
