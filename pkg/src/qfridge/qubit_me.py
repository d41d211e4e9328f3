"""Two-qubit absorption refrigerator: local and global master equations.

States are labelled ``0`` (both qubits down), ``1`` (qubit 1 up), ``2``
(qubit 2 up) and ``d`` (both up), with energies ``0, eps1, eps2`` and
``eps1 + eps2 + delta_z``.  Qubit 1 talks to baths L and R through the
``0<->1`` and ``2<->d`` transitions, qubit 2 to bath C through ``0<->2`` and
``1<->d``.  An XX term ``delta_x`` mixes ``|1>`` and ``|2>``.

Rate arrays are indexed ``rates[l, m]`` = rate of the jump ``l -> m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from qfridge.baths import Baths, as_baths, spectral_density, transition_rate
from qfridge.steady import add_transition, stationary_distribution

SITE_LABELS = ("0", "1", "2", "d")
EIGEN_LABELS = ("0", "+", "-", "d")

# (lower state, upper state, bath labels) for the uncoupled qubits
_CHANNELS = (
    (0, 1, ("L", "R")),
    (2, 3, ("L", "R")),
    (0, 2, ("C",)),
    (1, 3, ("C",)),
)


@dataclass(frozen=True)
class QubitSystem:
    """Two qubits with ZZ coupling ``delta_z`` and XX coupling ``delta_x``.

    ``eps1`` may be negative (the qubit-1 sweep crosses zero); ``delta_z``
    must be non-negative.
    """

    eps1: float
    eps2: float
    delta_z: float = 0.0
    delta_x: float = 0.0

    def __post_init__(self):
        for name in ("eps1", "eps2", "delta_z", "delta_x"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.delta_z < 0:
            raise ValueError("delta_z must be >= 0")

    @property
    def eps_d(self) -> float:
        return self.eps1 + self.eps2 + self.delta_z

    @property
    def energies(self) -> np.ndarray:
        """Bare energies of ``0, 1, 2, d``."""
        return np.array([0.0, self.eps1, self.eps2, self.eps_d])


@dataclass
class Populations:
    """Probabilities over four states, in the order given by ``labels``."""

    values: np.ndarray
    labels: tuple = SITE_LABELS

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def __getitem__(self, label: str) -> float:
        return float(self.values[self.labels.index(label)])

    def as_array(self) -> np.ndarray:
        return self.values.copy()


@dataclass
class MESolution:
    """Steady state and cold-bath heat current of a master-equation solve."""

    populations: Populations
    J_C: float
    generator: np.ndarray
    energies: np.ndarray
    rates: dict = field(default_factory=dict)

    def heat_currents(self) -> dict:
        """Heat currents out of every bath, ``{"L": ..., "R": ..., "C": ...}``."""
        return {
            label: bath_heat_current(self.energies, r, self.populations.values)
            for label, r in self.rates.items()
        }


def build_rates_zz(sys: QubitSystem, baths) -> dict:
    """Per-bath 4x4 rate arrays for the uncoupled (site) transitions.

    Every transition is evaluated at its bare energy gap; a bath that does
    not couple to a channel contributes nothing to it.
    """
    baths = as_baths(baths)
    E = sys.energies
    rates = {label: np.zeros((4, 4)) for label in Baths._fields}
    for lo, hi, labels in _CHANNELS:
        for label in labels:
            bath = getattr(baths, label)
            rates[label][lo, hi] = transition_rate(E[lo], E[hi], bath)
            rates[label][hi, lo] = transition_rate(E[hi], E[lo], bath)
    return rates


def rate_matrix(rates: dict) -> np.ndarray:
    """Generator ``W`` (``dp/dt = W p``) from per-bath rate arrays."""
    total = sum(rates.values())
    n = total.shape[0]
    W = np.zeros((n, n))
    for src in range(n):
        for dst in range(n):
            if src != dst and total[src, dst] != 0.0:
                add_transition(W, src, dst, total[src, dst])
    return W


def steady_state(W: np.ndarray, labels=SITE_LABELS) -> Populations:
    return Populations(stationary_distribution(W), labels)


def bath_heat_current(energies, rates: np.ndarray, p) -> float:
    """Energy taken out of one bath per unit time, ``sum (E_m - E_l) G_lm p_l``."""
    E = np.asarray(energies)
    p = np.asarray(p)
    gaps = E[None, :] - E[:, None]
    return float(np.sum(gaps * rates * p[:, None]))


def heat_current_C_zz(sys: QubitSystem, baths, p) -> float:
    """Heat extracted from bath C (positive = refrigeration)."""
    if isinstance(p, Populations):
        p = p.values
    rc = build_rates_zz(sys, baths)["C"]
    e2, dz = sys.eps2, sys.delta_z
    return float(
        e2 * (rc[0, 2] * p[0] - rc[2, 0] * p[2])
        + (e2 + dz) * (rc[1, 3] * p[1] - rc[3, 1] * p[3])
    )


def solve_zz(sys: QubitSystem, baths) -> MESolution:
    """Pure ZZ refrigerator (``delta_x`` is ignored)."""
    rates = build_rates_zz(sys, baths)
    W = rate_matrix(rates)
    pops = steady_state(W)
    return MESolution(pops, heat_current_C_zz(sys, baths, pops), W, sys.energies, rates)


@dataclass(frozen=True)
class CoolingCondition:
    general: bool
    optimal: bool
    simple: bool


def cycle_affinity(sys: QubitSystem, baths) -> float:
    """Log ratio of the cooling-cycle and reverse-cycle rate products.

    With ``delta_x = 0`` the four states form a ring
    ``0 -> 1 -> d -> 2 -> 0`` and the steady state carries a single
    circulating flux whose sign is the sign of this affinity.  Each completed
    cycle removes ``delta_z`` from bath C, so ``J_C`` has the sign of the
    affinity times ``delta_z``.
    """
    total = sum(build_rates_zz(sys, baths).values())
    fwd = total[0, 1] * total[1, 3] * total[3, 2] * total[2, 0]
    bwd = total[0, 2] * total[2, 3] * total[3, 1] * total[1, 0]
    if fwd == 0.0 and bwd == 0.0:
        return 0.0
    if bwd == 0.0:
        return math.inf
    if fwd == 0.0:
        return -math.inf
    return math.log(fwd) - math.log(bwd)


def cooling_condition(sys: QubitSystem, baths) -> CoolingCondition:
    """Evaluate the cooling criteria for the ZZ refrigerator.

    ``general``
        exact criterion for the given filters (positive cycle affinity with
        ``delta_z > 0``).
    ``optimal``
        criterion for perfect filters (``G_10,R = G_2d,L = 0``):
        ``b_C e2 + b_R e_d2 > b_C e_d1 + b_L e1``.
    ``simple``
        ``b_C delta_z < b_L e1``, the symmetric-bias, perfect-filter form.
    """
    baths = as_baths(baths)
    bL, bR, bC = baths.L.beta, baths.R.beta, baths.C.beta
    e1, e2, dz = sys.eps1, sys.eps2, sys.delta_z
    general = dz > 0 and cycle_affinity(sys, baths) > 0
    lhs = _bmul(bC, e2) + _bmul(bR, e1 + dz)
    rhs = _bmul(bC, e2 + dz) + _bmul(bL, e1)
    optimal = bool(lhs > rhs)
    simple = bool(_bmul(bC, dz) < _bmul(bL, e1))
    return CoolingCondition(bool(general), optimal, simple)


def _bmul(beta: float, energy: float) -> float:
    # inf * 0 must read as 0 for a zero-temperature bath and a zero gap
    if energy == 0:
        return 0.0
    return beta * energy


def jc_perturbative(eps: float, delta_z: float, delta_T: float, spectral, T: float = 1.0) -> float:
    """Leading-order cold-bath current for ``eps1 = eps2 = eps`` and identical baths.

    Valid to second order in ``delta_z`` and first order in ``delta_T`` with
    ``T_L = T + dT``, ``T_R = T`` and ``T_C = T - dT``.  ``spectral`` is the
    common spectral density, either a callable or a :class:`BathSpec`.
    """
    K = spectral if callable(spectral) else (lambda w: spectral_density(w, spectral))
    k0 = K(eps)
    k1 = K(eps + delta_z)
    x = math.exp(eps / T)
    num = -(x**2) * k0 * k1 / (x - 1.0) * delta_T
    den = (1.0 + x) ** 2 * (k1 + k0 * x)
    return num / den * delta_z**2 / T**2


def mixing_angle(sys: QubitSystem) -> float:
    """Angle with ``tan(theta) = 2 delta_x / (eps1 - eps2)`` on the branch
    that makes ``|+>`` the upper eigenstate (``theta = pi/2`` when degenerate)."""
    return math.atan2(2.0 * sys.delta_x, sys.eps1 - sys.eps2)


def eigen_energies(sys: QubitSystem) -> np.ndarray:
    """Energies of ``0, +, -, d`` for the XX-coupled pair."""
    mean = 0.5 * (sys.eps1 + sys.eps2)
    half = 0.5 * math.hypot(sys.eps1 - sys.eps2, 2.0 * sys.delta_x)
    return np.array([0.0, mean + half, mean - half, sys.eps_d])


def overlap_factors(theta: float) -> dict:
    """Coupling amplitudes of each bath to the eigenbasis transitions.

    Keys are ``(lower, upper)`` index pairs in the ``0, +, -, d`` order.
    """
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    qubit1 = {(0, 1): c, (0, 2): s, (1, 3): s, (2, 3): -c}
    qubit2 = {(0, 1): s, (0, 2): -c, (1, 3): c, (2, 3): s}
    return {"L": qubit1, "R": qubit1, "C": qubit2}


def build_rates_global(sys: QubitSystem, baths) -> dict:
    """Per-bath rates between the eigenstates, weighted by squared overlaps."""
    baths = as_baths(baths)
    E = eigen_energies(sys)
    lam = overlap_factors(mixing_angle(sys))
    rates = {label: np.zeros((4, 4)) for label in Baths._fields}
    for label in Baths._fields:
        bath = getattr(baths, label)
        for (lo, hi), amp in lam[label].items():
            w = amp * amp
            rates[label][lo, hi] = w * transition_rate(E[lo], E[hi], bath)
            rates[label][hi, lo] = w * transition_rate(E[hi], E[lo], bath)
    return rates


@dataclass
class GlobalSolution(MESolution):
    theta: float = 0.0

    def site_populations(self) -> Populations:
        """Populations projected back onto ``0, 1, 2, d``."""
        c2 = math.cos(self.theta / 2.0) ** 2
        s2 = 1.0 - c2
        p0, pp, pm, pd = self.populations.values
        return Populations([p0, c2 * pp + s2 * pm, s2 * pp + c2 * pm, pd], SITE_LABELS)


def global_me_solve(sys: QubitSystem, baths) -> GlobalSolution:
    """Secular master equation in the eigenbasis of the coupled qubits."""
    rates = build_rates_global(sys, baths)
    W = rate_matrix(rates)
    pops = steady_state(W, EIGEN_LABELS)
    E = eigen_energies(sys)
    rc = rates["C"]
    p = pops.values
    J = 0.0
    for l in (1, 2):
        J += E[l] * (rc[0, l] * p[0] - rc[l, 0] * p[l])
        J += (E[3] - E[l]) * (rc[l, 3] * p[l] - rc[3, l] * p[3])
    return GlobalSolution(pops, float(J), W, E, rates, theta=mixing_angle(sys))


def exchange_rate(sys: QubitSystem, rates: dict) -> float:
    """Incoherent ``1 <-> 2`` rate left after eliminating the coherence.

    ``delta_x^2 G / ((eps1 - eps2)^2 + G^2 / 4)`` where ``G`` is the total
    decay rate out of states 1 and 2.
    """
    total = sum(rates.values())
    g = total[1, 0] + total[1, 3] + total[2, 0] + total[2, 3]
    if sys.delta_x == 0.0 or g == 0.0:
        return 0.0
    return sys.delta_x**2 * g / ((sys.eps1 - sys.eps2) ** 2 + 0.25 * g**2)


def local_me_solve(sys: QubitSystem, baths) -> MESolution:
    """Local master equation: bare-energy dissipators plus the XX exchange."""
    rates = build_rates_zz(sys, baths)
    W = rate_matrix(rates)
    k = exchange_rate(sys, rates)
    add_transition(W, 1, 2, k)
    add_transition(W, 2, 1, k)
    pops = steady_state(W)
    return MESolution(pops, heat_current_C_zz(sys, baths, pops), W, sys.energies, rates)
