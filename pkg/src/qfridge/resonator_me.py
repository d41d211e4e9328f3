"""Two cross-Kerr coupled resonators in a truncated photon-number basis.

``H = eps1 n1 + eps2 n2 + delta_z n1 n2``.  Resonator 1 exchanges photons
with baths L and R at ``eps1 + delta_z n2``, resonator 2 with bath C at
``eps2 + delta_z n1``.  The master equation is classical in the number
basis; populations are flattened as ``index = n1 * N2 + n2``.

Truncation keeps ``n_i = 0 .. N_i - 1``; jumps that would leave the retained
block are dropped, so ``N1 = N2 = 2`` is exactly the ZZ qubit pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qfridge.baths import as_baths, bose_occupation, spectral_density
from qfridge.steady import add_transition, stationary_distribution


@dataclass(frozen=True)
class ResonatorSystem:
    eps1: float
    eps2: float
    delta_z: float
    n1: int = 2
    n2: int = 2

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError("each resonator must keep at least 2 levels")
        if self.eps1 <= 0 or self.eps2 <= 0:
            raise ValueError("resonator frequencies must be positive")
        # shifted frequencies at the largest retained occupations
        if self.eps1 + self.delta_z * (self.n2 - 1) <= 0 or self.eps2 + self.delta_z * (self.n1 - 1) <= 0:
            raise ValueError("occupation-shifted frequencies must stay positive")

    @property
    def size(self) -> int:
        return self.n1 * self.n2

    def index(self, k1: int, k2: int) -> int:
        return k1 * self.n2 + k2

    def occupations(self):
        """Arrays ``(n1, n2)`` of photon numbers for every flattened state."""
        k1, k2 = np.divmod(np.arange(self.size), self.n2)
        return k1, k2

    def energies(self) -> np.ndarray:
        k1, k2 = self.occupations()
        return self.eps1 * k1 + self.eps2 * k2 + self.delta_z * k1 * k2

    def shifted_frequency_1(self, k2: int) -> float:
        return self.eps1 + self.delta_z * k2

    def shifted_frequency_2(self, k1: int) -> float:
        return self.eps2 + self.delta_z * k1


def absorption_weight(w: float, bath) -> float:
    """``F(w) = K(w) n(w) / 2``."""
    if w <= 0:
        return 0.0
    return 0.5 * spectral_density(w, bath) * bose_occupation(w, bath.temperature)


def emission_weight(w: float, bath) -> float:
    """``G(w) = K(w) (1 + n(w)) / 2``."""
    if w <= 0:
        return 0.0
    return 0.5 * spectral_density(w, bath) * (1.0 + bose_occupation(w, bath.temperature))


def _generators(sys: ResonatorSystem, baths):
    baths = as_baths(baths)
    n = sys.size
    W_hot = np.zeros((n, n))
    W_cold = np.zeros((n, n))
    for k1 in range(sys.n1):
        for k2 in range(sys.n2):
            i = sys.index(k1, k2)
            if k1 + 1 < sys.n1:
                w = sys.shifted_frequency_1(k2)
                j = sys.index(k1 + 1, k2)
                for bath in (baths.L, baths.R):
                    # C1(k1, k2) up and D1(k1 + 1, k2) down
                    add_transition(W_hot, i, j, 2.0 * (k1 + 1) * absorption_weight(w, bath))
                    add_transition(W_hot, j, i, 2.0 * (k1 + 1) * emission_weight(w, bath))
            if k2 + 1 < sys.n2:
                w = sys.shifted_frequency_2(k1)
                j = sys.index(k1, k2 + 1)
                add_transition(W_cold, i, j, 2.0 * (k2 + 1) * absorption_weight(w, baths.C))
                add_transition(W_cold, j, i, 2.0 * (k2 + 1) * emission_weight(w, baths.C))
    return W_hot, W_cold


def build_resonator_generator(sys: ResonatorSystem, baths) -> np.ndarray:
    """Full generator over the ``N1 * N2`` number-basis populations."""
    W_hot, W_cold = _generators(sys, baths)
    return W_hot + W_cold


def cold_bath_generator(sys: ResonatorSystem, baths) -> np.ndarray:
    """The part ``L_C`` of the generator produced by bath C alone."""
    return _generators(sys, baths)[1]


def resonator_heat_current_C(sys: ResonatorSystem, baths, rho) -> float:
    """``J_C = Tr[H_S L_C rho]``, positive when bath C is cooled."""
    L_C = cold_bath_generator(sys, baths)
    return float(sys.energies() @ (L_C @ np.asarray(rho, dtype=float)))


@dataclass
class ResonatorSolution:
    system: ResonatorSystem
    rho: np.ndarray
    J_C: float

    def populations(self) -> np.ndarray:
        """Populations reshaped to ``(N1, N2)``."""
        return self.rho.reshape(self.system.n1, self.system.n2)

    def mean_occupations(self):
        k1, k2 = self.system.occupations()
        return float(k1 @ self.rho), float(k2 @ self.rho)


def solve_resonators(sys: ResonatorSystem, baths) -> ResonatorSolution:
    W = build_resonator_generator(sys, baths)
    rho = stationary_distribution(W)
    return ResonatorSolution(sys, rho, resonator_heat_current_C(sys, baths, rho))


def gibbs_state(sys: ResonatorSystem, T: float) -> np.ndarray:
    """Truncated Gibbs populations at temperature ``T``."""
    E = sys.energies()
    w = np.exp(-(E - E.min()) / T)
    return w / w.sum()


@dataclass
class TruncationRow:
    n1: int
    n2: int
    J_C: float
    increment: float  # |J(n1, n2) - J(n1 - 1, n2 - 1)|, nan on the first row


def truncation_sweep(sys: ResonatorSystem, baths, n_max: int, pairs=None) -> list:
    """``J_C`` for growing truncations as a convergence diagnostic.

    By default walks the diagonal ``N1 = N2 = 2 .. n_max``; ``pairs`` may
    list explicit ``(N1, N2)`` tuples instead, in which case the increment is
    taken against the previous row.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if pairs is None:
        pairs = [(n, n) for n in range(2, n_max + 1)]
    rows = []
    prev = None
    for a, b in pairs:
        s = ResonatorSystem(sys.eps1, sys.eps2, sys.delta_z, a, b)
        J = solve_resonators(s, baths).J_C
        inc = float("nan") if prev is None else abs(J - prev)
        rows.append(TruncationRow(a, b, J, inc))
        prev = J
    return rows
