"""Steady-state heat currents of two-body quantum absorption refrigerators.

Three solvers share the reservoir primitives in :mod:`qfridge.baths`:

* :mod:`qfridge.qubit_me` -- two qubits with ZZ (and optional XX) coupling,
  local and global master equations;
* :mod:`qfridge.resonator_me` -- two cross-Kerr coupled resonators in a
  truncated photon-number basis;
* :mod:`qfridge.negf` -- self-consistent mean-field Keldysh Green's functions
  with an exchange-correlation bubble for the resonator model.

Units: hbar = k_B = 1 and every energy is measured in units of a reference
k_B T.  Heat currents are in (k_B T)^2 / hbar; ``J_C > 0`` means heat is
extracted from the cold bath C.
"""

from qfridge.baths import (
    BathSpec,
    UnitsConvention,
    bose_occupation,
    rate_in,
    rate_out,
    spectral_density,
    transition_rate,
)
from qfridge.steady import DegenerateGeneratorError, stationary_distribution

__all__ = [
    "BathSpec",
    "UnitsConvention",
    "bose_occupation",
    "rate_in",
    "rate_out",
    "spectral_density",
    "transition_rate",
    "DegenerateGeneratorError",
    "stationary_distribution",
]

__version__ = "0.1.0"
