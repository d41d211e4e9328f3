"""Keldysh Green's functions for the coupled-resonator refrigerator.

Mean-field (Hartree) retarded propagators are dressed by the tunnelling
self-energies of the filtered baths; the occupations that set the Hartree
shifts are found self-consistently.  The cold-bath heat current comes only
from the exchange-correlation bubble of resonator 2.
"""

from qfridge.negf.grid import FrequencyGrid, ResolutionError
from qfridge.negf.hilbert import principal_value
from qfridge.negf.selfenergy import (
    AliasingError,
    SelfEnergy,
    tunneling_self_energy,
    xc_self_energy,
)
from qfridge.negf.solver import (
    BroadeningError,
    NEGFSolution,
    NonConvergenceError,
    SelfConsistentState,
    heat_current_C_negf,
    keldysh_lesser_greater,
    mean_field_retarded,
    meir_wingreen_current,
    self_consistent_loop,
    solve_negf,
)

__all__ = [
    "FrequencyGrid",
    "ResolutionError",
    "principal_value",
    "AliasingError",
    "SelfEnergy",
    "tunneling_self_energy",
    "xc_self_energy",
    "BroadeningError",
    "NEGFSolution",
    "NonConvergenceError",
    "SelfConsistentState",
    "heat_current_C_negf",
    "keldysh_lesser_greater",
    "mean_field_retarded",
    "meir_wingreen_current",
    "self_consistent_loop",
    "solve_negf",
]
