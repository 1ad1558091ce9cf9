"""Pulse synthesis and verification for deterministic W-to-GHZ conversion.

Three Rydberg atoms driven by three laser tones reduce, in the blockade
regime, to a four-level ladder whose Hamiltonian lives in a fixed
su(2)+su(2) algebra.  This package builds that algebra, the closed-form
propagators it generates, constraint-satisfying parameter curves, and the
laser schedules that realize them, and it verifies the reduction against
the full eight-dimensional three-atom model.
"""

from .algebra import build_generators, casimirs, pseudospin_basis, expand_state
from .unitary import RotationPair, cayley_klein, exp_map, transformed_pseudospin_states
from .dynamics import (
    RabiTriple,
    effective_hamiltonian,
    vectorial_rabi,
    check_constraints,
    rabi_from_vectorial,
)
from .synthesis import (
    EndpointSolution,
    PulseProfile,
    PulseSchedule,
    solve_endpoints,
    enumerate_endpoints,
    build_curve,
    rabi_schedule,
    reverse_schedule,
)
# The integrator entry point stays at ghzforge.propagate.propagate;
# re-exporting the function here would shadow the submodule attribute.
from .propagate import (
    ghz_fidelity,
    extract_ghz_phase,
    squared_area,
    normalize_to_area,
)
from .fullmodel import FullModelParams, derived_detunings, full_hamiltonian, validate_reduction

__version__ = "0.1.0"
