"""Weyl and Dirac quantum cellular automata on the body-centred cubic lattice.

A numerical laboratory for the two admissible two-component automata and the
two one-parameter four-component families: constraint verification, closed
form spectra, lattice dynamics and continuum limits.
"""

from .analysis import (
    ConvergenceFit,
    SpectrumSample,
    continuum_residual,
    dirac_continuum_residual,
    group_velocity,
    hamiltonian_limit,
    verify_dispersion,
    weyl_dispersion,
)
from .automaton import (
    ConstraintReport,
    IsotropyElement,
    TransitionSet,
    check_c0,
    check_isotropy,
    check_unitarity_groups,
    isotropy_table,
    momentum_operator,
)
from .derivation import (
    BMatrix,
    WeylSolution,
    all_weyl_solutions,
    build_b_matrices,
    build_weyl_solution,
    classify_equivalence,
    enumerate_gr_solutions,
    gram_pair,
    weyl_solution,
)
from .dirac import (
    DiracTransitionSet,
    build_dirac,
    dirac_closed_spectrum,
    dirac_momentum_operator,
    gamma5_conjugate,
)
from .dynamics import (
    FieldState,
    WavePacketSpec,
    centroid_velocity,
    evolve_direct,
    evolve_momentum,
    make_wave_packet,
)
from .lattice import (
    GeneratingSet,
    PeriodicLattice,
    generating_set,
    in_brillouin_zone,
    momentum_grid,
)
from .smallmat import (
    PauliDecomp,
    eigenphases2,
    gamma_set,
    pauli_compose,
    pauli_decompose,
)

__all__ = [
    "BMatrix",
    "ConstraintReport",
    "ConvergenceFit",
    "DiracTransitionSet",
    "FieldState",
    "GeneratingSet",
    "IsotropyElement",
    "PauliDecomp",
    "PeriodicLattice",
    "SpectrumSample",
    "TransitionSet",
    "WavePacketSpec",
    "WeylSolution",
    "all_weyl_solutions",
    "build_b_matrices",
    "build_dirac",
    "build_weyl_solution",
    "centroid_velocity",
    "check_c0",
    "check_isotropy",
    "check_unitarity_groups",
    "classify_equivalence",
    "continuum_residual",
    "dirac_closed_spectrum",
    "dirac_continuum_residual",
    "dirac_momentum_operator",
    "eigenphases2",
    "enumerate_gr_solutions",
    "evolve_direct",
    "evolve_momentum",
    "gamma5_conjugate",
    "gamma_set",
    "generating_set",
    "gram_pair",
    "group_velocity",
    "hamiltonian_limit",
    "in_brillouin_zone",
    "isotropy_table",
    "make_wave_packet",
    "momentum_grid",
    "momentum_operator",
    "pauli_compose",
    "pauli_decompose",
    "verify_dispersion",
    "weyl_dispersion",
    "weyl_solution",
]

__version__ = "0.1.0"
