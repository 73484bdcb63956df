"""Non-Abelian geometric phases of degenerate subspaces, numerically.

A four-level tripod system driven by three pulse loops provides the
non-Abelian case: the twofold-degenerate dark subspace picks up a
matrix-valued holonomy whose loop-order dependence shows up directly in
bare-state populations.  A spin-3/2 quadrupole system provides the
contrast: its degenerate pairs carry connections that turn Abelian
whenever the polar angle is held fixed.

Layers: `linalg` (matrix exponentials), `tripod` (pulse loops, states,
analytic connection), `transport` (path-ordered holonomy engine),
`dynamics` (Schrodinger integration of composite sequences), `nqr` (the
quadrupole system), `cli` (experiment front end).
"""

from ._version import __version__
from .dynamics import (
    ORDER_NORMAL,
    ORDER_REVERSED,
    CompositeSchedule,
    ConstantSchedule,
    StepSizeError,
    Trajectory,
    adiabatic_fidelity,
    default_dt,
    evolve,
    project_populations,
)
from .linalg import frobenius_norm, mat_exp, pauli_exp, pauli_exp_batch, unitarity_defect
from .nqr import (
    NQRPoint,
    SpinOperators,
    latitude_loop,
    nqr_frame,
    nqr_gauge_potential,
    nqr_hamiltonian,
    nqr_hamiltonian_direct,
    nqr_noncommutativity_demo,
    rectangle_loop,
    sector_potential,
    spin_operators,
    tycko_fixed_theta_holonomy,
)
from .transport import (
    ConvergenceError,
    GaugeJumpError,
    Holonomy,
    ParamPath,
    commutator_norm,
    loop_holonomy,
    loop_path,
    numeric_gauge_potential,
    population_difference,
    transport,
    tripod_potential,
)
from .tripod import (
    DegeneratePointError,
    LoopSpec,
    OutOfWindowError,
    ParamPoint,
    PulseTriple,
    angles,
    bright_frame,
    bright_states,
    dark_frame,
    dark_states,
    frame_matrix,
    gauge_potential,
    hamiltonian,
    pulses,
)

__all__ = [
    "__version__",
    "ORDER_NORMAL",
    "ORDER_REVERSED",
    "CompositeSchedule",
    "ConstantSchedule",
    "ConvergenceError",
    "DegeneratePointError",
    "GaugeJumpError",
    "Holonomy",
    "LoopSpec",
    "NQRPoint",
    "OutOfWindowError",
    "ParamPath",
    "ParamPoint",
    "PulseTriple",
    "SpinOperators",
    "StepSizeError",
    "Trajectory",
    "adiabatic_fidelity",
    "angles",
    "bright_frame",
    "bright_states",
    "commutator_norm",
    "dark_frame",
    "dark_states",
    "default_dt",
    "evolve",
    "frame_matrix",
    "frobenius_norm",
    "gauge_potential",
    "hamiltonian",
    "latitude_loop",
    "loop_holonomy",
    "loop_path",
    "mat_exp",
    "nqr_frame",
    "nqr_gauge_potential",
    "nqr_hamiltonian",
    "nqr_hamiltonian_direct",
    "nqr_noncommutativity_demo",
    "numeric_gauge_potential",
    "pauli_exp",
    "pauli_exp_batch",
    "population_difference",
    "project_populations",
    "pulses",
    "rectangle_loop",
    "sector_potential",
    "spin_operators",
    "transport",
    "tripod_potential",
    "tycko_fixed_theta_holonomy",
    "unitarity_defect",
]
