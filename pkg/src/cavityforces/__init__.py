"""Casimir forces and cavity thermodynamics from mirror reflection amplitudes.

A planar cavity is completely characterized, for equilibrium purposes,
by the reflection amplitudes of its walls.  This package builds the
lossless equivalent of a lossy cavity (delayed total-reflection
amplitudes), counts its normal modes and wall density of states, and
evaluates the resulting thermodynamics -- ground-state energy, free
energy, internal energy, entropy and Casimir pressure -- by deformation
to the imaginary frequency axis with Matsubara summation.
"""

from .core import (
    C_LIGHT,
    HBAR,
    K_BOLTZMANN,
    NormalWavevector,
    SpectralPoint,
    UnitSystem,
    branch_sqrt,
    imaginary_axis_kappa,
    normal_wavevector,
)
from .mirrors import (
    Constant,
    Drude,
    HalfSpace,
    MirrorModel,
    PassivityError,
    PerfectMirror,
    Plasma,
    Stack,
    TabulatedPermittivity,
    TabulatedReflection,
    load_permittivity_table,
    load_reflection_table,
    load_stack,
    parse_mirror_spec,
    parse_permittivity_spec,
    passivity_check,
    permittivity,
    reflect_halfspace,
    reflect_stack,
)
from .scattering import (
    DelayedMirror,
    InterfaceScattering,
    ResonanceError,
    build_interface_evanescent,
    build_interface_propagating,
    delay_consistency_check,
    energy_flux,
    total_reflection_delay,
    total_reflection_multiple,
    total_reflection_series,
)
from .modes import (
    CavityConfig,
    ModeWindow,
    count_modes_argument_principle,
    dispersion_D,
    dispersion_Dt,
    dos_census_study,
    find_modes,
    model_reflection,
    uniform_reflection,
    wall_dos,
)
from .lifshitz import (
    NATURAL,
    SI,
    Estimate,
    PhysicalConstants,
    PlanarCavity,
    QuadratureSpec,
    ThermoResult,
    casimir_pressure,
    compute_thermodynamics,
    entropy,
    free_energy,
    ground_state_energy,
    internal_energy,
    matsubara_lattice,
    occupation,
    spectral_average,
)

__version__ = "0.1.0"
