"""Thermal Casimir/Lifshitz free energies between dielectric bodies in electrolyte.

Thin wrapper over the C++ core. Distances are SI meters, energies Joules,
frequencies rad/s unless a name says otherwise.
"""

from ._core import (  # noqa: F401
    ChannelTruncation,
    ConvergenceReport,
    CrossoverQuery,
    CylinderPair,
    Electrolyte,
    EnergyBreakdown,
    MaterialModel,
    NonContractionError,
    PlanarGeometry,
    Polarization,
    SpherePair,
    TabulatedUniversalFunction,
    ThermalContext,
    TruncationConfig,
    UniversalResult,
    ValidationError,
    constants,
    conformal_parameter,
    conformal_parameter_plus_form,
    cylinder_universal_energy,
    f_dipole_single_round_trip,
    f_exact,
    f_interpolated_approx,
    f_pfa,
    f_ssa,
    f_ssa_center,
    find_crossover_gap,
    fresnel_coefficient,
    index_mismatch,
    longitudinal_energy_per_area,
    matsubara_frequency,
    matsubara_term_per_area,
    mean_mode_energy,
    parse_area,
    parse_length,
    phi_dipole_single_round_trip,
    phi_exact,
    phi_interpolated_approx,
    phi_pfa,
    phi_ssa,
    phi_ssa_center,
    slab_reflection,
    sphere_universal_energy,
    total_planar_energy,
    universal_energy_per_area,
    universal_energy_per_area_by_quadrature,
)

__version__ = "0.1.0"
