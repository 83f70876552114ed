#pragma once

// Physical constants, CODATA 2018 SI values.

namespace casolyte::constants {

inline constexpr double k_boltzmann = 1.380649e-23;          // J/K (exact)
inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double c_light = 299792458.0;               // m/s (exact)
inline constexpr double elementary_charge = 1.602176634e-19; // C (exact)
inline constexpr double avogadro = 6.02214076e23;            // 1/mol (exact)
inline constexpr double epsilon0 = 8.8541878128e-12;         // F/m

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double zeta3 = 1.2020569031595942854; // Apery's constant zeta(3)

// Coefficient of the universal planar free energy per unit area,
//   F/A = -univ_hamaker_kT * kT / (12 pi d^2),
// i.e. the zero-frequency Hamaker constant in units of kT.
inline constexpr double univ_hamaker_kT = 0.75 * zeta3; // ~0.90154

} // namespace casolyte::constants
