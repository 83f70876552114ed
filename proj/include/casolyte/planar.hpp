#pragma once

#include <limits>
#include <vector>

#include "casolyte/dielectric.hpp"
#include "casolyte/numerics.hpp"
#include "casolyte/thermal.hpp"

namespace casolyte {

enum class Polarization { te, tm };

// Two parallel plates (half spaces or symmetric slabs of finite width)
// separated by a liquid gap.
struct PlanarGeometry {
    double gap;                                                 // d, m
    double slab_width = std::numeric_limits<double>::infinity(); // w, m; infinity = half spaces
    double area = 1e-12;                                        // m^2, energies are reported for this patch

    void validate() const;
};

// Per-term entry of the Matsubara sum in an EnergyBreakdown.
struct MatsubaraTerm {
    int n;
    double energy; // J (for the geometry's area)
};

struct BreakdownConvergence {
    int matsubara_cutoff = 0;
    double tail_estimate = 0.0;    // J
    double quadrature_rel_err = 0.0;
    std::vector<std::string> flags;
    bool converged = true;
};

// Full planar free energy, split into the three physically distinct pieces:
//  - universal:     zero-frequency transverse part, unscreened, material
//                   independent (the piece that survives at large distance),
//  - longitudinal:  zero-frequency longitudinal part, screened by the ions
//                   on the Debye scale,
//  - nonuniversal:  nonzero Matsubara terms, killed at large d by retardation
//                   and at any d by dielectric index matching.
struct EnergyBreakdown {
    double universal = 0.0;     // J
    double longitudinal = 0.0;  // J
    double nonuniversal = 0.0;  // J, sum over n >= 1 including tail estimate
    double total = 0.0;         // J
    std::vector<MatsubaraTerm> nonuniversal_terms;
    BreakdownConvergence convergence;
};

// Universal zero-frequency transverse free energy per unit area,
//   F/A = -zeta(3) kT / (16 pi d^2),
// exact closed form. Independent of the plate material and of salt; a slab
// of any finite width gives the same value because the zero-frequency
// transverse reflection has unit modulus, which cancels the slab factor.
double universal_energy_per_area(double gap, const ThermalContext& ctx);

// Same quantity evaluated by numerical quadrature of
//   (kT / 16 pi d^2) * Integral_0^inf u ln(1 - e^-u) du.
// Kept as an independent route for cross-checking the closed form; do not
// replace calls to universal_energy_per_area with this.
double universal_energy_per_area_by_quadrature(double gap, const ThermalContext& ctx,
                                               const TruncationConfig& cfg,
                                               ConvergenceReport& report);

// Zero-frequency longitudinal free energy per unit area. Screened: the
// wavevector integral starts at u0 = 2 d / lambda_D, so the contribution
// dies like e^{-2 d / lambda_D} beyond the Debye length. Zero for an
// ion-free gap (flagged, not thrown).
double longitudinal_energy_per_area(double gap, const Electrolyte& electrolyte,
                                    double body_static_permittivity, const ThermalContext& ctx,
                                    const TruncationConfig& cfg, ConvergenceReport& report);

// Fresnel reflection coefficient on the imaginary axis for the interface
// gap medium (eps1) -> body (eps2), at imaginary frequency xi and
// transverse wavevector k.
double fresnel_coefficient(Polarization pol, double eps1, double eps2, double xi, double k);

// Reflection from a slab of finite width w (body material, gap medium on
// both sides): r (1 - e^{-2 kappa2 w}) / (1 - r^2 e^{-2 kappa2 w}).
double slab_reflection(Polarization pol, double eps1, double eps2, double xi, double k,
                       double width);

// Free energy per unit area of the n-th Matsubara term (n >= 1), for two
// symmetric slabs of the given width (infinite width = half spaces).
double matsubara_term_per_area(int n, const PlanarGeometry& geom, const MaterialModel& gap_material,
                               const MaterialModel& body_material, const ThermalContext& ctx,
                               const TruncationConfig& cfg, ConvergenceReport& report);

// Assembles the whole planar breakdown for the geometry's area.
EnergyBreakdown total_planar_energy(const PlanarGeometry& geom, const MaterialModel& gap_material,
                                    const Electrolyte& electrolyte,
                                    const MaterialModel& body_material, const ThermalContext& ctx,
                                    const TruncationConfig& cfg = {});

} // namespace casolyte
