#pragma once

#include <string>
#include <vector>

#include "casolyte/numerics.hpp"
#include "casolyte/thermal.hpp"

namespace casolyte {

// Two spheres of radii R1, R2 whose surfaces are a gap d apart.
struct SpherePair {
    double radius1;
    double radius2;
    double gap;

    void validate() const;
    double effective_radius() const; // R1 R2 / (R1 + R2)
    double aspect_x() const;         // x = d / R_eff
    double aspect_u() const;         // u = R1 R2 / (R1 + R2)^2, in (0, 1/4]
    double center_distance() const;  // D = d + R1 + R2
};

// Two parallel cylinders of radii R1, R2 and common length L, surfaces a
// gap d apart. Valid for L >> d (end effects are not modeled).
struct CylinderPair {
    double radius1;
    double radius2;
    double gap;
    double length;

    void validate() const;
    double effective_radius() const;
    double aspect_x() const;
    double aspect_u() const;
    double center_distance() const;
};

// The universal zero-frequency interaction of curved bodies in electrolyte:
//   spheres:   F = -kT f(x, u)
//   cylinders: F = -kT (L / d) phi(x, u)
// f and phi are dimensionless functions of shape alone.

// Proximity-force (Derjaguin) limit, x << 1:
//   f   -> zeta(3)/(8 x)
//   phi -> (zeta(3)/32) sqrt(2/x) * sqrt(R_eff/R_eff) ... see implementation.
double f_pfa(const SpherePair& g);
double phi_pfa(const CylinderPair& g);

// Far-distance (single dipole round trip) asymptote, expressed with the
// surface gap d as printed in the x, u variables:
//   f_ssa   = (3/4)  R1^3 R2^3 / d^6
//   phi_ssa = (891 pi / 4096) R1^2 R2^2 / d^4
double f_ssa(const SpherePair& g);
double phi_ssa(const CylinderPair& g);

// Same asymptotes expressed with the center (axis) distance D = d + R1 + R2,
// which is the variable in which the multipole expansion actually orders
// itself; these are the forms the exact computation converges to at large x.
double f_ssa_center(const SpherePair& g);
double phi_ssa_center(const CylinderPair& g);

// Two-point Pade-type interpolation 1 / (1/f_pfa + 1/f_ssa_center).
// Approximate by construction; useful as a quick estimate only.
double f_interpolated_approx(const SpherePair& g);
double phi_interpolated_approx(const CylinderPair& g);

// Conformal combination y = 1 + x (1 + u x / 2)
//   = ((d+R1+R2)^2 - R1^2 - R2^2) / (2 R1 R2),
// the inversive distance of the two spheres: a conformal invariant, equal to
// cosh(mu) of the bispherical coordinate separation. f collapses onto a
// single curve in y far better than in x at fixed u.
double conformal_parameter(const SpherePair& g);
// Variant with "+ R1^2 + R2^2" in the numerator (equals y + 1/u - 2, not an
// invariant); kept so the collapse claim can be tested against it.
double conformal_parameter_plus_form(const SpherePair& g);

struct UniversalResult {
    double value = 0.0; // f or phi
    int order_used = 0; // highest angular order retained
    ConvergenceReport report;
};

// Exact universal function for spheres: multipole scattering determinant
//   f = -(1/2) sum_m log det(1 - M^(m)),
// M^(m) built from zero-frequency multipole reflections l/(l+1) (R/D)^{2l+1}
// and solid-harmonic translations across the center distance D.
UniversalResult f_exact(const SpherePair& g, const ChannelTruncation& trunc = {});

// Exact universal function for cylinders per unit length:
//   phi = (d / 2 pi) Integral_0^inf |log det(1 - M(q))| dq,
// M(q) built from modified-Bessel reflections I'_n/|K'_n| and Graf addition
// translations across the axis distance D.
UniversalResult phi_exact(const CylinderPair& g, const ChannelTruncation& trunc = {},
                          const TruncationConfig& cfg = {});

// Single-round-trip dipole truncation of the exact operators (leading term
// of -log det = Tr M with only the lowest channel kept). Used to pin the
// far-distance coefficients 3/4 and 891 pi/4096 against the full machinery.
double f_dipole_single_round_trip(const SpherePair& g);
double phi_dipole_single_round_trip(const CylinderPair& g, const TruncationConfig& cfg = {});

// Universal free energies (J): -kT f and -kT (L/d) phi.
double sphere_universal_energy(const SpherePair& g, const ThermalContext& ctx,
                               UniversalResult* detail = nullptr,
                               const ChannelTruncation& trunc = {});
double cylinder_universal_energy(const CylinderPair& g, const ThermalContext& ctx,
                                 UniversalResult* detail = nullptr,
                                 const ChannelTruncation& trunc = {},
                                 const TruncationConfig& cfg = {});

// Gap at which the universal attraction reaches threshold_kBT (default: the
// crossing |F| = kT). Temperature cancels (|F|/kT = f resp. (L/d) phi), so
// no thermal context is needed. Bisection on log d to three significant
// figures.
struct CrossoverQuery {
    enum class Family { spheres, cylinders };
    Family family = Family::spheres;
    double radius1 = 0.0;
    double radius2 = 0.0;
    double length = 0.0; // cylinders only
    double threshold_kBT = 1.0;
};
double find_crossover_gap(const CrossoverQuery& q, const ChannelTruncation& trunc = {},
                          const TruncationConfig& cfg = {});

// Precomputed f(x, u) or phi(x, u) tables imported from CSV, interpolated
// linearly in log x. Sphere tables have columns x,u,f; cylinder tables x,phi
// (single u). Lookups outside the tabulated x range throw.
class TabulatedUniversalFunction {
  public:
    static TabulatedUniversalFunction from_csv_file(const std::string& path);
    static TabulatedUniversalFunction from_csv_text(const std::string& text,
                                                    const std::string& origin);

    // For sphere tables u selects the nearest tabulated aspect family
    // (within 0.02); cylinder tables ignore u.
    double evaluate(double x, double u = -1.0) const;
    bool has_aspect_column() const { return has_u_; }
    size_t size() const { return rows_; }

  private:
    struct Branch {
        double u;
        std::vector<double> logx;
        std::vector<double> value;
    };
    std::vector<Branch> branches_;
    bool has_u_ = false;
    size_t rows_ = 0;
};

} // namespace casolyte
