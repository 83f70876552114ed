#include <cmath>

#include "casolyte/constants.hpp"
#include "casolyte/curved.hpp"
#include "casolyte/dielectric.hpp"

namespace casolyte {

using constants::pi;
using constants::zeta3;

namespace {

void check_pair(double r1, double r2, double gap, const char* what) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw ValidationError(std::string(what) + ": radii must be > 0");
    if (!(gap > 0.0))
        throw ValidationError(std::string(what) + ": gap must be > 0");
}

} // namespace

void SpherePair::validate() const { check_pair(radius1, radius2, gap, "sphere pair"); }
double SpherePair::effective_radius() const { return radius1 * radius2 / (radius1 + radius2); }
double SpherePair::aspect_x() const { return gap / effective_radius(); }
double SpherePair::aspect_u() const {
    const double s = radius1 + radius2;
    return radius1 * radius2 / (s * s);
}
double SpherePair::center_distance() const { return gap + radius1 + radius2; }

void CylinderPair::validate() const {
    check_pair(radius1, radius2, gap, "cylinder pair");
    if (!(length > 0.0))
        throw ValidationError("cylinder pair: length must be > 0");
}
double CylinderPair::effective_radius() const { return radius1 * radius2 / (radius1 + radius2); }
double CylinderPair::aspect_x() const { return gap / effective_radius(); }
double CylinderPair::aspect_u() const {
    const double s = radius1 + radius2;
    return radius1 * radius2 / (s * s);
}
double CylinderPair::center_distance() const { return gap + radius1 + radius2; }

double f_pfa(const SpherePair& g) {
    g.validate();
    return zeta3 / (8.0 * g.aspect_x());
}

double phi_pfa(const CylinderPair& g) {
    g.validate();
    return zeta3 / 32.0 * std::sqrt(2.0 / g.aspect_x());
}

double f_ssa(const SpherePair& g) {
    g.validate();
    const double r3 = std::pow(g.radius1 * g.radius2, 3);
    return 0.75 * r3 / std::pow(g.gap, 6);
}

double phi_ssa(const CylinderPair& g) {
    g.validate();
    const double r2 = g.radius1 * g.radius2;
    return 891.0 * pi / 4096.0 * r2 * r2 / std::pow(g.gap, 4);
}

double f_ssa_center(const SpherePair& g) {
    g.validate();
    const double r3 = std::pow(g.radius1 * g.radius2, 3);
    return 0.75 * r3 / std::pow(g.center_distance(), 6);
}

double phi_ssa_center(const CylinderPair& g) {
    g.validate();
    const double r2 = g.radius1 * g.radius2;
    return 891.0 * pi / 4096.0 * r2 * r2 * g.gap / std::pow(g.center_distance(), 5);
}

double f_interpolated_approx(const SpherePair& g) {
    return 1.0 / (1.0 / f_pfa(g) + 1.0 / f_ssa_center(g));
}

double phi_interpolated_approx(const CylinderPair& g) {
    return 1.0 / (1.0 / phi_pfa(g) + 1.0 / phi_ssa_center(g));
}

double conformal_parameter(const SpherePair& g) {
    g.validate();
    const double dcc = g.center_distance();
    return (dcc * dcc - g.radius1 * g.radius1 - g.radius2 * g.radius2) /
           (2.0 * g.radius1 * g.radius2);
}

double conformal_parameter_plus_form(const SpherePair& g) {
    g.validate();
    const double dcc = g.center_distance();
    return (dcc * dcc + g.radius1 * g.radius1 + g.radius2 * g.radius2) /
           (2.0 * g.radius1 * g.radius2);
}

double sphere_universal_energy(const SpherePair& g, const ThermalContext& ctx,
                               UniversalResult* detail, const ChannelTruncation& trunc) {
    UniversalResult r = f_exact(g, trunc);
    if (detail)
        *detail = r;
    return -ctx.thermal_energy * r.value;
}

double cylinder_universal_energy(const CylinderPair& g, const ThermalContext& ctx,
                                 UniversalResult* detail, const ChannelTruncation& trunc,
                                 const TruncationConfig& cfg) {
    g.validate();
    UniversalResult r = phi_exact(g, trunc, cfg);
    if (g.length < 10.0 * g.gap)
        r.report.add_flag("length_not_much_larger_than_gap");
    if (detail)
        *detail = r;
    return -ctx.thermal_energy * (g.length / g.gap) * r.value;
}

double find_crossover_gap(const CrossoverQuery& q, const ChannelTruncation& trunc,
                          const TruncationConfig& cfg) {
    if (!(q.threshold_kBT > 0.0))
        throw ValidationError("crossover: threshold must be > 0 kT");
    if (!(q.radius1 > 0.0) || !(q.radius2 > 0.0))
        throw ValidationError("crossover: radii must be > 0");
    const bool cyl = q.family == CrossoverQuery::Family::cylinders;
    if (cyl && !(q.length > 0.0))
        throw ValidationError("crossover: cylinder length must be > 0");

    // |F|/kT at gap d; strictly decreasing in d for both families.
    auto magnitude = [&](double d) {
        if (cyl) {
            CylinderPair g{q.radius1, q.radius2, d, q.length};
            return (q.length / d) * phi_exact(g, trunc, cfg).value;
        }
        SpherePair g{q.radius1, q.radius2, d};
        return f_exact(g, trunc).value;
    };

    // Walk the bracket geometrically from a mid-range start. Cost per
    // evaluation explodes near contact (the truncation order scales like 1/x),
    // so never probe deeper than one halving past the crossing.
    const double reff = q.radius1 * q.radius2 / (q.radius1 + q.radius2);
    double lo = 0.3 * reff;
    double hi = 2.0 * lo;
    if (magnitude(lo) > q.threshold_kBT) {
        while (magnitude(hi) > q.threshold_kBT) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e4 * reff)
                throw ValidationError("crossover: threshold not reached out to d = 10^4 R_eff");
        }
    } else {
        hi = lo;
        lo *= 0.5;
        while (magnitude(lo) < q.threshold_kBT) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-3 * reff)
                throw ValidationError("crossover: threshold already crossed at d = R_eff/1000");
        }
    }
    // Bisection on log d to three significant figures.
    while (hi / lo > 1.0 + 1e-3) {
        const double mid = std::sqrt(lo * hi);
        (magnitude(mid) > q.threshold_kBT ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

} // namespace casolyte
