#include "casolyte/planar.hpp"

#include <cmath>

#include "casolyte/constants.hpp"

namespace casolyte {

using constants::c_light;
using constants::pi;
using constants::zeta3;

void PlanarGeometry::validate() const {
    if (!(gap > 0.0) || !std::isfinite(gap))
        throw ValidationError("planar geometry: gap must be > 0");
    if (!(slab_width > 0.0))
        throw ValidationError("planar geometry: slab width must be > 0");
    if (!(area > 0.0) || !std::isfinite(area))
        throw ValidationError("planar geometry: area must be > 0");
}

double universal_energy_per_area(double gap, const ThermalContext& ctx) {
    if (!(gap > 0.0))
        throw std::domain_error("universal_energy_per_area: gap must be > 0");
    return -zeta3 * ctx.thermal_energy / (16.0 * pi * gap * gap);
}

double universal_energy_per_area_by_quadrature(double gap, const ThermalContext& ctx,
                                               const TruncationConfig& cfg,
                                               ConvergenceReport& report) {
    if (!(gap > 0.0))
        throw std::domain_error("universal_energy_per_area_by_quadrature: gap must be > 0");
    // u = 2 k d; F/A = kT/(16 pi d^2) Int_0^inf u ln(1 - e^-u) du.
    auto integrand = [](double u) { return u * std::log1p(-std::exp(-u)); };
    const double integral = integrate_semi_infinite(integrand, 1.0, cfg, report);
    return ctx.thermal_energy / (16.0 * pi * gap * gap) * integral;
}

double longitudinal_energy_per_area(double gap, const Electrolyte& electrolyte,
                                    double body_static_permittivity, const ThermalContext& ctx,
                                    const TruncationConfig& cfg, ConvergenceReport& report) {
    if (!(gap > 0.0))
        throw std::domain_error("longitudinal_energy_per_area: gap must be > 0");
    if (!(body_static_permittivity > 0.0))
        throw std::domain_error("longitudinal_energy_per_area: body permittivity must be > 0");
    if (!electrolyte.has_ions()) {
        report.add_flag("no_ions_no_longitudinal_term");
        return 0.0;
    }
    const double lambda = electrolyte.debye_length(ctx);
    const double eps_b = electrolyte.solvent_static_permittivity;
    const double eps_2 = body_static_permittivity;
    const double d = gap;
    const double u0 = 2.0 * d / lambda;
    const double inv_l2 = 1.0 / (lambda * lambda);

    // u = 2 kappa d with kappa^2 = k^2 + 1/lambda^2; the integral starts at
    // u0 = 2 d / lambda (k = 0), which is what produces the e^{-2d/lambda}
    // screening of the whole term. The longitudinal reflection uses the
    // ion-free dielectric contrast with the screened gap-side wavevector.
    auto integrand = [=](double t) {
        const double u = u0 + t;
        const double kappa = u / (2.0 * d);
        const double k2 = kappa * kappa - inv_l2;
        const double k = k2 > 0.0 ? std::sqrt(k2) : 0.0;
        const double r = (eps_b * kappa - eps_2 * k) / (eps_b * kappa + eps_2 * k);
        const double e = std::exp(-u);
        return u * std::log1p(-r * r * e);
    };
    const double integral = integrate_semi_infinite(integrand, 1.0, cfg, report);
    return ctx.thermal_energy / (16.0 * pi * d * d) * integral;
}

double fresnel_coefficient(Polarization pol, double eps1, double eps2, double xi, double k) {
    if (!(eps1 > 0.0) || !(eps2 > 0.0))
        throw std::domain_error("fresnel_coefficient: permittivities must be > 0");
    if (!(k >= 0.0) || !(xi >= 0.0))
        throw std::domain_error("fresnel_coefficient: xi and k must be >= 0");
    const double xc2 = xi * xi / (c_light * c_light);
    const double kappa1 = std::sqrt(k * k + eps1 * xc2);
    const double kappa2 = std::sqrt(k * k + eps2 * xc2);
    if (pol == Polarization::te)
        return (kappa1 - kappa2) / (kappa1 + kappa2);
    return (eps2 * kappa1 - eps1 * kappa2) / (eps2 * kappa1 + eps1 * kappa2);
}

double slab_reflection(Polarization pol, double eps1, double eps2, double xi, double k,
                       double width) {
    const double r = fresnel_coefficient(pol, eps1, eps2, xi, k);
    if (std::isinf(width))
        return r;
    if (!(width > 0.0))
        throw std::domain_error("slab_reflection: width must be > 0");
    const double xc2 = xi * xi / (c_light * c_light);
    const double kappa2 = std::sqrt(k * k + eps2 * xc2);
    const double e = std::exp(-2.0 * kappa2 * width);
    return r * (1.0 - e) / (1.0 - r * r * e);
}

double matsubara_term_per_area(int n, const PlanarGeometry& geom, const MaterialModel& gap_material,
                               const MaterialModel& body_material, const ThermalContext& ctx,
                               const TruncationConfig& cfg, ConvergenceReport& report) {
    if (n < 1)
        throw std::domain_error("matsubara_term_per_area: n must be >= 1");
    geom.validate();
    const double xi = matsubara_frequency(ctx, n);
    const double eps1 = gap_material.permittivity(xi);
    const double eps2 = body_material.permittivity(xi);
    const double d = geom.gap;
    const double w = geom.slab_width;

    // u = 2 kappa1 d; the integral starts at u0 = 2 sqrt(eps1) xi d / c
    // (k = 0), which encodes retardation: terms with xi above c/(2 sqrt(eps1) d)
    // are exponentially suppressed.
    const double kappa0 = std::sqrt(eps1) * xi / c_light; // gap-side wavevector at k = 0
    const double u0 = 2.0 * kappa0 * d;
    auto integrand = [=](double t) {
        const double u = u0 + t;
        const double kappa1 = u / (2.0 * d);
        const double k2 = kappa1 * kappa1 - kappa0 * kappa0;
        const double k = k2 > 0.0 ? std::sqrt(k2) : 0.0;
        const double rte = slab_reflection(Polarization::te, eps1, eps2, xi, k, w);
        const double rtm = slab_reflection(Polarization::tm, eps1, eps2, xi, k, w);
        const double e = std::exp(-u);
        return u * (std::log1p(-rte * rte * e) + std::log1p(-rtm * rtm * e));
    };
    const double integral = integrate_semi_infinite(integrand, 1.0, cfg, report);
    return ctx.thermal_energy / (8.0 * pi * d * d) * integral;
}

EnergyBreakdown total_planar_energy(const PlanarGeometry& geom, const MaterialModel& gap_material,
                                    const Electrolyte& electrolyte,
                                    const MaterialModel& body_material, const ThermalContext& ctx,
                                    const TruncationConfig& cfg) {
    geom.validate();
    cfg.validate();
    EnergyBreakdown out;
    ConvergenceReport rep;

    out.universal = geom.area * universal_energy_per_area(geom.gap, ctx);
    out.longitudinal =
        geom.area * longitudinal_energy_per_area(geom.gap, electrolyte,
                                                 body_material.static_permittivity(), ctx, cfg, rep);

    std::vector<MatsubaraTerm> terms;
    auto term_fn = [&](int n) {
        const double e =
            geom.area * matsubara_term_per_area(n, geom, gap_material, body_material, ctx, cfg, rep);
        terms.push_back({n, e});
        return e;
    };
    out.nonuniversal = sum_with_tail(term_fn, cfg, rep);
    out.nonuniversal_terms = std::move(terms);
    out.total = out.universal + out.longitudinal + out.nonuniversal;

    out.convergence.matsubara_cutoff = rep.terms_used;
    out.convergence.tail_estimate = rep.tail_estimate;
    out.convergence.quadrature_rel_err = rep.achieved_rel_err;
    out.convergence.flags = rep.flags;
    out.convergence.converged = rep.converged;
    return out;
}

} // namespace casolyte
