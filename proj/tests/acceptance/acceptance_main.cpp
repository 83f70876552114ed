// Acceptance gate for the library: ten numbered criteria, one PASS/FAIL line
// each, exit status 0 only when every one passes. Each criterion prints the
// measured numbers it was judged on, so a failure is diagnosable from the log
// alone. Criteria run independently; an exception in one marks it FAIL and
// the rest still run.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "casolyte/constants.hpp"
#include "casolyte/curved.hpp"
#include "casolyte/dielectric.hpp"
#include "casolyte/numerics.hpp"
#include "casolyte/planar.hpp"
#include "casolyte/scenario.hpp"
#include "casolyte/thermal.hpp"

using namespace casolyte;

namespace {

const std::string data_dir = CASOLYTE_DATA_DIR;

bool g_all_pass = true;

void report(int num, bool ok, const std::string& detail) {
    std::printf("[%2d] %s  %s\n", num, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    g_all_pass = g_all_pass && ok;
}

void run_criterion(int num, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(num, ok, detail);
    } catch (const std::exception& e) {
        report(num, false, std::string("threw: ") + e.what());
    }
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 1: the universal planar term carries the advertised Hamaker coefficient.
std::pair<bool, std::string> hamaker_coefficient() {
    const auto ctx = ThermalContext::at(293.0);
    const double d = 1e-8;
    const double per_area = universal_energy_per_area(d, ctx);
    // F/A = -H kT / (12 pi d^2)  =>  H = -12 pi d^2 (F/A) / kT
    const double h = -12.0 * constants::pi * d * d * per_area / ctx.thermal_energy;
    const double exact = 0.75 * constants::zeta3;
    const bool ok = std::fabs(h - exact) < 1e-12 && std::fabs(h - 0.90154) < 1e-5;
    return {ok, fmt("Hamaker coefficient: H = %.12f kT, expected (3/4) zeta(3) = %.12f "
                    "(|dev| %.1e, gate 1e-12) and 0.90154 (|dev| %.1e, gate 1e-5)",
                    h, exact, std::fabs(h - exact), std::fabs(h - 0.90154))};
}

// 2: the closed form equals an independent quadrature over five decades of gap.
std::pair<bool, std::string> closed_form_vs_quadrature() {
    const auto ctx = ThermalContext::at(293.0);
    TruncationConfig cfg;
    double worst = 0.0, worst_d = 0.0;
    bool all_converged = true;
    for (int i = 0; i <= 12; ++i) {
        const double d = 1e-9 * std::pow(10.0, i / 3.0); // 1 nm .. 10 um
        ConvergenceReport rep;
        const double byq = universal_energy_per_area_by_quadrature(d, ctx, cfg, rep);
        const double closed = universal_energy_per_area(d, ctx);
        const double dev = std::fabs(byq / closed - 1.0);
        all_converged = all_converged && rep.converged;
        if (dev > worst) {
            worst = dev;
            worst_d = d;
        }
    }
    const bool ok = worst < 1e-8 && all_converged;
    return {ok, fmt("universal closed form vs quadrature: worst rel dev %.2e at d = %.2e m "
                    "over [1 nm, 10 um] (gate 1e-8), all reports converged: %s",
                    worst, worst_d, all_converged ? "yes" : "no")};
}

// 3: the screened zero-frequency term decays at the rate 2/lambda_D.
std::pair<bool, std::string> screening_decay_rate() {
    const auto ctx = ThermalContext::at(293.0);
    const auto salt = Electrolyte::salt_mM(78.4, 150.0);
    const double lam = salt.debye_length(ctx);
    TruncationConfig cfg;
    std::vector<double> d, y;
    for (int i = 0; i < 12; ++i) {
        const double dd = lam * (5.0 + 5.0 * i / 11.0);
        ConvergenceReport rep;
        const double F = longitudinal_energy_per_area(dd, salt, 3.9, ctx, cfg, rep);
        d.push_back(dd);
        // compensate the known 1/d prefactor of the large-d envelope so the
        // fitted slope isolates the exponential rate
        y.push_back(std::log(dd * std::fabs(F)));
    }
    const double slope = fit_slope(d, y);
    const double target = -2.0 / lam;
    const double dev = std::fabs(slope / target - 1.0);
    const bool ok = dev < 0.02;
    return {ok, fmt("screened-term decay: fitted d ln(d|F_l|)/dd = %.6e 1/m vs -2/lambda_D = "
                    "%.6e 1/m on d in [5, 10] lambda_D, rel dev %.4f (gate 0.02)",
                    slope, target, dev)};
}

// 4: bundled slab scenario keeps the universal term dominant at every gap.
std::pair<bool, std::string> slab_dominance(std::string* csv_out) {
    const auto sc = Scenario::from_json_file(data_dir + "/scenarios/slabs-tetradecane-6nm.json");
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = run_scenario(sc, 4);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    size_t ratio_col = 0;
    for (size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == "universal_to_nonuniversal_ratio")
            ratio_col = i;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& row : table.rows)
        min_ratio = std::min(min_ratio, row[ratio_col]);

    std::ostringstream csv;
    write_table_csv(table, sc, csv);
    if (csv_out)
        *csv_out = csv.str();

    const bool ok = min_ratio > 100.0 && table.all_converged && secs < 60.0;
    return {ok, fmt("slab scenario (water/tetradecane, w = 6 nm): universal/non-universal >= "
                    "%.1f across %zu gaps in [5, 100] nm (gate > 100), converged: %s, "
                    "runtime %.1f s (gate < 60 s)",
                    min_ratio, table.rows.size(), table.all_converged ? "yes" : "no", secs)};
}

// 5: near and far asymptotes bracket the exact curves, and a single dipole
// round trip recovers the far coefficients.
std::pair<bool, std::string> asymptote_matching() {
    // near contact, x = 5e-3: a fixed doubling rung pair keeps this affordable;
    // the auto-grow machinery certifies the relative change between rungs
    ChannelTruncation near_s;
    near_s.initial_order = 960;
    near_s.max_order_budget = 1920;
    near_s.target_rel_tol = 1e-2;
    const SpherePair gs_near{1.0, 1.0, 5e-3 * 0.5};
    const auto fs = f_exact(gs_near, near_s);
    const double r_s_near = fs.value / f_pfa(gs_near);

    ChannelTruncation near_c;
    near_c.initial_order = 480;
    near_c.max_order_budget = 960;
    near_c.target_rel_tol = 1e-1;
    const CylinderPair gc_near{1.0, 1.0, 5e-3 * 0.5, 1.0};
    TruncationConfig cfg;
    const auto pc = phi_exact(gc_near, near_c, cfg);
    const double r_c_near = pc.value / phi_pfa(gc_near);

    // far side, x = 30: the multipole sum orders itself in the center
    // distance, so that is the SSA form it converges to; the literal
    // surface-gap form is printed alongside for reference
    const SpherePair gs_far{1.0, 1.0, 30.0 * 0.5};
    const auto fsf = f_exact(gs_far);
    const double r_s_far = fsf.value / f_ssa_center(gs_far);
    const double r_s_far_gap = fsf.value / f_ssa(gs_far);
    const CylinderPair gc_far{1.0, 1.0, 30.0 * 0.5, 1e3};
    const auto pcf = phi_exact(gc_far, {}, cfg);
    const double r_c_far = pcf.value / phi_ssa_center(gc_far);
    const double r_c_far_gap = pcf.value / phi_ssa(gc_far);

    // dipole round trip at x = 300: coefficient recovery to 1e-3
    const SpherePair gs_dip{1.0, 1.0, 300.0 * 0.5};
    const double Ds = gs_dip.center_distance();
    const double coef_s = f_dipole_single_round_trip(gs_dip) * std::pow(Ds, 6.0);
    const double dev_s = std::fabs(coef_s / 0.75 - 1.0);
    // phi carries the energy-to-phi conversion factor d/L, so its far form
    // scales as d / D^5; invert that shape dependence to expose the coefficient
    const CylinderPair gc_dip{1.0, 1.0, 300.0 * 0.5, 1e3};
    const double Dc = gc_dip.center_distance();
    const double coef_c =
        phi_dipole_single_round_trip(gc_dip, cfg) * std::pow(Dc, 5.0) / gc_dip.gap;
    const double ssa_coef = 891.0 * constants::pi / 4096.0;
    const double dev_c = std::fabs(coef_c / ssa_coef - 1.0);

    const bool band = r_s_near > 0.9 && r_s_near < 1.1 && r_c_near > 0.9 && r_c_near < 1.1 &&
                      r_s_far > 0.9 && r_s_far < 1.1 && r_c_far > 0.9 && r_c_far < 1.1;
    const bool coefs = dev_s < 1e-3 && dev_c < 1e-3;
    const bool ok = band && coefs && fs.report.converged && pc.report.converged;
    return {ok,
            fmt("asymptotes: x=5e-3 f/f_pfa = %.4f, phi/phi_pfa = %.4f; x=30 f/f_ssa(center) = "
                "%.4f, phi/phi_ssa(center) = %.4f (gates [0.9, 1.1]; literal-gap forms %.4f, "
                "%.4f shown for reference); dipole coefficients dev %.1e, %.1e (gate 1e-3)",
                r_s_near, r_c_near, r_s_far, r_c_far, r_s_far_gap, r_c_far_gap, dev_s, dev_c)};
}

// 6: the kT crossing sits at the advertised shapes.
std::pair<bool, std::string> crossover_locations() {
    CrossoverQuery q;
    q.family = CrossoverQuery::Family::spheres;
    q.radius1 = q.radius2 = 1e-6;
    const double gap = find_crossover_gap(q);
    const double xc = SpherePair{1e-6, 1e-6, gap}.aspect_x();

    CrossoverQuery qt;
    qt.family = CrossoverQuery::Family::spheres;
    qt.radius1 = 2.4e-6;
    qt.radius2 = 12e-6;
    const double gap_t = find_crossover_gap(qt);

    const bool ok = xc > 0.09 * 0.9 && xc < 0.09 * 1.1 && gap_t > 0.15e-6 && gap_t < 0.25e-6;
    return {ok, fmt("crossover |F| = kT: equal spheres at x = %.4f (gate 0.09 +- 10%%); "
                    "tweezers pair (2.4 um, 12 um) at gap = %.3f um (gate 0.20 um +- 25%%)",
                    xc, gap_t * 1e6)};
}

// 7: the actin-bundle working point binds by a few kT and its PFA grossly
// overestimates.
std::pair<bool, std::string> actin_bundle_point() {
    const auto ctx = ThermalContext::at(293.0);
    const CylinderPair g{3e-9, 3e-9, 6e-9, 15e-6};
    UniversalResult detail;
    const double e = cylinder_universal_energy(g, ctx, &detail);
    const double binding_kT = std::fabs(e) / ctx.thermal_energy;
    const double over = phi_pfa(g) / detail.value; // same shape: x = 4
    const bool ok = binding_kT > 2.5 && binding_kT < 10.0 && over > 3.0 &&
                    detail.report.converged;
    return {ok, fmt("actin pair (R = 3 nm, L = 15 um, d = 6 nm): |F| = %.2f kT (gate [2.5, 10]); "
                    "phi_pfa/phi_exact at x = 4: %.1f (gate > 3)",
                    binding_kT, over)};
}

// 8: universal energies are purely entropic: exactly linear in T.
std::pair<bool, std::string> entropic_purity() {
    const SpherePair gs{1e-6, 1e-6, 0.25e-6};
    const CylinderPair gc{1e-6, 1e-6, 0.5e-6, 1e-4};
    double worst = 0.0;
    double base_s = 0.0, base_c = 0.0, base_p = 0.0;
    for (double T : {250.0, 300.0, 350.0, 400.0}) {
        const auto ctx = ThermalContext::at(T);
        const double es = sphere_universal_energy(gs, ctx) / T;
        const double ec = cylinder_universal_energy(gc, ctx) / T;
        const double ep = universal_energy_per_area(1e-8, ctx) / T;
        if (T == 250.0) {
            base_s = es;
            base_c = ec;
            base_p = ep;
        } else {
            worst = std::max({worst, std::fabs(es / base_s - 1.0), std::fabs(ec / base_c - 1.0),
                              std::fabs(ep / base_p - 1.0)});
        }
    }
    const bool ok = worst < 1e-12;
    return {ok, fmt("entropic purity: F/T constant over T in [250, 400] K for sphere, cylinder "
                    "and planar universal energies, worst rel dev %.2e (gate 1e-12)",
                    worst)};
}

// 9: the universal functions are dimensionless in shape: x10 all lengths.
std::pair<bool, std::string> scale_invariance() {
    const SpherePair a{1e-6, 2e-6, 0.4e-6};
    const SpherePair b{1e-5, 2e-5, 0.4e-5};
    const double fa = f_exact(a).value;
    const double fb = f_exact(b).value;
    const CylinderPair ca{1e-6, 2e-6, 0.8e-6, 1e-4};
    const CylinderPair cb{1e-5, 2e-5, 0.8e-5, 1e-3};
    TruncationConfig cfg;
    const double pa = phi_exact(ca, {}, cfg).value;
    const double pb = phi_exact(cb, {}, cfg).value;
    const double dev = std::max(std::fabs(fb / fa - 1.0), std::fabs(pb / pa - 1.0));
    const bool ok = dev < 1e-10;
    return {ok, fmt("scale invariance: f and phi unchanged under x10 lengths, worst rel dev "
                    "%.2e (gate 1e-10); f = %.12f, phi = %.12f",
                    dev, fa, pa)};
}

// 10: property suites: contraction positivity, bit-identical parallel CSV,
// quadrature error reports that cover the true error.
std::pair<bool, std::string> property_suites(const std::string& csv_from_4) {
    // (a) every round-trip determinant node is a contraction: positive values
    // across a shape grid, and the guard refuses a non-contraction
    bool contraction_ok = true;
    TruncationConfig cfg;
    for (double x : {0.2, 1.0, 5.0, 30.0}) {
        for (double ratio : {1.0, 3.0}) {
            const SpherePair gs{1.0, ratio, x * (ratio / (1.0 + ratio))};
            contraction_ok = contraction_ok && f_exact(gs).value > 0.0;
            const CylinderPair gc{1.0, ratio, x * (ratio / (1.0 + ratio)), 1e3};
            contraction_ok = contraction_ok && phi_exact(gc, {}, cfg).value > 0.0;
        }
    }
    bool guard_throws = false;
    try {
        logdet_one_minus(2.0 * Eigen::MatrixXd::Identity(4, 4));
    } catch (const NonContractionError&) {
        guard_throws = true;
    }

    // (b) determinism: the same scenario on one worker matches the 4-worker
    // CSV from criterion 4 byte for byte
    const auto sc = Scenario::from_json_file(data_dir + "/scenarios/slabs-tetradecane-6nm.json");
    std::ostringstream serial;
    write_table_csv(run_scenario(sc, 1), sc, serial);
    const bool deterministic = !csv_from_4.empty() && serial.str() == csv_from_4;

    // (c) error-report honesty on integrand families with closed forms
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> amp(0.5, 2.0), rate(0.5, 5.0), freq(1.0, 6.0),
        len(1.0, 10.0);
    int covered = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const double a = amp(rng), s = rate(rng), w = freq(rng), L = len(rng);
        const int fam = t % 3;
        std::function<double(double)> f;
        double exact = 0.0;
        if (fam == 0) {
            f = [=](double u) { return a * std::exp(-s * u); };
            exact = a / s * (1.0 - std::exp(-s * L));
        } else if (fam == 1) {
            f = [=](double u) { return a / ((1.0 + s * u) * (1.0 + s * u)); };
            exact = a / s * (1.0 - 1.0 / (1.0 + s * L));
        } else {
            f = [=](double u) { return a * std::cos(w * u); };
            exact = a * std::sin(w * L) / w;
        }
        ConvergenceReport rep;
        const double num = integrate_finite(f, 0.0, L, cfg, rep);
        const double true_err = std::fabs(num - exact);
        const double claimed = std::max(rep.achieved_rel_err, 1e-15) * std::fabs(num) + 1e-300;
        if (true_err <= claimed)
            ++covered;
    }
    const double coverage = static_cast<double>(covered) / trials;

    const bool ok = contraction_ok && guard_throws && deterministic && coverage >= 0.95;
    return {ok, fmt("properties: contraction positive on shape grid: %s, non-contraction guard "
                    "throws: %s; 1-thread vs 4-thread CSV identical: %s; quadrature error "
                    "reports cover the true error on %.1f%% of 200 closed-form trials "
                    "(gate >= 95%%)",
                    contraction_ok ? "yes" : "no", guard_throws ? "yes" : "no",
                    deterministic ? "yes" : "no", 100.0 * coverage)};
}

} // namespace

int main() {
    std::printf("acceptance gate: 10 criteria\n");
    const auto t0 = std::chrono::steady_clock::now();

    run_criterion(1, hamaker_coefficient);
    run_criterion(2, closed_form_vs_quadrature);
    run_criterion(3, screening_decay_rate);
    std::string csv_from_4;
    run_criterion(4, [&] { return slab_dominance(&csv_from_4); });
    run_criterion(5, asymptote_matching);
    run_criterion(6, crossover_locations);
    run_criterion(7, actin_bundle_point);
    run_criterion(8, entropic_purity);
    run_criterion(9, scale_invariance);
    run_criterion(10, [&] { return property_suites(csv_from_4); });

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s in %.1f s\n", g_all_pass ? "all criteria passed" : "FAILURES present", secs);
    return g_all_pass ? 0 : 1;
}
