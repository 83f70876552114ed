#include <cmath>
#include <random>

#include "doctest.h"

#include "casolyte/constants.hpp"
#include "casolyte/numerics.hpp"

using namespace casolyte;

TEST_CASE("compensated sum survives catastrophic cancellation") {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
}

TEST_CASE("finite quadrature reproduces smooth integrals") {
    TruncationConfig cfg;
    ConvergenceReport rep;
    const double i1 = integrate_finite([](double x) { return x * x; }, 0.0, 1.0, cfg, rep);
    CHECK(i1 == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(rep.converged);

    ConvergenceReport rep2;
    const double i2 =
        integrate_finite([](double x) { return std::sin(x); }, 0.0, constants::pi, cfg, rep2);
    CHECK(i2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("finite quadrature is deterministic across repeated calls") {
    TruncationConfig cfg;
    auto f = [](double x) { return std::exp(-x) / (1.0 + x * x); };
    ConvergenceReport ra, rb;
    const double a = integrate_finite(f, 0.0, 7.0, cfg, ra);
    const double b = integrate_finite(f, 0.0, 7.0, cfg, rb);
    CHECK(a == b); // bitwise: panel ordering must not depend on history
}

TEST_CASE("semi-infinite quadrature handles exponential envelopes") {
    TruncationConfig cfg;
    ConvergenceReport rep;
    const double i1 = integrate_semi_infinite([](double u) { return std::exp(-u); }, 1.0, cfg, rep);
    CHECK(i1 == doctest::Approx(1.0).epsilon(1e-10));

    ConvergenceReport rep2;
    const double i2 =
        integrate_semi_infinite([](double u) { return std::exp(-u / 3.0); }, 3.0, cfg, rep2);
    CHECK(i2 == doctest::Approx(3.0).epsilon(1e-10));

    // Int_0^inf u ln(1 - e^-u) du = -zeta(3): the universal-coefficient integral
    ConvergenceReport rep3;
    const double i3 = integrate_semi_infinite(
        [](double u) { return u * std::log1p(-std::exp(-u)); }, 1.0, cfg, rep3);
    CHECK(i3 == doctest::Approx(-constants::zeta3).epsilon(1e-10));
}

TEST_CASE("quadrature reports exhaustion instead of lying") {
    TruncationConfig cfg;
    cfg.quad_max_nodes = 60; // far too few for this oscillatory integrand
    ConvergenceReport rep;
    integrate_finite([](double x) { return std::sin(50.0 * x * x); }, 0.0, 10.0, cfg, rep);
    CHECK_FALSE(rep.converged);
    CHECK(rep.has_flag("quad_budget_exhausted"));
}

TEST_CASE("quadrature error reports bound the true error on reference families") {
    // Families with exact antiderivatives: a/s, a/s^2, a/s^4 on random [lo, hi].
    // The report must be honest: true relative error within 10x the target
    // for at least 95% of cases (the quadrature aims at 1e-9 here).
    TruncationConfig cfg;
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> lo_d(0.2, 2.0), len_d(0.5, 30.0), amp_d(0.5, 5.0);
    int honest = 0, total = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const double lo = lo_d(gen), hi = lo + len_d(gen), a = amp_d(gen);
        const int family = trial % 3;
        double exact = 0.0;
        std::function<double(double)> f;
        switch (family) {
        case 0:
            f = [a](double s) { return a / s; };
            exact = a * std::log(hi / lo);
            break;
        case 1:
            f = [a](double s) { return a / (s * s); };
            exact = a * (1.0 / lo - 1.0 / hi);
            break;
        default:
            f = [a](double s) { return a / (s * s * s * s); };
            exact = a / 3.0 * (1.0 / (lo * lo * lo) - 1.0 / (hi * hi * hi));
            break;
        }
        ConvergenceReport rep;
        const double got = integrate_finite(f, lo, hi, cfg, rep);
        const double true_rel = std::abs(got - exact) / std::abs(exact);
        ++total;
        if (true_rel <= std::max(10.0 * cfg.quad_rel_tol, 10.0 * rep.achieved_rel_err) ||
            true_rel < 1e-13)
            ++honest;
    }
    CHECK(honest >= (total * 95) / 100);
}

TEST_CASE("series summation extrapolates geometric tails") {
    TruncationConfig cfg;
    ConvergenceReport rep;
    // sum_{n>=1} r^n = r / (1 - r)
    const double r = 0.5;
    const double s = sum_with_tail([r](int n) { return std::pow(r, n); }, cfg, rep);
    CHECK(s == doctest::Approx(r / (1.0 - r)).epsilon(1e-8));
    CHECK(rep.converged);
    CHECK(rep.terms_used < 60);
}

TEST_CASE("series summation flags non-geometric tails") {
    TruncationConfig cfg;
    ConvergenceReport rep;
    // Ratio 0.95 is too close to 1 for the geometric projection: the sum
    // must come back unextrapolated and flagged, not silently extended.
    const double s = sum_with_tail([](int n) { return std::pow(0.95, n); }, cfg, rep);
    CHECK(rep.has_flag("non_geometric_tail"));
    CHECK(s == doctest::Approx(0.95 / 0.05).epsilon(1e-6)); // still accurate, just honest

    ConvergenceReport rep2;
    TruncationConfig cfg2;
    cfg2.matsubara_max_terms = 4000;
    // 1/n^2 terms shrink too slowly to go "small" within the budget at all.
    sum_with_tail([](int n) { return 1.0 / (static_cast<double>(n) * n); }, cfg2, rep2);
    CHECK(rep2.has_flag("series_budget_exhausted"));
}

TEST_CASE("series summation reports budget exhaustion") {
    TruncationConfig cfg;
    cfg.matsubara_max_terms = 10;
    ConvergenceReport rep;
    sum_with_tail([](int n) { return std::pow(0.99, n); }, cfg, rep);
    CHECK_FALSE(rep.converged);
    CHECK(rep.has_flag("series_budget_exhausted"));
}

TEST_CASE("log det (1 - M) for symmetric and triangular operators") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 0.5;
    d(1, 1) = 0.25;
    CHECK(logdet_one_minus(d) == doctest::Approx(std::log(0.5 * 0.75)).epsilon(1e-14));

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
    t(0, 0) = 0.3;
    t(0, 1) = 0.2;
    t(1, 1) = 0.4; // upper triangular, eigenvalues 0.3 and 0.4
    CHECK(logdet_one_minus(t) == doctest::Approx(std::log(0.7 * 0.6)).epsilon(1e-14));
}

TEST_CASE("non-contractive round trips throw instead of returning garbage") {
    Eigen::MatrixXd m = 2.0 * Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(logdet_one_minus(m), NonContractionError);
}

TEST_CASE("truncation config rejects nonsensical budgets") {
    TruncationConfig cfg;
    cfg.quad_rel_tol = -1.0;
    CHECK_THROWS(cfg.validate());
    TruncationConfig cfg2;
    cfg2.matsubara_max_terms = 0;
    CHECK_THROWS(cfg2.validate());
}
