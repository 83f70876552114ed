#include <algorithm>
#include <cmath>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "casolyte/constants.hpp"
#include "casolyte/curved.hpp"

namespace casolyte {

namespace {

// Return codes are checked by hand below; GSL's default abort-on-error
// handler must not fire inside library code.
const bool gsl_handler_disabled = [] {
    gsl_set_error_handler_off();
    return true;
}();

// For a cylinder in the strongly screened electrolyte the zero-frequency
// azimuthal reflection amplitude at axial wavenumber q is
//   rho_n(q) = I'_n(q R) / |K'_n(q R)|,
// (zero normal derivative on the surface, no n = 0 log-monopole: rho_0 ->
// (qR)^2/2 at small qR), and translation between the two axes is the Graf
// addition theorem with kernel K_{n-n'}(q D). All Bessel work is done on
// logarithms of the e^{+-x}-scaled functions so that no intermediate over-
// or underflows for any order; the physical e^{-q d} round-trip envelope
// reassembles inside the final exponent.

// log(K_n(x) e^x) for n = 0..nmax via stable upward recurrence.
std::vector<double> log_k_scaled(int nmax, double x) {
    std::vector<double> lk(nmax + 1);
    lk[0] = std::log(gsl_sf_bessel_K0_scaled(x));
    if (nmax >= 1)
        lk[1] = std::log(gsl_sf_bessel_K1_scaled(x));
    for (int n = 1; n < nmax; ++n)
        lk[n + 1] = lk[n] + std::log(2.0 * n / x + std::exp(lk[n - 1] - lk[n]));
    return lk;
}

// Ratio I_{m+1}(x)/I_m(x) by the standard continued fraction
//   x / (2(m+1) + x^2 / (2(m+2) + x^2 / (...)))
// evaluated with modified Lentz. Converges for every x > 0 (slowly once
// x >> m, hence the generous iteration cap; each term is a few flops).
double bessel_i_ratio(int m, double x) {
    const double tiny = 1e-300;
    double f = tiny, c = tiny, d = 0.0;
    const long cap = 1000 + 4 * (static_cast<long>(x) + m);
    for (long k = 1; k <= cap; ++k) {
        const double a = (k == 1) ? x : x * x;
        const double b = 2.0 * (m + k);
        d = b + a * d;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return f;
}

// log(I_n(x) e^-x) for n = 0..nmax, any order and any x > 0. The array
// routine in GSL zeroes every order once the top one underflows, so instead
// run the downward recurrence I_{n-1} = I_{n+1} + (2n/x) I_n entirely in log
// space (downward is the stable direction for I), seeded by the top-order
// continued-fraction ratio and pinned at n = 0 to the directly computed I_0.
std::vector<double> log_i_scaled(int nmax, double x) {
    std::vector<double> li(nmax + 2);
    li[nmax] = 0.0;
    li[nmax + 1] = std::log(bessel_i_ratio(nmax, x));
    for (int n = nmax; n >= 1; --n)
        li[n - 1] = li[n] + std::log(2.0 * n / x + std::exp(li[n + 1] - li[n]));
    const double shift = std::log(gsl_sf_bessel_I0_scaled(x)) - li[0];
    for (double& v : li)
        v += shift;
    li.pop_back();
    return li;
}

double log_sum_exp(double a, double b) {
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// log sqrt(rho_n(qR)) + qR for n = 0..nmax, i.e. the scaled half-reflection
// whose pairing with the translation kernel leaves exactly e^{-q d}.
std::vector<double> log_half_reflection(int nmax, double qr) {
    const std::vector<double> li = log_i_scaled(nmax + 1, qr);
    const std::vector<double> lk = log_k_scaled(nmax + 1, qr);
    std::vector<double> out(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        // I'_n = (I_{n-1} + I_{n+1})/2, |K'_n| = (K_{n-1} + K_{n+1})/2,
        // with the n = 0 case using I_{-1} = I_1, K_{-1} = K_1.
        const int below = n == 0 ? 1 : n - 1;
        const double lip = log_sum_exp(li[below], li[n + 1]) - std::log(2.0);
        const double lkp = log_sum_exp(lk[below], lk[n + 1]) - std::log(2.0);
        out[n] = 0.5 * (lip - lkp) + qr;
    }
    return out;
}

struct ChannelBlocks {
    Eigen::MatrixXd even; // azimuthal orders symmetric under n -> -n, size N+1
    Eigen::MatrixXd odd;  // antisymmetric, size N
};

// The round-trip operator over n in [-N, N] commutes with n -> -n, so it
// splits into the parity-symmetrized blocks
//   E_00 = C_00, E_0j = sqrt(2) C_0j, E_i0 = sqrt(2) C_i0,
//   E_ij = C_ij + C_{i,-j},  O_ij = C_ij - C_{i,-j}   (i,j >= 1)
// with C_nn' = sqrt(rho1_n) K_{n-n'}(qD) sqrt(rho2_n'), and
// log det(1 - C C^T) = log det(1 - E E^T) + log det(1 - O O^T).
ChannelBlocks build_blocks(const CylinderPair& g, int nmax, double q) {
    const double dcc = g.center_distance();
    const std::vector<double> h1 = log_half_reflection(nmax, q * g.radius1);
    const std::vector<double> h2 = log_half_reflection(nmax, q * g.radius2);
    std::vector<double> lkd = log_k_scaled(2 * nmax, q * dcc);
    for (double& v : lkd)
        v -= q * dcc; // back to log K_k(qD); finite after pairing with h1+h2

    ChannelBlocks blocks;
    blocks.even.resize(nmax + 1, nmax + 1);
    blocks.odd.resize(nmax, nmax);
    const double sqrt2 = std::sqrt(2.0);
    for (int i = 0; i <= nmax; ++i) {
        for (int j = 0; j <= nmax; ++j) {
            const double base = h1[i] + h2[j];
            const double ldiff = lkd[std::abs(i - j)];
            if (i == 0 || j == 0) {
                const double c = std::exp(base + ldiff);
                blocks.even(i, j) = (i == 0 && j == 0) ? c : sqrt2 * c;
            } else {
                const double lsum = lkd[i + j]; // K grows with order: lsum >= ldiff
                const double amp = std::exp(base + lsum);
                const double em = std::expm1(ldiff - lsum);
                blocks.even(i, j) = amp * (2.0 + em);
                blocks.odd(i - 1, j - 1) = amp * em;
            }
        }
    }
    return blocks;
}

// Symmetrize B B^T through a lower-triangle rank update (half the flops of
// the full product) and mirror for the determinant routine.
Eigen::MatrixXd round_trip_gram(const Eigen::MatrixXd& b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b.rows(), b.rows());
    m.selfadjointView<Eigen::Lower>().rankUpdate(b, 1.0);
    m.triangularView<Eigen::StrictlyUpper>() = m.transpose().triangularView<Eigen::StrictlyUpper>();
    return m;
}

// |log det(1 - M(q))| at fixed azimuthal cutoff.
double logdet_magnitude(const CylinderPair& g, int nmax, double q) {
    const ChannelBlocks blocks = build_blocks(g, nmax, q);
    return -(logdet_one_minus(round_trip_gram(blocks.even)) +
             logdet_one_minus(round_trip_gram(blocks.odd)));
}

// phi at fixed cutoff: (1/4 pi) Int_0^inf |log det(1 - M(t/2d))| dt,
// t = 2 q d so the integrand carries a unit exponential envelope.
double phi_at_order(const CylinderPair& g, int nmax, const TruncationConfig& cfg,
                    ConvergenceReport& report) {
    auto integrand = [&g, nmax](double t) {
        return logdet_magnitude(g, nmax, t / (2.0 * g.gap));
    };
    return integrate_semi_infinite(integrand, 1.0, cfg, report) / (4.0 * constants::pi);
}

int initial_order(const CylinderPair& g, const ChannelTruncation& trunc) {
    if (trunc.initial_order > 0)
        return std::min(trunc.initial_order, trunc.max_order_budget);
    // Same channel-decay scale as for spheres: exp(-2 mu n) with
    // cosh(mu) = (D^2 - R1^2 - R2^2)/(2 R1 R2).
    const double dcc = g.center_distance();
    const double y = (dcc * dcc - g.radius1 * g.radius1 - g.radius2 * g.radius2) /
                     (2.0 * g.radius1 * g.radius2);
    const double mu = std::acosh(y);
    const int by_gap = static_cast<int>(std::ceil(12.0 / mu));
    return std::min(std::max(12, by_gap), trunc.max_order_budget);
}

} // namespace

UniversalResult phi_exact(const CylinderPair& g, const ChannelTruncation& trunc,
                          const TruncationConfig& cfg) {
    g.validate();
    cfg.validate();
    (void)gsl_handler_disabled;
    UniversalResult out;
    int nmax = initial_order(g, trunc);
    double value = phi_at_order(g, nmax, cfg, out.report);
    if (!trunc.auto_grow) {
        out.value = value;
        out.order_used = nmax;
        out.report.add_flag("fixed_order_no_error_estimate");
        return out;
    }
    while (true) {
        if (nmax >= trunc.max_order_budget) {
            out.value = value;
            out.order_used = nmax;
            out.report.converged = false;
            out.report.add_flag("channel_budget_exhausted");
            return out;
        }
        const int next = std::min(2 * nmax, trunc.max_order_budget);
        ConvergenceReport rep;
        const double refined = phi_at_order(g, next, cfg, rep);
        out.report.absorb(rep);
        const double rel = std::abs(refined - value) / std::max(std::abs(refined), 1e-300);
        value = refined;
        nmax = next;
        if (rel <= trunc.target_rel_tol) {
            out.value = value;
            out.order_used = nmax;
            out.report.achieved_rel_err = std::max(out.report.achieved_rel_err, rel);
            return out;
        }
    }
}

double phi_dipole_single_round_trip(const CylinderPair& g, const TruncationConfig& cfg) {
    g.validate();
    (void)gsl_handler_disabled;
    // Lowest azimuthal channels (n, n' in {-1, 0, 1}), one round trip:
    // the integrand is Tr M(q) instead of |log det(1 - M(q))|.
    auto integrand = [&g](double t) {
        const ChannelBlocks blocks = build_blocks(g, 1, t / (2.0 * g.gap));
        return (blocks.even * blocks.even.transpose()).trace() +
               (blocks.odd * blocks.odd.transpose()).trace();
    };
    ConvergenceReport rep;
    return integrate_semi_infinite(integrand, 1.0, cfg, rep) / (4.0 * constants::pi);
}

} // namespace casolyte
