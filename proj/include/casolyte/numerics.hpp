#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace casolyte {

// Truncation controls for the angular-order (multipole / azimuthal) expansion
// of the curved-geometry scattering operators.
struct ChannelTruncation {
    int initial_order = 0;        // 0 = pick from geometry (narrower gaps need more orders)
    bool auto_grow = true;        // double the order until the result stabilizes
    double target_rel_tol = 1e-6; // relative change between doublings considered converged
    int max_order_budget = 4096;  // hard cap on the highest order tried
};

// Numerical budgets shared by every computation. All tolerances are relative.
struct TruncationConfig {
    double quad_rel_tol = 1e-9;     // adaptive quadrature target
    int quad_max_nodes = 200000;    // max integrand evaluations per integral
    double matsubara_rel_tol = 1e-8;
    int matsubara_max_terms = 5000;
    ChannelTruncation channel;

    void validate() const; // throws std::invalid_argument on nonsensical budgets
};

// Every public result carries one of these instead of silently truncating.
struct ConvergenceReport {
    bool converged = true;
    double achieved_rel_err = 0.0; // estimated, relative to the returned value
    long nodes_used = 0;           // quadrature evaluations
    int terms_used = 0;            // series terms evaluated
    double tail_estimate = 0.0;    // estimated remainder beyond truncation (same units as value)
    std::vector<std::string> flags;

    void add_flag(const std::string& f);
    bool has_flag(const std::string& f) const;
    // Combine a sub-computation's report into this one (worst-case semantics).
    void absorb(const ConvergenceReport& other);
};

// Neumaier compensated accumulator: running sum with a first-order error term,
// immune to cancellation between terms of mixed magnitude.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over the finite interval
// [a,b]. The error estimate is the summed |K15-G7| over panels; panels are
// bisected worst-first until the estimate falls below rel_tol * |integral|
// or the node budget runs out (then flagged, never thrown).
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const TruncationConfig& cfg, ConvergenceReport& report);

// Integral of f over (0, infinity) for integrands with an exponential
// envelope exp(-u / weight_scale). Internally rescales to unit decay and
// cuts the domain where the envelope is below 1e-16 of its peak, so the
// node placement is independent of the physical gap size.
double integrate_semi_infinite(const std::function<double(double)>& f, double weight_scale,
                               const TruncationConfig& cfg, ConvergenceReport& report);

// Sum of term(n) for n = 1, 2, ... Stops once three consecutive terms fall
// below matsubara_rel_tol times the running total AND the projected
// geometric tail is below tolerance; the tail estimate is added to the
// result. Sums whose term ratio is too close to 1 for geometric
// extrapolation are flagged "non_geometric_tail" and returned unextrapolated.
double sum_with_tail(const std::function<double(int)>& term, const TruncationConfig& cfg,
                     ConvergenceReport& report);

// Thrown when 1 - M is not positive definite, i.e. the round-trip scattering
// operator is not a contraction (bodies overlap or the input is unphysical).
struct NonContractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// log det(1 - M). Symmetric M goes through a Cholesky factorization of
// 1 - M, which certifies positive definiteness; general square M goes
// through an LU factorization with an explicit determinant-sign check.
double logdet_one_minus(const Eigen::MatrixXd& m);

} // namespace casolyte
