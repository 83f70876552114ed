#include "casolyte/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace casolyte {

void TruncationConfig::validate() const {
    if (!(quad_rel_tol > 0.0) || quad_rel_tol > 0.1)
        throw std::invalid_argument("quad_rel_tol must lie in (0, 0.1]");
    if (quad_max_nodes < 15)
        throw std::invalid_argument("quad_max_nodes must allow at least one panel (>= 15)");
    if (!(matsubara_rel_tol > 0.0) || matsubara_rel_tol > 0.1)
        throw std::invalid_argument("matsubara_rel_tol must lie in (0, 0.1]");
    if (matsubara_max_terms < 4)
        throw std::invalid_argument("matsubara_max_terms must be >= 4");
    if (channel.max_order_budget < 1)
        throw std::invalid_argument("channel.max_order_budget must be >= 1");
    if (!(channel.target_rel_tol > 0.0) || channel.target_rel_tol > 0.1)
        throw std::invalid_argument("channel.target_rel_tol must lie in (0, 0.1]");
    if (channel.initial_order < 0)
        throw std::invalid_argument("channel.initial_order must be >= 0");
}

void ConvergenceReport::add_flag(const std::string& f) {
    if (!has_flag(f))
        flags.push_back(f);
}

bool ConvergenceReport::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

void ConvergenceReport::absorb(const ConvergenceReport& other) {
    converged = converged && other.converged;
    achieved_rel_err = std::max(achieved_rel_err, other.achieved_rel_err);
    nodes_used += other.nodes_used;
    terms_used = std::max(terms_used, other.terms_used);
    tail_estimate += other.tail_estimate;
    for (const auto& f : other.flags)
        add_flag(f);
}

namespace {

// Gauss 7 / Kronrod 15 abscissae and weights on [-1,1] (QUADPACK values).
// xgk[1,3,...] are the Gauss-7 points.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    double integral;
    double error;
};

// One G7/K15 evaluation on [a,b]; error = |K15 - G7|.
PanelResult gauss_kronrod_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    double kron = wgk[7] * fv[7];
    double gauss = wg[3] * fv[7];
    for (int i = 0; i < 7; ++i)
        kron += wgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) {
        const int j = 2 * i + 1;
        gauss += wg[i] * (fv[j] + fv[14 - j]);
    }
    return {kron * h, std::abs(kron - gauss) * h};
}

struct Panel {
    double a, b;
    double integral;
    double error;
    long seq; // creation order, used as a deterministic tie-break
};

struct PanelWorse {
    bool operator()(const Panel& lhs, const Panel& rhs) const {
        if (lhs.error != rhs.error)
            return lhs.error < rhs.error;
        return lhs.seq > rhs.seq;
    }
};

} // namespace

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const TruncationConfig& cfg, ConvergenceReport& report) {
    cfg.validate();
    if (!(b > a))
        throw std::invalid_argument("integrate_finite: requires b > a");

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
    long nodes = 0;
    long seq = 0;

    // Initial subdivision: geometric panels concentrated near the left
    // endpoint, where the integrands of interest vary fastest.
    std::vector<double> cuts{a};
    double step = (b - a) / 64.0;
    double pos = a;
    while (pos + step < b) {
        pos += step;
        cuts.push_back(pos);
        step *= 2.0;
    }
    cuts.push_back(b);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        PanelResult r = gauss_kronrod_panel(f, cuts[i], cuts[i + 1]);
        nodes += 15;
        heap.push({cuts[i], cuts[i + 1], r.integral, r.error, seq++});
    }

    // Running totals drive the stopping decision; the returned value is
    // re-summed over the final panel set in left-to-right order so it does
    // not depend on the refinement history.
    double value_est = 0.0, err_est = 0.0;
    {
        std::priority_queue<Panel, std::vector<Panel>, PanelWorse> copy = heap;
        while (!copy.empty()) {
            value_est += copy.top().integral;
            err_est += copy.top().error;
            copy.pop();
        }
    }

    auto finish = [&](bool exhausted) {
        std::vector<Panel> panels;
        while (!heap.empty()) {
            panels.push_back(heap.top());
            heap.pop();
        }
        std::sort(panels.begin(), panels.end(),
                  [](const Panel& l, const Panel& r) { return l.a < r.a; });
        CompensatedSum value, err;
        for (const auto& p : panels) {
            value.add(p.integral);
            err.add(p.error);
        }
        const double v = value.value();
        const double scale = std::max(std::abs(v), 1e-300);
        report.nodes_used += nodes;
        report.achieved_rel_err = std::max(report.achieved_rel_err, err.value() / scale);
        if (exhausted) {
            report.converged = false;
            report.add_flag("quad_budget_exhausted");
        }
        return v;
    };

    while (true) {
        const double scale = std::max(std::abs(value_est), 1e-300);
        if (err_est <= cfg.quad_rel_tol * scale)
            return finish(false);
        if (nodes + 30 > cfg.quad_max_nodes)
            return finish(true);
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        PanelResult left = gauss_kronrod_panel(f, worst.a, mid);
        PanelResult right = gauss_kronrod_panel(f, mid, worst.b);
        nodes += 30;
        value_est += left.integral + right.integral - worst.integral;
        err_est += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.integral, left.error, seq++});
        heap.push({mid, worst.b, right.integral, right.error, seq++});
    }
}

double integrate_semi_infinite(const std::function<double(double)>& f, double weight_scale,
                               const TruncationConfig& cfg, ConvergenceReport& report) {
    if (!(weight_scale > 0.0) || !std::isfinite(weight_scale))
        throw std::invalid_argument("integrate_semi_infinite: weight_scale must be positive");
    // u = weight_scale * t maps the envelope exp(-u/weight_scale) to exp(-t);
    // beyond t_max = 40 the envelope is < 4.3e-18 of its peak.
    constexpr double t_max = 40.0;
    auto g = [&f, weight_scale](double t) { return weight_scale * f(weight_scale * t); };
    return integrate_finite(g, 0.0, t_max, cfg, report);
}

double sum_with_tail(const std::function<double(int)>& term, const TruncationConfig& cfg,
                     ConvergenceReport& report) {
    cfg.validate();
    CompensatedSum acc;
    int small_streak = 0;
    double prev = 0.0, prev2 = 0.0; // last two terms, for the tail ratio
    int n = 0;

    while (n < cfg.matsubara_max_terms) {
        ++n;
        const double t = term(n);
        acc.add(t);
        const double total = std::abs(acc.value());
        const bool small = std::abs(t) <= cfg.matsubara_rel_tol * std::max(total, 1e-300) ||
                           (t == 0.0 && total == 0.0);
        small_streak = small ? small_streak + 1 : 0;

        if (small_streak >= 3 && n >= 4) {
            // Project the remainder as a geometric series using the more
            // conservative of the last two term ratios.
            double r = 0.0;
            if (prev != 0.0)
                r = std::abs(t / prev);
            if (prev2 != 0.0)
                r = std::max(r, std::abs(prev / prev2));
            if (t == 0.0 && prev == 0.0) {
                report.terms_used = std::max(report.terms_used, n);
                return acc.value();
            }
            if (r < 0.9) {
                const double tail = t * r / (1.0 - r);
                if (std::abs(tail) <= cfg.matsubara_rel_tol * std::max(total, 1e-300)) {
                    report.terms_used = std::max(report.terms_used, n);
                    report.tail_estimate += tail;
                    return acc.value() + tail;
                }
                // Terms are small but the projected tail is not yet: keep going.
            } else {
                report.terms_used = std::max(report.terms_used, n);
                report.add_flag("non_geometric_tail");
                return acc.value();
            }
        }
        prev2 = prev;
        prev = t;
    }

    report.terms_used = std::max(report.terms_used, n);
    report.converged = false;
    report.add_flag("series_budget_exhausted");
    return acc.value();
}

double logdet_one_minus(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("logdet_one_minus: matrix must be square");
    const Eigen::Index n = m.rows();
    if (n == 0)
        return 0.0;

    const double scale = m.cwiseAbs().maxCoeff();
    const bool symmetric = (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1.0);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - m;

    if (symmetric) {
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() != Eigen::Success)
            throw NonContractionError(
                "logdet_one_minus: 1 - M is not positive definite (round trip is not a contraction)");
        double logdet = 0.0;
        const auto& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < n; ++i)
            logdet += 2.0 * std::log(l(i, i));
        return logdet;
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    double logdet = 0.0;
    double sign = lu.permutationP().determinant(); // +1 or -1
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = lu.matrixLU()(i, i);
        if (d == 0.0)
            throw NonContractionError("logdet_one_minus: 1 - M is singular");
        if (d < 0.0)
            sign = -sign;
        logdet += std::log(std::abs(d));
    }
    if (sign <= 0.0)
        throw NonContractionError("logdet_one_minus: det(1 - M) is negative");
    return logdet;
}

} // namespace casolyte
