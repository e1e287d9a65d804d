#include "cvdag/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvdag/error.hpp"

namespace cvdag {

GramSummary gram_matrix(const Design& design) {
    GramSummary summary;
    summary.gram = design.gram;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(design.gram, Eigen::EigenvaluesOnly);
    // clamp the round-off of a singular W
    summary.lambda1 = std::max(solver.eigenvalues().minCoeff(), 0.0);
    if (summary.lambda1 < 1e-12) summary.lambda1 = 0.0;
    return summary;
}

GramSummary gram_matrix(const TimeSeriesPanel& panel) { return gram_matrix(Design::from_panel(panel)); }

double recovery_bound(std::size_t d, std::size_t horizon, double eps, double m_g, double lambda1) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("recovery_bound: eps must lie in (0, 1)");
    if (!(m_g > 0.0)) throw ConfigError("recovery_bound: m_g must be > 0");
    if (!(lambda1 > 0.0)) throw DomainError("recovery_bound: undefined for a singular Gram matrix");
    const double dd = static_cast<double>(d);
    return std::sqrt(dd * std::log(2.0 * dd / eps) / static_cast<double>(horizon)) / (m_g * lambda1);
}

double concentration_radius(std::size_t d, std::size_t horizon, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("concentration_radius: eps must lie in (0, 1)");
    return std::sqrt(std::log(2.0 * static_cast<double>(d) / eps) / static_cast<double>(horizon));
}

double max_activation(const Design& design, const ParamMatrix& theta) {
    return (design.covariates * theta.values()).maxCoeff();
}

double link_lower_bound(const Link& link, const Design& design, const ParamMatrix& theta) {
    return link.derivative_bounds(max_activation(design, theta)).lower;
}

std::vector<BoundReport> bound_reports(const Design& design, const Link& link,
                                       const ParamMatrix& theta_star, const ParamMatrix& theta_hat,
                                       double eps) {
    const GramSummary g = gram_matrix(design);
    // g' is evaluated between the two activations, so cover both
    const double m_g = std::min(link_lower_bound(link, design, theta_star),
                                link_lower_bound(link, design, theta_hat));
    const std::size_t d = design.dimension();
    const Matrix delta = concatenated_field(theta_star, design, link, Execution::Serial, Feasibility::Relaxed);

    std::vector<BoundReport> reports;
    for (std::size_t i = 0; i < design.n_nodes; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        BoundReport r;
        r.node = i;
        r.lambda1 = g.lambda1;
        r.m_g = m_g;
        r.eps = eps;
        r.bound_l2 = g.lambda1 > 0.0 ? recovery_bound(d, design.horizon, eps, m_g, g.lambda1)
                                     : std::numeric_limits<double>::infinity();
        r.bound_inf_delta = concentration_radius(d, design.horizon, eps);
        r.delta_inf = delta.col(col).cwiseAbs().maxCoeff();
        r.empirical_err = (theta_hat.values().col(col) - theta_star.values().col(col)).norm();
        r.covered = r.empirical_err <= r.bound_l2;
        r.delta_covered = r.delta_inf <= r.bound_inf_delta;
        reports.push_back(r);
    }
    return reports;
}

Coverage concentration_check(const std::vector<TimeSeriesPanel>& trials, const ParamMatrix& theta_star,
                             const Link& link, double eps) {
    Coverage c;
    for (const auto& panel : trials) {
        const Design design = Design::from_panel(panel);
        const Matrix delta = concatenated_field(theta_star, design, link, Execution::Serial, Feasibility::Relaxed);
        const double radius = concentration_radius(design.dimension(), design.horizon, eps);
        for (Eigen::Index i = 0; i < delta.cols(); ++i) {
            ++c.total;
            if (delta.col(i).cwiseAbs().maxCoeff() <= radius) ++c.covered;
        }
    }
    return c;
}

double measured_modulus(const Design& design, const Link& link, const Vector& a, const Vector& b,
                        std::size_t node) {
    const Vector fa = empirical_field(a, node, design, link, Feasibility::Relaxed);
    const Vector fb = empirical_field(b, node, design, link, Feasibility::Relaxed);
    const Vector diff = a - b;
    return (fa - fb).dot(diff) / diff.squaredNorm();
}

} // namespace cvdag
