#pragma once

// Non-asymptotic guarantees of the unpenalized estimator, evaluated on data.
//
//   ||theta_hat_i - theta*_i||_2 <= sqrt(d log(2d/eps) / T) / (m_g lambda_1)
//   ||F_T^(i)(theta*_i)||_inf    <= sqrt(log(2d/eps) / T)
//
// each holding with probability >= 1 - eps, where lambda_1 is the smallest
// eigenvalue of W = (1/T) sum_t w_t w_t'.

#include <cstddef>
#include <vector>

#include "cvdag/fields.hpp"

namespace cvdag {

struct GramSummary {
    Matrix gram;
    double lambda1 = 0.0;
};

GramSummary gram_matrix(const TimeSeriesPanel& panel);
GramSummary gram_matrix(const Design& design);

double recovery_bound(std::size_t d, std::size_t horizon, double eps, double m_g, double lambda1);
double concentration_radius(std::size_t d, std::size_t horizon, double eps);

// max_t,i w_t' theta_i over the realized covariates.
double max_activation(const Design& design, const ParamMatrix& theta);

// m_g of the link on [0, max activation of theta over the data].
double link_lower_bound(const Link& link, const Design& design, const ParamMatrix& theta);

struct BoundReport {
    std::size_t node = 0;
    double lambda1 = 0.0;
    double m_g = 0.0;
    double eps = 0.0;
    double bound_l2 = 0.0;
    double bound_inf_delta = 0.0;
    double delta_inf = 0.0;      // ||F_T^(i)(theta*_i)||_inf
    double empirical_err = 0.0;  // ||theta_hat_i - theta*_i||_2
    bool covered = false;        // empirical_err <= bound_l2
    bool delta_covered = false;  // delta_inf <= bound_inf_delta
};

// One report per node.
std::vector<BoundReport> bound_reports(const Design& design, const Link& link,
                                       const ParamMatrix& theta_star, const ParamMatrix& theta_hat,
                                       double eps);

struct Coverage {
    std::size_t total = 0;
    std::size_t covered = 0;
    double fraction() const { return total == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(total); }
};

// Fraction of (trial, node) pairs with ||F_T^(i)(theta*_i)||_inf inside the concentration radius.
Coverage concentration_check(const std::vector<TimeSeriesPanel>& trials, const ParamMatrix& theta_star,
                             const Link& link, double eps);

// (F(a) - F(b))'(a - b) / ||a - b||^2 for one column of the unpenalized field.
double measured_modulus(const Design& design, const Link& link, const Vector& a, const Vector& b,
                        std::size_t node);

} // namespace cvdag
