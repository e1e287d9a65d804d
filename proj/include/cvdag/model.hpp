#pragma once

// Bernoulli-process GLM over d1 binary time series with memory depth tau.
//
//   P(y_t^(i) = 1 | past) = g(w_t' theta_i),
//   w_t = (1, y_{t-1}^(1), ..., y_{t-tau}^(1), ..., y_{t-1}^(d1), ..., y_{t-tau}^(d1)).
//
// theta is stored as a d x d1 matrix (d = 1 + tau*d1); column i holds the
// background intensity nu_i in row 0 followed by the lag blocks of every
// source node.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cvdag/rng.hpp"

namespace cvdag {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Weights at or below this are treated as absent edges.
inline constexpr double kDefaultEdgeEps = 1e-3;

// Observations y_t^(i) for t = 1-tau..T. Times t <= 0 are the given history.
class TimeSeriesPanel {
public:
    TimeSeriesPanel() = default;
    TimeSeriesPanel(std::size_t n_nodes, std::size_t memory, std::size_t horizon);

    std::size_t n_nodes() const noexcept { return n_nodes_; }
    std::size_t memory() const noexcept { return memory_; }
    std::size_t horizon() const noexcept { return horizon_; }

    // t ranges over [1 - memory, horizon].
    int at(std::size_t node, long t) const;
    void set(std::size_t node, long t, bool value);

    long first_time() const noexcept { return 1 - static_cast<long>(memory_); }

    friend bool operator==(const TimeSeriesPanel&, const TimeSeriesPanel&) = default;

private:
    std::size_t offset(std::size_t node, long t) const;

    std::size_t n_nodes_ = 0;
    std::size_t memory_ = 0;
    std::size_t horizon_ = 0;
    std::vector<std::uint8_t> data_;  // time-major: all nodes of a step are contiguous
};

class ParamMatrix {
public:
    ParamMatrix() = default;
    ParamMatrix(std::size_t n_nodes, std::size_t memory);
    ParamMatrix(std::size_t n_nodes, std::size_t memory, Matrix values);

    static std::size_t dimension(std::size_t n_nodes, std::size_t memory) noexcept {
        return 1 + memory * n_nodes;
    }

    // 0-based row of alpha_{i,source,lag} inside any column; lag is 1-based.
    // Equals f(j, lag) - 1 for the 1-based index map f(j, lag) = 1 + (j-1)*tau + lag.
    std::size_t row_of(std::size_t source, std::size_t lag) const noexcept {
        return 1 + source * memory_ + (lag - 1);
    }

    std::size_t n_nodes() const noexcept { return n_nodes_; }
    std::size_t memory() const noexcept { return memory_; }
    std::size_t dimension() const noexcept { return dimension(n_nodes_, memory_); }

    double background(std::size_t node) const { return values_(0, node); }
    double& background(std::size_t node) { return values_(0, node); }

    // Influence of `source` on `target` at the given lag.
    double alpha(std::size_t target, std::size_t source, std::size_t lag) const {
        return values_(row_of(source, lag), target);
    }
    double& alpha(std::size_t target, std::size_t source, std::size_t lag) {
        return values_(row_of(source, lag), target);
    }

    const Matrix& values() const noexcept { return values_; }
    Matrix& values() noexcept { return values_; }

    Vector backgrounds() const { return values_.row(0).transpose(); }

    bool nonnegative() const { return (values_.array() >= 0.0).all(); }

    friend bool operator==(const ParamMatrix& a, const ParamMatrix& b) {
        return a.n_nodes_ == b.n_nodes_ && a.memory_ == b.memory_ && a.values_ == b.values_;
    }

private:
    std::size_t n_nodes_ = 0;
    std::size_t memory_ = 0;
    Matrix values_;
};

// A_lag with (A_lag)(i, j) = alpha_{i j lag}; row i collects the weights into node i.
Matrix extract_lag_matrix(const ParamMatrix& params, std::size_t lag);
void set_lag_matrix(ParamMatrix& params, std::size_t lag, const Matrix& adjacency);

enum class LinkKind { Linear, Exponential, Sigmoid };

struct DerivativeBounds {
    double lower = 0.0;  // m_g
    double upper = 0.0;  // M_g
};

class Link {
public:
    explicit Link(LinkKind kind = LinkKind::Exponential) : kind_(kind) {}

    static Link parse(std::string_view name);

    LinkKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept;

    double value(double x) const;
    double derivative(double x) const;

    // Applies g entrywise in place.
    void apply(Eigen::Ref<Matrix> x) const;

    // Bounds on g' over [0, x_max].
    DerivativeBounds derivative_bounds(double x_max) const;

    friend bool operator==(Link, Link) = default;

private:
    LinkKind kind_;
};

// Covariate vector w_{t-tau:t-1} for 1 <= t <= T.
Vector lag_window(const TimeSeriesPanel& panel, long t);

// g(w' theta_i). Throws FeasibilityError when the linear link leaves [0, 1].
double event_probability(const Eigen::Ref<const Vector>& theta_i,
                         const Eigen::Ref<const Vector>& w, const Link& link);

enum class HistoryPolicy {
    Stationary,  // y_t^(i) ~ Bernoulli(g(nu_i)) independently for t <= 0
    Zeros,
};

TimeSeriesPanel simulate(const ParamMatrix& params, const Link& link, std::size_t horizon,
                         std::uint64_t seed,
                         HistoryPolicy history = HistoryPolicy::Stationary);

// Largest w' theta_i over every binary w; the linear link is feasible on any
// data iff this is <= 1.
double worst_case_activation(const ParamMatrix& params);

} // namespace cvdag
