#include "cvdag/model.hpp"

#include <cmath>
#include <string>

#include "cvdag/error.hpp"

namespace cvdag {

TimeSeriesPanel::TimeSeriesPanel(std::size_t n_nodes, std::size_t memory, std::size_t horizon)
    : n_nodes_(n_nodes), memory_(memory), horizon_(horizon),
      data_(n_nodes * (memory + horizon), 0) {
    if (n_nodes == 0 || memory == 0 || horizon == 0) {
        throw ConfigError("panel needs n_nodes, memory and horizon >= 1");
    }
}

std::size_t TimeSeriesPanel::offset(std::size_t node, long t) const {
    if (node >= n_nodes_ || t < first_time() || t > static_cast<long>(horizon_)) {
        throw std::out_of_range("panel index (node " + std::to_string(node) + ", t " +
                                std::to_string(t) + ") out of range");
    }
    return static_cast<std::size_t>(t - first_time()) * n_nodes_ + node;
}

int TimeSeriesPanel::at(std::size_t node, long t) const { return data_[offset(node, t)]; }

void TimeSeriesPanel::set(std::size_t node, long t, bool value) {
    data_[offset(node, t)] = value ? 1 : 0;
}

ParamMatrix::ParamMatrix(std::size_t n_nodes, std::size_t memory)
    : n_nodes_(n_nodes), memory_(memory),
      values_(Matrix::Zero(static_cast<Eigen::Index>(dimension(n_nodes, memory)),
                           static_cast<Eigen::Index>(n_nodes))) {
    if (n_nodes == 0 || memory == 0) throw ConfigError("parameters need n_nodes, memory >= 1");
}

ParamMatrix::ParamMatrix(std::size_t n_nodes, std::size_t memory, Matrix values)
    : n_nodes_(n_nodes), memory_(memory), values_(std::move(values)) {
    if (n_nodes == 0 || memory == 0) throw ConfigError("parameters need n_nodes, memory >= 1");
    if (static_cast<std::size_t>(values_.rows()) != dimension(n_nodes, memory) ||
        static_cast<std::size_t>(values_.cols()) != n_nodes) {
        throw ShapeError("parameter matrix must be (1 + tau*d1) x d1");
    }
}

Matrix extract_lag_matrix(const ParamMatrix& params, std::size_t lag) {
    if (lag < 1 || lag > params.memory()) throw std::out_of_range("lag out of range");
    const auto d1 = static_cast<Eigen::Index>(params.n_nodes());
    Matrix a(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d1; ++j)
            a(i, j) = params.alpha(static_cast<std::size_t>(i), static_cast<std::size_t>(j), lag);
    return a;
}

void set_lag_matrix(ParamMatrix& params, std::size_t lag, const Matrix& adjacency) {
    if (lag < 1 || lag > params.memory()) throw std::out_of_range("lag out of range");
    const auto d1 = static_cast<Eigen::Index>(params.n_nodes());
    if (adjacency.rows() != d1 || adjacency.cols() != d1) throw ShapeError("adjacency must be d1 x d1");
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d1; ++j)
            params.alpha(static_cast<std::size_t>(i), static_cast<std::size_t>(j), lag) = adjacency(i, j);
}

Link Link::parse(std::string_view name) {
    if (name == "linear") return Link(LinkKind::Linear);
    if (name == "exponential" || name == "exp") return Link(LinkKind::Exponential);
    if (name == "sigmoid") return Link(LinkKind::Sigmoid);
    throw ConfigError("unknown link '" + std::string(name) + "'");
}

std::string_view Link::name() const noexcept {
    switch (kind_) {
    case LinkKind::Linear: return "linear";
    case LinkKind::Exponential: return "exponential";
    case LinkKind::Sigmoid: return "sigmoid";
    }
    return "?";
}

double Link::value(double x) const {
    switch (kind_) {
    case LinkKind::Linear: return x;
    case LinkKind::Exponential: return -std::expm1(-x);
    case LinkKind::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    }
    return x;
}

double Link::derivative(double x) const {
    switch (kind_) {
    case LinkKind::Linear: return 1.0;
    case LinkKind::Exponential: return std::exp(-x);
    case LinkKind::Sigmoid: {
        const double s = 1.0 / (1.0 + std::exp(-x));
        return s * (1.0 - s);
    }
    }
    return 1.0;
}

namespace {

template <typename Array>
void apply_link(LinkKind kind, Array&& x) {
    switch (kind) {
    case LinkKind::Linear: break;
    case LinkKind::Exponential: x = 1.0 - (-x).exp(); break;
    case LinkKind::Sigmoid: x = 1.0 / (1.0 + (-x).exp()); break;
    }
}

} // namespace

void Link::apply(Eigen::Ref<Matrix> x) const { apply_link(kind_, x.array()); }

DerivativeBounds Link::derivative_bounds(double x_max) const {
    x_max = std::max(x_max, 0.0);
    switch (kind_) {
    case LinkKind::Linear: return {1.0, 1.0};
    // both derivatives are decreasing on [0, inf)
    case LinkKind::Exponential: return {derivative(x_max), 1.0};
    case LinkKind::Sigmoid: return {derivative(x_max), 0.25};
    }
    return {};
}

Vector lag_window(const TimeSeriesPanel& panel, long t) {
    if (t < 1 || t > static_cast<long>(panel.horizon())) {
        throw std::out_of_range("lag_window: t = " + std::to_string(t) + " outside 1..T");
    }
    const std::size_t tau = panel.memory();
    Vector w(static_cast<Eigen::Index>(ParamMatrix::dimension(panel.n_nodes(), tau)));
    w(0) = 1.0;
    for (std::size_t j = 0; j < panel.n_nodes(); ++j)
        for (std::size_t lag = 1; lag <= tau; ++lag)
            w(static_cast<Eigen::Index>(1 + j * tau + lag - 1)) =
                panel.at(j, t - static_cast<long>(lag));
    return w;
}

double event_probability(const Eigen::Ref<const Vector>& theta_i,
                         const Eigen::Ref<const Vector>& w, const Link& link) {
    if (theta_i.size() != w.size()) throw ShapeError("event_probability: size mismatch");
    const double x = w.dot(theta_i);
    if (link.kind() == LinkKind::Linear && (x > 1.0 || x < 0.0)) {
        throw FeasibilityError("linear link activation " + std::to_string(x) + " outside [0, 1]");
    }
    return link.value(x);
}

double worst_case_activation(const ParamMatrix& params) {
    return params.values().colwise().sum().maxCoeff();
}

TimeSeriesPanel simulate(const ParamMatrix& params, const Link& link, std::size_t horizon,
                         std::uint64_t seed, HistoryPolicy history) {
    if (!params.nonnegative()) throw FeasibilityError("simulate: parameters must be nonnegative");
    if (horizon < 1) throw ConfigError("simulate: horizon must be >= 1");

    const std::size_t d1 = params.n_nodes();
    const std::size_t tau = params.memory();
    TimeSeriesPanel panel(d1, tau, horizon);
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto stationary_probability = [&](std::size_t i) {
        Vector w = Vector::Zero(static_cast<Eigen::Index>(params.dimension()));
        w(0) = 1.0;
        return event_probability(params.values().col(static_cast<Eigen::Index>(i)), w, link);
    };
    if (history == HistoryPolicy::Stationary) {
        for (long t = panel.first_time(); t <= 0; ++t)
            for (std::size_t i = 0; i < d1; ++i)
                panel.set(i, t, unit(rng) < stationary_probability(i));
    }

    const auto& theta = params.values();
    for (long t = 1; t <= static_cast<long>(horizon); ++t) {
        const Vector w = lag_window(panel, t);
        for (std::size_t i = 0; i < d1; ++i) {
            const double p = event_probability(theta.col(static_cast<Eigen::Index>(i)), w, link);
            panel.set(i, t, unit(rng) < p);
        }
    }
    return panel;
}

} // namespace cvdag
