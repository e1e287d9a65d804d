#include "cvdag/fields.hpp"

#include <string>

#include "cvdag/error.hpp"

namespace cvdag {

Design Design::from_panel(const TimeSeriesPanel& panel) {
    Design design;
    design.n_nodes = panel.n_nodes();
    design.memory = panel.memory();
    design.horizon = panel.horizon();
    const auto T = static_cast<Eigen::Index>(panel.horizon());
    const auto d = static_cast<Eigen::Index>(design.dimension());
    const auto d1 = static_cast<Eigen::Index>(panel.n_nodes());

    design.covariates.resize(T, d);
    design.responses.resize(T, d1);
    for (Eigen::Index t = 1; t <= T; ++t) {
        design.covariates.row(t - 1) = lag_window(panel, t).transpose();
        for (Eigen::Index i = 0; i < d1; ++i)
            design.responses(t - 1, i) = panel.at(static_cast<std::size_t>(i), t);
    }
    const double inv_t = 1.0 / static_cast<double>(T);
    design.gram = (design.covariates.transpose() * design.covariates) * inv_t;
    design.cross = (design.covariates.transpose() * design.responses) * inv_t;
    return design;
}

namespace {

void check_shape(const ParamMatrix& theta, const Design& design) {
    if (theta.n_nodes() != design.n_nodes || theta.memory() != design.memory) {
        throw ShapeError("parameter shape does not match the data");
    }
}

void check_linear_activation(const Matrix& activation) {
    const double hi = activation.maxCoeff();
    const double lo = activation.minCoeff();
    if (hi > 1.0 + 1e-12 || lo < -1e-12) {
        throw FeasibilityError("linear link activation outside [0, 1] (range [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "])");
    }
}

} // namespace

Vector empirical_field(const Eigen::Ref<const Vector>& theta_i, std::size_t node,
                       const Design& design, const Link& link, Feasibility feasibility) {
    if (static_cast<std::size_t>(theta_i.size()) != design.dimension() || node >= design.n_nodes) {
        throw ShapeError("empirical_field: shape mismatch");
    }
    const auto col = static_cast<Eigen::Index>(node);
    if (link.kind() == LinkKind::Linear) {
        if (feasibility == Feasibility::Enforce) check_linear_activation(design.covariates * theta_i);
        return design.gram * theta_i - design.cross.col(col);
    }
    Vector s = design.covariates * theta_i;
    link.apply(s);
    s -= design.responses.col(col);
    return design.covariates.transpose() * s / static_cast<double>(design.horizon);
}

Matrix concatenated_field(const ParamMatrix& theta, const Design& design, const Link& link,
                          Execution execution, Feasibility feasibility) {
    check_shape(theta, design);
    const Matrix& x = design.covariates;
    const auto d1 = static_cast<Eigen::Index>(design.n_nodes);
    const double inv_t = 1.0 / static_cast<double>(design.horizon);

    if (link.kind() == LinkKind::Linear) {
        if (feasibility == Feasibility::Enforce) check_linear_activation(x * theta.values());
        return design.gram * theta.values() - design.cross;
    }

    if (execution == Execution::Serial) {
        Matrix s = x * theta.values();
        link.apply(s);
        s -= design.responses;
        return x.transpose() * s * inv_t;
    }

    Matrix field(theta.values().rows(), d1);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < d1; ++i) {
        Vector s = x * theta.values().col(i);
        link.apply(s);
        s -= design.responses.col(i);
        field.col(i).noalias() = x.transpose() * s * inv_t;
    }
    return field;
}

Matrix concatenated_field_reference(const ParamMatrix& theta, const TimeSeriesPanel& panel,
                                    const Link& link) {
    const std::size_t d1 = panel.n_nodes();
    Matrix field = Matrix::Zero(theta.values().rows(), static_cast<Eigen::Index>(d1));
    for (long t = 1; t <= static_cast<long>(panel.horizon()); ++t) {
        const Vector w = lag_window(panel, t);
        for (std::size_t i = 0; i < d1; ++i) {
            const auto col = static_cast<Eigen::Index>(i);
            const double residual = link.value(w.dot(theta.values().col(col))) - panel.at(i, t);
            field.col(col) += w * residual;
        }
    }
    return field / static_cast<double>(panel.horizon());
}

PenaltyKind parse_penalty_kind(std::string_view name) {
    if (name == "none") return PenaltyKind::None;
    if (name == "adaptive-linear" || name == "proposed") return PenaltyKind::AdaptiveLinear;
    if (name == "dag") return PenaltyKind::Dag;
    if (name == "l1") return PenaltyKind::L1;
    if (name == "adaptive-l1") return PenaltyKind::AdaptiveL1;
    throw ConfigError("unknown penalty '" + std::string(name) + "'");
}

std::string_view penalty_name(PenaltyKind kind) {
    switch (kind) {
    case PenaltyKind::None: return "none";
    case PenaltyKind::AdaptiveLinear: return "adaptive-linear";
    case PenaltyKind::Dag: return "dag";
    case PenaltyKind::L1: return "l1";
    case PenaltyKind::AdaptiveL1: return "adaptive-l1";
    }
    return "?";
}

PenaltySpec PenaltySpec::adaptive_linear(double lambda, CycleSets cycles, double floor) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::AdaptiveLinear;
    spec.lambda = lambda;
    spec.floor = floor;
    spec.edge_eps = cycles.edge_eps;
    spec.cycles = std::move(cycles);
    return spec;
}

PenaltySpec PenaltySpec::dag(double lambda) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::Dag;
    spec.lambda = lambda;
    return spec;
}

PenaltySpec PenaltySpec::l1(double lambda) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::L1;
    spec.lambda = lambda;
    return spec;
}

PenaltySpec PenaltySpec::adaptive_l1(double lambda, ParamMatrix pilot, double floor, double edge_eps) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::AdaptiveL1;
    spec.lambda = lambda;
    spec.floor = floor;
    spec.edge_eps = edge_eps;
    spec.pilot = std::move(pilot);
    return spec;
}

void PenaltySpec::validate(std::size_t n_nodes, std::size_t memory) const {
    if (!(lambda >= 0.0)) throw ConfigError("penalty: lambda must be >= 0");
    if (!(floor > 0.0)) throw ConfigError("penalty: Lambda floor must be > 0");
    switch (kind) {
    case PenaltyKind::AdaptiveLinear:
        if (!cycles) throw ConfigError("adaptive-linear penalty requires cycle sets");
        if (cycles->n_nodes != n_nodes || cycles->lags.size() != memory) {
            throw ConfigError("cycle sets do not match the parameter shape");
        }
        break;
    case PenaltyKind::AdaptiveL1:
        if (!pilot) throw ConfigError("adaptive-l1 penalty requires a pilot estimate");
        if (pilot->n_nodes() != n_nodes || pilot->memory() != memory) {
            throw ConfigError("pilot estimate does not match the parameter shape");
        }
        break;
    case PenaltyKind::Dag:
        if (memory != 1) throw ConfigError("dag penalty is defined for memory depth 1 only");
        break;
    case PenaltyKind::None:
    case PenaltyKind::L1: break;
    }
}

namespace {

Matrix adaptive_linear_gradient(const ParamMatrix& theta, const PenaltySpec& spec) {
    Matrix p = Matrix::Zero(theta.values().rows(), theta.values().cols());
    const CycleSets& cycles = *spec.cycles;
    const double lambda = spec.lambda;
    auto at = [&](std::size_t target, std::size_t source, std::size_t lag) -> double& {
        return p(static_cast<Eigen::Index>(theta.row_of(source, lag)), static_cast<Eigen::Index>(target));
    };
    for (std::size_t lag = 1; lag <= theta.memory(); ++lag) {
        const LagCycles& c = cycles.lags[lag - 1];
        const Matrix& pilot = cycles.pilot_alpha[lag - 1];
        // every self-excitation is penalized; detected ones with the pilot weight
        for (std::size_t i = 0; i < theta.n_nodes(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            at(i, i, lag) += cycles.has_self_loop(lag, i) ? lambda / pilot(ii, ii) : lambda / spec.floor;
        }
        for (const PairCycle& pc : c.pairs) {
            if (!(pc.strength > 0.0)) throw Error("adaptive-linear: non-positive pair strength");
            at(pc.i, pc.j, lag) += lambda / pc.strength;
            at(pc.j, pc.i, lag) += lambda / pc.strength;
        }
        for (const TriangleCycle& tc : c.triangles) {
            if (!(tc.strength > 0.0)) throw Error("adaptive-linear: non-positive triangle strength");
            at(tc.i, tc.j, lag) += lambda / tc.strength;
            at(tc.j, tc.k, lag) += lambda / tc.strength;
            at(tc.k, tc.i, lag) += lambda / tc.strength;
        }
    }
    return p;
}

Matrix dag_gradient(const ParamMatrix& theta, double lambda) {
    Matrix p = Matrix::Zero(theta.values().rows(), theta.values().cols());
    // J' (e^A) with J theta = A'; entry alpha_ij receives lambda (e^A)_ji
    p.bottomRows(p.rows() - 1) = lambda * matrix_exp(extract_lag_matrix(theta, 1));
    return p;
}

Matrix adaptive_l1_gradient(const ParamMatrix& theta, const PenaltySpec& spec) {
    Matrix p = Matrix::Zero(theta.values().rows(), theta.values().cols());
    const Matrix& pilot = spec.pilot->values();
    for (Eigen::Index r = 1; r < p.rows(); ++r)
        for (Eigen::Index c = 0; c < p.cols(); ++c)
            p(r, c) = pilot(r, c) > spec.edge_eps ? spec.lambda / pilot(r, c) : spec.lambda / spec.floor;
    return p;
}

} // namespace

Matrix penalty_gradient(const ParamMatrix& theta, const PenaltySpec& spec) {
    spec.validate(theta.n_nodes(), theta.memory());
    switch (spec.kind) {
    case PenaltyKind::None:
        return Matrix::Zero(theta.values().rows(), theta.values().cols());
    case PenaltyKind::AdaptiveLinear: return adaptive_linear_gradient(theta, spec);
    case PenaltyKind::Dag: return dag_gradient(theta, spec.lambda);
    case PenaltyKind::L1: {
        Matrix p = Matrix::Constant(theta.values().rows(), theta.values().cols(), spec.lambda);
        p.row(0).setZero();
        return p;
    }
    case PenaltyKind::AdaptiveL1: return adaptive_l1_gradient(theta, spec);
    }
    return {};
}

FieldEval penalized_field(const ParamMatrix& theta, const Design& design, const Link& link,
                          const PenaltySpec& spec, Execution execution, Feasibility feasibility) {
    FieldEval eval;
    eval.data_part = concatenated_field(theta, design, link, execution, feasibility);
    eval.penalty_part = penalty_gradient(theta, spec);
    eval.value = eval.data_part + eval.penalty_part;
    return eval;
}

namespace {

FieldEval checked(PenaltyKind expected, const ParamMatrix& theta, const Design& design,
                  const Link& link, const PenaltySpec& spec) {
    if (spec.kind != expected) {
        throw ConfigError("expected a " + std::string(penalty_name(expected)) + " penalty, got " +
                          std::string(penalty_name(spec.kind)));
    }
    return penalized_field(theta, design, link, spec);
}

} // namespace

FieldEval adaptive_linear_field(const ParamMatrix& theta, const Design& design, const Link& link,
                                const PenaltySpec& spec) {
    return checked(PenaltyKind::AdaptiveLinear, theta, design, link, spec);
}

FieldEval dag_penalty_field(const ParamMatrix& theta, const Design& design, const Link& link,
                            const PenaltySpec& spec) {
    return checked(PenaltyKind::Dag, theta, design, link, spec);
}

FieldEval l1_field(const ParamMatrix& theta, const Design& design, const Link& link,
                   const PenaltySpec& spec) {
    return checked(PenaltyKind::L1, theta, design, link, spec);
}

FieldEval adaptive_l1_field(const ParamMatrix& theta, const Design& design, const Link& link,
                            const PenaltySpec& spec) {
    return checked(PenaltyKind::AdaptiveL1, theta, design, link, spec);
}

FieldOperator::FieldOperator(const Design& design, Link link, PenaltySpec spec, Execution execution)
    : design_(&design), link_(link), spec_(std::move(spec)), execution_(execution) {
    spec_.validate(design.n_nodes, design.memory);
    if (spec_.constant() && spec_.kind != PenaltyKind::None) {
        constant_penalty_ = penalty_gradient(ParamMatrix(design.n_nodes, design.memory), spec_);
    }
}

Matrix FieldOperator::operator()(const ParamMatrix& theta) const {
    Matrix field = concatenated_field(theta, *design_, link_, execution_, Feasibility::Relaxed);
    if (constant_penalty_) {
        field += *constant_penalty_;
    } else if (spec_.kind == PenaltyKind::Dag) {
        field += penalty_gradient(theta, spec_);
    }
    return field;
}

} // namespace cvdag
