#pragma once

// Empirical vector fields of the Bernoulli GLM and their penalized variants.
//
//   F_T^(i)(theta_i) = (1/T) sum_t w_t (g(w_t' theta_i) - y_t^(i))
//
// Columns are independent. A penalty adds the (sub)gradient of a DAG-inducing
// regularizer on the lag blocks; the background row is never penalized.

#include <cstddef>
#include <optional>
#include <string_view>

#include "cvdag/graphgen.hpp"
#include "cvdag/model.hpp"

namespace cvdag {

// Data matrices of a panel, computed once and reused by every field evaluation.
struct Design {
    std::size_t n_nodes = 0;
    std::size_t memory = 0;
    std::size_t horizon = 0;
    Matrix covariates;  // T x d, row t-1 is w_t'
    Matrix responses;   // T x d1
    Matrix gram;        // (1/T) sum_t w_t w_t'
    Matrix cross;       // (1/T) sum_t w_t y_t'

    static Design from_panel(const TimeSeriesPanel& panel);

    std::size_t dimension() const noexcept { return ParamMatrix::dimension(n_nodes, memory); }
};

enum class Execution { Serial, Parallel };

// Whether the linear link's upper constraint w'theta <= 1 is checked. Fitting
// relaxes it and treats w'theta as a score.
enum class Feasibility { Enforce, Relaxed };

Vector empirical_field(const Eigen::Ref<const Vector>& theta_i, std::size_t node,
                       const Design& design, const Link& link,
                       Feasibility feasibility = Feasibility::Enforce);

Matrix concatenated_field(const ParamMatrix& theta, const Design& design, const Link& link,
                          Execution execution = Execution::Serial,
                          Feasibility feasibility = Feasibility::Enforce);

// Literal per-step evaluation straight from the panel. Slow; kept as the
// reference the dense kernels are tested and benchmarked against.
Matrix concatenated_field_reference(const ParamMatrix& theta, const TimeSeriesPanel& panel,
                                    const Link& link);

enum class PenaltyKind { None, AdaptiveLinear, Dag, L1, AdaptiveL1 };

PenaltyKind parse_penalty_kind(std::string_view name);
std::string_view penalty_name(PenaltyKind kind);

struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::None;
    double lambda = 0.0;
    double floor = 1e-3;  // Lambda: stands in for a zero pilot weight in denominators
    double edge_eps = kDefaultEdgeEps;
    std::optional<CycleSets> cycles;  // AdaptiveLinear
    std::optional<ParamMatrix> pilot;  // AdaptiveL1

    static PenaltySpec none() { return {}; }
    static PenaltySpec adaptive_linear(double lambda, CycleSets cycles, double floor = 1e-3);
    static PenaltySpec dag(double lambda);
    static PenaltySpec l1(double lambda);
    static PenaltySpec adaptive_l1(double lambda, ParamMatrix pilot, double floor = 1e-3,
                                   double edge_eps = kDefaultEdgeEps);

    // Throws ConfigError when prerequisites are missing or do not match the shape.
    void validate(std::size_t n_nodes, std::size_t memory) const;

    // True when the penalty gradient does not depend on theta (every kind but Dag).
    bool constant() const noexcept { return kind != PenaltyKind::Dag; }
};

struct FieldEval {
    Matrix value;
    Matrix data_part;
    Matrix penalty_part;
};

// Penalty gradient laid out like theta (d x d1).
Matrix penalty_gradient(const ParamMatrix& theta, const PenaltySpec& spec);

FieldEval penalized_field(const ParamMatrix& theta, const Design& design, const Link& link,
                          const PenaltySpec& spec, Execution execution = Execution::Serial,
                          Feasibility feasibility = Feasibility::Enforce);

// Kind-checked entry points for each regularizer.
FieldEval adaptive_linear_field(const ParamMatrix& theta, const Design& design, const Link& link,
                                const PenaltySpec& spec);
FieldEval dag_penalty_field(const ParamMatrix& theta, const Design& design, const Link& link,
                            const PenaltySpec& spec);
FieldEval l1_field(const ParamMatrix& theta, const Design& design, const Link& link,
                   const PenaltySpec& spec);
FieldEval adaptive_l1_field(const ParamMatrix& theta, const Design& design, const Link& link,
                            const PenaltySpec& spec);

// Field evaluator used inside the solver: the penalty gradient is cached when
// it is constant and linear-link fields go through the Gram matrix.
class FieldOperator {
public:
    FieldOperator(const Design& design, Link link, PenaltySpec spec,
                  Execution execution = Execution::Serial);

    Matrix operator()(const ParamMatrix& theta) const;

    const Design& design() const noexcept { return *design_; }
    const Link& link() const noexcept { return link_; }
    const PenaltySpec& penalty() const noexcept { return spec_; }

private:
    const Design* design_;
    Link link_;
    PenaltySpec spec_;
    Execution execution_;
    std::optional<Matrix> constant_penalty_;
};

} // namespace cvdag
