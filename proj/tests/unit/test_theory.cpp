#include <doctest.h>

#include <cmath>

#include "cvdag/error.hpp"
#include "cvdag/theory.hpp"
#include "oracles.hpp"

using namespace cvdag;

TEST_CASE("gram matrix and lambda_1") {
    SUBCASE("no events") {
        const auto g = gram_matrix(TimeSeriesPanel(3, 1, 50));
        Matrix expected = Matrix::Zero(4, 4);
        expected(0, 0) = 1.0;
        CHECK(g.gram == expected);
        CHECK(g.lambda1 == 0.0);
    }
    SUBCASE("single node with every event") {
        TimeSeriesPanel p(1, 1, 40);
        for (long t = 0; t <= 40; ++t) p.set(0, t, true);
        const auto g = gram_matrix(p);
        CHECK(g.gram == Matrix::Ones(2, 2));
        CHECK(g.lambda1 == 0.0);
    }
    SUBCASE("random panel is full rank") {
        const auto truth = generate_ground_truth(5, 1, 3);
        const auto p = simulate(truth.params, Link(LinkKind::Linear), 2000, 4);
        const auto g = gram_matrix(p);
        CHECK(g.lambda1 > 0.0);
        const auto m = oracle::moments(p);
        const double oracle_min = Eigen::SelfAdjointEigenSolver<Matrix>(m.w).eigenvalues().minCoeff();
        CHECK(g.lambda1 == doctest::Approx(oracle_min).epsilon(1e-9));
    }
}

TEST_CASE("recovery bound") {
    // d = 2, m_g = lambda_1 = 1: choosing T = 2 log(4 / eps) makes the bound exactly 1
    const double eps = 0.05;
    const double T = 2.0 * std::log(4.0 / eps);
    const double b = std::sqrt(2.0 * std::log(4.0 / eps) / T);
    CHECK(b == doctest::Approx(1.0));
    CHECK(recovery_bound(6, 1000, eps, 1.0, 0.1) / recovery_bound(6, 2000, eps, 1.0, 0.1) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(recovery_bound(6, 1000, eps, 0.5, 0.1) == doctest::Approx(2.0 * recovery_bound(6, 1000, eps, 1.0, 0.1)));
    CHECK(recovery_bound(11, 500, eps, 1.0, 0.2) ==
          doctest::Approx(std::sqrt(11 * std::log(22 / eps) / 500) / 0.2));
    CHECK_THROWS_AS(recovery_bound(6, 1000, eps, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(recovery_bound(6, 1000, 0.0, 1.0, 0.1), ConfigError);
}

TEST_CASE("concentration radius") {
    CHECK(concentration_radius(6, 1000, 0.05) / concentration_radius(6, 4000, 0.05) == doctest::Approx(2.0));
    CHECK(concentration_radius(6, 1000, 0.05) == doctest::Approx(std::sqrt(std::log(12 / 0.05) / 1000)));
}

TEST_CASE("concentration check") {
    SUBCASE("deterministic panel, zero field") {
        const ParamMatrix zero(2, 1);
        const auto p = simulate(zero, Link(LinkKind::Linear), 100, 1);
        const auto c = concentration_check({p}, zero, Link(LinkKind::Linear), 0.05);
        CHECK(c.total == 2);
        CHECK(c.covered == 2);
    }
    SUBCASE("coverage over 200 trials") {
        const auto truth = generate_ground_truth(5, 1, 11);
        std::vector<TimeSeriesPanel> panels;
        for (std::uint64_t s = 0; s < 200; ++s) panels.push_back(simulate(truth.params, Link(LinkKind::Linear), 1000, s));
        const auto c = concentration_check(panels, truth.params, Link(LinkKind::Linear), 0.05);
        CHECK(c.total == 1000);
        CHECK(c.fraction() >= 0.95);
    }
}

TEST_CASE("bound reports") {
    const auto truth = generate_ground_truth(4, 1, 21);
    const auto p = simulate(truth.params, Link(LinkKind::Linear), 1500, 22);
    const Design design = Design::from_panel(p);
    const auto reports = bound_reports(design, Link(LinkKind::Linear), truth.params, truth.params, 0.05);
    REQUIRE(reports.size() == 4);
    for (const auto& r : reports) {
        CHECK(r.m_g == 1.0);
        CHECK(r.empirical_err == 0.0);
        CHECK(r.covered);
        CHECK(r.bound_l2 == doctest::Approx(recovery_bound(5, 1500, 0.05, 1.0, r.lambda1)));
        CHECK(r.bound_inf_delta == doctest::Approx(concentration_radius(5, 1500, 0.05)));
    }
}

TEST_CASE("link lower bound") {
    const auto truth = generate_ground_truth(3, 1, 31);
    const Design design = Design::from_panel(simulate(truth.params, Link(LinkKind::Exponential), 500, 32));
    const double x = max_activation(design, truth.params);
    CHECK(x == doctest::Approx((design.covariates * truth.params.values()).maxCoeff()));
    CHECK(link_lower_bound(Link(LinkKind::Linear), design, truth.params) == 1.0);
    CHECK(link_lower_bound(Link(LinkKind::Exponential), design, truth.params) == doctest::Approx(std::exp(-x)));
}
