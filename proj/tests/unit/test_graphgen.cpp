#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cvdag/error.hpp"
#include "cvdag/graphgen.hpp"
#include "oracles.hpp"

using namespace cvdag;

namespace {

Matrix random_sparse(Rng& rng, Eigen::Index n, double density, double scale) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (u(rng) < density) a(i, j) = scale * u(rng);
    return a;
}

} // namespace

TEST_CASE("matrix_exp") {
    CHECK(matrix_exp(Matrix::Zero(4, 4)).isIdentity());
    const Matrix nil = (Matrix(2, 2) << 0, 1, 0, 0).finished();
    CHECK(matrix_exp(nil).isApprox((Matrix(2, 2) << 1, 1, 0, 1).finished()));
    const Matrix swap = (Matrix(2, 2) << 0, 1, 1, 0).finished();
    const Matrix expected =
        (Matrix(2, 2) << std::cosh(1.0), std::sinh(1.0), std::sinh(1.0), std::cosh(1.0)).finished();
    CHECK((matrix_exp(swap) - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((oracle::series_expm(swap) - expected).cwiseAbs().maxCoeff() < 1e-12);

    Rng rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix a = random_sparse(rng, 6, 0.5, 1.0);
        CHECK((matrix_exp(a) - oracle::series_expm(a, 80)).cwiseAbs().maxCoeff() < 1e-10);
    }
    // large norm: compare against products of a half-step exponential
    const Matrix big = 4.0 * random_sparse(rng, 5, 0.6, 1.0);
    const Matrix half = oracle::series_expm(big / 16.0, 40);
    Matrix squared = half;
    for (int k = 0; k < 4; ++k) squared = squared * squared;
    CHECK((matrix_exp(big) - squared).norm() / squared.norm() < 1e-12);
    CHECK_THROWS_AS(matrix_exp(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("dagness") {
    CHECK(dagness(Matrix::Zero(3, 3)) == 0.0);
    Matrix tri = Matrix::Zero(4, 4);
    tri.triangularView<Eigen::StrictlyUpper>().setConstant(0.7);
    CHECK(std::abs(dagness(tri)) < 1e-12);
    const Matrix swap = (Matrix(2, 2) << 0, 1, 1, 0).finished();
    CHECK(dagness(swap) == doctest::Approx(2 * std::cosh(1.0) - 2).epsilon(1e-12));
    CHECK(dagness(swap) == doctest::Approx(1.08616).epsilon(1e-5));
    CHECK_THROWS_AS(dagness(-swap), DomainError);
    CHECK_THROWS_AS(dagness(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("dagness is zero exactly on acyclic supports") {
    Rng rng(17);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int cyclic = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const Matrix a = random_sparse(rng, size(rng), 0.25 * u(rng), 0.5);
        const bool dag = !oracle::has_cycle(a, 0.0);
        cyclic += !dag;
        CHECK((std::abs(dagness(a)) <= 1e-8) == dag);
    }
    CHECK(cyclic > 50);
}

TEST_CASE("dagness is monotone under edge addition") {
    Rng rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        const Matrix a = random_sparse(rng, 5, 0.3, 0.5);
        const Matrix extra = random_sparse(rng, 5, 0.2, 0.5);
        CHECK(dagness(a + extra) >= dagness(a) - 1e-12);
    }
}

TEST_CASE("dagness_grad") {
    CHECK(dagness_grad(Matrix::Zero(3, 3)).isIdentity());
    const Matrix nil = (Matrix(2, 2) << 0, 1, 0, 0).finished();
    CHECK(dagness_grad(nil).isApprox((Matrix(2, 2) << 1, 0, 1, 1).finished()));
    Rng rng(2);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix a = random_sparse(rng, 5, 1.0, 0.2);
        const Matrix fd = oracle::central_gradient(
            [](const Matrix& m) { return oracle::series_expm(m).trace() - m.rows(); }, a, 1e-5);
        CHECK((dagness_grad(a) - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("enumerate_cycles") {
    SUBCASE("zero pilot") {
        const CycleSets s = enumerate_cycles(ParamMatrix(4, 2));
        CHECK(s.size() == 0);
        CHECK(s.lags.size() == 2);
    }
    SUBCASE("d1 2 pair") {
        ParamMatrix pilot(2, 1);
        pilot.alpha(0, 1, 1) = 0.4;
        pilot.alpha(1, 0, 1) = 0.1;
        const CycleSets s = enumerate_cycles(pilot);
        REQUIRE(s.lags[0].pairs.size() == 1);
        CHECK(s.lags[0].pairs[0].i == 0);
        CHECK(s.lags[0].pairs[0].j == 1);
        CHECK(s.lags[0].pairs[0].strength == doctest::Approx(0.4));
        CHECK(s.lags[0].triangles.empty());
        CHECK(s.lags[0].self_loops.empty());
    }
    SUBCASE("d1 3 directed triangle") {
        ParamMatrix pilot(3, 1);
        pilot.alpha(0, 1, 1) = 0.3;
        pilot.alpha(1, 2, 1) = 0.2;
        pilot.alpha(2, 0, 1) = 0.5;
        pilot.alpha(1, 1, 1) = 0.05;
        const CycleSets s = enumerate_cycles(pilot);
        REQUIRE(s.lags[0].triangles.size() == 1);
        CHECK(s.lags[0].triangles[0].strength == doctest::Approx(0.8));
        CHECK(s.lags[0].pairs.empty());
        CHECK(s.has_self_loop(1, 1));
        CHECK_FALSE(s.has_self_loop(1, 0));
    }
    SUBCASE("weights at eps are not edges") {
        ParamMatrix pilot(2, 1);
        pilot.alpha(0, 1, 1) = 0.4;
        pilot.alpha(1, 0, 1) = kDefaultEdgeEps;
        CHECK(enumerate_cycles(pilot).size() == 0);
    }
    SUBCASE("relabelling invariance and strength bounds") {
        Rng rng(8);
        for (int rep = 0; rep < 30; ++rep) {
            ParamMatrix pilot(5, 1);
            set_lag_matrix(pilot, 1, random_sparse(rng, 5, 0.5, 0.4));
            const CycleSets s = enumerate_cycles(pilot);

            std::vector<Eigen::Index> perm(5);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            const Matrix a = extract_lag_matrix(pilot, 1);
            Matrix b(5, 5);
            for (Eigen::Index i = 0; i < 5; ++i)
                for (Eigen::Index j = 0; j < 5; ++j) b(perm[i], perm[j]) = a(i, j);
            ParamMatrix relabelled(5, 1);
            set_lag_matrix(relabelled, 1, b);
            const CycleSets r = enumerate_cycles(relabelled);
            CHECK(r.lags[0].pairs.size() == s.lags[0].pairs.size());
            CHECK(r.lags[0].triangles.size() == s.lags[0].triangles.size());
            CHECK(r.lags[0].self_loops.size() == s.lags[0].self_loops.size());

            std::vector<double> ps, rs;
            for (const auto& p : s.lags[0].pairs) ps.push_back(p.strength);
            for (const auto& p : r.lags[0].pairs) rs.push_back(p.strength);
            std::sort(ps.begin(), ps.end());
            std::sort(rs.begin(), rs.end());
            CHECK(ps == rs);

            std::set<std::pair<std::size_t, std::size_t>> seen;
            for (const auto& p : s.lags[0].pairs) {
                CHECK(p.i < p.j);
                CHECK(seen.insert({p.i, p.j}).second);
                CHECK(p.strength > 0.0);
                CHECK(p.strength <= a(p.i, p.j) + a(p.j, p.i));
            }
            for (const auto& t : s.lags[0].triangles) {
                CHECK(t.i < t.j);
                CHECK(t.i < t.k);
                CHECK(t.strength > 0.0);
                CHECK(t.strength <= a(t.i, t.j) + a(t.j, t.k) + a(t.k, t.i));
            }
        }
    }
}

TEST_CASE("generate_ground_truth") {
    SUBCASE("d1 2 keeps at most one edge") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const auto g = generate_ground_truth(2, 1, seed);
            CHECK((g.adjacency()[0].array() > 0).count() <= 1);
        }
    }
    SUBCASE("d1 10 defaults") {
        double kept = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto g = generate_ground_truth(10, 1, seed);
            const Matrix a = g.adjacency()[0];
            CHECK(dagness(a) <= 1e-10);
            CHECK_FALSE(oracle::has_cycle(a, 0.0));
            CHECK(g.params.nonnegative());
            kept += static_cast<double>((a.array() > 0).count());
        }
        // ~5 of 100 entries survive the 95th-percentile cut; acyclicity can only remove more
        CHECK(kept / 50 <= 5.0);
        CHECK(kept / 50 >= 3.0);
    }
    SUBCASE("deterministic in the seed, acyclic for every lag") {
        const auto a = generate_ground_truth(6, 3, 42);
        const auto b = generate_ground_truth(6, 3, 42);
        CHECK(a.params == b.params);
        for (const Matrix& m : a.adjacency()) CHECK_FALSE(oracle::has_cycle(m, 0.0));
        CHECK(total_dagness(a.params) <= 3e-10);
    }
    SUBCASE("rows with background sum to one before sparsifying") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto g = generate_ground_truth(8, 2, seed);
            CHECK(worst_case_activation(g.params) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("quantile matches linear interpolation") {
    CHECK(quantile({1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({0, 10}, 0.95) == doctest::Approx(9.5));
    CHECK_THROWS_AS(quantile({}, 0.5), ConfigError);
}
