#include <doctest.h>

#include <sstream>

#include "cvdag/error.hpp"
#include "cvdag/io.hpp"

using namespace cvdag;

TEST_CASE("panel csv round-trip") {
    const auto truth = generate_ground_truth(4, 3, 1);
    const auto panel = simulate(truth.params, Link(LinkKind::Exponential), 60, 2);
    std::stringstream ss;
    write_panel_csv(ss, panel);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    CHECK(header == "t,node_1,node_2,node_3,node_4");
    CHECK(read_panel_csv(ss) == panel);
}

TEST_CASE("panel csv rejects malformed input") {
    const char* bad[] = {
        "",
        "time,node_1\n0,1\n1,0\n",
        "t,node_2\n0,1\n1,0\n",
        "t,node_1\n0,2\n1,0\n",
        "t,node_1\n0,1\n2,0\n",
        "t,node_1\n0,1\n1\n",
        "t,node_1\n1,0\n2,1\n",   // no history row
        "t,node_1\n0,1\n",        // no observations
        "t,node_1\n0,1\nx,0\n",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        std::stringstream ss(text);
        CHECK_THROWS_AS(read_panel_csv(ss), ConfigError);
    }
    std::stringstream ok("t,node_1,node_2\r\n-1,0,1\r\n0,1,1\r\n1,0,0\r\n");
    const auto p = read_panel_csv(ok);
    CHECK(p.memory() == 2);
    CHECK(p.horizon() == 1);
    CHECK(p.at(1, -1) == 1);
}

TEST_CASE("truth json round-trip") {
    const auto truth = generate_ground_truth(5, 2, 77);
    const Json j = truth_to_json(truth);
    CHECK(j.at("d1") == 5);
    CHECK(j.at("tau") == 2);
    CHECK(j.at("A").size() == 2);
    CHECK(j.at("nu").size() == 5);
    const auto back = truth_from_json(Json::parse(j.dump()));
    CHECK(back.params == truth.params);
    CHECK(back.seed == truth.seed);

    Json missing = j;
    missing.erase("nu");
    CHECK_THROWS_AS(truth_from_json(missing), ConfigError);
    Json wrong = j;
    wrong["A"][0].erase(0);
    CHECK_THROWS_AS(truth_from_json(wrong), ConfigError);
}

TEST_CASE("fit json round-trip") {
    const auto truth = generate_ground_truth(3, 2, 5);
    const Design design = Design::from_panel(simulate(truth.params, Link(LinkKind::Linear), 200, 6));
    SolverConfig cfg;
    cfg.total_iters = 100;
    cfg.init = InitUniform{0.0, 0.1, 9};
    const FitResult r = fit(design, Link(LinkKind::Linear), PenaltySpec::none(), cfg);
    const Json j = Json::parse(fit_to_json(r, cfg).dump());
    CHECK(j.at("iterations") == 100);
    CHECK(j.at("theta_hat").size() == 7);
    CHECK(j.at("theta_hat")[0].size() == 3);
    CHECK(j.at("config").at("initial_lr") == 5e-3);
    CHECK(j.at("config").at("init").at("kind") == "uniform");
    CHECK(theta_from_fit_json(j) == r.theta_hat);
}

TEST_CASE("sweep csv layout") {
    SweepResult r;
    r.points.resize(3);
    r.points[0] = {0.1, true, false, "", 0.5, 0.01, RecoveryMetrics{0.2, 0.1, 0.5, 4}, std::nullopt, false};
    r.points[1] = {1.0, true, false, "", 0.0, 0.02, RecoveryMetrics{0.3, 0.1, 0.0, 2}, std::nullopt, true};
    r.points[2].lambda = 10.0;
    std::stringstream ss;
    write_sweep_csv(ss, r);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "lambda,h,A_err,nu_err,shd,field_norm,selected");
    std::getline(ss, line);
    CHECK(line == "0.1,0.5,0.2,0.1,4,0.01,0");
    std::getline(ss, line);
    CHECK(line == "1,0,0.3,0.1,2,0.02,1");
    std::getline(ss, line);
    CHECK(line == "10,,,,,,0");
}

TEST_CASE("bound report json") {
    BoundReport b;
    b.node = 2;
    b.bound_l2 = 1.5;
    b.covered = true;
    const Json j = bound_report_to_json(b);
    CHECK(j.at("node") == 2);
    CHECK(j.at("bound_l2") == 1.5);
    CHECK(j.at("covered") == true);
}
