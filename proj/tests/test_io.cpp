#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "vmadmit/io.hpp"
#include "vmadmit/reference.hpp"

using namespace vmadmit;
using vmadmit::io::json;

TEST_CASE("model documents round-trip and reject unknown or missing fields") {
    const ModelParams p = reference::benchmark_params(5.0);
    const json doc = io::model_to_json(p);
    const ModelParams back = io::model_from_json(doc);
    CHECK(back.lambda1 == p.lambda1);
    CHECK(back.mu2 == p.mu2);
    CHECK(back.capacity_C == p.capacity_C);
    CHECK(back.holding.kind == HoldingKind::SquareSum);

    json extra = doc;
    extra["surprise"] = 1;
    CHECK_THROWS_AS(io::model_from_json(extra), ConfigError);

    json missing = doc;
    missing.erase("mu1");
    CHECK_THROWS_AS(io::model_from_json(missing), ConfigError);

    json bad_holding = doc;
    bad_holding["holding"] = json{{"kind", "polynomial"}, {"coefficients", {1, 2, 3}}};
    CHECK_THROWS_AS(io::model_from_json(bad_holding), ConfigError);

    json sq_with_coeff = doc;
    sq_with_coeff["holding"] = json{{"kind", "square_sum"}, {"coefficients", {0, 0, 0, 0, 0, 0}}};
    CHECK_THROWS_AS(io::model_from_json(sq_with_coeff), ConfigError);

    ModelParams poly = p;
    poly.holding = HoldingCost::polynomial(1, 2, 0.5, 0, 3, 0);
    const ModelParams poly_back = io::model_from_json(io::model_to_json(poly));
    CHECK(poly_back.holding.kind == HoldingKind::Polynomial);
    CHECK(poly_back.holding.coeff == poly.holding.coeff);

    // Invalid parameter values are rejected at parse time.
    json invalid = doc;
    invalid["capacity_C"] = 7;  // not a multiple of b = 5
    CHECK_THROWS_AS(io::model_from_json(invalid), ConfigError);
}

TEST_CASE("policy documents round-trip including reject-all rows") {
    ThresholdPolicy policy{{18, ThresholdPolicy::kRejectAll, 16}};
    const json doc = io::policy_to_json(policy, 205);
    const auto [back, cap] = io::policy_from_json(doc);
    CHECK(back == policy);
    REQUIRE(cap.has_value());
    CHECK(*cap == 205);

    CHECK_THROWS_AS(io::policy_from_json(json{{"thresholds", {-2}}}), ConfigError);
    CHECK_THROWS_AS(io::policy_from_json(json{{"wrong", 1}}), ConfigError);
}

TEST_CASE("grid CSV layout and precision") {
    ValueGrid grid(2, 3);
    grid.at(0, 0) = 1.005;
    grid.at(0, 1) = -2.5;
    grid.at(1, 2) = 1.0 / 3.0;

    const std::string two_dp = io::grid_to_csv(grid, 2);
    CHECK(two_dp.substr(0, 12) == "n1\\n2,0,1,2\n");
    CHECK(two_dp.find("\n0,1.00,-2.50,0.00\n") != std::string::npos);
    CHECK(two_dp.find("\n1,0.00,0.00,0.33\n") != std::string::npos);

    const std::string full = io::grid_to_csv(grid, -1);
    CHECK(full.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("action CSV marks the admit prefix") {
    const ThresholdPolicy policy{{2, 0, ThresholdPolicy::kRejectAll}};
    const std::string csv = io::actions_to_csv(policy, 4);
    CHECK(csv.find("\n0,1,1,1,0,0\n") != std::string::npos);
    CHECK(csv.find("\n1,1,0,0,0,0\n") != std::string::npos);
    CHECK(csv.find("\n2,0,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("dataset CSV round-trips exactly") {
    Dataset ds;
    ds.label_count = 3;
    ds.features.push_back({1.3, 1.0, 2.0, 6.0, 8.0});
    ds.labels.push_back({8, 7, 6});
    ds.features.push_back({5.0, 1.0, 0.125, 6.0, 16.0});
    ds.labels.push_back({18, -1, 16});
    ds.recompute_ranges();

    const Dataset back = io::dataset_from_csv(io::dataset_to_csv(ds));
    REQUIRE(back.size() == 2);
    CHECK(back.label_count == 3);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
    CHECK(back.feat_min == ds.feat_min);
    CHECK(back.label_max == ds.label_max);

    CHECK_THROWS_AS(io::dataset_from_csv("R,lambda1\n"), ConfigError);
}

TEST_CASE("network documents round-trip bit-exactly") {
    Mlp net;
    net.shape = MlpShape{5, 4, 3};
    net.params.resize(std::size_t(net.shape.param_count()));
    for (std::size_t i = 0; i < net.params.size(); ++i)
        net.params[i] = 0.1 * double(i) - 1.7;
    net.feat_min = {1, 1, 1, 6, 8};
    net.feat_max = {8, 1, 5, 6, 16};
    net.label_min = {4, 3, 2};
    net.label_max = {34, 32, 29};

    const Mlp back = io::mlp_from_json(io::mlp_to_json(net));
    CHECK(back.params == net.params);
    CHECK(back.feat_min == net.feat_min);
    CHECK(back.label_max == net.label_max);
    CHECK(back.shape.hidden == 4);

    json doc = io::mlp_to_json(net);
    doc["activation"] = "relu";
    CHECK_THROWS_AS(io::mlp_from_json(doc), ConfigError);
}

TEST_CASE("run configuration sections") {
    const json doc = {
        {"model", io::model_to_json(reference::benchmark_params(5.0))},
        {"solver", {{"cap", "auto"}, {"tol", 1e-8}, {"max_iter", 1000}}},
        {"sim", {{"discount_floor", 1e-6}, {"replications", 500}, {"seed", 11}, {"initial", {1, 2}}}},
        {"sweep", {{"values_R", {1, 2}}, {"values_lambda2", {1}}, {"values_mu2", {8}}}},
        {"train", {{"hidden", 12}, {"epochs", 100}, {"seed", 3}}},
        {"output", {{"dir", "out"}, {"precision", 4}}},
    };
    const io::RunConfig config = io::run_config_from_json(doc);
    REQUIRE(config.model.has_value());
    CHECK_FALSE(config.solver.cap.has_value());  // "auto"
    CHECK(config.solver.tol == 1e-8);
    CHECK(config.sim.replications == 500);
    CHECK(config.sim.initial == State{1, 2});
    REQUIRE(config.sweep.has_value());
    CHECK(config.sweep->values_R.size() == 2);
    CHECK(config.sweep->base.capacity_C == 10);
    CHECK(config.train.hidden == 12);
    CHECK(config.out_dir == "out");
    CHECK(config.precision == 4);

    json fixed_cap = doc;
    fixed_cap["solver"]["cap"] = 60;
    REQUIRE(io::run_config_from_json(fixed_cap).solver.cap.has_value());
    CHECK(*io::run_config_from_json(fixed_cap).solver.cap == 60);

    json unknown = doc;
    unknown["solver"]["typo"] = 1;
    CHECK_THROWS_AS(io::run_config_from_json(unknown), ConfigError);

    json sweep_without_model = doc;
    sweep_without_model.erase("model");
    CHECK_THROWS_AS(io::run_config_from_json(sweep_without_model), ConfigError);
}
