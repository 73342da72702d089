// Command-line driver: solve, bounds, evaluate, simulate, dataset, train,
// predict, reproduce-paper. One JSON config document feeds every subcommand;
// flags override file values. Exit codes: 0 success, 1 numerical failure,
// 2 configuration error, 3 reference mismatch.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vmadmit/bounds.hpp"
#include "vmadmit/estimator.hpp"
#include "vmadmit/evaluator.hpp"
#include "vmadmit/io.hpp"
#include "vmadmit/reference.hpp"
#include "vmadmit/simulator.hpp"
#include "vmadmit/solver.hpp"

namespace fs = std::filesystem;
using namespace vmadmit;
using vmadmit::io::json;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    bool full_precision = false;
    std::optional<std::uint64_t> seed;
};

io::RunConfig load_config(const CommonFlags& flags, bool required = true) {
    io::RunConfig config;
    if (!flags.config_path.empty()) {
        config = io::load_run_config(flags.config_path);
    } else if (required) {
        throw ConfigError("--config is required for this subcommand");
    }
    if (!flags.out_dir.empty()) {
        config.out_dir = flags.out_dir;
        config.out_dir_given = true;
    }
    if (flags.full_precision) config.precision = -1;
    if (flags.seed) {
        config.sim.seed = *flags.seed;
        config.train.seed = *flags.seed;
    }
    return config;
}

const ModelParams& require_model(const io::RunConfig& config) {
    if (!config.model) throw ConfigError("config has no model section");
    return *config.model;
}

fs::path ensure_out_dir(const io::RunConfig& config) {
    fs::path dir(config.out_dir);
    fs::create_directories(dir);
    return dir;
}

void emit(const json& doc) { std::printf("%s\n", doc.dump(2).c_str()); }

ThresholdPolicy load_policy(const std::string& path, const ModelParams& params) {
    const auto [policy, cap] = io::policy_from_json(io::load_json(path));
    (void)cap;
    if (policy.rows() != n1_max(params) + 1)
        throw ConfigError("policy has " + std::to_string(policy.rows()) +
                          " rows but the model needs " + std::to_string(n1_max(params) + 1));
    return policy;
}

int resolve_cap(const io::RunConfig& config, const ModelParams& params) {
    return config.solver.cap ? *config.solver.cap : auto_cap(params);
}

// ---- subcommands -----------------------------------------------------------

int cmd_solve(const CommonFlags& flags) {
    const io::RunConfig config = load_config(flags);
    const ModelParams& params = require_model(config);
    const SolveReport report = solve(params, config.solver);

    const fs::path dir = ensure_out_dir(config);
    io::write_file((dir / "grid.csv").string(), io::grid_to_csv(report.grid, config.precision));
    io::write_file((dir / "actions.csv").string(),
                   io::actions_to_csv(report.policy, report.cap));
    io::write_file((dir / "policy.json").string(),
                   io::policy_to_json(report.policy, report.cap).dump(2) + "\n");
    const json report_doc = io::solve_report_to_json(report, config.solver.tol);
    io::write_file((dir / "report.json").string(), report_doc.dump(2) + "\n");
    emit(report_doc);
    return 0;
}

int cmd_bounds(const CommonFlags& flags, int scan_limit) {
    const io::RunConfig config = load_config(flags);
    emit(io::bounds_to_json(threshold_bounds(require_model(config), scan_limit)));
    return 0;
}

int cmd_evaluate(const CommonFlags& flags, const std::string& policy_path,
                 const std::string& stop_rule) {
    const io::RunConfig config = load_config(flags);
    const ModelParams& params = require_model(config);
    const ThresholdPolicy policy = load_policy(policy_path, params);
    const int cap = resolve_cap(config, params);
    const StopRule stop = stop_rule == "supnorm" ? StopRule::sup_norm(config.solver.tol)
                                                 : StopRule::fixed_discount(1e-6);
    const ValueGrid value = evaluate_policy(params, policy, cap, stop);

    const fs::path dir = ensure_out_dir(config);
    const fs::path out = dir / "value_grid.csv";
    io::write_file(out.string(), io::grid_to_csv(value, config.precision));
    emit(json{{"out", out.string()}, {"cap", cap}, {"stop", stop_rule}});
    return 0;
}

int cmd_simulate(const CommonFlags& flags, const std::string& policy_path) {
    const io::RunConfig config = load_config(flags);
    const ModelParams& params = require_model(config);
    const ThresholdPolicy policy = load_policy(policy_path, params);
    const SimResult result = simulate(params, policy, config.sim);
    emit(io::sim_result_to_json(result, config.sim.seed));
    return 0;
}

int cmd_dataset(const CommonFlags& flags) {
    const io::RunConfig config = load_config(flags);
    if (!config.sweep) throw ConfigError("config has no sweep section");
    const Dataset dataset = build_dataset(*config.sweep, config.solver);

    const fs::path dir = ensure_out_dir(config);
    const fs::path out = dir / "dataset.csv";
    io::write_file(out.string(), io::dataset_to_csv(dataset));
    emit(json{{"rows", dataset.size()}, {"labels_per_row", dataset.label_count},
              {"out", out.string()}});
    return 0;
}

int cmd_train(const CommonFlags& flags, const std::string& dataset_path) {
    const io::RunConfig config = load_config(flags);
    const Dataset dataset = io::dataset_from_csv(io::read_file(dataset_path));
    const auto [net, report] = train(dataset, config.train);

    const fs::path dir = ensure_out_dir(config);
    const fs::path out = dir / "model.json";
    io::write_file(out.string(), io::mlp_to_json(net).dump(2) + "\n");
    json doc = io::train_report_to_json(report);
    doc["out"] = out.string();
    emit(doc);
    return 0;
}

int cmd_predict(const std::string& model_path, const std::vector<double>& features) {
    if (features.size() != kFeatureCount)
        throw ConfigError("--features needs exactly 5 values: R,lambda1,lambda2,mu1,mu2");
    const Mlp net = io::mlp_from_json(io::load_json(model_path));
    Features f{};
    std::copy(features.begin(), features.end(), f.begin());
    emit(json{{"features", f}, {"thresholds", net.predict(f)}});
    return 0;
}

// Reproduces the embedded benchmark study end to end and compares against
// the reference tables. Returns the number of hard mismatches.
int cmd_reproduce_paper(const CommonFlags& flags, bool perturb_self_test) {
    const io::RunConfig config = load_config(flags, /*required=*/false);

    // A non-benchmark model override runs the pipeline but compares nothing.
    if (config.model && !reference::is_benchmark(*config.model)) {
        const SolveReport report = solve(*config.model, config.solver);
        std::printf("model is not the benchmark configuration; printing results only\n%s\n",
                    io::grid_to_csv(report.grid, config.precision).c_str());
        emit(io::solve_report_to_json(report, config.solver.tol));
        return 0;
    }

    int mismatches = 0;
    auto verdict = [&](const std::string& name, bool pass, const std::string& detail) {
        std::printf("%s %s (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        if (!pass) ++mismatches;
    };
    char detail[160];

    for (double reward : {5.0, 1.0}) {
        const ModelParams params = reference::benchmark_params(reward);
        const std::string tag = reward == 5.0 ? "reward 5" : "reward 1";
        const SolveReport report = solve(params, config.solver);

        ValueGrid golden = reference::optimal_grid(reward);
        if (perturb_self_test) golden.at(0, 0) += 0.05;
        const double grid_diff = reference::max_abs_diff_on(report.grid, golden);
        std::snprintf(detail, sizeof detail, "max cell diff %.4f, tolerance 0.01", grid_diff);
        verdict("optimal values, " + tag, grid_diff <= 0.01, detail);

        const bool policy_ok = report.policy.d == reference::optimal_thresholds(reward);
        std::string policy_detail = "D = [";
        for (int i = 0; i < report.policy.rows(); ++i)
            policy_detail += (i ? "," : "") + std::to_string(report.policy.d[std::size_t(i)]);
        policy_detail += "]";
        verdict("optimal thresholds, " + tag, policy_ok, policy_detail);
        if (reward == 1.0)
            std::printf("note: the source action table prints [11,8,7] for reward 1, which its "
                        "own value table contradicts (admitting at n2=7 loses 0.05); the solver "
                        "matches the value-consistent thresholds\n");

        const ValueGrid value = evaluate_policy(params, report.policy, report.cap);
        const double eval_vs_solve = compare_grids(value, report.grid);
        const double eval_vs_ref =
            reference::max_abs_diff_on(value, reference::policy_value_grid(reward));
        std::snprintf(detail, sizeof detail,
                      "vs solver %.2e, vs reference table %.4f, tolerance 0.02", eval_vs_solve,
                      eval_vs_ref);
        verdict("policy value grid, " + tag, eval_vs_solve <= 0.02 && eval_vs_ref <= 0.02,
                detail);

        const BoundsResult bounds = threshold_bounds(params);
        const int expected_upper = reward == 5.0 ? 200 : 40;
        const bool bounds_ok =
            !bounds.lower && bounds.upper && *bounds.upper == expected_upper;
        std::snprintf(detail, sizeof detail, "lower %s, upper %d, expected upper %d",
                      bounds.lower ? std::to_string(*bounds.lower).c_str() : "none",
                      bounds.upper ? *bounds.upper : -1, expected_upper);
        verdict("threshold bounds, " + tag, bounds_ok, detail);

        bool bracket_ok = true;
        std::string bracket_msg = "thresholds inside analytic bracket";
        try {
            bracket_check(params, report.policy);
        } catch (const BoundViolated& e) {
            bracket_ok = false;
            bracket_msg = e.what();
        }
        verdict("bracket check, " + tag, bracket_ok, bracket_msg);

        if (config.out_dir_given) {
            const fs::path dir = ensure_out_dir(config) /
                                 (reward == 5.0 ? "reward5" : "reward1");
            fs::create_directories(dir);
            io::write_file((dir / "grid.csv").string(),
                           io::grid_to_csv(report.grid, config.precision));
            io::write_file((dir / "actions.csv").string(),
                           io::actions_to_csv(report.policy, report.cap));
            io::write_file((dir / "policy.json").string(),
                           io::policy_to_json(report.policy, report.cap).dump(2) + "\n");
            io::write_file((dir / "value_grid.csv").string(),
                           io::grid_to_csv(value, config.precision));
        }
    }

    if (mismatches > 0)
        throw GoldenMismatch(std::to_string(mismatches) + " reference comparison(s) failed");
    std::printf("all reference comparisons passed\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admission-control toolkit for a preemptive-priority VM pool"};
    app.require_subcommand(1);

    CommonFlags flags;
    int scan_limit = 10000;
    std::string policy_path, dataset_path, model_path, stop_rule = "paper";
    std::vector<double> features;
    bool perturb = false;

    auto add_common = [&](CLI::App* cmd, bool with_out = true) {
        cmd->add_option("--config", flags.config_path, "JSON config document");
        if (with_out) cmd->add_option("--out", flags.out_dir, "output directory");
        cmd->add_flag("--full-precision", flags.full_precision,
                      "write CSV values at full precision");
        cmd->add_option("--seed", [&flags](const std::vector<std::string>& v) {
            flags.seed = std::stoull(v[0]);
            return true;
        }, "override simulation/training seed")->expected(1);
    };

    CLI::App* c_solve = app.add_subcommand("solve", "solve for the optimal policy");
    add_common(c_solve);
    CLI::App* c_bounds = app.add_subcommand("bounds", "analytic threshold bounds");
    add_common(c_bounds, false);
    c_bounds->add_option("--scan-limit", scan_limit, "bound scan limit");
    CLI::App* c_eval = app.add_subcommand("evaluate", "value a fixed threshold policy");
    add_common(c_eval);
    c_eval->add_option("--policy", policy_path, "policy.json path")->required();
    c_eval->add_option("--stop", stop_rule, "stop rule: paper | supnorm");
    CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo policy estimate");
    add_common(c_sim, false);
    c_sim->add_option("--policy", policy_path, "policy.json path")->required();
    CLI::App* c_data = app.add_subcommand("dataset", "solve a parameter sweep into a CSV");
    add_common(c_data);
    CLI::App* c_train = app.add_subcommand("train", "fit the threshold estimator");
    add_common(c_train);
    c_train->add_option("--dataset", dataset_path, "dataset.csv path")->required();
    CLI::App* c_pred = app.add_subcommand("predict", "estimate thresholds from a trained model");
    c_pred->add_option("--model", model_path, "model.json path")->required();
    c_pred->add_option("--features", features, "R,lambda1,lambda2,mu1,mu2")
        ->required()
        ->delimiter(',');
    CLI::App* c_repro =
        app.add_subcommand("reproduce-paper", "re-derive and check the embedded benchmark study");
    add_common(c_repro);
    c_repro->add_flag("--self-test-perturb", perturb,
                      "perturb one reference cell to prove mismatches are caught")
        ->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_solve->parsed()) return cmd_solve(flags);
        if (c_bounds->parsed()) return cmd_bounds(flags, scan_limit);
        if (c_eval->parsed()) return cmd_evaluate(flags, policy_path, stop_rule);
        if (c_sim->parsed()) return cmd_simulate(flags, policy_path);
        if (c_data->parsed()) return cmd_dataset(flags);
        if (c_train->parsed()) return cmd_train(flags, dataset_path);
        if (c_pred->parsed()) return cmd_predict(model_path, features);
        if (c_repro->parsed()) return cmd_reproduce_paper(flags, perturb);
    } catch (const GoldenMismatch& e) {
        emit(json{{"error", {{"type", "GoldenMismatch"}, {"message", e.what()}}}});
        return 3;
    } catch (const ConfigError& e) {
        emit(json{{"error", {{"type", "ConfigError"}, {"message", e.what()}}}});
        return 2;
    } catch (const DomainError& e) {
        emit(json{{"error", {{"type", "DomainError"}, {"message", e.what()}}}});
        return 2;
    } catch (const std::exception& e) {
        emit(json{{"error", {{"type", "NumericalFailure"}, {"message", e.what()}}}});
        return 1;
    }
    return 0;
}
