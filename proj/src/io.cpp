#include "vmadmit/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vmadmit::io {

namespace {

void require_keys(const json& doc, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& what) {
    if (!doc.is_object()) throw ConfigError(what + " must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!required.count(key) && !optional.count(key))
            throw ConfigError(what + ": unknown field \"" + key + "\"");
    }
    for (const std::string& key : required)
        if (!doc.contains(key)) throw ConfigError(what + ": missing field \"" + key + "\"");
}

double number(const json& doc, const std::string& key, const std::string& what) {
    if (!doc.at(key).is_number())
        throw ConfigError(what + ": field \"" + key + "\" must be a number");
    return doc.at(key).get<double>();
}

int integer(const json& doc, const std::string& key, const std::string& what) {
    if (!doc.at(key).is_number_integer())
        throw ConfigError(what + ": field \"" + key + "\" must be an integer");
    return doc.at(key).get<int>();
}

std::string format_value(double v, int precision) {
    char buffer[64];
    if (precision < 0)
        std::snprintf(buffer, sizeof buffer, "%.17g", v);
    else
        std::snprintf(buffer, sizeof buffer, "%.*f", precision, v);
    return buffer;
}

} // namespace

json model_to_json(const ModelParams& params) {
    json holding;
    if (params.holding.kind == HoldingKind::SquareSum) {
        holding = json{{"kind", "square_sum"}};
    } else {
        holding = json{{"kind", "polynomial"}, {"coefficients", params.holding.coeff}};
    }
    return json{{"lambda1", params.lambda1},
                {"lambda2", params.lambda2},
                {"mu1", params.mu1},
                {"mu2", params.mu2},
                {"capacity_C", params.capacity_C},
                {"vms_per_pu_b", params.vms_per_pu_b},
                {"alpha", params.alpha},
                {"reward_R", params.reward_R},
                {"preempt_cost_r", params.preempt_cost_r},
                {"holding", holding}};
}

ModelParams model_from_json(const json& doc) {
    require_keys(doc,
                 {"lambda1", "lambda2", "mu1", "mu2", "capacity_C", "vms_per_pu_b", "alpha",
                  "reward_R", "preempt_cost_r", "holding"},
                 {}, "model");

    ModelParams params;
    params.lambda1 = number(doc, "lambda1", "model");
    params.lambda2 = number(doc, "lambda2", "model");
    params.mu1 = number(doc, "mu1", "model");
    params.mu2 = number(doc, "mu2", "model");
    params.capacity_C = integer(doc, "capacity_C", "model");
    params.vms_per_pu_b = integer(doc, "vms_per_pu_b", "model");
    params.alpha = number(doc, "alpha", "model");
    params.reward_R = number(doc, "reward_R", "model");
    params.preempt_cost_r = number(doc, "preempt_cost_r", "model");

    const json& holding = doc.at("holding");
    if (!holding.is_object() || !holding.contains("kind"))
        throw ConfigError("model.holding must be an object with a \"kind\" field");
    const std::string kind = holding.at("kind").get<std::string>();
    if (kind == "square_sum") {
        require_keys(holding, {"kind"}, {}, "model.holding");
        params.holding = HoldingCost::square_sum();
    } else if (kind == "polynomial") {
        require_keys(holding, {"kind", "coefficients"}, {}, "model.holding");
        const json& c = holding.at("coefficients");
        if (!c.is_array() || c.size() != 6)
            throw ConfigError("model.holding.coefficients must be an array of 6 numbers "
                              "(c20, c02, c11, c10, c01, c00)");
        params.holding.kind = HoldingKind::Polynomial;
        for (std::size_t i = 0; i < 6; ++i) params.holding.coeff[i] = c[i].get<double>();
    } else {
        throw ConfigError("model.holding.kind must be \"square_sum\" or \"polynomial\"");
    }
    params.validate();
    return params;
}

json policy_to_json(const ThresholdPolicy& policy, std::optional<int> cap) {
    json doc{{"thresholds", policy.d}};
    if (cap) doc["cap"] = *cap;
    return doc;
}

std::pair<ThresholdPolicy, std::optional<int>> policy_from_json(const json& doc) {
    require_keys(doc, {"thresholds"}, {"cap"}, "policy");
    ThresholdPolicy policy;
    for (const json& t : doc.at("thresholds")) {
        const int value = t.get<int>();
        if (value < ThresholdPolicy::kRejectAll)
            throw ConfigError("policy thresholds must be >= -1");
        policy.d.push_back(value);
    }
    if (policy.d.empty()) throw ConfigError("policy has no rows");
    std::optional<int> cap;
    if (doc.contains("cap")) cap = doc.at("cap").get<int>();
    return {policy, cap};
}

json mlp_to_json(const Mlp& net) {
    auto slice = [&](int offset, int count) {
        return std::vector<double>(net.params.begin() + offset,
                                   net.params.begin() + offset + count);
    };
    return json{{"inputs", net.shape.inputs},
                {"hidden", net.shape.hidden},
                {"outputs", net.shape.outputs},
                {"activation", "tanh"},
                {"w1", slice(net.shape.w1_offset(), net.shape.hidden * net.shape.inputs)},
                {"b1", slice(net.shape.b1_offset(), net.shape.hidden)},
                {"w2", slice(net.shape.w2_offset(), net.shape.outputs * net.shape.hidden)},
                {"b2", slice(net.shape.b2_offset(), net.shape.outputs)},
                {"feat_min", net.feat_min},
                {"feat_max", net.feat_max},
                {"label_min", net.label_min},
                {"label_max", net.label_max}};
}

Mlp mlp_from_json(const json& doc) {
    require_keys(doc,
                 {"inputs", "hidden", "outputs", "activation", "w1", "b1", "w2", "b2",
                  "feat_min", "feat_max", "label_min", "label_max"},
                 {}, "network");
    if (doc.at("activation").get<std::string>() != "tanh")
        throw ConfigError("network: unsupported activation");

    Mlp net;
    net.shape = MlpShape{integer(doc, "inputs", "network"), integer(doc, "hidden", "network"),
                         integer(doc, "outputs", "network")};
    if (net.shape.inputs != kFeatureCount) throw ConfigError("network must take 5 inputs");
    if (net.shape.hidden < 1 || net.shape.outputs < 1)
        throw ConfigError("network layer sizes must be positive");

    net.params.assign(std::size_t(net.shape.param_count()), 0.0);
    auto fill = [&](const char* key, int offset, int count) {
        const auto values = doc.at(key).get<std::vector<double>>();
        if (int(values.size()) != count)
            throw ConfigError(std::string("network: field \"") + key + "\" has wrong length");
        std::copy(values.begin(), values.end(), net.params.begin() + offset);
    };
    fill("w1", net.shape.w1_offset(), net.shape.hidden * net.shape.inputs);
    fill("b1", net.shape.b1_offset(), net.shape.hidden);
    fill("w2", net.shape.w2_offset(), net.shape.outputs * net.shape.hidden);
    fill("b2", net.shape.b2_offset(), net.shape.outputs);

    const auto fmin = doc.at("feat_min").get<std::vector<double>>();
    const auto fmax = doc.at("feat_max").get<std::vector<double>>();
    if (fmin.size() != kFeatureCount || fmax.size() != kFeatureCount)
        throw ConfigError("network feature ranges must have 5 entries");
    std::copy(fmin.begin(), fmin.end(), net.feat_min.begin());
    std::copy(fmax.begin(), fmax.end(), net.feat_max.begin());
    net.label_min = doc.at("label_min").get<std::vector<double>>();
    net.label_max = doc.at("label_max").get<std::vector<double>>();
    if (int(net.label_min.size()) != net.shape.outputs ||
        int(net.label_max.size()) != net.shape.outputs)
        throw ConfigError("network label ranges must match the output count");
    return net;
}

json sim_result_to_json(const SimResult& result, std::uint64_t seed) {
    return json{{"mean", result.mean},
                {"std_error", result.std_error},
                {"ci95", {result.ci95_low, result.ci95_high}},
                {"replications", result.replications},
                {"events_total", result.events_total},
                {"seed", seed}};
}

json bounds_to_json(const BoundsResult& bounds) {
    json doc{{"lower", nullptr}, {"upper", nullptr},
             {"reject_all", bounds.reject_all}, {"scan_limit", bounds.scan_limit}};
    if (bounds.lower) doc["lower"] = *bounds.lower;
    if (bounds.upper) doc["upper"] = *bounds.upper;
    if (bounds.lower && *bounds.lower == bounds.scan_limit)
        doc["note"] = "lower bound saturated the scan (unbounded within scan)";
    return doc;
}

json solve_report_to_json(const SolveReport& report, double tol) {
    return json{{"iterations", report.iterations},
                {"residual", report.residual},
                {"tol", tol},
                {"cap", report.cap},
                {"thresholds", report.policy.d},
                {"hypotheses",
                 {{"convex_increasing_n2", report.hypothesis_report.convex_increasing_n2},
                  {"delta_nondecreasing_n1", report.hypothesis_report.delta_nondecreasing_n1}}},
                {"warnings", report.warnings}};
}

json train_report_to_json(const TrainReport& report) {
    return json{{"train_mse", report.train_mse},
                {"val_mse", report.val_mse},
                {"test_mse", report.test_mse},
                {"val_rmse_units", report.val_rmse_units},
                {"best_epoch", report.best_epoch},
                {"epochs_run", report.epochs_run}};
}

json comparison_to_json(const ComparisonTable& table) {
    json rows = json::array();
    for (const ComparisonRow& row : table.rows) {
        rows.push_back(json{{"features", row.features},
                            {"actual", row.actual},
                            {"predicted", row.predicted}});
    }
    return json{{"rows", rows}, {"mae", table.mae}, {"max_abs_err", table.max_abs_err}};
}

RunConfig run_config_from_json(const json& doc) {
    require_keys(doc, {}, {"model", "solver", "sim", "sweep", "train", "output"}, "config");
    RunConfig config;

    if (doc.contains("model")) config.model = model_from_json(doc.at("model"));

    if (doc.contains("solver")) {
        const json& solver = doc.at("solver");
        require_keys(solver, {}, {"cap", "tol", "max_iter"}, "solver");
        if (solver.contains("cap")) {
            const json& cap = solver.at("cap");
            if (cap.is_string() && cap.get<std::string>() == "auto")
                config.solver.cap.reset();
            else if (cap.is_number_integer())
                config.solver.cap = cap.get<int>();
            else
                throw ConfigError("solver.cap must be an integer or \"auto\"");
        }
        if (solver.contains("tol")) config.solver.tol = number(solver, "tol", "solver");
        if (solver.contains("max_iter")) config.solver.max_iter = integer(solver, "max_iter", "solver");
    }

    if (doc.contains("sim")) {
        const json& sim = doc.at("sim");
        require_keys(sim, {}, {"discount_floor", "replications", "seed", "initial"}, "sim");
        if (sim.contains("discount_floor"))
            config.sim.discount_floor = number(sim, "discount_floor", "sim");
        if (sim.contains("replications"))
            config.sim.replications = sim.at("replications").get<long>();
        if (sim.contains("seed")) config.sim.seed = sim.at("seed").get<std::uint64_t>();
        if (sim.contains("initial")) {
            const json& initial = sim.at("initial");
            if (!initial.is_array() || initial.size() != 2)
                throw ConfigError("sim.initial must be [n1, n2]");
            config.sim.initial = State{initial[0].get<int>(), initial[1].get<int>()};
        }
    }

    if (doc.contains("sweep")) {
        const json& sweep = doc.at("sweep");
        require_keys(sweep, {"values_R", "values_lambda2", "values_mu2"}, {}, "sweep");
        SweepSpec spec;
        spec.values_R = sweep.at("values_R").get<std::vector<double>>();
        spec.values_lambda2 = sweep.at("values_lambda2").get<std::vector<double>>();
        spec.values_mu2 = sweep.at("values_mu2").get<std::vector<double>>();
        if (!config.model)
            throw ConfigError("sweep section requires a model section for the base parameters");
        spec.base = *config.model;
        config.sweep = std::move(spec);
    }

    if (doc.contains("train")) {
        const json& train = doc.at("train");
        require_keys(train, {},
                     {"hidden", "epochs", "learning_rate", "momentum", "seed",
                      "validation_fraction", "test_fraction"},
                     "train");
        if (train.contains("hidden")) config.train.hidden = integer(train, "hidden", "train");
        if (train.contains("epochs")) config.train.epochs = train.at("epochs").get<long>();
        if (train.contains("learning_rate"))
            config.train.learning_rate = number(train, "learning_rate", "train");
        if (train.contains("momentum")) config.train.momentum = number(train, "momentum", "train");
        if (train.contains("seed")) config.train.seed = train.at("seed").get<std::uint64_t>();
        if (train.contains("validation_fraction"))
            config.train.validation_fraction = number(train, "validation_fraction", "train");
        if (train.contains("test_fraction"))
            config.train.test_fraction = number(train, "test_fraction", "train");
    }

    if (doc.contains("output")) {
        const json& output = doc.at("output");
        require_keys(output, {}, {"dir", "precision"}, "output");
        if (output.contains("dir")) {
            config.out_dir = output.at("dir").get<std::string>();
            config.out_dir_given = true;
        }
        if (output.contains("precision")) config.precision = integer(output, "precision", "output");
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_json(load_json(path));
}

std::string grid_to_csv(const ValueGrid& grid, int precision) {
    std::ostringstream out;
    out << "n1\\n2";
    for (int n2 = 0; n2 < grid.n2_size; ++n2) out << ',' << n2;
    out << '\n';
    for (int n1 = 0; n1 < grid.n1_size; ++n1) {
        out << n1;
        for (int n2 = 0; n2 < grid.n2_size; ++n2)
            out << ',' << format_value(grid.at(n1, n2), precision);
        out << '\n';
    }
    return out.str();
}

std::string actions_to_csv(const ThresholdPolicy& policy, int cap) {
    std::ostringstream out;
    out << "n1\\n2";
    for (int n2 = 0; n2 <= cap; ++n2) out << ',' << n2;
    out << '\n';
    for (int n1 = 0; n1 < policy.rows(); ++n1) {
        out << n1;
        for (int n2 = 0; n2 <= cap; ++n2) out << ',' << (policy.admits(n1, n2) ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::string dataset_to_csv(const Dataset& dataset) {
    std::ostringstream out;
    out << "R,lambda1,lambda2,mu1,mu2";
    for (int j = 0; j < dataset.label_count; ++j) out << ",threshold_" << j;
    out << '\n';
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        for (int j = 0; j < kFeatureCount; ++j)
            out << (j ? "," : "") << format_value(dataset.features[r][std::size_t(j)], -1);
        for (int j = 0; j < dataset.label_count; ++j)
            out << ',' << dataset.labels[r][std::size_t(j)];
        out << '\n';
    }
    return out.str();
}

Dataset dataset_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("dataset CSV is empty");

    int columns = 1;
    for (char ch : line)
        if (ch == ',') ++columns;
    if (columns <= kFeatureCount)
        throw ConfigError("dataset CSV needs feature and threshold columns");

    Dataset ds;
    ds.label_count = columns - kFeatureCount;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        Features f{};
        std::vector<int> labels;
        for (int j = 0; j < columns; ++j) {
            if (!std::getline(row, cell, ','))
                throw ConfigError("dataset CSV row has too few columns: " + line);
            if (j < kFeatureCount)
                f[std::size_t(j)] = std::stod(cell);
            else
                labels.push_back(std::stoi(cell));
        }
        ds.features.push_back(f);
        ds.labels.push_back(std::move(labels));
    }
    if (ds.features.empty()) throw ConfigError("dataset CSV has no data rows");
    ds.recompute_ranges();
    return ds;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

json load_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace vmadmit::io
