#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "vmadmit/bounds.hpp"
#include "vmadmit/estimator.hpp"
#include "vmadmit/evaluator.hpp"
#include "vmadmit/grid.hpp"
#include "vmadmit/model.hpp"
#include "vmadmit/simulator.hpp"
#include "vmadmit/solver.hpp"

namespace vmadmit::io {

using json = nlohmann::ordered_json;

// ---- model document ------------------------------------------------------
// The model document has exactly the fields of ModelParams; unknown or
// missing fields are rejected so configs cannot silently drift.

json model_to_json(const ModelParams& params);
ModelParams model_from_json(const json& doc);

// ---- policy / network / results ------------------------------------------

json policy_to_json(const ThresholdPolicy& policy, std::optional<int> cap = std::nullopt);
std::pair<ThresholdPolicy, std::optional<int>> policy_from_json(const json& doc);

json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const json& doc);

json sim_result_to_json(const SimResult& result, std::uint64_t seed);
json bounds_to_json(const BoundsResult& bounds);
json solve_report_to_json(const SolveReport& report, double tol);
json train_report_to_json(const TrainReport& report);
json comparison_to_json(const ComparisonTable& table);

// ---- run configuration -----------------------------------------------------

/// One config document drives every subcommand; each section is read only by
/// the subcommands that need it.
struct RunConfig {
    std::optional<ModelParams> model;
    SolveOptions solver;
    SimConfig sim;
    std::optional<SweepSpec> sweep;  ///< base filled from the model section
    TrainOptions train;
    std::string out_dir = ".";
    bool out_dir_given = false;  ///< output.dir present (or --out passed)
    int precision = 2;           ///< CSV decimals; -1 means full precision
};

RunConfig run_config_from_json(const json& doc);
RunConfig load_run_config(const std::string& path);

// ---- CSV -------------------------------------------------------------------

/// Grid layout: first row is the n2 index, first column the n1 index.
/// precision -1 writes shortest-round-trip doubles.
std::string grid_to_csv(const ValueGrid& grid, int precision = 2);

/// 0/1 admission table of a policy over columns n2 = 0..cap.
std::string actions_to_csv(const ThresholdPolicy& policy, int cap);

std::string dataset_to_csv(const Dataset& dataset);
Dataset dataset_from_csv(const std::string& text);

// ---- files -----------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json load_json(const std::string& path);

} // namespace vmadmit::io
