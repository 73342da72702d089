#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "vmadmit/model.hpp"
#include "vmadmit/solver.hpp"

namespace vmadmit {

/// Feature vector of one training/query point: (R, lambda1, lambda2, mu1, mu2).
using Features = std::array<double, 5>;
constexpr int kFeatureCount = 5;

/// Cartesian parameter sweep: reward, type-2 arrival rate and type-2 service
/// rate vary; everything else (capacity, geometry, discount, preemption cost,
/// holding cost, type-1 rates) is fixed by `base`.
struct SweepSpec {
    ModelParams base;
    std::vector<double> values_R;
    std::vector<double> values_lambda2;
    std::vector<double> values_mu2;

    std::size_t size() const {
        return values_R.size() * values_lambda2.size() * values_mu2.size();
    }
};

/// Threshold dataset: one row per parameter point, labels are the solved
/// thresholds D(0..N1) with kRejectAll encoded as -1.
struct Dataset {
    int label_count = 0;
    std::vector<Features> features;
    std::vector<std::vector<int>> labels;
    // Per-feature / per-label ranges captured at build time; constant columns
    // have min == max and normalize to 0.
    Features feat_min{}, feat_max{};
    std::vector<double> label_min, label_max;

    std::size_t size() const { return features.size(); }
    void recompute_ranges();
};

/// Solves every point of the sweep (rows ordered lexicographically by
/// (R, lambda2, mu2) in the given list order) and records the thresholds.
/// Solver errors are rethrown with the offending parameter tuple attached.
Dataset build_dataset(const SweepSpec& sweep, const SolveOptions& solver = {},
                      unsigned threads = 0);

/// Layer sizes and the flat parameter layout [w1 | b1 | w2 | b2],
/// both weight matrices row-major (w1 is hidden x in, w2 is out x hidden).
struct MlpShape {
    int inputs = kFeatureCount;
    int hidden = 30;
    int outputs = 0;

    int w1_offset() const { return 0; }
    int b1_offset() const { return hidden * inputs; }
    int w2_offset() const { return b1_offset() + hidden; }
    int b2_offset() const { return w2_offset() + outputs * hidden; }
    int param_count() const { return b2_offset() + outputs; }
};

/**
 * Single-hidden-layer regression network (tanh hidden, linear output) mapping
 * normalized model parameters to normalized thresholds, plus the min-max
 * constants needed to use it on raw values.
 */
struct Mlp {
    MlpShape shape;
    std::vector<double> params;
    Features feat_min{}, feat_max{};
    std::vector<double> label_min, label_max;

    /// Denormalized real-valued outputs.
    std::vector<double> forward(const Features& raw) const;
    /// forward() rounded to the nearest integer threshold, clamped at the
    /// reject-all sentinel -1.
    std::vector<int> predict(const Features& raw) const;
};

struct TrainOptions {
    int hidden = 30;
    long epochs = 20000;
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::uint64_t seed = 1;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;
};

struct TrainReport {
    double train_mse = 0.0;      ///< best-epoch training loss (normalized units)
    double val_mse = 0.0;        ///< best validation loss (normalized units)
    double test_mse = 0.0;       ///< held-out loss at the best weights
    double val_rmse_units = 0.0; ///< validation RMSE in threshold units
    long best_epoch = 0;
    long epochs_run = 0;
};

/**
 * Full-batch gradient descent with momentum on mean squared error, features
 * and labels min-max normalized to [-1, 1]. A validation slice (seeded
 * shuffle, after canonical row ordering so the split ignores input row order)
 * drives early stopping: the returned weights are the best-validation ones.
 * Throws Diverged when the loss stops being finite.
 */
std::pair<Mlp, TrainReport> train(const Dataset& dataset, const TrainOptions& opts = {});

/**
 * MSE loss (0.5 * mean over rows and outputs of squared error) and, when
 * grad != nullptr, its analytic gradient with respect to every parameter.
 * Inputs are already-normalized row vectors. Exposed so finite-difference
 * checks can probe the backpropagation directly.
 */
double mlp_loss_and_grad(const MlpShape& shape, const std::vector<double>& params,
                         const std::vector<std::vector<double>>& x,
                         const std::vector<std::vector<double>>& y,
                         std::vector<double>* grad);

/// Per-point comparison of solver thresholds against network predictions.
struct ComparisonRow {
    Features features{};
    std::vector<int> actual;
    std::vector<int> predicted;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    double mae = 0.0;     ///< mean absolute error over all (point, row) entries
    int max_abs_err = 0;
};

/// Solves each test point for ground truth (capacity/geometry/discount taken
/// from `base`; features override R, lambda1, lambda2, mu1, mu2) and
/// tabulates it against the network's predictions.
ComparisonTable evaluate_estimator(const Mlp& net, const std::vector<Features>& test_points,
                                   const ModelParams& base, const SolveOptions& solver = {},
                                   unsigned threads = 0);

/// The model point corresponding to one feature vector.
ModelParams apply_features(const ModelParams& base, const Features& f);

} // namespace vmadmit
