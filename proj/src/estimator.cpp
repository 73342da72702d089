#include "vmadmit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vmadmit/parallel.hpp"
#include "vmadmit/rng.hpp"

namespace vmadmit {

namespace {

double to_unit(double v, double lo, double hi) {
    return hi > lo ? 2.0 * (v - lo) / (hi - lo) - 1.0 : 0.0;
}

double from_unit(double u, double lo, double hi) {
    return hi > lo ? lo + (u + 1.0) * (hi - lo) / 2.0 : lo;
}

} // namespace

ModelParams apply_features(const ModelParams& base, const Features& f) {
    ModelParams p = base;
    p.reward_R = f[0];
    p.lambda1 = f[1];
    p.lambda2 = f[2];
    p.mu1 = f[3];
    p.mu2 = f[4];
    return p;
}

void Dataset::recompute_ranges() {
    feat_min.fill(std::numeric_limits<double>::infinity());
    feat_max.fill(-std::numeric_limits<double>::infinity());
    label_min.assign(std::size_t(label_count), std::numeric_limits<double>::infinity());
    label_max.assign(std::size_t(label_count), -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < size(); ++r) {
        for (int j = 0; j < kFeatureCount; ++j) {
            feat_min[j] = std::min(feat_min[j], features[r][j]);
            feat_max[j] = std::max(feat_max[j], features[r][j]);
        }
        for (int j = 0; j < label_count; ++j) {
            label_min[j] = std::min(label_min[j], double(labels[r][std::size_t(j)]));
            label_max[j] = std::max(label_max[j], double(labels[r][std::size_t(j)]));
        }
    }
}

Dataset build_dataset(const SweepSpec& sweep, const SolveOptions& solver, unsigned threads) {
    if (sweep.values_R.empty() || sweep.values_lambda2.empty() || sweep.values_mu2.empty())
        throw ConfigError("sweep value lists must be non-empty");
    sweep.base.validate();

    Dataset ds;
    ds.label_count = n1_max(sweep.base) + 1;
    ds.features.resize(sweep.size());
    ds.labels.resize(sweep.size());

    const std::size_t n_l2 = sweep.values_lambda2.size();
    const std::size_t n_m2 = sweep.values_mu2.size();

    parallel_for(
        sweep.size(),
        [&](std::size_t i) {
            const double reward = sweep.values_R[i / (n_l2 * n_m2)];
            const double lambda2 = sweep.values_lambda2[(i / n_m2) % n_l2];
            const double mu2 = sweep.values_mu2[i % n_m2];
            const Features f{reward, sweep.base.lambda1, lambda2, sweep.base.mu1, mu2};
            const auto tuple = "(R=" + std::to_string(reward) +
                               ", lambda2=" + std::to_string(lambda2) +
                               ", mu2=" + std::to_string(mu2) + ")";
            try {
                const SolveReport report = solve(apply_features(sweep.base, f), solver);
                ds.features[i] = f;
                ds.labels[i] = report.policy.d;
            } catch (const ConfigError& e) {
                throw ConfigError("dataset point " + tuple + ": " + e.what());
            } catch (const std::exception& e) {
                throw std::runtime_error("dataset point " + tuple + ": " + e.what());
            }
        },
        threads);

    ds.recompute_ranges();
    return ds;
}

std::vector<double> Mlp::forward(const Features& raw) const {
    std::vector<double> x(kFeatureCount);
    for (int j = 0; j < kFeatureCount; ++j) x[j] = to_unit(raw[j], feat_min[j], feat_max[j]);

    const double* w1 = params.data() + shape.w1_offset();
    const double* b1 = params.data() + shape.b1_offset();
    const double* w2 = params.data() + shape.w2_offset();
    const double* b2 = params.data() + shape.b2_offset();

    std::vector<double> hidden(std::size_t(shape.hidden));
    for (int h = 0; h < shape.hidden; ++h) {
        double z = b1[h];
        for (int j = 0; j < shape.inputs; ++j) z += w1[h * shape.inputs + j] * x[std::size_t(j)];
        hidden[std::size_t(h)] = std::tanh(z);
    }
    std::vector<double> out(std::size_t(shape.outputs));
    for (int o = 0; o < shape.outputs; ++o) {
        double z = b2[o];
        for (int h = 0; h < shape.hidden; ++h) z += w2[o * shape.hidden + h] * hidden[std::size_t(h)];
        out[std::size_t(o)] = from_unit(z, label_min[std::size_t(o)], label_max[std::size_t(o)]);
    }
    return out;
}

std::vector<int> Mlp::predict(const Features& raw) const {
    const std::vector<double> real = forward(raw);
    std::vector<int> rounded(real.size());
    for (std::size_t i = 0; i < real.size(); ++i)
        rounded[i] = std::max(int(ThresholdPolicy::kRejectAll), int(std::llround(real[i])));
    return rounded;
}

double mlp_loss_and_grad(const MlpShape& shape, const std::vector<double>& params,
                         const std::vector<std::vector<double>>& x,
                         const std::vector<std::vector<double>>& y,
                         std::vector<double>* grad) {
    if (x.empty() || x.size() != y.size()) throw DomainError("loss needs matching nonempty x/y");
    if (int(params.size()) != shape.param_count()) throw DomainError("parameter vector size mismatch");

    const double* w1 = params.data() + shape.w1_offset();
    const double* b1 = params.data() + shape.b1_offset();
    const double* w2 = params.data() + shape.w2_offset();
    const double* b2 = params.data() + shape.b2_offset();

    double* g_w1 = nullptr;
    double* g_b1 = nullptr;
    double* g_w2 = nullptr;
    double* g_b2 = nullptr;
    if (grad) {
        grad->assign(params.size(), 0.0);
        g_w1 = grad->data() + shape.w1_offset();
        g_b1 = grad->data() + shape.b1_offset();
        g_w2 = grad->data() + shape.w2_offset();
        g_b2 = grad->data() + shape.b2_offset();
    }

    const double scale = 1.0 / (double(x.size()) * shape.outputs);
    std::vector<double> hidden(std::size_t(shape.hidden));
    std::vector<double> delta_out(std::size_t(shape.outputs));
    double loss = 0.0;

    for (std::size_t r = 0; r < x.size(); ++r) {
        const std::vector<double>& row = x[r];
        for (int h = 0; h < shape.hidden; ++h) {
            double z = b1[h];
            for (int j = 0; j < shape.inputs; ++j) z += w1[h * shape.inputs + j] * row[std::size_t(j)];
            hidden[std::size_t(h)] = std::tanh(z);
        }
        for (int o = 0; o < shape.outputs; ++o) {
            double z = b2[o];
            for (int h = 0; h < shape.hidden; ++h)
                z += w2[o * shape.hidden + h] * hidden[std::size_t(h)];
            const double err = z - y[r][std::size_t(o)];
            loss += 0.5 * err * err * scale;
            delta_out[std::size_t(o)] = err * scale;
        }
        if (!grad) continue;
        for (int h = 0; h < shape.hidden; ++h) {
            double back = 0.0;
            for (int o = 0; o < shape.outputs; ++o) {
                const double d = delta_out[std::size_t(o)];
                g_w2[o * shape.hidden + h] += d * hidden[std::size_t(h)];
                back += d * w2[o * shape.hidden + h];
            }
            const double dtanh = 1.0 - hidden[std::size_t(h)] * hidden[std::size_t(h)];
            const double delta_h = back * dtanh;
            for (int j = 0; j < shape.inputs; ++j)
                g_w1[h * shape.inputs + j] += delta_h * row[std::size_t(j)];
            g_b1[h] += delta_h;
        }
        for (int o = 0; o < shape.outputs; ++o) g_b2[o] += delta_out[std::size_t(o)];
    }
    return loss;
}

std::pair<Mlp, TrainReport> train(const Dataset& dataset, const TrainOptions& opts) {
    if (dataset.size() < 10) throw ConfigError("training needs at least 10 dataset rows");
    if (opts.hidden < 1) throw ConfigError("hidden layer needs at least one unit");
    if (!(opts.validation_fraction >= 0.0) || !(opts.test_fraction >= 0.0) ||
        opts.validation_fraction + opts.test_fraction >= 1.0)
        throw ConfigError("validation/test fractions must be nonnegative and sum below 1");

    const std::size_t n = dataset.size();

    // Canonical row order, so the seeded split does not depend on how the
    // caller happened to order the rows.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dataset.features[a] != dataset.features[b])
            return dataset.features[a] < dataset.features[b];
        return dataset.labels[a] < dataset.labels[b];
    });

    Xoshiro256pp rng(opts.seed);
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(order[i], order[rng.below(i + 1)]);

    const std::size_t n_val = std::size_t(std::llround(opts.validation_fraction * double(n)));
    const std::size_t n_test = std::size_t(std::llround(opts.test_fraction * double(n)));
    const std::size_t n_train = n - n_val - n_test;
    if (n_train == 0) throw ConfigError("split leaves no training rows");

    Mlp net;
    net.shape = MlpShape{kFeatureCount, opts.hidden, dataset.label_count};
    net.feat_min = dataset.feat_min;
    net.feat_max = dataset.feat_max;
    net.label_min = dataset.label_min;
    net.label_max = dataset.label_max;

    auto normalized_rows = [&](std::size_t begin, std::size_t end) {
        std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> slice;
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t r = order[k];
            std::vector<double> xr(kFeatureCount), yr(std::size_t(dataset.label_count));
            for (int j = 0; j < kFeatureCount; ++j)
                xr[std::size_t(j)] = to_unit(dataset.features[r][j], net.feat_min[j], net.feat_max[j]);
            for (int j = 0; j < dataset.label_count; ++j)
                yr[std::size_t(j)] = to_unit(double(dataset.labels[r][std::size_t(j)]),
                                             net.label_min[std::size_t(j)], net.label_max[std::size_t(j)]);
            slice.first.push_back(std::move(xr));
            slice.second.push_back(std::move(yr));
        }
        return slice;
    };

    const auto [x_train, y_train] = normalized_rows(0, n_train);
    const auto [x_val, y_val] = normalized_rows(n_train, n_train + n_val);
    const auto [x_test, y_test] = normalized_rows(n_train + n_val, n);

    // Uniform init scaled by fan-in; biases start at zero.
    net.params.assign(std::size_t(net.shape.param_count()), 0.0);
    const double a1 = 1.0 / std::sqrt(double(net.shape.inputs));
    const double a2 = 1.0 / std::sqrt(double(net.shape.hidden));
    for (int i = 0; i < net.shape.hidden * net.shape.inputs; ++i)
        net.params[std::size_t(net.shape.w1_offset() + i)] = rng.uniform(-a1, a1);
    for (int i = 0; i < net.shape.outputs * net.shape.hidden; ++i)
        net.params[std::size_t(net.shape.w2_offset() + i)] = rng.uniform(-a2, a2);

    TrainReport report;
    std::vector<double> grad, velocity(net.params.size(), 0.0);
    std::vector<double> best_params = net.params;
    double best_val = std::numeric_limits<double>::infinity();
    double train_at_best = std::numeric_limits<double>::infinity();

    for (long epoch = 0; epoch < opts.epochs; ++epoch) {
        const double train_loss = mlp_loss_and_grad(net.shape, net.params, x_train, y_train, &grad);
        if (!std::isfinite(train_loss)) throw Diverged("training loss became non-finite at epoch " +
                                                       std::to_string(epoch));
        for (std::size_t i = 0; i < net.params.size(); ++i) {
            velocity[i] = opts.momentum * velocity[i] - opts.learning_rate * grad[i];
            net.params[i] += velocity[i];
        }
        const double val_loss =
            x_val.empty() ? train_loss
                          : mlp_loss_and_grad(net.shape, net.params, x_val, y_val, nullptr);
        if (val_loss < best_val) {
            best_val = val_loss;
            best_params = net.params;
            train_at_best = train_loss;
            report.best_epoch = epoch;
        }
        report.epochs_run = epoch + 1;
    }

    net.params = std::move(best_params);
    report.train_mse = train_at_best;
    report.val_mse = best_val;
    report.test_mse =
        x_test.empty() ? 0.0 : mlp_loss_and_grad(net.shape, net.params, x_test, y_test, nullptr);

    // Validation RMSE in threshold units, before rounding.
    if (!x_val.empty()) {
        double sq = 0.0;
        std::size_t entries = 0;
        for (std::size_t k = n_train; k < n_train + n_val; ++k) {
            const std::size_t r = order[k];
            const std::vector<double> pred = net.forward(dataset.features[r]);
            for (int j = 0; j < dataset.label_count; ++j) {
                const double d = pred[std::size_t(j)] - double(dataset.labels[r][std::size_t(j)]);
                sq += d * d;
                ++entries;
            }
        }
        report.val_rmse_units = std::sqrt(sq / double(entries));
    }
    return {std::move(net), report};
}

ComparisonTable evaluate_estimator(const Mlp& net, const std::vector<Features>& test_points,
                                   const ModelParams& base, const SolveOptions& solver,
                                   unsigned threads) {
    ComparisonTable table;
    table.rows.resize(test_points.size());

    parallel_for(
        test_points.size(),
        [&](std::size_t i) {
            ComparisonRow row;
            row.features = test_points[i];
            row.actual = solve(apply_features(base, test_points[i]), solver).policy.d;
            row.predicted = net.predict(test_points[i]);
            if (row.actual.size() != row.predicted.size())
                throw DomainError("network outputs do not match the model geometry");
            table.rows[i] = std::move(row);
        },
        threads);

    long abs_sum = 0;
    std::size_t entries = 0;
    for (const ComparisonRow& row : table.rows) {
        for (std::size_t j = 0; j < row.actual.size(); ++j) {
            const int err = std::abs(row.actual[j] - row.predicted[j]);
            abs_sum += err;
            table.max_abs_err = std::max(table.max_abs_err, err);
            ++entries;
        }
    }
    table.mae = entries ? double(abs_sum) / double(entries) : 0.0;
    return table;
}

} // namespace vmadmit
