#include "vmadmit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace vmadmit::reference {

namespace {

ValueGrid make_grid(std::initializer_list<std::initializer_list<double>> rows) {
    const int n1_size = int(rows.size());
    const int n2_size = int(rows.begin()->size());
    ValueGrid grid(n1_size, n2_size);
    int n1 = 0;
    for (const auto& row : rows) {
        int n2 = 0;
        for (double v : row) grid.at(n1, n2++) = v;
        ++n1;
    }
    return grid;
}

// Optimal values, reward 5, n2 = 0..23.
const ValueGrid kOptimalR5 = make_grid({
    {96.53, 96.38, 96.10, 95.69, 95.16, 94.51, 93.72, 92.80, 91.74, 90.55, 89.22, 87.63,
     85.73, 83.51, 80.95, 78.00, 74.66, 70.89, 66.68, 61.99, 56.81, 51.11, 44.88, 38.09},
    {96.50, 96.33, 96.03, 95.61, 95.07, 94.40, 93.51, 92.41, 91.11, 89.61, 87.90, 85.93,
     83.65, 81.03, 78.03, 74.62, 70.79, 66.50, 61.73, 56.46, 50.68, 44.34, 37.44, 29.94},
    {96.43, 96.24, 95.89, 95.38, 94.72, 93.89, 92.81, 91.49, 89.94, 88.14, 86.11, 83.78,
     81.11, 78.06, 74.61, 70.71, 66.35, 61.51, 56.17, 50.29, 43.87, 36.87, 29.26, 21.02},
});

// Optimal values, reward 1, n2 = 0..17.
const ValueGrid kOptimalR1 = make_grid({
    {16.53, 16.38, 16.10, 15.69, 15.16, 14.51, 13.72, 12.80, 11.75, 10.57, 9.26, 7.68,
     5.82, 3.64, 1.12, -1.76, -5.03, -8.72},
    {16.50, 16.33, 16.03, 15.61, 15.07, 14.40, 13.51, 12.43, 11.14, 9.65, 7.97, 6.03,
     3.79, 1.22, -1.72, -5.05, -8.80, -12.99},
    {16.43, 16.24, 15.89, 15.38, 14.72, 13.89, 12.83, 11.52, 9.99, 8.22, 6.22, 3.94,
     1.32, -1.66, -5.04, -8.85, -13.11, -17.85},
});

// Fixed-policy evaluation of the optimal thresholds, reward 5. Differs from
// the optimal grid in a handful of cells by 0.01.
const ValueGrid kPolicyR5 = make_grid({
    {96.53, 96.38, 96.10, 95.69, 95.16, 94.51, 93.72, 92.79, 91.74, 90.55, 89.22, 87.63,
     85.73, 83.51, 80.95, 78.00, 74.66, 70.89, 66.67, 61.98, 56.81, 51.11, 44.88, 38.09},
    {96.50, 96.33, 96.03, 95.61, 95.07, 94.40, 93.51, 92.41, 91.11, 89.61, 87.90, 85.93,
     83.65, 81.03, 78.03, 74.62, 70.79, 66.49, 61.73, 56.46, 50.67, 44.34, 37.44, 29.94},
    {96.43, 96.24, 95.89, 95.38, 94.72, 93.89, 92.81, 91.49, 89.94, 88.14, 86.11, 83.78,
     81.11, 78.06, 74.61, 70.71, 66.35, 61.51, 56.17, 50.29, 43.87, 36.86, 29.26, 21.02},
});

// Fixed-policy evaluation, reward 1: identical to the optimal grid at the
// printed precision.
const ValueGrid kPolicyR1 = kOptimalR1;

const std::vector<int> kThresholdsR5{18, 17, 16};
const std::vector<int> kThresholdsR1{6, 5, 4};
const std::vector<int> kPrintedThresholdsR1{11, 8, 7};

bool is_reward_five(double reward_R) {
    if (reward_R == 5.0) return true;
    if (reward_R == 1.0) return false;
    throw DomainError("reference results exist only for rewards 5 and 1");
}

} // namespace

ModelParams benchmark_params(double reward_R) {
    ModelParams params;
    params.lambda1 = 1.0;
    params.lambda2 = 2.0;
    params.mu1 = 6.0;
    params.mu2 = 8.0;
    params.capacity_C = 10;
    params.vms_per_pu_b = 5;
    params.alpha = 0.1;
    params.reward_R = reward_R;
    params.preempt_cost_r = 0.5;
    params.holding = HoldingCost::square_sum();
    return params;
}

const ValueGrid& optimal_grid(double reward_R) {
    return is_reward_five(reward_R) ? kOptimalR5 : kOptimalR1;
}

const std::vector<int>& optimal_thresholds(double reward_R) {
    return is_reward_five(reward_R) ? kThresholdsR5 : kThresholdsR1;
}

const std::vector<int>& published_thresholds(double reward_R) {
    return is_reward_five(reward_R) ? kThresholdsR5 : kPrintedThresholdsR1;
}

const ValueGrid& policy_value_grid(double reward_R) {
    return is_reward_five(reward_R) ? kPolicyR5 : kPolicyR1;
}

double max_abs_diff_on(const ValueGrid& computed, const ValueGrid& reference) {
    if (computed.n1_size < reference.n1_size || computed.n2_size < reference.n2_size)
        throw ShapeMismatch("computed grid smaller than the reference grid");
    double worst = 0.0;
    for (int n1 = 0; n1 < reference.n1_size; ++n1)
        for (int n2 = 0; n2 < reference.n2_size; ++n2)
            worst = std::max(worst, std::abs(computed.at(n1, n2) - reference.at(n1, n2)));
    return worst;
}

bool is_benchmark(const ModelParams& params) {
    if (params.reward_R != 5.0 && params.reward_R != 1.0) return false;
    const ModelParams expected = benchmark_params(params.reward_R);
    return params.lambda1 == expected.lambda1 && params.lambda2 == expected.lambda2 &&
           params.mu1 == expected.mu1 && params.mu2 == expected.mu2 &&
           params.capacity_C == expected.capacity_C &&
           params.vms_per_pu_b == expected.vms_per_pu_b && params.alpha == expected.alpha &&
           params.preempt_cost_r == expected.preempt_cost_r &&
           params.holding.kind == HoldingKind::SquareSum;
}

SweepSpec training_sweep() {
    SweepSpec sweep;
    sweep.base = benchmark_params(5.0);
    sweep.values_R = {1, 2, 3, 4, 5, 6, 7, 8};
    sweep.values_lambda2 = {1, 2, 3, 4, 5};
    sweep.values_mu2 = {8, 10, 12, 14, 16};
    return sweep;
}

std::vector<Features> estimator_test_points() {
    std::vector<Features> points;
    for (int i = 0; i < 8; ++i)
        points.push_back(Features{1.3 + i, 1.0, 1.0, 6.0, 8.0});
    return points;
}

} // namespace vmadmit::reference
