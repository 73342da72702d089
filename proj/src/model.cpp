#include "vmadmit/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vmadmit {

double HoldingCost::rate(int n1, int n2) const {
    if (kind == HoldingKind::SquareSum) {
        return double(n1) * n1 + double(n2) * n2;
    }
    const double x = n1;
    const double y = n2;
    return coeff[0] * x * x + coeff[1] * y * y + coeff[2] * x * y +
           coeff[3] * x + coeff[4] * y + coeff[5];
}

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(name) + " must be positive and finite");
    };
    positive(lambda1, "lambda1");
    positive(lambda2, "lambda2");
    positive(mu1, "mu1");
    positive(mu2, "mu2");
    positive(alpha, "alpha");
    if (!(preempt_cost_r >= 0.0) || !std::isfinite(preempt_cost_r))
        throw ConfigError("preempt_cost_r must be nonnegative and finite");
    if (!std::isfinite(reward_R))
        throw ConfigError("reward_R must be finite");
    if (capacity_C <= 0) throw ConfigError("capacity_C must be a positive integer");
    if (vms_per_pu_b <= 0) throw ConfigError("vms_per_pu_b must be a positive integer");
    if (capacity_C % vms_per_pu_b != 0)
        throw ConfigError("capacity_C must be an integer multiple of vms_per_pu_b (got C=" +
                          std::to_string(capacity_C) + ", b=" + std::to_string(vms_per_pu_b) + ")");
}

int n1_max(const ModelParams& params) {
    if (params.vms_per_pu_b <= 0 || params.capacity_C <= 0 ||
        params.capacity_C % params.vms_per_pu_b != 0)
        throw ConfigError("capacity_C must be a positive integer multiple of vms_per_pu_b");
    return params.capacity_C / params.vms_per_pu_b;
}

void check_state(const ModelParams& params, State s) {
    const int n1_cap = n1_max(params);
    if (s.n1 < 0 || s.n1 > n1_cap)
        throw DomainError("n1 = " + std::to_string(s.n1) + " outside 0.." + std::to_string(n1_cap));
    if (s.n2 < 0)
        throw DomainError("n2 = " + std::to_string(s.n2) + " is negative");
}

int busy_pu_vms(const ModelParams& params, int n1) {
    check_state(params, State{n1, 0});
    return params.vms_per_pu_b * n1;
}

int busy_su_vms(const ModelParams& params, State s) {
    check_state(params, s);
    return std::min(params.capacity_C - params.vms_per_pu_b * s.n1, s.n2);
}

int preempt_count(const ModelParams& params, State s) {
    check_state(params, s);
    if (s.n1 == n1_max(params)) return 0;
    const int c1 = params.vms_per_pu_b * s.n1;
    const int c2 = std::min(params.capacity_C - c1, s.n2);
    return std::max(c1 + c2 + params.vms_per_pu_b - params.capacity_C, 0);
}

double total_rate(const ModelParams& params, State s) {
    check_state(params, s);
    const int c1 = params.vms_per_pu_b * s.n1;
    const int c2 = std::min(params.capacity_C - c1, s.n2);
    return params.lambda1 + params.lambda2 + c1 * params.mu1 + c2 * params.mu2;
}

double uniformization_constant(const ModelParams& params) {
    return params.lambda1 + params.lambda2 +
           params.capacity_C * std::max(params.mu1, params.mu2);
}

double holding_rate(const HoldingCost& holding, State s) {
    return holding.rate(s.n1, s.n2);
}

ValidationReport validate_hypotheses(const HoldingCost& holding, int n1_max, int n2_cap) {
    if (n2_cap < 2) throw DomainError("validate_hypotheses requires n2_cap >= 2");

    ValidationReport report;
    report.convex_increasing_n2 = true;
    report.delta_nondecreasing_n1 = true;

    for (int n1 = 0; n1 <= n1_max && report.convex_increasing_n2; ++n1) {
        for (int n2 = 0; n2 <= n2_cap; ++n2) {
            const bool monotone_ok = n2 > n2_cap - 1 || holding.delta_n2(n1, n2) >= 0.0;
            const bool convex_ok = n2 > n2_cap - 2 || holding.delta2_n2(n1, n2) >= 0.0;
            if (!monotone_ok || !convex_ok) {
                report.convex_increasing_n2 = false;
                report.first_violation_a = State{n1, n2};
                break;
            }
        }
    }
    for (int n1 = 0; n1 + 1 <= n1_max && report.delta_nondecreasing_n1; ++n1) {
        for (int n2 = 0; n2 <= n2_cap - 1; ++n2) {
            if (holding.delta_n2(n1 + 1, n2) < holding.delta_n2(n1, n2)) {
                report.delta_nondecreasing_n1 = false;
                report.first_violation_b = State{n1, n2};
                break;
            }
        }
    }
    return report;
}

} // namespace vmadmit
