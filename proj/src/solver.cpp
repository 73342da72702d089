#include "vmadmit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "vmadmit/bounds.hpp"

namespace vmadmit {

double pu_arrival_value(const ValueGrid& grid, const ModelParams& params, State s) {
    const int n1_top = n1_max(params);
    if (grid.n1_size != n1_top + 1)
        throw DomainError("grid has " + std::to_string(grid.n1_size) +
                          " rows, model needs " + std::to_string(n1_top + 1));
    if (s.n1 < 0 || s.n1 > n1_top || s.n2 < 0 || s.n2 > grid.cap())
        throw DomainError("state (" + std::to_string(s.n1) + ", " + std::to_string(s.n2) +
                          ") outside grid");
    if (s.n1 == n1_top) return grid.at(s.n1, s.n2);
    return -double(preempt_count(params, s)) * params.preempt_cost_r + grid.at(s.n1 + 1, s.n2);
}

namespace detail {

void sweep_into(const ValueGrid& grid_in, const ModelParams& params,
                const ThresholdPolicy* fixed, BoundaryRule, ValueGrid& out) {
    const int n1_top = n1_max(params);
    if (grid_in.n1_size != n1_top + 1)
        throw DomainError("grid rows do not match model (n1_max = " + std::to_string(n1_top) + ")");
    if (fixed && fixed->rows() != grid_in.n1_size)
        throw DomainError("policy rows do not match grid");
    if (!out.same_shape(grid_in)) out = ValueGrid(grid_in.n1_size, grid_in.n2_size);

    const int cap = grid_in.cap();
    const int b = params.vms_per_pu_b;
    const double c = uniformization_constant(params);
    const double inv_alpha_c = 1.0 / (params.alpha + c);
    const double lambda_total = params.lambda1 + params.lambda2;

    for (int n1 = 0; n1 <= n1_top; ++n1) {
        const int c1 = b * n1;
        const double c1mu1 = c1 * params.mu1;
        const int su_slots = params.capacity_C - c1;
        const int row_threshold = fixed ? fixed->d[std::size_t(n1)] : 0;

        for (int n2 = 0; n2 <= cap; ++n2) {
            const int c2 = n2 < su_slots ? n2 : su_slots;
            const double c2mu2 = c2 * params.mu2;
            const double beta0 = lambda_total + c1mu1 + c2mu2;
            const double x_here = grid_in.at(n1, n2);

            // Type-1 arrival: admitted below N1 at the preemption lump.
            double v_a1;
            if (n1 < n1_top) {
                const int preempted = std::max(c1 + c2 + b - params.capacity_C, 0);
                v_a1 = -preempted * params.preempt_cost_r + grid_in.at(n1 + 1, n2);
            } else {
                v_a1 = x_here;
            }

            // Type-2 arrival: optimal transform or the fixed policy's choice,
            // forced to reject on the truncation edge.
            double v_a2;
            if (n2 == cap) {
                v_a2 = x_here;
            } else if (fixed) {
                v_a2 = (row_threshold != ThresholdPolicy::kRejectAll && n2 <= row_threshold)
                           ? params.reward_R + grid_in.at(n1, n2 + 1)
                           : x_here;
            } else {
                v_a2 = std::max(x_here, params.reward_R + grid_in.at(n1, n2 + 1));
            }

            double acc = -params.holding.rate(n1, n2) + params.lambda1 * v_a1 +
                         params.lambda2 * v_a2 + (c - beta0) * x_here;
            if (n1 > 0) acc += c1mu1 * grid_in.at(n1 - 1, n2);
            if (n2 > 0) acc += c2mu2 * grid_in.at(n1, n2 - 1);
            out.at(n1, n2) = acc * inv_alpha_c;
        }
    }
}

} // namespace detail

ValueGrid bellman_sweep(const ValueGrid& grid_in, const ModelParams& params,
                        BoundaryRule boundary) {
    ValueGrid out;
    detail::sweep_into(grid_in, params, nullptr, boundary, out);
    return out;
}

ThresholdPolicy extract_policy(const ValueGrid& grid, const ModelParams& params) {
    const int n1_top = n1_max(params);
    if (grid.n1_size != n1_top + 1) throw DomainError("grid rows do not match model");

    ThresholdPolicy policy;
    policy.d.resize(std::size_t(n1_top) + 1, ThresholdPolicy::kRejectAll);

    const int cap = grid.cap();
    for (int n1 = 0; n1 <= n1_top; ++n1) {
        int last_admit = ThresholdPolicy::kRejectAll;
        int first_reject = cap;  // first rejecting n2, cap if none
        for (int n2 = 0; n2 < cap; ++n2) {
            const bool admit =
                admit_transform(grid.at(n1, n2), grid.at(n1, n2 + 1), params.reward_R).admit;
            if (admit) {
                last_admit = n2;
            } else if (first_reject == cap) {
                first_reject = n2;
            }
        }
        if (last_admit > first_reject)
            throw NonThresholdStructure(
                "row n1 = " + std::to_string(n1) + " admits at n2 = " + std::to_string(last_admit) +
                " after rejecting at n2 = " + std::to_string(first_reject));
        policy.d[std::size_t(n1)] = last_admit;
    }
    return policy;
}

SolveReport solve(const ModelParams& params, const SolveOptions& opts) {
    params.validate();

    SolveReport report;
    report.cap = opts.cap ? *opts.cap : auto_cap(params);
    if (report.cap < 2) throw ConfigError("cap must be at least 2");

    const int n1_top = n1_max(params);
    report.hypothesis_report = validate_hypotheses(params.holding, n1_top, report.cap);
    if (!report.hypothesis_report.all_passed())
        report.warnings.push_back(
            "holding cost fails the control-limit hypotheses; threshold structure "
            "is verified on the converged grid but not guaranteed");

    ValueGrid current(n1_top + 1, report.cap + 1);
    ValueGrid next(n1_top + 1, report.cap + 1);

    double residual = std::numeric_limits<double>::infinity();
    long iter = 0;
    while (iter < opts.max_iter) {
        detail::sweep_into(current, params, nullptr, BoundaryRule::ForcedRejectAtCap, next);
        ++iter;
        residual = sup_norm_diff(current, next);
        if (opts.residual_log) opts.residual_log->push_back(residual);
        std::swap(current, next);
        if (residual < opts.tol) break;
    }
    report.iterations = iter;
    report.residual = residual;
    if (residual >= opts.tol)
        throw NotConverged("value iteration did not reach tol = " + std::to_string(opts.tol) +
                               " in " + std::to_string(iter) + " iterations",
                           residual);

    report.grid = std::move(current);
    report.policy = extract_policy(report.grid, params);

    if (opts.enforce_cap_margin) {
        for (int n1 = 0; n1 <= n1_top; ++n1) {
            if (report.policy.d[std::size_t(n1)] >= report.cap - 1)
                throw CapTooSmall("admit region of row n1 = " + std::to_string(n1) +
                                  " touches the truncation edge (threshold " +
                                  std::to_string(report.policy.d[std::size_t(n1)]) + ", cap " +
                                  std::to_string(report.cap) + ")");
        }
    }
    return report;
}

} // namespace vmadmit
