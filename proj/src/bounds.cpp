#include "vmadmit/bounds.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace vmadmit {

std::optional<int> lower_bound(const ModelParams& params, int scan_limit) {
    if (scan_limit < 1) throw DomainError("scan_limit must be >= 1");
    const int n1_top = n1_max(params);
    const double target = params.alpha * params.reward_R;

    std::optional<int> best;
    for (int n2 = 0; n2 <= scan_limit; ++n2) {
        if (params.holding.delta_n2(n1_top, n2) < target) best = n2;
    }
    return best;
}

std::optional<int> upper_bound(const ModelParams& params, int scan_limit) {
    if (scan_limit < 1) throw DomainError("scan_limit must be >= 1");
    for (int n2 = 0; n2 <= scan_limit; ++n2) {
        const double service = std::min(n2 + 1, params.capacity_C) * params.mu2;
        if (params.holding.delta_n2(0, n2) > (params.alpha + service) * params.reward_R)
            return n2;
    }
    return std::nullopt;
}

BoundsResult threshold_bounds(const ModelParams& params, int scan_limit) {
    BoundsResult result;
    result.scan_limit = scan_limit;
    result.lower = lower_bound(params, scan_limit);
    result.upper = upper_bound(params, scan_limit);
    result.reject_all = result.upper.has_value() && *result.upper == 0;
    return result;
}

int auto_cap(const ModelParams& params, int scan_limit) {
    const auto upper = upper_bound(params, scan_limit);
    if (!upper)
        throw ConfigError("no finite threshold upper bound within scan_limit = " +
                          std::to_string(scan_limit) +
                          "; the truncation cap must be given explicitly");
    return std::max(*upper + 5, params.capacity_C + 5);
}

BracketReport bracket_check(const ModelParams& params, const ThresholdPolicy& policy,
                            int scan_limit) {
    const int n1_top = n1_max(params);
    if (policy.rows() != n1_top + 1) throw DomainError("policy rows do not match model");

    BracketReport report;
    report.bounds = threshold_bounds(params, scan_limit);
    report.thresholds = policy.d;

    if (report.bounds.reject_all) {
        for (int n1 = 0; n1 <= n1_top; ++n1)
            if (policy.d[std::size_t(n1)] != ThresholdPolicy::kRejectAll)
                throw BoundViolated("upper bound 0 requires a reject-all policy, but row n1 = " +
                                    std::to_string(n1) + " admits up to n2 = " +
                                    std::to_string(policy.d[std::size_t(n1)]));
    }

    if (report.bounds.upper) {
        int margin = std::numeric_limits<int>::max();
        for (int n1 = 0; n1 <= n1_top; ++n1) {
            const int d = policy.d[std::size_t(n1)];
            if (d > *report.bounds.upper)
                throw BoundViolated("threshold D(" + std::to_string(n1) + ") = " +
                                    std::to_string(d) + " exceeds upper bound " +
                                    std::to_string(*report.bounds.upper));
            margin = std::min(margin, *report.bounds.upper - d);
        }
        report.margin_upper = margin;
    }

    // The lower bound is derived at the fully loaded row N1; it is asserted
    // there and only reported for the other rows.
    if (report.bounds.lower) {
        const int low = *report.bounds.lower;
        if (policy.d[std::size_t(n1_top)] < low)
            throw BoundViolated("threshold D(" + std::to_string(n1_top) + ") = " +
                                std::to_string(policy.d[std::size_t(n1_top)]) +
                                " falls below lower bound " + std::to_string(low));
        int margin = std::numeric_limits<int>::max();
        for (int n1 = 0; n1 <= n1_top; ++n1) {
            const int d = policy.d[std::size_t(n1)];
            if (d < low) report.lower_misses.push_back(n1);
            margin = std::min(margin, d - low);
        }
        report.margin_lower = margin;
    }

    report.ok = true;
    return report;
}

} // namespace vmadmit
