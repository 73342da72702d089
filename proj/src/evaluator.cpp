#include "vmadmit/evaluator.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace vmadmit {

PolicyValueGrid evaluate_policy(const ModelParams& params, const ThresholdPolicy& policy,
                                int cap, StopRule stop) {
    params.validate();
    const int n1_top = n1_max(params);
    if (policy.rows() != n1_top + 1) throw DomainError("policy rows do not match model");
    if (cap < 2) throw ConfigError("cap must be at least 2");
    for (int t : policy.d)
        if (t >= cap)
            throw DomainError("policy threshold " + std::to_string(t) +
                              " is not below cap = " + std::to_string(cap));

    ValueGrid current(n1_top + 1, cap + 1);
    ValueGrid next(n1_top + 1, cap + 1);

    if (stop.kind == StopRule::Kind::FixedDiscount) {
        // Smallest k with (c/(alpha+c))^k < value.
        const double c = uniformization_constant(params);
        const double modulus = c / (params.alpha + c);
        const long sweeps = long(std::floor(std::log(stop.value) / std::log(modulus))) + 1;
        for (long k = 0; k < sweeps; ++k) {
            detail::sweep_into(current, params, &policy, BoundaryRule::ForcedRejectAtCap, next);
            std::swap(current, next);
        }
        return current;
    }

    double residual = std::numeric_limits<double>::infinity();
    for (long k = 0; k < stop.max_iter; ++k) {
        detail::sweep_into(current, params, &policy, BoundaryRule::ForcedRejectAtCap, next);
        residual = sup_norm_diff(current, next);
        std::swap(current, next);
        if (residual < stop.value) return current;
    }
    throw NotConverged("policy evaluation did not reach tol = " + std::to_string(stop.value),
                       residual);
}

double compare_grids(const ValueGrid& a, const ValueGrid& b) {
    return sup_norm_diff(a, b);
}

} // namespace vmadmit
