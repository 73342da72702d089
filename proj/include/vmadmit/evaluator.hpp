#pragma once

#include "vmadmit/grid.hpp"
#include "vmadmit/model.hpp"
#include "vmadmit/solver.hpp"

namespace vmadmit {

/**
 * Stopping rule for fixed-policy evaluation sweeps.
 *
 * FixedDiscount runs exactly k sweeps where (c/(alpha+c))^k first drops below
 * `value`: the classic "iterate until the residual discount is negligible"
 * rule, the default for table reproduction. SupNorm stops on the sup-norm
 * change like the solver and is the tighter choice for property tests.
 */
struct StopRule {
    enum class Kind { FixedDiscount, SupNorm };

    Kind kind = Kind::FixedDiscount;
    double value = 1e-6;
    long max_iter = 500000;

    static StopRule fixed_discount(double floor = 1e-6) {
        return StopRule{Kind::FixedDiscount, floor, 500000};
    }
    static StopRule sup_norm(double tol = 1e-9, long max_iter = 500000) {
        return StopRule{Kind::SupNorm, tol, max_iter};
    }
};

/// Value grid of a fixed (not necessarily optimal) policy; same shape and
/// layout as the solver's optimal grid.
using PolicyValueGrid = ValueGrid;

/**
 * Expected total discounted reward of an arbitrary threshold policy: the
 * optimality recursion with the admission transform pinned to the policy's
 * decision (admit iff n2 <= D(n1)), iterated from the zero grid.
 *
 * Every finite threshold must satisfy D(n1) < cap. Throws NotConverged under
 * the SupNorm rule when max_iter is exhausted.
 */
PolicyValueGrid evaluate_policy(const ModelParams& params, const ThresholdPolicy& policy,
                                int cap, StopRule stop = {});

/// Sup-norm distance between two equally shaped grids; throws ShapeMismatch.
double compare_grids(const ValueGrid& a, const ValueGrid& b);

} // namespace vmadmit
