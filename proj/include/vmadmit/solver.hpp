#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vmadmit/grid.hpp"
#include "vmadmit/model.hpp"

namespace vmadmit {

/// Treatment of the truncation edge n2 = cap during sweeps. Type-2 arrivals
/// at the edge are forced to reject; legitimate whenever the cap lies above
/// the analytic upper bound on the optimal threshold.
enum class BoundaryRule { ForcedRejectAtCap };

/// Value and decision of the type-2 admission comparison at one cell.
struct AdmitDecision {
    double value = 0.0;
    bool admit = false;
};

/// Admission transform for a type-2 arrival:
/// value = max(x_now, reward + x_next), with ties resolved as admit so that
/// extracted thresholds are deterministic.
inline AdmitDecision admit_transform(double x_now, double x_next, double reward) {
    const double admit_value = reward + x_next;
    if (admit_value >= x_now) return {admit_value, true};
    return {x_now, false};
}

/// Value of a type-1 arrival at state s: preemption lump plus the value of
/// the post-admission state for n1 < N1, the unchanged value at n1 = N1
/// (type-1 arrivals are rejected only when the pool is full of them).
double pu_arrival_value(const ValueGrid& grid, const ModelParams& params, State s);

/**
 * Control-limit rule for type-2 admission: admit at (n1, n2) iff
 * n2 <= d[n1]. A row with d[n1] == kRejectAll never admits.
 */
struct ThresholdPolicy {
    static constexpr int kRejectAll = -1;

    std::vector<int> d;

    int rows() const { return int(d.size()); }

    bool admits(int n1, int n2) const {
        return d[std::size_t(n1)] != kRejectAll && n2 <= d[std::size_t(n1)];
    }

    /// Largest finite threshold across rows, or kRejectAll if every row rejects.
    int max_threshold() const {
        int worst = kRejectAll;
        for (int t : d) worst = t > worst ? t : worst;
        return worst;
    }

    bool operator==(const ThresholdPolicy&) const = default;
};

/**
 * One synchronous (Jacobi) sweep of the uniformized optimality recursion over
 * the whole grid:
 *
 *   X'(n1,n2) = [ -f(n1,n2) + lambda1 * vA1 + lambda2 * vA2
 *                 + C1 mu1 * X(n1-1,n2) + C2 mu2 * X(n1,n2-1)
 *                 + (c - beta0) * X(n1,n2) ] / (alpha + c)
 *
 * where vA1 = pu_arrival_value and vA2 = admit_transform against X(n1,n2+1),
 * forced to reject at n2 = cap. Terms with zero coefficient (C1 = 0 at
 * n1 = 0, C2 = 0 at n2 = 0) drop out. Reads only grid_in; cells may be
 * computed in any order.
 */
ValueGrid bellman_sweep(const ValueGrid& grid_in, const ModelParams& params,
                        BoundaryRule boundary = BoundaryRule::ForcedRejectAtCap);

/**
 * Reads the control-limit policy off a converged grid: per row, the largest
 * n2 in 0..cap-1 whose admission comparison admits, or kRejectAll when even
 * n2 = 0 rejects. Throws NonThresholdStructure if the admit set of any row
 * is not a contiguous prefix.
 */
ThresholdPolicy extract_policy(const ValueGrid& grid, const ModelParams& params);

struct SolveOptions {
    /// Truncation cap for n2; nullopt picks the automatic cap (analytic
    /// upper bound plus margin, see bounds.hpp).
    std::optional<int> cap;
    double tol = 1e-9;       ///< sup-norm change between consecutive iterates
    long max_iter = 500000;
    /// Throw CapTooSmall when the admit region touches n2 = cap-1. Disable
    /// only for degenerate economies where full-admit is the expected answer.
    bool enforce_cap_margin = true;
    /// Optional sink for the per-iteration residual history.
    std::vector<double>* residual_log = nullptr;
};

struct SolveReport {
    ValueGrid grid;
    ThresholdPolicy policy;
    long iterations = 0;
    double residual = 0.0;   ///< final sup-norm change
    int cap = 0;
    ValidationReport hypothesis_report;
    std::vector<std::string> warnings;
};

/**
 * Value iteration from the zero grid until the sup-norm change drops below
 * opts.tol, then policy extraction and structure verification.
 *
 * Throws NotConverged when max_iter is exhausted, NonThresholdStructure when
 * some row's admit set is not a prefix, and CapTooSmall when the admit region
 * touches the truncation edge (unless disabled in opts). A holding cost that
 * fails its hypothesis scan is not an error: the failure is recorded as a
 * warning and the structure checks remain the arbiter.
 */
SolveReport solve(const ModelParams& params, const SolveOptions& opts = {});

namespace detail {

/// Sweep kernel shared by the solver and the fixed-policy evaluator.
/// fixed == nullptr applies the optimal admission transform; otherwise the
/// policy's decision replaces it. Writes into `out` (resized as needed).
void sweep_into(const ValueGrid& grid_in, const ModelParams& params,
                const ThresholdPolicy* fixed, BoundaryRule boundary, ValueGrid& out);

} // namespace detail

} // namespace vmadmit
