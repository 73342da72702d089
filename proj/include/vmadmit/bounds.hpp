#pragma once

#include <optional>
#include <vector>

#include "vmadmit/model.hpp"
#include "vmadmit/solver.hpp"

namespace vmadmit {

/// Analytic bracket on the optimal admission threshold.
struct BoundsResult {
    std::optional<int> lower;   ///< largest n2 with delta_n2 f(N1, n2) < alpha*R
    std::optional<int> upper;   ///< smallest n2 with delta_n2 f(0, n2) > (alpha + min(n2+1, C)*mu2)*R
    int scan_limit = 0;
    bool reject_all = false;    ///< upper bound 0: no type-2 arrival is ever worth admitting
};

/**
 * Lower bound on the optimal threshold: the largest n2 <= scan_limit with
 *
 *   delta_n2 f(N1, n2) < alpha * R,
 *
 * or nullopt when no n2 satisfies it (the bound then carries no information;
 * trivially every threshold is >= -1). Under the validated hypotheses the
 * satisfying set is a prefix of the integers, so a returned value equal to
 * scan_limit means the scan never saw a failure ("unbounded within scan").
 */
std::optional<int> lower_bound(const ModelParams& params, int scan_limit = 10000);

/**
 * Upper bound on the optimal threshold: the smallest n2 <= scan_limit with
 *
 *   delta_n2 f(0, n2) > (alpha + min(n2+1, C) * mu2) * R,
 *
 * or nullopt when none satisfies it within the scan. An upper bound of 0
 * means the optimal policy admits no type-2 task at all.
 */
std::optional<int> upper_bound(const ModelParams& params, int scan_limit = 10000);

/// Both bounds plus the reject-all flag.
BoundsResult threshold_bounds(const ModelParams& params, int scan_limit = 10000);

/// Automatic truncation cap: upper bound + 5, clamped to at least C + 5,
/// which keeps the admit region strictly interior. Throws ConfigError when
/// no finite upper bound exists within the scan (an explicit cap is then
/// required).
int auto_cap(const ModelParams& params, int scan_limit = 10000);

/// Outcome of checking a solved policy against the analytic bracket.
struct BracketReport {
    BoundsResult bounds;
    std::vector<int> thresholds;
    /// Rows n1 < N1 whose threshold fell below the lower bound. The bound is
    /// derived at row N1; misses elsewhere are reported, not fatal.
    std::vector<int> lower_misses;
    std::optional<int> margin_lower;  ///< min over rows of D(n1) - lower
    std::optional<int> margin_upper;  ///< min over rows of upper - D(n1)
    bool ok = false;
};

/**
 * Validity oracle for a converged policy: asserts D(N1) >= lower when the
 * lower bound exists, D(n1) <= upper for every row when the upper bound
 * exists, and that a reject-all bound forces a reject-all policy. Throws
 * BoundViolated on failure; a violation signals a solver bug or a holding
 * cost outside the hypotheses, not a recoverable condition.
 */
BracketReport bracket_check(const ModelParams& params, const ThresholdPolicy& policy,
                            int scan_limit = 10000);

} // namespace vmadmit
