#pragma once

#include <array>
#include <optional>

#include "vmadmit/errors.hpp"

namespace vmadmit {

/// Functional form of the holding-cost rate f(n1, n2).
enum class HoldingKind {
    SquareSum,  ///< f(x, y) = x^2 + y^2
    Polynomial  ///< f(x, y) = c20 x^2 + c02 y^2 + c11 xy + c10 x + c01 y + c00
};

/**
 * State-dependent holding-cost rate paid per unit time while the pool sits
 * in state (n1, n2). Restricted to a quadratic polynomial family so that
 * configurations stay serializable and the structural hypotheses of the
 * threshold theory can be checked by finite-difference scan.
 */
struct HoldingCost {
    HoldingKind kind = HoldingKind::SquareSum;
    /// Polynomial coefficients in the order c20, c02, c11, c10, c01, c00.
    std::array<double, 6> coeff{};

    static HoldingCost square_sum() { return HoldingCost{}; }
    static HoldingCost polynomial(double c20, double c02, double c11,
                                  double c10, double c01, double c00) {
        return HoldingCost{HoldingKind::Polynomial, {c20, c02, c11, c10, c01, c00}};
    }

    double rate(int n1, int n2) const;

    /// Forward difference in n2: f(n1, n2+1) - f(n1, n2).
    double delta_n2(int n1, int n2) const { return rate(n1, n2 + 1) - rate(n1, n2); }
    /// Second difference in n2.
    double delta2_n2(int n1, int n2) const { return delta_n2(n1, n2 + 1) - delta_n2(n1, n2); }
};

/// Pool occupancy: n1 type-1 (online) tasks in service, n2 type-2 (batch)
/// tasks in service plus buffer.
struct State {
    int n1 = 0;
    int n2 = 0;

    bool operator==(const State&) const = default;
};

/// Transition events of the pool process.
enum class Event {
    PuDeparture,  ///< D1: a type-1 task completes service
    SuDeparture,  ///< D2: a type-2 task completes service
    PuArrival,    ///< A1: a type-1 task arrives
    SuArrival     ///< A2: a type-2 task arrives
};

/// Decisions attached to arrival events (departures only continue).
enum class Action { Continue, Admit, Reject };

/**
 * All given parameters of the VM pool model.
 *
 * Type-1 (online) tasks arrive at rate lambda1 and each occupy vms_per_pu_b
 * VMs; they are always admitted while capacity remains and preempt in-service
 * type-2 work when necessary. Type-2 (batch) tasks arrive at rate lambda2,
 * occupy one VM each, and are the subject of admission control: admitting one
 * earns reward_R, each preemption of an in-service type-2 task costs
 * preempt_cost_r, and holding the pool in state (n1, n2) costs
 * holding.rate(n1, n2) per unit time, all discounted at rate alpha.
 */
struct ModelParams {
    double lambda1 = 0.0;     ///< type-1 arrival rate
    double lambda2 = 0.0;     ///< type-2 arrival rate
    double mu1 = 0.0;         ///< per-VM service rate of type-1 tasks
    double mu2 = 0.0;         ///< per-VM service rate of type-2 tasks
    int capacity_C = 0;       ///< total number of VMs
    int vms_per_pu_b = 0;     ///< VMs consumed by one type-1 task
    double alpha = 0.0;       ///< continuous-time discount rate
    double reward_R = 0.0;    ///< lump reward for admitting a type-2 task
    double preempt_cost_r = 0.0;  ///< cost per preempted in-service type-2 task
    HoldingCost holding;

    /// Throws ConfigError unless all rate/sign/divisibility invariants hold.
    void validate() const;
};

/// Largest number of type-1 tasks the pool can hold: N1 = C / b.
/// Throws ConfigError when capacity_C is not a multiple of vms_per_pu_b.
int n1_max(const ModelParams& params);

/// Throws DomainError unless 0 <= s.n1 <= N1 and s.n2 >= 0.
void check_state(const ModelParams& params, State s);

/// VMs occupied by type-1 tasks: C1(n1) = b * n1.
int busy_pu_vms(const ModelParams& params, int n1);

/// VMs occupied by type-2 tasks: C2(n1, n2) = min(C - C1(n1), n2).
/// n2 - C2 is the buffer occupancy.
int busy_su_vms(const ModelParams& params, State s);

/// Number of in-service type-2 tasks a newly admitted type-1 task would
/// preempt: max(C1 + C2 + b - C, 0) for n1 < N1, and 0 at n1 = N1.
int preempt_count(const ModelParams& params, State s);

/// Total event rate out of state s:
/// beta0(s) = lambda1 + lambda2 + C1*mu1 + C2*mu2.
double total_rate(const ModelParams& params, State s);

/// Uniformization constant c = lambda1 + lambda2 + C * max(mu1, mu2);
/// dominates total_rate(s) for every state.
double uniformization_constant(const ModelParams& params);

/// Holding-cost rate f(n1, n2) at state s.
double holding_rate(const HoldingCost& holding, State s);

/**
 * Result of scanning a holding cost for the structural hypotheses of the
 * threshold theory over the finite grid 0..n1_max x 0..n2_cap:
 *
 *  (a) for each n1, f is nondecreasing and convex in n2;
 *  (b) the forward difference in n2 is nondecreasing in n1.
 *
 * (a) guarantees the optimal policy is a control limit; (b) additionally
 * yields the analytic threshold bounds and threshold monotonicity in n1.
 */
struct ValidationReport {
    bool convex_increasing_n2 = false;           ///< condition (a)
    bool delta_nondecreasing_n1 = false;         ///< condition (b)
    std::optional<State> first_violation_a;
    std::optional<State> first_violation_b;

    bool all_passed() const { return convex_increasing_n2 && delta_nondecreasing_n1; }
};

/// Finite-difference scan of both hypotheses; never throws, failures are
/// carried in the report. Requires n2_cap >= 2.
ValidationReport validate_hypotheses(const HoldingCost& holding, int n1_max, int n2_cap);

} // namespace vmadmit
