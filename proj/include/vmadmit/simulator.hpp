#pragma once

#include <cstdint>

#include "vmadmit/model.hpp"
#include "vmadmit/solver.hpp"

namespace vmadmit {

/// Monte Carlo run configuration. A replication ends once the running
/// discount e^(-alpha t) falls below discount_floor, so the simulated horizon
/// is ln(1/floor)/alpha time units.
struct SimConfig {
    double discount_floor = 1e-6;
    long replications = 1;
    std::uint64_t seed = 1;
    State initial{};

    void validate() const;
};

/// Replication statistics for the total discounted reward estimate.
struct SimResult {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    long replications = 0;
    long long events_total = 0;
};

/// Outcome of applying one event to a state under a policy.
struct StepResult {
    State next;
    double lump = 0.0;     ///< undiscounted lump reward; caller applies e^(-alpha t)
    bool admitted = false; ///< arrivals only; false for departures and rejections
};

/**
 * Pure transition function of the pool:
 *  - PuArrival below N1 admits, preempting preempt_count(s) in-service type-2
 *    tasks back into the buffer (n2 unchanged) at lump -Cv*r; at N1 it is
 *    rejected.
 *  - SuArrival admits iff the policy does, at lump +R.
 *  - Departures free one task; freed VMs re-absorb buffered type-2 work
 *    implicitly through the service-count formula.
 *
 * Throws InfeasibleEvent for a departure with no matching task in service.
 */
StepResult step(const ModelParams& params, State s, Event event,
                const ThresholdPolicy& policy);

/**
 * Estimates the total expected discounted reward of a threshold policy by
 * simulating the competing-exponential event race: from state s the sojourn
 * is Exp(beta0(s)) and the next event is drawn proportionally to
 * (lambda1, lambda2, C1 mu1, C2 mu2). Holding cost is accrued in closed form
 * over each sojourn, so all variance comes from the event sequence.
 *
 * Replication i draws from a stream derived from (seed, i); results are
 * bit-identical for a fixed config, whatever the thread count (threads == 0
 * uses all cores).
 */
SimResult simulate(const ModelParams& params, const ThresholdPolicy& policy,
                   const SimConfig& config, unsigned threads = 0);

} // namespace vmadmit
