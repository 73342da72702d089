#include "vmadmit/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

#include "vmadmit/parallel.hpp"
#include "vmadmit/rng.hpp"

namespace vmadmit {

void SimConfig::validate() const {
    if (!(discount_floor > 0.0) || !(discount_floor < 1.0))
        throw ConfigError("discount_floor must lie in (0, 1)");
    if (replications < 1) throw ConfigError("replications must be >= 1");
}

StepResult step(const ModelParams& params, State s, Event event,
                const ThresholdPolicy& policy) {
    check_state(params, s);
    const int n1_top = n1_max(params);

    switch (event) {
    case Event::PuArrival:
        if (s.n1 < n1_top) {
            const double lump = -double(preempt_count(params, s)) * params.preempt_cost_r;
            return {State{s.n1 + 1, s.n2}, lump, true};
        }
        return {s, 0.0, false};
    case Event::SuArrival:
        if (policy.admits(s.n1, s.n2))
            return {State{s.n1, s.n2 + 1}, params.reward_R, true};
        return {s, 0.0, false};
    case Event::PuDeparture:
        if (s.n1 == 0) throw InfeasibleEvent("type-1 departure with no type-1 task in service");
        return {State{s.n1 - 1, s.n2}, 0.0, false};
    case Event::SuDeparture:
        if (busy_su_vms(params, s) == 0)
            throw InfeasibleEvent("type-2 departure with no type-2 task in service");
        return {State{s.n1, s.n2 - 1}, 0.0, false};
    }
    throw DomainError("unknown event");
}

namespace {

struct Replication {
    double total = 0.0;
    long long events = 0;
};

// One replication of the event race. The running discount d = e^(-alpha t)
// is advanced multiplicatively: a sojourn Exp(beta0) shrinks it by
// u^(alpha/beta0) with u uniform in (0, 1], so no explicit clock is needed.
Replication run_one(const ModelParams& params, const ThresholdPolicy& policy,
                    const SimConfig& config, std::uint64_t stream, int n1_top) {
    Xoshiro256pp rng(config.seed, stream);

    Replication rep;
    State s = config.initial;
    double discount = 1.0;
    const double inv_alpha = 1.0 / params.alpha;
    const double lambda_total = params.lambda1 + params.lambda2;

    while (discount >= config.discount_floor) {
        const int c1 = params.vms_per_pu_b * s.n1;
        const int c2 = std::min(params.capacity_C - c1, s.n2);
        const double rate_d1 = c1 * params.mu1;
        const double rate_d2 = c2 * params.mu2;
        const double beta0 = lambda_total + rate_d1 + rate_d2;

        const double next_discount = discount * std::pow(rng.uniform_open01(), params.alpha / beta0);

        // Holding cost over the sojourn, integrated exactly.
        rep.total -= params.holding.rate(s.n1, s.n2) * (discount - next_discount) * inv_alpha;

        // Event draw in fixed order A1, A2, D1, D2.
        const double pick = rng.uniform01() * beta0;
        if (pick < params.lambda1) {
            if (s.n1 < n1_top) {
                const int preempted = std::max(c1 + c2 + params.vms_per_pu_b - params.capacity_C, 0);
                rep.total -= preempted * params.preempt_cost_r * next_discount;
                s.n1 += 1;
            }
        } else if (pick < lambda_total) {
            if (policy.admits(s.n1, s.n2)) {
                rep.total += params.reward_R * next_discount;
                s.n2 += 1;
            }
        } else if (pick < lambda_total + rate_d1) {
            s.n1 -= 1;
        } else {
            s.n2 -= 1;
        }
        assert(s.n1 >= 0 && s.n1 <= n1_top && s.n2 >= 0);

        discount = next_discount;
        rep.events += 1;
    }
    return rep;
}

} // namespace

SimResult simulate(const ModelParams& params, const ThresholdPolicy& policy,
                   const SimConfig& config, unsigned threads) {
    params.validate();
    config.validate();
    check_state(params, config.initial);
    const int n1_top = n1_max(params);
    if (policy.rows() != n1_top + 1) throw DomainError("policy rows do not match model");

    std::vector<double> totals(std::size_t(config.replications));
    std::vector<long long> event_counts(std::size_t(config.replications));
    parallel_for(
        std::size_t(config.replications),
        [&](std::size_t i) {
            const Replication rep = run_one(params, policy, config, std::uint64_t(i), n1_top);
            totals[i] = rep.total;
            event_counts[i] = rep.events;
        },
        threads);

    SimResult result;
    result.replications = config.replications;
    for (long long n : event_counts) result.events_total += n;

    const double n = double(config.replications);
    result.mean = pairwise_sum(totals) / n;

    if (config.replications > 1) {
        std::vector<double> sq(totals.size());
        for (std::size_t i = 0; i < totals.size(); ++i) {
            const double d = totals[i] - result.mean;
            sq[i] = d * d;
        }
        const double variance = pairwise_sum(sq) / (n - 1.0);
        result.std_error = std::sqrt(variance / n);
    }
    // Normal-approximation 95% interval.
    const double half_width = 1.959963984540054 * result.std_error;
    result.ci95_low = result.mean - half_width;
    result.ci95_high = result.mean + half_width;
    return result;
}

} // namespace vmadmit
