#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "vmadmit/bounds.hpp"
#include "vmadmit/reference.hpp"
#include "vmadmit/rng.hpp"
#include "vmadmit/solver.hpp"

using namespace vmadmit;

namespace {

ModelParams zero_economy() {
    ModelParams p = reference::benchmark_params(5.0);
    p.reward_R = 0.0;
    p.preempt_cost_r = 0.0;
    p.holding = HoldingCost::polynomial(0, 0, 0, 0, 0, 0);
    return p;
}

// Random integer concave sequence: nonincreasing integer differences.
std::vector<double> random_concave(Xoshiro256pp& rng, int length) {
    std::vector<int> diffs(std::size_t(length) - 1);
    for (int& d : diffs) d = int(rng.below(21)) - 10;
    std::sort(diffs.begin(), diffs.end(), std::greater<int>());
    std::vector<double> h(diffs.size() + 1);
    h[0] = double(int(rng.below(41)) - 20);
    for (int i = 1; i < length; ++i) h[std::size_t(i)] = h[std::size_t(i) - 1] + diffs[std::size_t(i) - 1];
    return h;
}

} // namespace

TEST_CASE("admit transform picks the larger branch, ties admit") {
    auto d = admit_transform(10.0, 10.0, 0.0);
    CHECK(d.value == doctest::Approx(10.0));
    CHECK(d.admit);  // tie resolves admit

    d = admit_transform(96.53, 96.38, 5.0);
    CHECK(d.value == doctest::Approx(101.38));
    CHECK(d.admit);

    d = admit_transform(5.82, 3.64, 1.0);
    CHECK(d.value == doctest::Approx(5.82));
    CHECK_FALSE(d.admit);
}

TEST_CASE("type-1 arrival value charges the preemption lump") {
    const ModelParams p = reference::benchmark_params(5.0);
    ValueGrid grid(3, 11);
    for (int n1 = 0; n1 < 3; ++n1)
        for (int n2 = 0; n2 <= 10; ++n2) grid.at(n1, n2) = 100.0 * n1 + n2;

    // Full pool of type-1: the arrival is rejected, value unchanged.
    CHECK(pu_arrival_value(grid, p, {2, 4}) == doctest::Approx(grid.at(2, 4)));
    // Cv(1,7) = 5 at cost 0.5 each.
    CHECK(pu_arrival_value(grid, p, {1, 7}) == doctest::Approx(-2.5 + grid.at(2, 7)));
    // Empty pool: nothing to preempt.
    CHECK(pu_arrival_value(grid, p, {0, 0}) == doctest::Approx(grid.at(1, 0)));
    CHECK_THROWS_AS(pu_arrival_value(grid, p, {0, 11}), DomainError);
}

TEST_CASE("first sweep from the zero grid matches hand evaluation") {
    const ModelParams p = reference::benchmark_params(5.0);
    const double c = uniformization_constant(p);     // 83
    const double denom = p.alpha + c;                 // 83.1
    const ValueGrid zero(3, 25);
    const ValueGrid first = bellman_sweep(zero, p);

    // (0,0): f=0, no preemption, admit pays R; only lambda2*R survives.
    CHECK(first.at(0, 0) == doctest::Approx(p.lambda2 * p.reward_R / denom));
    // (0,7): f=49, Cv=2 so the type-1 term is 1*(-2*0.5) = -1.
    CHECK(first.at(0, 7) == doctest::Approx((-49.0 - 1.0 + 10.0) / denom));
    // Full type-1 row: X1(N1, n2) = (-f + lambda2 R) / (alpha + c).
    for (int n2 = 0; n2 <= 10; ++n2) {
        const double f = 4.0 + double(n2) * n2;
        CHECK(first.at(2, n2) == doctest::Approx((-f + p.lambda2 * p.reward_R) / denom));
    }
}

TEST_CASE("zero economy: the zero grid is a fixed point and full-admit is extracted") {
    const ModelParams p = zero_economy();
    const ValueGrid zero(3, 21);
    const ValueGrid swept = bellman_sweep(zero, p);
    CHECK(sup_norm_diff(zero, swept) == doctest::Approx(0.0));

    SolveOptions opts;
    opts.cap = 20;
    opts.enforce_cap_margin = false;  // full-admit is the expected degenerate answer
    const SolveReport report = solve(p, opts);
    CHECK(sup_norm_diff(report.grid, zero) == doctest::Approx(0.0));
    for (int t : report.policy.d) CHECK(t == 19);  // admit everywhere below the cap
}

TEST_CASE("reference solves: values, thresholds, convergence diagnostics") {
    for (double reward : {5.0, 1.0}) {
        const ModelParams p = reference::benchmark_params(reward);
        std::vector<double> residuals;
        SolveOptions opts;
        opts.residual_log = &residuals;
        const SolveReport report = solve(p, opts);

        // Spot value at the empty state and the full policy vector.
        CHECK(std::abs(report.grid.at(0, 0) - reference::optimal_grid(reward).at(0, 0)) < 0.01);
        CHECK(report.policy.d == reference::optimal_thresholds(reward));
        CHECK(report.residual < 1e-9);
        CHECK(report.hypothesis_report.all_passed());

        // Contraction makes the residual (eventually) monotone; near the
        // stopping tolerance the sequence is rounding noise, so only check
        // it down to well above machine precision of the ~100-scale values.
        for (std::size_t k = 5; k + 10 < residuals.size(); ++k)
            if (residuals[k] > 1e-6) CHECK(residuals[k + 10] <= residuals[k] + 1e-15);

        // One extra sweep must not move a converged grid beyond tol.
        const ValueGrid recomputed = bellman_sweep(report.grid, p);
        CHECK(sup_norm_diff(recomputed, report.grid) < opts.tol);

        // Row monotonicity and concavity in n2, cross-row difference
        // monotonicity in n1, threshold monotonicity.
        const ValueGrid& x = report.grid;
        for (int n1 = 0; n1 < x.n1_size; ++n1)
            for (int n2 = 0; n2 + 1 < x.n2_size; ++n2) {
                CHECK(x.at(n1, n2 + 1) - x.at(n1, n2) <= 1e-9);
                if (n2 + 2 < x.n2_size)
                    CHECK((x.at(n1, n2 + 2) - x.at(n1, n2 + 1)) - (x.at(n1, n2 + 1) - x.at(n1, n2)) <=
                          1e-9);
                if (n1 + 1 < x.n1_size)
                    CHECK((x.at(n1 + 1, n2 + 1) - x.at(n1 + 1, n2)) -
                              (x.at(n1, n2 + 1) - x.at(n1, n2)) <=
                          1e-9);
            }
        for (int n1 = 0; n1 + 1 < report.policy.rows(); ++n1)
            CHECK(report.policy.d[std::size_t(n1)] >= report.policy.d[std::size_t(n1) + 1]);

        // Auto cap sits above the admit region with margin.
        CHECK(report.cap == auto_cap(p));
        CHECK(report.policy.max_threshold() < report.cap - 1);
    }
}

TEST_CASE("reject-all extraction when admitting never pays") {
    ModelParams p = reference::benchmark_params(5.0);
    p.reward_R = 0.0;  // strictly increasing holding cost, no reward
    SolveOptions opts;
    opts.cap = 30;
    const SolveReport report = solve(p, opts);

    for (int t : report.policy.d) CHECK(t == ThresholdPolicy::kRejectAll);
    // Brute-force oracle on the converged grid: admitting never beats staying.
    for (int n1 = 0; n1 < report.grid.n1_size; ++n1)
        for (int n2 = 0; n2 + 1 < report.grid.n2_size; ++n2)
            CHECK(report.grid.at(n1, n2 + 1) + p.reward_R < report.grid.at(n1, n2));
}

TEST_CASE("non-threshold grids are rejected") {
    ModelParams p = reference::benchmark_params(5.0);
    p.capacity_C = 5;  // N1 = 1, two rows
    p.reward_R = 0.0;
    ValueGrid grid(2, 6);
    for (int n1 = 0; n1 < 2; ++n1)
        for (int n2 = 0; n2 <= 5; ++n2) grid.at(n1, n2) = (n2 % 2 == 1) ? 1.0 : 0.0;
    CHECK_THROWS_AS(extract_policy(grid, p), NonThresholdStructure);
}

TEST_CASE("solver failure modes") {
    const ModelParams p = reference::benchmark_params(5.0);

    SolveOptions tight;
    tight.max_iter = 3;
    CHECK_THROWS_AS(solve(p, tight), NotConverged);

    SolveOptions small_cap;
    small_cap.cap = 12;  // optimal thresholds reach 18
    CHECK_THROWS_AS(solve(p, small_cap), CapTooSmall);
}

TEST_CASE("admission transform preserves integer concavity") {
    Xoshiro256pp rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int length = 10 + int(rng.below(40));
        const std::vector<double> h = random_concave(rng, length);
        const double reward = rng.uniform(-10.0, 10.0);

        std::vector<double> g(h.size() - 1);
        for (std::size_t i = 0; i + 1 < h.size(); ++i)
            g[i] = admit_transform(h[i], h[i + 1], reward).value;
        for (std::size_t i = 0; i + 2 < g.size(); ++i)
            CHECK((g[i + 2] - g[i + 1]) - (g[i + 1] - g[i]) <= 1e-12);
    }
}

TEST_CASE("admission transform preserves pointwise difference ordering") {
    Xoshiro256pp rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int length = 10 + int(rng.below(40));
        // h2 concave; h1 built so that its differences sit below h2's and
        // still decrease (subtract a nondecreasing nonnegative sequence).
        const std::vector<double> h2 = random_concave(rng, length);
        std::vector<double> extra(std::size_t(length) - 1);
        double running = rng.uniform(0.0, 3.0);
        for (auto& e : extra) {
            e = running;
            running += rng.uniform(0.0, 2.0);
        }
        std::vector<double> h1(extra.size() + 1);
        h1[0] = double(int(rng.below(41)) - 20);
        for (int i = 1; i < length; ++i) {
            const double d2 = h2[std::size_t(i)] - h2[std::size_t(i) - 1];
            h1[std::size_t(i)] = h1[std::size_t(i) - 1] + d2 - extra[std::size_t(i) - 1];
        }
        const double reward = rng.uniform(-10.0, 10.0);

        auto g_of = [&](const std::vector<double>& h) {
            std::vector<double> g(h.size() - 1);
            for (std::size_t i = 0; i + 1 < h.size(); ++i)
                g[i] = admit_transform(h[i], h[i + 1], reward).value;
            return g;
        };
        const std::vector<double> g1 = g_of(h1), g2 = g_of(h2);
        for (std::size_t i = 0; i + 1 < g1.size(); ++i)
            CHECK((g1[i + 1] - g1[i]) <= (g2[i + 1] - g2[i]) + 1e-12);
    }
}
