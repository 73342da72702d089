#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vmadmit/model.hpp"
#include "vmadmit/reference.hpp"
#include "vmadmit/rng.hpp"

using namespace vmadmit;

namespace {

ModelParams table_params() { return reference::benchmark_params(5.0); }

} // namespace

TEST_CASE("n1_max divides capacity by the per-task VM count") {
    ModelParams p = table_params();  // C=10, b=5
    CHECK(n1_max(p) == 2);

    p.capacity_C = 5;
    CHECK(n1_max(p) == 1);

    p.capacity_C = 12;
    p.vms_per_pu_b = 4;
    CHECK(n1_max(p) == 3);

    p.capacity_C = 10;
    CHECK_THROWS_AS(n1_max(p), ConfigError);  // 10 % 4 != 0
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("parameter validation rejects non-positive rates") {
    ModelParams p = table_params();
    CHECK_NOTHROW(p.validate());

    ModelParams bad = p;
    bad.lambda2 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.alpha = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.preempt_cost_r = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("VM occupancy counts") {
    const ModelParams p = table_params();

    CHECK(busy_pu_vms(p, 0) == 0);
    CHECK(busy_pu_vms(p, 1) == 5);
    CHECK(busy_pu_vms(p, 2) == 10);
    CHECK_THROWS_AS(busy_pu_vms(p, 3), DomainError);
    CHECK_THROWS_AS(busy_pu_vms(p, -1), DomainError);

    CHECK(busy_su_vms(p, {1, 7}) == 5);   // min(10-5, 7)
    CHECK(busy_su_vms(p, {0, 0}) == 0);
    CHECK(busy_su_vms(p, {0, 3}) == 3);   // min(10, 3)
    CHECK_THROWS_AS(busy_su_vms(p, {0, -1}), DomainError);
}

TEST_CASE("preemption counts") {
    const ModelParams p = table_params();
    CHECK(preempt_count(p, {1, 7}) == 5);  // max(5+5+5-10, 0)
    CHECK(preempt_count(p, {2, 7}) == 0);  // n1 = N1
    CHECK(preempt_count(p, {0, 2}) == 0);  // max(0+2+5-10, 0)
}

TEST_CASE("total event rate and uniformization constant") {
    ModelParams p = table_params();
    CHECK(total_rate(p, {1, 7}) == doctest::Approx(73.0));  // 1+2+5*6+5*8
    CHECK(total_rate(p, {0, 0}) == doctest::Approx(p.lambda1 + p.lambda2));
    CHECK(total_rate(p, {2, 0}) == doctest::Approx(63.0));  // 1+2+10*6

    CHECK(uniformization_constant(p) == doctest::Approx(83.0));  // 1+2+10*8

    ModelParams unit;
    unit.lambda1 = unit.lambda2 = unit.mu1 = unit.mu2 = 1.0;
    unit.capacity_C = unit.vms_per_pu_b = 1;
    unit.alpha = 0.1;
    CHECK(uniformization_constant(unit) == doctest::Approx(3.0));

    p.mu2 = 16.0;
    CHECK(uniformization_constant(p) == doctest::Approx(163.0));  // 1+2+10*16
}

TEST_CASE("holding rates") {
    CHECK(holding_rate(HoldingCost::square_sum(), {0, 0}) == doctest::Approx(0.0));
    CHECK(holding_rate(HoldingCost::square_sum(), {2, 3}) == doctest::Approx(13.0));
    // f = n2 only
    const HoldingCost linear = HoldingCost::polynomial(0, 0, 0, 0, 1, 0);
    CHECK(holding_rate(linear, {5, 4}) == doctest::Approx(4.0));
}

TEST_CASE("hypothesis validation") {
    // Square-sum: delta_n2 f = 2 n2 + 1, independent of n1 -> both pass.
    auto report = validate_hypotheses(HoldingCost::square_sum(), 2, 30);
    CHECK(report.convex_increasing_n2);
    CHECK(report.delta_nondecreasing_n1);
    CHECK(report.all_passed());

    // f = -n2 decreases: condition (a) fails at the origin.
    report = validate_hypotheses(HoldingCost::polynomial(0, 0, 0, 0, -1, 0), 2, 30);
    CHECK_FALSE(report.convex_increasing_n2);
    REQUIRE(report.first_violation_a.has_value());
    CHECK(*report.first_violation_a == State{0, 0});

    // f = n1*n2 + n2^2: delta_n2 f = n1 + 2 n2 + 1 -> both pass.
    report = validate_hypotheses(HoldingCost::polynomial(0, 1, 1, 0, 0, 0), 2, 30);
    CHECK(report.all_passed());

    // Cross term with negative sign violates condition (b) but not (a).
    report = validate_hypotheses(HoldingCost::polynomial(0, 1, -0.5, 0, 10, 0), 2, 30);
    CHECK(report.convex_increasing_n2);
    CHECK_FALSE(report.delta_nondecreasing_n1);
    REQUIRE(report.first_violation_b.has_value());
}

TEST_CASE("occupancy identities hold on an exhaustive state scan") {
    Xoshiro256pp rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams p = table_params();
        p.lambda1 = rng.uniform(0.5, 20.0);
        p.lambda2 = rng.uniform(0.5, 20.0);
        p.mu1 = rng.uniform(0.5, 20.0);
        p.mu2 = rng.uniform(0.5, 20.0);
        p.vms_per_pu_b = 1 + int(rng.below(5));
        p.capacity_C = p.vms_per_pu_b * (1 + int(rng.below(4)));
        p.validate();

        const int n1_top = n1_max(p);
        const double c = uniformization_constant(p);
        const int n2_cap = 40;
        for (int n1 = 0; n1 <= n1_top; ++n1) {
            for (int n2 = 0; n2 <= n2_cap; ++n2) {
                const State s{n1, n2};
                const int c1 = busy_pu_vms(p, n1);
                const int c2 = busy_su_vms(p, s);
                const int cv = preempt_count(p, s);
                CHECK(c2 >= 0);
                CHECK(c2 <= p.capacity_C - c1);
                CHECK(c1 + c2 <= p.capacity_C);
                CHECK(cv >= 0);
                CHECK(cv <= p.vms_per_pu_b);
                CHECK(total_rate(p, s) <= c + 1e-12);
                // A full pool preempts exactly b tasks per admitted type-1.
                if (n1 < n1_top && c1 + c2 == p.capacity_C) CHECK(cv == p.vms_per_pu_b);
                // Preemption count never decreases as the buffer fills.
                if (n1 < n1_top && n2 > 0)
                    CHECK(preempt_count(p, {n1, n2}) >= preempt_count(p, {n1, n2 - 1}));
            }
        }
    }
}

TEST_CASE("square-sum passes hypothesis validation for every geometry") {
    for (int n1_top : {1, 2, 5, 10})
        for (int cap : {2, 10, 100})
            CHECK(validate_hypotheses(HoldingCost::square_sum(), n1_top, cap).all_passed());
}
