#include <doctest.h>

#include <stdexcept>

#include <random>
#include <vector>

#include "oswitch/policy.hpp"

using namespace oswitch;

namespace {

OutletSlotStats flat_stats(int outlets, double mean, double spread) {
    // two observations per (outlet, slot 0): mean +/- spread -> variance = spread^2
    OutletSlotStats stats(SlotGrid{48}, outlets);
    for (int o = 0; o < outlets; ++o) {
        stats.record(o, 0.0, mean - spread);
        stats.record(o, 1.0, mean + spread);
    }
    return stats;
}

int brute_best_value(double capacity, const std::vector<double>& readings) {
    const int n = static_cast<int>(readings.size());
    int best = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double total = 0.0;
        int value = 0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if (mask & (1u << i)) {
                const int w = static_cast<int>(std::ceil(readings[static_cast<std::size_t>(i)]));
                total += w;
                value += w;
                if (total > capacity) ok = false;
            }
        }
        if (ok && value > best) best = value;
    }
    return best;
}

} // namespace

TEST_CASE("eligible: naive admits everyone at the configured margin") {
    PolicyConfig policy;
    policy.kind = PolicyKind::Naive;
    policy.margin = 0.2;
    auto stats = flat_stats(5, 50.0, 0.0);
    auto r = eligible_outlets(policy, stats, 0, 5);
    CHECK(r.outlets == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(r.margin == doctest::Approx(0.2));
}

TEST_CASE("eligible: static variance threshold excludes strictly above") {
    PolicyConfig policy;
    policy.kind = PolicyKind::StaticVariance;
    policy.threshold_w2 = 100.0;
    policy.margin = 0.1;

    OutletSlotStats stats(SlotGrid{48}, 3);
    // variances 50, 150 (wait: spread^2), 99
    stats.record(0, 0.0, 50.0 - std::sqrt(50.0));
    stats.record(0, 1.0, 50.0 + std::sqrt(50.0));
    stats.record(1, 0.0, 50.0 - std::sqrt(150.0));
    stats.record(1, 1.0, 50.0 + std::sqrt(150.0));
    stats.record(2, 0.0, 50.0 - std::sqrt(99.0));
    stats.record(2, 1.0, 50.0 + std::sqrt(99.0));

    auto r = eligible_outlets(policy, stats, 0, 3);
    CHECK(r.outlets == std::vector<int>{0, 2});
    CHECK(r.margin == doctest::Approx(0.1));

    // a metric exactly at the threshold stays eligible ("overcomes" is strict)
    OutletSlotStats exact(SlotGrid{48}, 1);
    exact.record(0, 0.0, 50.0 - 10.0);
    exact.record(0, 1.0, 50.0 + 10.0); // variance exactly 100
    auto boundary = eligible_outlets(policy, exact, 0, 1);
    CHECK(boundary.outlets == std::vector<int>{0});
}

TEST_CASE("eligible: static policies treat cold-start slots as ineligible") {
    PolicyConfig policy;
    policy.kind = PolicyKind::StaticVariance;
    policy.threshold_w2 = 100.0;
    OutletSlotStats stats(SlotGrid{48}, 2);
    stats.record(0, 0.0, 10.0); // outlet 1 has no history at all
    auto r = eligible_outlets(policy, stats, 0, 2);
    CHECK(r.outlets == std::vector<int>{0});
}

TEST_CASE("eligible: adaptive with all-zero metrics uses the floor margin") {
    PolicyConfig policy;
    policy.kind = PolicyKind::AdaptiveVariance;
    policy.margin_min = 0.05;
    policy.margin_max = 0.40;
    auto stats = flat_stats(4, 50.0, 0.0); // identical samples: zero variance everywhere
    auto r = eligible_outlets(policy, stats, 0, 4);
    CHECK(r.outlets == std::vector<int>{0, 1, 2, 3});
    CHECK(r.margin == doctest::Approx(0.05));
}

TEST_CASE("eligible: adaptive cuts outlets above half of the observed maximum") {
    PolicyConfig policy;
    policy.kind = PolicyKind::AdaptiveVariance;

    OutletSlotStats stats(SlotGrid{48}, 3);
    stats.record(0, 0.0, 100.0 - 40.0);
    stats.record(0, 1.0, 100.0 + 40.0); // variance 1600 -> the maximum
    stats.record(1, 0.0, 100.0 - 10.0);
    stats.record(1, 1.0, 100.0 + 10.0); // variance 100 -> normalized 0.0625
    stats.record(2, 0.0, 100.0);
    stats.record(2, 1.0, 100.0); // variance 0

    auto r = eligible_outlets(policy, stats, 0, 3);
    CHECK(r.outlets == std::vector<int>{1, 2});
    const double mean_normalized = (100.0 / 1600.0 + 0.0) / 2.0;
    CHECK(r.margin == doctest::Approx(0.05 + 0.35 * mean_normalized));
    CHECK(r.margin >= 0.05);
    CHECK(r.margin <= 0.40);
}

TEST_CASE("eligible: adaptive cold start counts as the worst metric") {
    PolicyConfig policy;
    policy.kind = PolicyKind::AdaptiveVariance;
    OutletSlotStats stats(SlotGrid{48}, 2);
    stats.record(0, 0.0, 10.0); // outlet 1 unseen -> normalized 1.0 -> cut
    auto r = eligible_outlets(policy, stats, 0, 2);
    CHECK(r.outlets == std::vector<int>{0});
}

TEST_CASE("decide: zero production parks everything on the grid") {
    PolicyConfig policy;
    policy.kind = PolicyKind::Naive;
    auto stats = flat_stats(3, 50.0, 0.0);
    std::vector<double> readings{80.0, 90.0, 70.0};
    auto a = decide(policy, 0.0, readings, stats, 0.0, {});
    CHECK(a.pv.empty());
    CHECK(a.grid == std::set<int>{0, 1, 2});
}

TEST_CASE("decide: naive margin 0 picks the enumerated optimum") {
    PolicyConfig policy;
    policy.kind = PolicyKind::Naive;
    auto stats = flat_stats(3, 50.0, 0.0);
    std::vector<double> readings{80.0, 90.0, 70.0};
    CHECK(brute_best_value(200.0, readings) == 170); // oracle: {80, 90}
    auto a = decide(policy, 200.0, readings, stats, 0.0, {});
    CHECK(a.pv == std::set<int>{0, 1});
    CHECK(a.grid == std::set<int>{2});
}

TEST_CASE("decide: static policy that excludes the 90 W outlet") {
    PolicyConfig policy;
    policy.kind = PolicyKind::StaticVariance;
    policy.threshold_w2 = 100.0;
    policy.margin = 0.0;

    OutletSlotStats stats(SlotGrid{48}, 3);
    stats.record(0, 0.0, 80.0);
    stats.record(0, 1.0, 80.0);
    stats.record(1, 0.0, 90.0 - 50.0);
    stats.record(1, 1.0, 90.0 + 50.0); // variance 2500: excluded
    stats.record(2, 0.0, 70.0);
    stats.record(2, 1.0, 70.0);

    std::vector<double> readings{80.0, 90.0, 70.0};
    CHECK(brute_best_value(200.0, {80.0, 70.0}) == 150); // oracle on the reduced set
    auto a = decide(policy, 200.0, readings, stats, 0.0, {});
    CHECK(a.pv == std::set<int>{0, 2});
    CHECK(a.grid == std::set<int>{1});
}

TEST_CASE("decide: every outlet lands on exactly one side") {
    std::mt19937_64 rng(606);
    auto stats = flat_stats(6, 60.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        PolicyConfig policy;
        policy.kind = trial % 2 == 0 ? PolicyKind::AdaptiveVariance : PolicyKind::Naive;
        std::vector<double> readings(6);
        for (auto& r : readings) r = 150.0 * std::ldexp(static_cast<double>(rng()), -64);
        const double production = 400.0 * std::ldexp(static_cast<double>(rng()), -64);
        auto a = decide(policy, production, readings, stats, 3600.0 * (trial % 24), {});
        CHECK(a.pv.size() + a.grid.size() == 6);
        for (int o = 0; o < 6; ++o) CHECK(a.pv.count(o) + a.grid.count(o) == 1);
    }
}

TEST_CASE("decide: naive margin 0 dominates every policy at decision time") {
    std::mt19937_64 rng(909);
    PolicyConfig naive0;
    naive0.kind = PolicyKind::Naive;
    naive0.margin = 0.0;

    std::vector<PolicyConfig> rivals;
    {
        PolicyConfig p;
        p.kind = PolicyKind::StaticVariance;
        p.threshold_w2 = 50.0;
        p.margin = 0.2;
        rivals.push_back(p);
        p.kind = PolicyKind::StaticVarianceMeanRatio;
        p.threshold_ratio = 0.5;
        rivals.push_back(p);
        p.kind = PolicyKind::AdaptiveVariance;
        rivals.push_back(p);
        p.kind = PolicyKind::AdaptiveVarianceMeanRatio;
        rivals.push_back(p);
    }

    auto stats = flat_stats(5, 80.0, 6.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> readings(5);
        for (auto& r : readings) r = 120.0 * std::ldexp(static_cast<double>(rng()), -64);
        const double production = 500.0 * std::ldexp(static_cast<double>(rng()), -64);

        auto value_of = [&](const OutletAssignment& a) {
            double v = 0.0;
            for (int o : a.pv) v += std::ceil(readings[static_cast<std::size_t>(o)]);
            return v;
        };

        const double naive_value = value_of(decide(naive0, production, readings, stats, 0.0, {}));
        for (const auto& rival : rivals)
            CHECK(naive_value >= value_of(decide(rival, production, readings, stats, 0.0, {})));
    }
}

TEST_CASE("decide: higher margin never increases the selected rounded weight") {
    std::mt19937_64 rng(1212);
    auto stats = flat_stats(5, 80.0, 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> readings(5);
        for (auto& r : readings) r = 120.0 * std::ldexp(static_cast<double>(rng()), -64);
        const double production = 500.0 * std::ldexp(static_cast<double>(rng()), -64);

        double previous_weight = 1e18;
        for (double margin : {0.0, 0.1, 0.2, 0.3, 0.4}) {
            PolicyConfig p;
            p.kind = PolicyKind::Naive;
            p.margin = margin;
            auto a = decide(p, production, readings, stats, 0.0, {});
            double weight = 0.0;
            for (int o : a.pv) weight += std::ceil(readings[static_cast<std::size_t>(o)]);
            CHECK(weight <= previous_weight);
            previous_weight = weight;
        }
    }
}

TEST_CASE("policy parsing and validation") {
    CHECK(policy_kind_from_name("adaptive_var_mean") == PolicyKind::AdaptiveVarianceMeanRatio);
    CHECK_THROWS_AS(policy_kind_from_name("bogus"), std::invalid_argument);

    PolicyConfig bad;
    bad.margin = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);

    PolicyConfig swapped;
    swapped.margin_min = 0.5;
    swapped.margin_max = 0.2;
    CHECK_THROWS_AS(swapped.validate(), std::domain_error);
}
