#pragma once

#include <set>
#include <span>
#include <vector>

namespace oswitch {

/// One knapsack item: an outlet with its integer-rounded draw. Value equals
/// weight by default (pure self-consumption maximization); `prefer` marks
/// outlets already on the PV side so ties keep them there.
struct KnapsackItem {
    int outlet = 0;
    int weight = 1;
    int value = 0;
    bool prefer = false;
};

struct KnapsackInstance {
    int capacity = 0;
    std::vector<KnapsackItem> items;
};

struct KnapsackSolution {
    std::vector<int> selected; // outlet ids, ascending
    int total_value = 0;
    int total_weight = 0;
};

/// Builds the integer instance from an instantaneous snapshot: capacity is
/// the margin-reduced production rounded down, each eligible outlet's draw is
/// rounded up. Zero-draw outlets enter with weight 1 and value 0.
///
/// `readings` is indexed by outlet id; `eligible` lists the outlet ids that
/// may join the PV side; `previous_pv` marks the current PV set for
/// churn-minimizing tie-breaks.
KnapsackInstance build_instance(double production_w, double margin, std::span<const double> readings,
                                const std::vector<int>& eligible, const std::set<int>& previous_pv = {});

/// Exact 0/1 knapsack via dynamic programming. Among equal-value solutions,
/// prefers those keeping more previously-PV outlets, then lower outlet ids.
KnapsackSolution solve(const KnapsackInstance& instance);

} // namespace oswitch
