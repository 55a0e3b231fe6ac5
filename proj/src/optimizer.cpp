#include "oswitch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oswitch {

KnapsackInstance build_instance(double production_w, double margin, std::span<const double> readings,
                                const std::vector<int>& eligible, const std::set<int>& previous_pv) {
    if (production_w < 0.0) throw std::domain_error("optimizer: production must be >= 0");
    if (margin < 0.0 || margin >= 1.0) throw std::domain_error("optimizer: margin must be in [0,1)");

    KnapsackInstance instance;
    instance.capacity = static_cast<int>(std::floor(production_w * (1.0 - margin)));

    for (int outlet : eligible) {
        if (outlet < 0 || static_cast<std::size_t>(outlet) >= readings.size())
            throw std::out_of_range("optimizer: eligible outlet has no reading");
        const double w = readings[static_cast<std::size_t>(outlet)];
        if (w < 0.0) throw std::domain_error("optimizer: readings must be >= 0");

        KnapsackItem item;
        item.outlet = outlet;
        item.prefer = previous_pv.count(outlet) != 0;
        if (w > 0.0) {
            item.weight = static_cast<int>(std::ceil(w));
            item.value = item.weight;
        } else {
            item.weight = 1; // below meter quantization; harmless to include
            item.value = 0;
        }
        instance.items.push_back(item);
    }
    std::sort(instance.items.begin(), instance.items.end(),
              [](const KnapsackItem& a, const KnapsackItem& b) { return a.outlet < b.outlet; });
    return instance;
}

KnapsackSolution solve(const KnapsackInstance& instance) {
    if (instance.capacity < 0) throw std::domain_error("optimizer: capacity must be >= 0");

    const int n = static_cast<int>(instance.items.size());
    const int cap = instance.capacity;

    // DP over (value, preferred-count) pairs, compared lexicographically so
    // the secondary objective never trades away value.
    struct Score {
        int value = 0;
        int prefs = 0;
        bool operator==(const Score&) const = default;
        bool operator<(const Score& o) const {
            if (value != o.value) return value < o.value;
            return prefs < o.prefs;
        }
    };

    std::vector<std::vector<Score>> table(static_cast<std::size_t>(n) + 1,
                                          std::vector<Score>(static_cast<std::size_t>(cap) + 1));
    for (int i = 1; i <= n; ++i) {
        const KnapsackItem& item = instance.items[static_cast<std::size_t>(i - 1)];
        for (int w = 0; w <= cap; ++w) {
            Score best = table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(w)];
            if (item.weight <= w) {
                Score take = table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(w - item.weight)];
                take.value += item.value;
                take.prefs += item.prefer ? 1 : 0;
                best = std::max(best, take);
            }
            table[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)] = best;
        }
    }

    // Backtrack taking an item only when strictly needed; at ties this drops
    // the highest-id item first, preferring lower outlet ids.
    KnapsackSolution solution;
    int w = cap;
    for (int i = n; i >= 1; --i) {
        if (table[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)] ==
            table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(w)])
            continue;
        const KnapsackItem& item = instance.items[static_cast<std::size_t>(i - 1)];
        solution.selected.push_back(item.outlet);
        solution.total_value += item.value;
        solution.total_weight += item.weight;
        w -= item.weight;
    }
    std::sort(solution.selected.begin(), solution.selected.end());
    return solution;
}

} // namespace oswitch
