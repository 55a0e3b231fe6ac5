#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "oswitch/optimizer.hpp"
#include "oswitch/slotstats.hpp"

namespace oswitch {

enum class PolicyKind {
    Naive,
    StaticVariance,
    StaticVarianceMeanRatio,
    AdaptiveVariance,
    AdaptiveVarianceMeanRatio,
};

const char* policy_kind_name(PolicyKind kind);
PolicyKind policy_kind_from_name(const std::string& name);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::Naive;

    double margin = 0.0;           // naive and static kinds
    double threshold_w2 = 100.0;   // static variance threshold
    double threshold_ratio = 1.0;  // static variance/mean threshold
    double margin_min = 0.05;      // adaptive margin band
    double margin_max = 0.40;
    double eligibility_cut = 0.5;  // adaptive normalized-metric cut

    void validate() const;
    bool has_fixed_margin() const {
        return kind == PolicyKind::Naive || kind == PolicyKind::StaticVariance ||
               kind == PolicyKind::StaticVarianceMeanRatio;
    }
    MetricKind metric() const;
};

struct EligibilityResult {
    std::vector<int> outlets; // ascending outlet ids
    double margin = 0.0;
};

/// Applies the policy's eligibility filter for one slot and picks the
/// effective safety margin.
///
/// Static kinds exclude an outlet when its slot metric exceeds the fixed
/// threshold (cold-start slots are excluded too). Adaptive kinds normalize
/// the metric by the largest value in the statistics (cold start counts as
/// 1.0), exclude outlets above the cut, and map the mean normalized metric of
/// the survivors linearly onto [margin_min, margin_max].
EligibilityResult eligible_outlets(const PolicyConfig& policy, const OutletSlotStats& stats, int slot,
                                   int outlet_count);

/// PV/grid partition of all outlets at one decision instant.
struct OutletAssignment {
    std::set<int> pv;
    std::set<int> grid;
    double effective_margin = 0.0;
    double decision_time = 0.0;
};

/// Full decision pipeline: eligibility filter, knapsack instance with the
/// margin-reduced capacity, exact solve, and the complement onto the grid.
/// Ties keep outlets from `previous.pv` to limit relay churn.
OutletAssignment decide(const PolicyConfig& policy, double production_w, std::span<const double> readings,
                        const OutletSlotStats& stats, double now, const OutletAssignment& previous);

} // namespace oswitch
