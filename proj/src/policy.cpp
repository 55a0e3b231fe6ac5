#include "oswitch/policy.hpp"

#include <stdexcept>

namespace oswitch {

const char* policy_kind_name(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::Naive: return "naive";
    case PolicyKind::StaticVariance: return "static_var";
    case PolicyKind::StaticVarianceMeanRatio: return "static_var_mean";
    case PolicyKind::AdaptiveVariance: return "adaptive_var";
    case PolicyKind::AdaptiveVarianceMeanRatio: return "adaptive_var_mean";
    }
    return "?";
}

PolicyKind policy_kind_from_name(const std::string& name) {
    if (name == "naive") return PolicyKind::Naive;
    if (name == "static_var") return PolicyKind::StaticVariance;
    if (name == "static_var_mean") return PolicyKind::StaticVarianceMeanRatio;
    if (name == "adaptive_var") return PolicyKind::AdaptiveVariance;
    if (name == "adaptive_var_mean") return PolicyKind::AdaptiveVarianceMeanRatio;
    throw std::invalid_argument("policy: unknown policy kind: " + name);
}

void PolicyConfig::validate() const {
    if (margin < 0.0 || margin >= 1.0) throw std::domain_error("policy: margin must be in [0,1)");
    if (threshold_w2 <= 0.0) throw std::domain_error("policy: variance threshold must be > 0");
    if (threshold_ratio <= 0.0) throw std::domain_error("policy: ratio threshold must be > 0");
    if (margin_min < 0.0 || margin_max >= 1.0 || margin_min > margin_max)
        throw std::domain_error("policy: adaptive margins must satisfy 0 <= min <= max < 1");
    if (eligibility_cut <= 0.0 || eligibility_cut > 1.0)
        throw std::domain_error("policy: eligibility cut must be in (0,1]");
}

MetricKind PolicyConfig::metric() const {
    switch (kind) {
    case PolicyKind::StaticVariance:
    case PolicyKind::AdaptiveVariance:
        return MetricKind::Variance;
    case PolicyKind::StaticVarianceMeanRatio:
    case PolicyKind::AdaptiveVarianceMeanRatio:
        return MetricKind::VarianceOverMean;
    case PolicyKind::Naive:
        break;
    }
    return MetricKind::Variance;
}

EligibilityResult eligible_outlets(const PolicyConfig& policy, const OutletSlotStats& stats, int slot,
                                   int outlet_count) {
    policy.validate();
    EligibilityResult result;

    switch (policy.kind) {
    case PolicyKind::Naive:
        for (int o = 0; o < outlet_count; ++o) result.outlets.push_back(o);
        result.margin = policy.margin;
        return result;

    case PolicyKind::StaticVariance:
    case PolicyKind::StaticVarianceMeanRatio: {
        const double threshold =
            policy.kind == PolicyKind::StaticVariance ? policy.threshold_w2 : policy.threshold_ratio;
        for (int o = 0; o < outlet_count; ++o) {
            auto m = stats.metric(o, slot, policy.metric());
            if (!m.has_value()) continue; // no history yet: too risky for a fixed rule
            if (*m <= threshold) result.outlets.push_back(o);
        }
        result.margin = policy.margin;
        return result;
    }

    case PolicyKind::AdaptiveVariance:
    case PolicyKind::AdaptiveVarianceMeanRatio: {
        const double max_metric = stats.max_metric(policy.metric());
        double normalized_sum = 0.0;
        for (int o = 0; o < outlet_count; ++o) {
            auto m = stats.metric(o, slot, policy.metric());
            double normalized;
            if (!m.has_value())
                normalized = 1.0; // cold start scores as the worst observed behavior
            else if (max_metric <= 0.0)
                normalized = 0.0;
            else
                normalized = *m / max_metric;
            if (normalized <= policy.eligibility_cut) {
                result.outlets.push_back(o);
                normalized_sum += normalized;
            }
        }
        if (result.outlets.empty()) {
            result.margin = policy.margin_min;
        } else {
            const double mean_normalized = normalized_sum / static_cast<double>(result.outlets.size());
            result.margin = policy.margin_min + (policy.margin_max - policy.margin_min) * mean_normalized;
        }
        return result;
    }
    }
    throw std::logic_error("policy: unhandled policy kind");
}

OutletAssignment decide(const PolicyConfig& policy, double production_w, std::span<const double> readings,
                        const OutletSlotStats& stats, double now, const OutletAssignment& previous) {
    const int outlet_count = static_cast<int>(readings.size());
    const int slot = stats.grid().slot_of(now);

    EligibilityResult eligibility = eligible_outlets(policy, stats, slot, outlet_count);
    KnapsackInstance instance =
        build_instance(production_w, eligibility.margin, readings, eligibility.outlets, previous.pv);
    KnapsackSolution solution = solve(instance);

    OutletAssignment assignment;
    assignment.effective_margin = eligibility.margin;
    assignment.decision_time = now;
    assignment.pv.insert(solution.selected.begin(), solution.selected.end());
    for (int o = 0; o < outlet_count; ++o) {
        if (assignment.pv.count(o) == 0) assignment.grid.insert(o);
    }
    return assignment;
}

} // namespace oswitch
