#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace oswitch {

/// Divides the day into equal time slots (default 48, i.e. 30 minutes).
struct SlotGrid {
    int slots_per_day = 48;

    double slot_width_s() const { return 86400.0 / slots_per_day; }

    /// Slot index for a time of day; multi-day times wrap by modulo. The last
    /// slot absorbs any division remainder.
    int slot_of(double time_s) const;
};

enum class MetricKind { Variance, VarianceOverMean };

/// Per-(outlet, slot) running mean and population variance of consumption,
/// accumulated with Welford's single-pass update.
class OutletSlotStats {
public:
    struct Cell {
        std::int64_t count = 0;
        double mean = 0.0;
        double m2 = 0.0; // sum of squared deviations

        double variance() const { return count > 0 ? m2 / static_cast<double>(count) : 0.0; }
    };

    OutletSlotStats(SlotGrid grid, int outlet_count);

    const SlotGrid& grid() const { return grid_; }
    int outlet_count() const { return outlet_count_; }

    /// Records one consumption observation. Throws on negative watts.
    void record(int outlet, double time_s, double watts);

    const Cell& cell(int outlet, int slot) const;

    /// Slot metric, or nullopt when the slot has no observations (cold
    /// start). A dead outlet (mean 0) has variance/mean ratio 0.
    std::optional<double> metric(int outlet, int slot, MetricKind kind) const;

    /// Largest metric value across all populated cells; 0 when nothing has
    /// been recorded.
    double max_metric(MetricKind kind) const;

    /// Combines statistics accumulated over disjoint observation sets.
    static OutletSlotStats merged(const OutletSlotStats& a, const OutletSlotStats& b);

    /// `outlet,slot,count,mean_w,variance_w2`
    void export_csv(std::ostream& out) const;

private:
    Cell& cell_ref(int outlet, int slot);

    SlotGrid grid_;
    int outlet_count_;
    std::vector<Cell> cells_;
};

} // namespace oswitch
