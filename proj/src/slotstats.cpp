#include "oswitch/slotstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace oswitch {

int SlotGrid::slot_of(double time_s) const {
    if (slots_per_day <= 0) throw std::domain_error("slotstats: slots per day must be > 0");
    double t = std::fmod(time_s, 86400.0);
    if (t < 0.0) t += 86400.0;
    const int idx = static_cast<int>(t / slot_width_s());
    return std::min(idx, slots_per_day - 1);
}

OutletSlotStats::OutletSlotStats(SlotGrid grid, int outlet_count)
    : grid_(grid), outlet_count_(outlet_count) {
    if (grid_.slots_per_day <= 0) throw std::domain_error("slotstats: slots per day must be > 0");
    if (outlet_count_ <= 0) throw std::domain_error("slotstats: outlet count must be > 0");
    cells_.resize(static_cast<std::size_t>(outlet_count_) * static_cast<std::size_t>(grid_.slots_per_day));
}

OutletSlotStats::Cell& OutletSlotStats::cell_ref(int outlet, int slot) {
    return const_cast<Cell&>(static_cast<const OutletSlotStats*>(this)->cell(outlet, slot));
}

const OutletSlotStats::Cell& OutletSlotStats::cell(int outlet, int slot) const {
    if (outlet < 0 || outlet >= outlet_count_)
        throw std::out_of_range("slotstats: outlet index out of range");
    if (slot < 0 || slot >= grid_.slots_per_day)
        throw std::out_of_range("slotstats: slot index out of range");
    return cells_[static_cast<std::size_t>(outlet) * static_cast<std::size_t>(grid_.slots_per_day) +
                  static_cast<std::size_t>(slot)];
}

void OutletSlotStats::record(int outlet, double time_s, double watts) {
    if (watts < 0.0) throw std::domain_error("slotstats: consumption must be >= 0");
    Cell& c = cell_ref(outlet, grid_.slot_of(time_s));
    ++c.count;
    const double delta = watts - c.mean;
    c.mean += delta / static_cast<double>(c.count);
    c.m2 += delta * (watts - c.mean);
}

std::optional<double> OutletSlotStats::metric(int outlet, int slot, MetricKind kind) const {
    const Cell& c = cell(outlet, slot);
    if (c.count < 1) return std::nullopt;
    const double var = c.variance();
    switch (kind) {
    case MetricKind::Variance:
        return var;
    case MetricKind::VarianceOverMean:
        return c.mean > 0.0 ? var / c.mean : 0.0; // a dead outlet is perfectly predictable
    }
    return std::nullopt;
}

double OutletSlotStats::max_metric(MetricKind kind) const {
    double best = 0.0;
    for (int o = 0; o < outlet_count_; ++o) {
        for (int s = 0; s < grid_.slots_per_day; ++s) {
            auto m = metric(o, s, kind);
            if (m.has_value()) best = std::max(best, *m);
        }
    }
    return best;
}

OutletSlotStats OutletSlotStats::merged(const OutletSlotStats& a, const OutletSlotStats& b) {
    if (a.grid_.slots_per_day != b.grid_.slots_per_day || a.outlet_count_ != b.outlet_count_)
        throw std::invalid_argument("slotstats: merge requires identical shapes");
    OutletSlotStats out(a.grid_, a.outlet_count_);
    for (std::size_t i = 0; i < out.cells_.size(); ++i) {
        const Cell& ca = a.cells_[i];
        const Cell& cb = b.cells_[i];
        Cell& c = out.cells_[i];
        c.count = ca.count + cb.count;
        if (c.count == 0) continue;
        const double na = static_cast<double>(ca.count);
        const double nb = static_cast<double>(cb.count);
        const double n = static_cast<double>(c.count);
        const double delta = cb.mean - ca.mean;
        c.mean = ca.mean + delta * nb / n;
        c.m2 = ca.m2 + cb.m2 + delta * delta * na * nb / n;
    }
    return out;
}

void OutletSlotStats::export_csv(std::ostream& out) const {
    out << "outlet,slot,count,mean_w,variance_w2\n";
    char buf[96];
    for (int o = 0; o < outlet_count_; ++o) {
        for (int s = 0; s < grid_.slots_per_day; ++s) {
            const Cell& c = cell(o, s);
            std::snprintf(buf, sizeof(buf), "%d,%d,%lld,%.6f,%.6f\n", o, s,
                          static_cast<long long>(c.count), c.mean, c.variance());
            out << buf;
        }
    }
}

} // namespace oswitch
