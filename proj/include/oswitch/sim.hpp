#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "oswitch/scenario.hpp"

namespace oswitch {

/// The PV-assigned outlets' true demand exceeded the true available
/// production: the protective revert fired.
struct EnergyLackEvent {
    double time_s;
    double pv_demand_w;
    double available_w;
};

struct MetricsReport {
    std::string policy_name;
    double margin = 0.0; // configured margin, or the mean effective margin for adaptive kinds
    int slots = 0;

    double total_consumption_wh = 0.0;
    double total_production_wh = 0.0;
    double self_consumed_wh = 0.0;
    double grid_served_wh = 0.0;

    double saving_percent = 0.0;               // self-consumed share of total consumption (headline)
    double saving_vs_production_percent = 0.0; // same energy relative to production

    int error_count = 0;
    int switch_count = 0;
};

/// Scenario driver: replays the warm-up days into the slot statistics, then
/// runs the measured window as a deterministic event loop with the full
/// meter/bus/gateway protocol in the loop.
class Simulation {
public:
    explicit Simulation(const Scenario& scenario);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Runs the scenario once. Subsequent calls return the cached report.
    const MetricsReport& run();

    const MetricsReport& report() const;
    const std::vector<EnergyLackEvent>& lack_events() const;
    const OutletSlotStats& stats() const;

    void export_bus_log(std::ostream& out) const;
    void export_history(std::ostream& out) const;
    void export_stats(std::ostream& out) const;
    void export_lacks(std::ostream& out) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

MetricsReport run_scenario(const Scenario& scenario);

/// One full run per margin on otherwise identical inputs; rows ordered by
/// margin. Requires a fixed-margin policy (naive or static).
std::vector<MetricsReport> sweep(const Scenario& scenario, std::vector<double> margins);

/// `margin,policy,slots,saving_percent,error_count,switch_count`
void write_report_csv(std::ostream& out, std::span<const MetricsReport> reports);
void write_summary(std::ostream& out, const MetricsReport& report,
                   const std::vector<EnergyLackEvent>& lacks);

} // namespace oswitch
