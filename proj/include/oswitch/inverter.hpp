#pragma once

#include "oswitch/trace.hpp"

namespace oswitch {

struct InverterConfig {
    double max_output_w = 800.0;
    double dc_capacity_w = 220.0; // panel rating; informational, the DC trace is authoritative
    double conversion_efficiency = 0.9;
    double battery_capacity_wh = 600.0;
    double battery_efficiency = 0.9;

    void validate() const;
};

struct InverterState {
    double battery_level_wh = 0.0;
};

/// Energy served over one step, split by source (all in watt-hours).
struct EnergySplit {
    double solar_wh = 0.0;
    double battery_wh = 0.0;
    double grid_wh = 0.0;
};

/// PV inverter with solar -> battery -> grid priority. Conversion loss is a
/// single efficiency factor on the DC production; the battery pays its own
/// efficiency on both charge and discharge.
class Inverter {
public:
    Inverter(InverterConfig config, StepSeries dc_trace);

    const InverterConfig& config() const { return config_; }
    const StepSeries& dc_trace() const { return dc_trace_; }

    /// DC panel output at `time`. Throws std::out_of_range outside the trace.
    double dc_at(double time) const { return dc_trace_.value_at(time); }

    /// AC watts the inverter can deliver right now: capped solar plus
    /// whatever the battery can add, never above the output rating.
    double available_ac_w(const InverterState& state, double time) const;

    /// Serves `demand_w` for dt_s seconds starting at `time`: solar first,
    /// then battery until empty, then grid. Surplus solar charges the
    /// battery. Rates are assumed constant over the step.
    EnergySplit step_energy(InverterState& state, double time, double dt_s, double demand_w) const;

    /// Seconds until the battery empties at constant demand, or +inf when it
    /// never does under the current rates.
    double seconds_to_battery_empty(const InverterState& state, double time, double demand_w) const;

private:
    double solar_ac_w(double time) const;

    InverterConfig config_;
    StepSeries dc_trace_;
};

} // namespace oswitch
