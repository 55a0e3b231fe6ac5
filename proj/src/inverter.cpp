#include "oswitch/inverter.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace oswitch {

void InverterConfig::validate() const {
    if (max_output_w <= 0.0) throw std::domain_error("inverter: max output must be > 0");
    if (conversion_efficiency <= 0.0 || conversion_efficiency > 1.0)
        throw std::domain_error("inverter: conversion efficiency must be in (0,1]");
    if (battery_efficiency <= 0.0 || battery_efficiency > 1.0)
        throw std::domain_error("inverter: battery efficiency must be in (0,1]");
    if (battery_capacity_wh < 0.0) throw std::domain_error("inverter: battery capacity must be >= 0");
    if (dc_capacity_w < 0.0) throw std::domain_error("inverter: dc capacity must be >= 0");
}

Inverter::Inverter(InverterConfig config, StepSeries dc_trace)
    : config_(config), dc_trace_(std::move(dc_trace)) {
    config_.validate();
    if (dc_trace_.empty()) throw std::invalid_argument("inverter: dc trace is empty");
}

double Inverter::solar_ac_w(double time) const {
    return std::min(config_.max_output_w, config_.conversion_efficiency * dc_at(time));
}

double Inverter::available_ac_w(const InverterState& state, double time) const {
    const double solar = solar_ac_w(time);
    if (state.battery_level_wh > 0.0) return config_.max_output_w; // UPS mode: battery backfills to the cap
    return solar;
}

EnergySplit Inverter::step_energy(InverterState& state, double time, double dt_s, double demand_w) const {
    if (dt_s <= 0.0) throw std::invalid_argument("inverter: step requires dt > 0");
    if (demand_w < 0.0) throw std::invalid_argument("inverter: demand must be >= 0");

    const double dt_h = dt_s / 3600.0;
    const double solar = solar_ac_w(time);
    const double direct_w = std::min(demand_w, solar);

    EnergySplit split;
    split.solar_wh = direct_w * dt_h;

    const double deficit_wh = (demand_w - direct_w) * dt_h;
    if (deficit_wh > 0.0 && state.battery_level_wh > 0.0) {
        const double rate_cap_wh = std::max(0.0, config_.max_output_w - direct_w) * dt_h;
        const double deliverable_wh = state.battery_level_wh * config_.battery_efficiency;
        split.battery_wh = std::min({deficit_wh, rate_cap_wh, deliverable_wh});
        state.battery_level_wh -= split.battery_wh / config_.battery_efficiency;
        if (state.battery_level_wh < 0.0) state.battery_level_wh = 0.0;
    }
    split.grid_wh = deficit_wh - split.battery_wh;

    const double surplus_w = solar - direct_w;
    if (surplus_w > 0.0 && config_.battery_capacity_wh > 0.0) {
        const double charge_wh =
            std::min(surplus_w * dt_h * config_.battery_efficiency,
                     config_.battery_capacity_wh - state.battery_level_wh);
        state.battery_level_wh += std::max(0.0, charge_wh);
    }
    return split;
}

double Inverter::seconds_to_battery_empty(const InverterState& state, double time, double demand_w) const {
    const double solar = solar_ac_w(time);
    const double deficit_w = demand_w - std::min(demand_w, solar);
    if (deficit_w <= 0.0) return std::numeric_limits<double>::infinity();
    const double discharge_w = std::min(deficit_w, std::max(0.0, config_.max_output_w - std::min(demand_w, solar)));
    if (discharge_w <= 0.0) return 0.0;
    const double deliverable_wh = state.battery_level_wh * config_.battery_efficiency;
    return deliverable_wh / discharge_w * 3600.0;
}

} // namespace oswitch
