#include "oswitch/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "oswitch/log.hpp"

namespace oswitch {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kLackEpsilonW = 1e-9;

} // namespace

struct Simulation::Impl {
    Scenario scenario;

    EventQueue queue;
    Bus bus;
    MeterUnit monitor_meter;
    MeterUnit switch_meter;
    Gateway gateway;
    Inverter inverter;
    InverterState inverter_state;
    OutletSlotStats slot_stats;

    std::set<int> pv_set;
    OutletAssignment previous_assignment;
    std::optional<OutletAssignment> pending;
    double pending_apply_t = kInfinity;

    double cooldown_until = -kInfinity;
    double account_from = 0.0;

    double consumption_wh = 0.0;
    double production_wh = 0.0;
    double self_consumed_wh = 0.0;
    double grid_served_wh = 0.0;
    int error_count = 0;
    int switch_count = 0;
    double margin_sum = 0.0;
    int decision_count = 0;

    std::vector<EnergyLackEvent> lacks;
    std::vector<double> breakpoints;
    std::size_t breakpoint_cursor = 0;

    bool ran = false;
    MetricsReport result;

    explicit Impl(const Scenario& sc)
        : scenario(sc),
          bus(queue, BusTiming{9600.0, 10, sc.delays.l_p}),
          monitor_meter(1, sc.notify, sc.meter_self_draw_w),
          switch_meter(2, sc.notify, sc.meter_self_draw_w),
          gateway(bus, sc.build_registry(), sc.nominal_voltage_v),
          inverter(sc.inverter, sc.pv_dc_trace),
          slot_stats(sc.slots, sc.outlet_count()) {
        scenario.validate();
        monitor_meter.set_wire_quant(sc.wire_quant);
        switch_meter.set_wire_quant(sc.wire_quant);
        monitor_meter.connect(bus);
        switch_meter.connect(bus);
    }

    double outlet_watts(int outlet, double t) const {
        return scenario.outlet_traces[static_cast<std::size_t>(outlet)].value_at(t);
    }

    double pv_demand_w(double t) const {
        double demand = 0.0;
        for (int o : pv_set) demand += outlet_watts(o, t);
        return demand;
    }

    double total_demand_w(double t) const {
        double demand = 0.0;
        for (int o = 0; o < scenario.outlet_count(); ++o) demand += outlet_watts(o, t);
        return demand + monitor_meter.self_draw_w() + switch_meter.self_draw_w();
    }

    MeasureSample sample_of(int outlet, double t) const {
        const double watts = outlet_watts(outlet, t);
        const double pf = scenario.bindings[static_cast<std::size_t>(outlet)].power_factor;
        MeasureSample s;
        s.power_factor = pf;
        s.apparent_va = pf > 0.0 ? watts / pf : 0.0;
        s.current_a = s.apparent_va / scenario.nominal_voltage_v;
        return s;
    }

    double sample_period() const {
        return scenario.delays.l_r > 0.0 ? scenario.delays.l_r : 1.0;
    }

    void run_warmup() {
        const double period = sample_period();
        const double end = scenario.warmup_end_s();
        for (double t = 0.0; t < end; t += period) {
            for (int o = 0; o < scenario.outlet_count(); ++o)
                slot_stats.record(o, t, outlet_watts(o, t));
        }
    }

    void collect_breakpoints() {
        const double begin = scenario.warmup_end_s();
        const double end = scenario.total_end_s();
        for (const auto& trace : scenario.outlet_traces) {
            auto bp = trace.breakpoints_in(begin, end);
            breakpoints.insert(breakpoints.end(), bp.begin(), bp.end());
        }
        auto bp = scenario.pv_dc_trace.breakpoints_in(begin, end);
        breakpoints.insert(breakpoints.end(), bp.begin(), bp.end());
        std::sort(breakpoints.begin(), breakpoints.end());
        breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    }

    // integrates all energy rates over [account_from, t); rates are constant
    // on the interval because every change point bounds it
    void account(double t) {
        if (t <= account_from) return;
        const double dt_s = t - account_from;
        const double dt_h = dt_s / 3600.0;

        const double total_w = total_demand_w(account_from);
        const double pv_w = pv_demand_w(account_from);
        const double solar_ac_w = std::min(scenario.inverter.max_output_w,
                                           scenario.inverter.conversion_efficiency *
                                               inverter.dc_at(account_from));

        EnergySplit split = inverter.step_energy(inverter_state, account_from, dt_s, pv_w);
        const double pv_served_wh = split.solar_wh + split.battery_wh;

        consumption_wh += total_w * dt_h;
        production_wh += solar_ac_w * dt_h;
        self_consumed_wh += pv_served_wh;
        grid_served_wh += total_w * dt_h - pv_served_wh;
        account_from = t;
    }

    void actuate_assignment(const OutletAssignment& assignment, double now) {
        int changes = 0;
        for (int o = 0; o < scenario.outlet_count(); ++o) {
            const bool want_pv = assignment.pv.count(o) != 0;
            const bool is_pv = pv_set.count(o) != 0;
            if (want_pv == is_pv) continue;
            gateway.send_command("pvswitch" + std::to_string(o), want_pv, now);
            ++changes;
        }
        switch_count += changes;
        pv_set = assignment.pv;
    }

    void revert_to_grid(double now) {
        for (int o : pv_set) {
            gateway.send_command("pvswitch" + std::to_string(o), false, now);
            ++switch_count;
        }
        pv_set.clear();
        pending.reset();
        pending_apply_t = kInfinity;
    }

    void check_lack(double now) {
        if (pv_set.empty()) return;
        const double demand = pv_demand_w(now);
        const double available = inverter.available_ac_w(inverter_state, now);
        if (demand > available + kLackEpsilonW) {
            lacks.push_back(EnergyLackEvent{now, demand, available});
            ++error_count;
            revert_to_grid(now);
            cooldown_until = now + scenario.cooldown_s;
        }
    }

    void process_samples(double now) {
        for (int o = 0; o < scenario.outlet_count(); ++o) {
            const double watts = outlet_watts(o, now);
            monitor_meter.sample_load(o, sample_of(o, now), now);
            slot_stats.record(o, now, watts);
        }
    }

    void process_decision(double now) {
        if (now < cooldown_until) return; // interrupted: stay on grid until the cooldown ends

        const double snapshot_t = std::max(0.0, now - scenario.delays.l_monitor());
        std::vector<double> readings(static_cast<std::size_t>(scenario.outlet_count()));
        for (int o = 0; o < scenario.outlet_count(); ++o)
            readings[static_cast<std::size_t>(o)] = outlet_watts(o, snapshot_t);

        const double production = inverter.available_ac_w(inverter_state, now);
        OutletAssignment assignment =
            decide(scenario.policy, production, readings, slot_stats, now, previous_assignment);
        previous_assignment = assignment;
        margin_sum += assignment.effective_margin;
        ++decision_count;

        if (scenario.delays.l_e <= 0.0) {
            actuate_assignment(assignment, now);
        } else {
            pending = assignment;
            pending_apply_t = now + scenario.delays.l_e;
        }
    }

    void run_measured() {
        const double begin = scenario.warmup_end_s();
        const double end = scenario.total_end_s();

        for (int o = 0; o < scenario.outlet_count(); ++o) monitor_meter.control_out(o, true, begin);

        account_from = begin;
        double next_sample = begin;
        double next_decision = begin;
        double now = begin;

        while (now < end) {
            double batt_empty = kInfinity;
            if (inverter_state.battery_level_wh > 0.0 && !pv_set.empty()) {
                const double tte = inverter.seconds_to_battery_empty(inverter_state, now, pv_demand_w(now));
                if (std::isfinite(tte)) {
                    batt_empty = now + tte;
                    if (batt_empty <= now) {
                        // dregs too small to advance the clock: call it empty
                        inverter_state.battery_level_wh = 0.0;
                        batt_empty = kInfinity;
                    }
                }
            }
            const double next_breakpoint = breakpoint_cursor < breakpoints.size()
                                               ? breakpoints[breakpoint_cursor]
                                               : kInfinity;

            double t_next = std::min({next_sample, next_decision, pending_apply_t, next_breakpoint,
                                      batt_empty, end});

            queue.run_until(t_next); // protocol traffic lands before state changes at t_next
            account(t_next);
            now = t_next;
            if (now >= end) break;

            if (pending_apply_t <= now && pending.has_value()) {
                actuate_assignment(*pending, now);
                pending.reset();
                pending_apply_t = kInfinity;
            }
            if (next_sample <= now) {
                process_samples(now);
                next_sample += sample_period();
            }
            if (next_decision <= now) {
                process_decision(now);
                next_decision += scenario.decision_period_s;
            }
            while (breakpoint_cursor < breakpoints.size() && breakpoints[breakpoint_cursor] <= now)
                ++breakpoint_cursor;

            check_lack(now);
        }

        account(end);
        queue.run_all(); // drain in-flight frames so logs and mirrors settle
    }

    void finalize() {
        result.policy_name = policy_kind_name(scenario.policy.kind);
        result.slots = scenario.slots.slots_per_day;
        if (scenario.policy.has_fixed_margin())
            result.margin = scenario.policy.margin;
        else
            result.margin = decision_count > 0 ? margin_sum / decision_count : scenario.policy.margin_min;

        result.total_consumption_wh = consumption_wh;
        result.total_production_wh = production_wh;
        result.self_consumed_wh = self_consumed_wh;
        result.grid_served_wh = grid_served_wh;
        result.saving_percent = consumption_wh > 0.0 ? 100.0 * self_consumed_wh / consumption_wh : 0.0;
        result.saving_vs_production_percent =
            production_wh > 0.0 ? 100.0 * self_consumed_wh / production_wh : 0.0;
        result.error_count = error_count;
        result.switch_count = switch_count;
    }
};

Simulation::Simulation(const Scenario& scenario) : impl_(std::make_unique<Impl>(scenario)) {}
Simulation::~Simulation() = default;

const MetricsReport& Simulation::run() {
    if (!impl_->ran) {
        impl_->run_warmup();
        impl_->collect_breakpoints();
        impl_->run_measured();
        impl_->finalize();
        impl_->ran = true;
        log_info("sim: " + impl_->result.policy_name + " finished with " +
                 std::to_string(impl_->result.error_count) + " energy lacks");
    }
    return impl_->result;
}

const MetricsReport& Simulation::report() const {
    if (!impl_->ran) throw std::logic_error("sim: report requested before run");
    return impl_->result;
}

const std::vector<EnergyLackEvent>& Simulation::lack_events() const { return impl_->lacks; }
const OutletSlotStats& Simulation::stats() const { return impl_->slot_stats; }

void Simulation::export_bus_log(std::ostream& out) const { impl_->bus.export_log(out); }
void Simulation::export_history(std::ostream& out) const { impl_->gateway.export_history(out); }
void Simulation::export_stats(std::ostream& out) const { impl_->slot_stats.export_csv(out); }

void Simulation::export_lacks(std::ostream& out) const {
    out << "time_s,pv_demand_w,available_w\n";
    char buf[96];
    for (const auto& lack : impl_->lacks) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.3f,%.3f\n", lack.time_s, lack.pv_demand_w,
                      lack.available_w);
        out << buf;
    }
}

MetricsReport run_scenario(const Scenario& scenario) {
    Simulation sim(scenario);
    return sim.run();
}

std::vector<MetricsReport> sweep(const Scenario& scenario, std::vector<double> margins) {
    if (!scenario.policy.has_fixed_margin())
        throw std::invalid_argument("sim: sweep requires a fixed-margin policy (naive or static)");
    std::sort(margins.begin(), margins.end());
    std::vector<MetricsReport> rows;
    for (double margin : margins) {
        Scenario variant = scenario;
        variant.policy.margin = margin;
        variant.policy.validate();
        rows.push_back(run_scenario(variant));
    }
    return rows;
}

void write_report_csv(std::ostream& out, std::span<const MetricsReport> reports) {
    out << "margin,policy,slots,saving_percent,error_count,switch_count\n";
    char buf[160];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "%.4f,%s,%d,%.4f,%d,%d\n", r.margin, r.policy_name.c_str(),
                      r.slots, r.saving_percent, r.error_count, r.switch_count);
        out << buf;
    }
}

void write_summary(std::ostream& out, const MetricsReport& report,
                   const std::vector<EnergyLackEvent>& lacks) {
    char buf[256];
    out << "policy: " << report.policy_name << "\n";
    std::snprintf(buf, sizeof(buf), "margin: %.4f\n", report.margin);
    out << buf;
    out << "slots_per_day: " << report.slots << "\n";
    std::snprintf(buf, sizeof(buf), "total_consumption_wh: %.3f\n", report.total_consumption_wh);
    out << buf;
    std::snprintf(buf, sizeof(buf), "total_production_wh: %.3f\n", report.total_production_wh);
    out << buf;
    std::snprintf(buf, sizeof(buf), "self_consumed_wh: %.3f\n", report.self_consumed_wh);
    out << buf;
    std::snprintf(buf, sizeof(buf), "grid_served_wh: %.3f\n", report.grid_served_wh);
    out << buf;
    out << "saving_basis: total consumption (production-based figure reported alongside)\n";
    std::snprintf(buf, sizeof(buf), "saving_percent: %.4f\n", report.saving_percent);
    out << buf;
    std::snprintf(buf, sizeof(buf), "saving_vs_production_percent: %.4f\n",
                  report.saving_vs_production_percent);
    out << buf;
    out << "error_count: " << report.error_count << "\n";
    out << "switch_count: " << report.switch_count << "\n";
    if (!lacks.empty()) {
        out << "lack_events:\n";
        for (const auto& lack : lacks) {
            std::snprintf(buf, sizeof(buf), "  t=%.3f demand=%.1fW available=%.1fW\n", lack.time_s,
                          lack.pv_demand_w, lack.available_w);
            out << buf;
        }
    }
}

} // namespace oswitch
