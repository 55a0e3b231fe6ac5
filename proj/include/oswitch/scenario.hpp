#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oswitch/gateway.hpp"
#include "oswitch/inverter.hpp"
#include "oswitch/meter.hpp"
#include "oswitch/policy.hpp"
#include "oswitch/slotstats.hpp"
#include "oswitch/trace.hpp"
#include "oswitch/tracegen.hpp"

namespace oswitch {

/// End-to-end information delay of the monitoring chain: meter reading
/// period, bus propagation and decision computation time.
struct DelayModel {
    double l_r = 1.0;
    double l_p = 0.001;
    double l_e = 0.01;

    double l_monitor() const { return l_r + l_p + l_e; }
    void validate() const;
};

struct OutletBinding {
    std::string name;
    bool interruptible = true;
    double power_factor = 1.0;
};

/// A complete simulation configuration: traces (absolute time, covering the
/// warm-up days plus the measured window), device/inverter/policy settings
/// and run parameters.
struct Scenario {
    std::vector<StepSeries> outlet_traces;
    StepSeries pv_dc_trace;
    std::vector<OutletBinding> bindings;

    InverterConfig inverter;
    SlotGrid slots;
    PolicyConfig policy;
    DelayModel delays;
    NotificationMode notify = NotificationMode::absolute_delta(5.0);
    WireQuant wire_quant;

    double duration_s = 86400.0;
    double decision_period_s = 30.0;
    int warmup_days = 7;
    double cooldown_s = 60.0;
    double nominal_voltage_v = 230.0;
    double meter_self_draw_w = 2.0;
    std::uint64_t seed = 1;

    int outlet_count() const { return static_cast<int>(outlet_traces.size()); }
    double warmup_end_s() const { return warmup_days * 86400.0; }
    double total_end_s() const { return warmup_end_s() + duration_s; }

    /// Checks trace coverage and parameter sanity; throws on violations.
    void validate() const;

    /// Loads a scenario file ([run], [inverter], [delays], [policy], [slots],
    /// [traces] sections). Trace files referenced inside are resolved
    /// relative to the scenario file's directory; alternatively a
    /// `generate = <tracespec>` key produces traces in-memory.
    static Scenario load(const std::string& path);
    static Scenario from_config(const ConfigFile& cfg, const std::string& base_dir);

    /// Registry exposed to the gateway and the audit: one `outletN` output
    /// entry per monitored channel plus one `pvswitchN` entry per source
    /// relay.
    DeviceRegistry build_registry() const;
};

} // namespace oswitch
