#include "oswitch/scenario.hpp"

#include <filesystem>
#include <stdexcept>

namespace oswitch {

void DelayModel::validate() const {
    if (l_r < 0.0 || l_p < 0.0 || l_e < 0.0)
        throw std::domain_error("scenario: delay components must be >= 0");
}

void Scenario::validate() const {
    if (outlet_traces.empty()) throw std::runtime_error("scenario: no outlet traces");
    if (bindings.size() != outlet_traces.size())
        throw std::runtime_error("scenario: binding/trace count mismatch");
    if (outlet_traces.size() > static_cast<std::size_t>(MeterUnit::kOutputCount))
        throw std::runtime_error("scenario: more outlets than meter channels");
    if (duration_s <= 0.0) throw std::domain_error("scenario: duration must be > 0");
    if (decision_period_s <= 0.0) throw std::domain_error("scenario: decision period must be > 0");
    if (warmup_days < 0) throw std::domain_error("scenario: warmup days must be >= 0");
    if (cooldown_s < 0.0) throw std::domain_error("scenario: cooldown must be >= 0");
    delays.validate();
    policy.validate();
    inverter.validate();
    if (slots.slots_per_day <= 0) throw std::domain_error("scenario: slots per day must be > 0");

    // trace gaps surface here, never mid-run
    const double end = total_end_s();
    for (std::size_t o = 0; o < outlet_traces.size(); ++o) {
        const StepSeries& t = outlet_traces[o];
        if (t.empty() || t.start_time() > 0.0)
            throw std::runtime_error("scenario: outlet " + std::to_string(o) +
                                     " trace does not cover time 0");
        (void)end; // LOCF holds the last value, so coverage to `end` is implied
    }
    if (pv_dc_trace.empty() || pv_dc_trace.start_time() > 0.0)
        throw std::runtime_error("scenario: pv trace does not cover time 0");
}

namespace {

NotificationMode parse_notify(const ConfigFile& cfg) {
    const std::string mode = cfg.get_or("traces", "notify_mode", "abs_delta");
    const double param = cfg.get_double_or("traces", "notify_param", 5.0);
    if (mode == "interval") return NotificationMode::interval(param);
    if (mode == "abs_delta") return NotificationMode::absolute_delta(param);
    if (mode == "pct_delta") return NotificationMode::percent_delta(param);
    throw std::runtime_error("scenario: notify_mode must be interval|abs_delta|pct_delta");
}

} // namespace

Scenario Scenario::load(const std::string& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw std::runtime_error("scenario file not found: " + path);
    const ConfigFile cfg = ConfigFile::parse_file(path);
    return from_config(cfg, fs::path(path).parent_path().string());
}

Scenario Scenario::from_config(const ConfigFile& cfg, const std::string& base_dir) {
    namespace fs = std::filesystem;
    auto resolve = [&base_dir](const std::string& p) {
        fs::path path(p);
        if (path.is_absolute() || base_dir.empty()) return p;
        return (fs::path(base_dir) / path).string();
    };

    Scenario sc;

    sc.duration_s = cfg.get_double_or("run", "duration_s", 86400.0);
    sc.decision_period_s = cfg.get_double_or("run", "decision_period_s", 30.0);
    sc.warmup_days = static_cast<int>(cfg.get_long_or("run", "warmup_days", 7));
    sc.cooldown_s = cfg.get_double_or("run", "cooldown_s", 60.0);
    sc.seed = static_cast<std::uint64_t>(cfg.get_long_or("run", "seed", 0));
    sc.nominal_voltage_v = cfg.get_double_or("run", "nominal_voltage_v", 230.0);
    sc.meter_self_draw_w = cfg.get_double_or("run", "meter_self_draw_w", 2.0);

    sc.inverter.max_output_w = cfg.get_double_or("inverter", "max_output_w", 800.0);
    sc.inverter.dc_capacity_w = cfg.get_double_or("inverter", "dc_capacity_w", 220.0);
    sc.inverter.conversion_efficiency = cfg.get_double_or("inverter", "conversion_efficiency", 0.9);
    sc.inverter.battery_capacity_wh = cfg.get_double_or("inverter", "battery_capacity_wh", 600.0);
    sc.inverter.battery_efficiency = cfg.get_double_or("inverter", "battery_efficiency", 0.9);

    sc.delays.l_r = cfg.get_double_or("delays", "l_r", 1.0);
    sc.delays.l_p = cfg.get_double_or("delays", "l_p", 0.001);
    sc.delays.l_e = cfg.get_double_or("delays", "l_e", 0.01);

    sc.policy.kind = policy_kind_from_name(cfg.get_or("policy", "policy", "naive"));
    sc.policy.margin = cfg.get_double_or("policy", "margin", 0.0);
    sc.policy.threshold_w2 = cfg.get_double_or("policy", "threshold_w2", 100.0);
    sc.policy.threshold_ratio = cfg.get_double_or("policy", "threshold_ratio", 1.0);
    sc.policy.margin_min = cfg.get_double_or("policy", "margin_min", 0.05);
    sc.policy.margin_max = cfg.get_double_or("policy", "margin_max", 0.40);
    sc.policy.eligibility_cut = cfg.get_double_or("policy", "eligibility_cut", 0.5);

    sc.slots.slots_per_day = static_cast<int>(cfg.get_long_or("slots", "slots_per_day", 48));

    sc.notify = parse_notify(cfg);

    if (cfg.has("traces", "generate")) {
        TraceGenSpec spec = TraceGenSpec::load(resolve(cfg.get("traces", "generate")));
        const std::uint64_t seed = sc.seed != 0 ? sc.seed : spec.seed;
        sc.seed = seed;
        GeneratedTraces generated = generate_traces(spec, seed);
        sc.outlet_traces = std::move(generated.outlets);
        sc.pv_dc_trace = std::move(generated.pv_dc);
        for (const auto& o : spec.outlets)
            sc.bindings.push_back(OutletBinding{o.name, o.interruptible, o.power_factor});
    } else {
        sc.outlet_traces = load_outlet_traces(resolve(cfg.get("traces", "outlets")));
        sc.pv_dc_trace = load_pv_trace(resolve(cfg.get("inverter", "pv_trace")));
        for (std::size_t o = 0; o < sc.outlet_traces.size(); ++o)
            sc.bindings.push_back(OutletBinding{"outlet" + std::to_string(o), true, 1.0});
    }

    sc.validate();
    return sc;
}

DeviceRegistry Scenario::build_registry() const {
    DeviceRegistry reg;
    for (std::size_t o = 0; o < bindings.size(); ++o) {
        reg.add(RegistryEntry{bindings[o].name, 1, static_cast<int>(o), ChannelKind::Output,
                              bindings[o].interruptible});
        reg.add(RegistryEntry{"pvswitch" + std::to_string(o), 2, static_cast<int>(o), ChannelKind::Output,
                              false});
    }
    return reg;
}

} // namespace oswitch
