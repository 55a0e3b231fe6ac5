#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oswitch/config.hpp"
#include "oswitch/trace.hpp"

namespace oswitch {

/// Synthetic outlet archetypes for desk-scale experiments.
enum class Archetype {
    Fridge, // duty-cycled compressor with period jitter
    Steady, // (windowed) constant draw with a small re-rolled wiggle
    Spiky,  // low baseline plus short random bursts
};

struct OutletSpec {
    Archetype archetype = Archetype::Steady;
    std::string name;
    bool interruptible = true;
    double power_factor = 1.0;

    // fridge
    double power_w = 80.0;
    double period_min = 20.0;
    double duty = 0.45;
    double jitter_pct = 10.0;

    // steady
    double noise_w = 0.0;
    double noise_period_s = 600.0;
    double on_hour = 0.0;
    double off_hour = 24.0;

    // spiky
    double base_w = 20.0;
    double spike_w = 300.0;
    double spikes_per_day = 8.0;
    double spike_len_min = 4.0;
    double spike_start_hour = 0.0;
    double spike_end_hour = 24.0;
};

struct PvSpec {
    double peak_dc_w = 220.0;
    double sunrise_hour = 6.5;
    double sunset_hour = 18.5;
    double noise_pct = 2.0;
    double step_s = 60.0;
};

struct TraceGenSpec {
    int days = 8;
    std::uint64_t seed = 1;
    PvSpec pv;
    std::vector<OutletSpec> outlets;

    /// Reads a trace-spec file: a [general] section, a [pv] section and one
    /// [outlet N] section per outlet.
    static TraceGenSpec load(const std::string& path);
    static TraceGenSpec from_config(const ConfigFile& cfg);
};

struct GeneratedTraces {
    std::vector<StepSeries> outlets;
    StepSeries pv_dc;
};

/// Deterministic generation: the same spec and seed produce identical
/// breakpoints and values. A seed of 0 falls back to the spec's seed.
GeneratedTraces generate_traces(const TraceGenSpec& spec, std::uint64_t seed_override = 0);

} // namespace oswitch
