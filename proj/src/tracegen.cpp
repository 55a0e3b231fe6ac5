#include "oswitch/tracegen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oswitch {

namespace {

// splitmix64: tiny, stable across platforms, good enough for trace shaping
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return std::ldexp(static_cast<double>(next_u64()), -64); } // [0,1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

double round_milli(double v) {
    return std::round(v * 1000.0) / 1000.0;
}

// appends a value change, skipping no-op repeats
void emit(StepSeries& s, double t, double v) {
    v = round_milli(v);
    if (!s.empty() && s.values().back() == v) return;
    if (!s.empty() && !(t > s.times().back())) return;
    s.append(t, v);
}

StepSeries gen_fridge(const OutletSpec& spec, double horizon_s, Rng rng) {
    StepSeries s;
    s.append(0.0, 0.0);
    double t = 1.0 + rng.uniform(0.0, spec.period_min * 60.0); // random phase
    const double jitter = spec.jitter_pct / 100.0;
    while (t < horizon_s) {
        const double period = spec.period_min * 60.0 * rng.uniform(1.0 - jitter, 1.0 + jitter);
        const double on_span = period * spec.duty;
        emit(s, t, spec.power_w);
        if (t + on_span >= horizon_s) break;
        emit(s, t + on_span, 0.0);
        t += period;
    }
    return s;
}

StepSeries gen_steady(const OutletSpec& spec, double horizon_s, Rng rng) {
    StepSeries s;
    if (spec.on_hour > 0.0) s.append(0.0, 0.0);
    const int days = static_cast<int>(std::ceil(horizon_s / 86400.0));
    for (int day = 0; day < days; ++day) {
        const double day_start = day * 86400.0;
        const double on_t = day_start + spec.on_hour * 3600.0;
        const double off_t = day_start + spec.off_hour * 3600.0;
        double t = on_t;
        if (t >= horizon_s) break;
        if (spec.noise_w <= 0.0 || spec.noise_period_s <= 0.0) {
            if (s.empty())
                s.append(t, spec.power_w);
            else
                emit(s, t, spec.power_w);
        } else {
            while (t < std::min(off_t, horizon_s)) {
                const double level = std::max(0.0, spec.power_w + rng.uniform(-spec.noise_w, spec.noise_w));
                if (s.empty())
                    s.append(t, round_milli(level));
                else
                    emit(s, t, level);
                t += spec.noise_period_s;
            }
        }
        if (off_t < std::min(day_start + 86400.0, horizon_s)) emit(s, off_t, 0.0);
    }
    if (s.empty()) s.append(0.0, 0.0);
    return s;
}

StepSeries gen_spiky(const OutletSpec& spec, double horizon_s, Rng rng) {
    StepSeries s;
    s.append(0.0, spec.base_w);
    const int days = static_cast<int>(std::ceil(horizon_s / 86400.0));
    const double window_s = (spec.spike_end_hour - spec.spike_start_hour) * 3600.0;
    for (int day = 0; day < days; ++day) {
        const double day_start = day * 86400.0;
        const int count = static_cast<int>(spec.spikes_per_day);
        // fractional part realized as a bernoulli extra spike
        const int extra = rng.uniform() < spec.spikes_per_day - count ? 1 : 0;
        std::vector<double> starts;
        for (int i = 0; i < count + extra; ++i)
            starts.push_back(day_start + spec.spike_start_hour * 3600.0 + rng.uniform() * window_s);
        std::sort(starts.begin(), starts.end());
        for (double start : starts) {
            const double len = spec.spike_len_min * 60.0 * rng.uniform(0.6, 1.4);
            const double magnitude = spec.spike_w * rng.uniform(0.8, 1.2);
            if (start >= horizon_s) continue;
            if (!s.empty() && start <= s.times().back()) continue; // overlapping spikes merge
            emit(s, start, spec.base_w + magnitude);
            if (start + len < horizon_s) emit(s, start + len, spec.base_w);
        }
    }
    return s;
}

StepSeries gen_pv(const PvSpec& spec, double horizon_s, Rng rng) {
    StepSeries s;
    s.append(0.0, 0.0);
    const double sunrise = spec.sunrise_hour * 3600.0;
    const double sunset = spec.sunset_hour * 3600.0;
    const double daylight = sunset - sunrise;
    if (daylight <= 0.0) throw std::domain_error("tracegen: sunset must be after sunrise");

    for (double t = 0.0; t < horizon_s; t += spec.step_s) {
        const double tod = std::fmod(t, 86400.0);
        double dc = 0.0;
        if (tod >= sunrise && tod <= sunset) {
            const double x = (tod - sunrise) / daylight;
            dc = spec.peak_dc_w * std::pow(std::sin(std::numbers::pi * x), 1.3);
            if (spec.noise_pct > 0.0)
                dc *= 1.0 + rng.uniform(-spec.noise_pct, spec.noise_pct) / 100.0;
            if (dc < 0.0) dc = 0.0;
        }
        emit(s, t, dc);
    }
    return s;
}

Archetype archetype_from_name(const std::string& name) {
    if (name == "fridge") return Archetype::Fridge;
    if (name == "steady") return Archetype::Steady;
    if (name == "spiky") return Archetype::Spiky;
    throw std::invalid_argument("tracegen: unknown archetype: " + name);
}

} // namespace

TraceGenSpec TraceGenSpec::load(const std::string& path) {
    return from_config(ConfigFile::parse_file(path));
}

TraceGenSpec TraceGenSpec::from_config(const ConfigFile& cfg) {
    TraceGenSpec spec;
    spec.days = static_cast<int>(cfg.get_long_or("general", "days", 8));
    spec.seed = static_cast<std::uint64_t>(cfg.get_long_or("general", "seed", 1));
    if (spec.days <= 0) throw std::domain_error("tracegen: days must be > 0");

    spec.pv.peak_dc_w = cfg.get_double_or("pv", "peak_dc_w", 220.0);
    spec.pv.sunrise_hour = cfg.get_double_or("pv", "sunrise_hour", 6.5);
    spec.pv.sunset_hour = cfg.get_double_or("pv", "sunset_hour", 18.5);
    spec.pv.noise_pct = cfg.get_double_or("pv", "noise_pct", 2.0);
    spec.pv.step_s = cfg.get_double_or("pv", "step_s", 60.0);

    for (int i = 0;; ++i) {
        const std::string section = "outlet " + std::to_string(i);
        if (!cfg.has_section(section)) break;
        OutletSpec o;
        o.archetype = archetype_from_name(cfg.get(section, "archetype"));
        o.name = cfg.get_or(section, "name", "outlet" + std::to_string(i));
        o.interruptible = cfg.get_long_or(section, "interruptible", 1) != 0;
        o.power_factor = cfg.get_double_or(section, "power_factor", 1.0);

        o.power_w = cfg.get_double_or(section, "power_w", o.power_w);
        o.period_min = cfg.get_double_or(section, "period_min", o.period_min);
        o.duty = cfg.get_double_or(section, "duty", o.duty);
        o.jitter_pct = cfg.get_double_or(section, "jitter_pct", o.jitter_pct);

        o.noise_w = cfg.get_double_or(section, "noise_w", o.noise_w);
        o.noise_period_s = cfg.get_double_or(section, "noise_period_s", o.noise_period_s);
        o.on_hour = cfg.get_double_or(section, "on_hour", o.on_hour);
        o.off_hour = cfg.get_double_or(section, "off_hour", o.off_hour);

        o.base_w = cfg.get_double_or(section, "base_w", o.base_w);
        o.spike_w = cfg.get_double_or(section, "spike_w", o.spike_w);
        o.spikes_per_day = cfg.get_double_or(section, "spikes_per_day", o.spikes_per_day);
        o.spike_len_min = cfg.get_double_or(section, "spike_len_min", o.spike_len_min);
        o.spike_start_hour = cfg.get_double_or(section, "spike_start_hour", o.spike_start_hour);
        o.spike_end_hour = cfg.get_double_or(section, "spike_end_hour", o.spike_end_hour);

        spec.outlets.push_back(o);
    }
    if (spec.outlets.empty()) throw std::runtime_error("tracegen: no [outlet N] sections found");
    return spec;
}

GeneratedTraces generate_traces(const TraceGenSpec& spec, std::uint64_t seed_override) {
    const std::uint64_t seed = seed_override != 0 ? seed_override : spec.seed;
    const double horizon_s = spec.days * 86400.0;

    GeneratedTraces out;
    for (std::size_t i = 0; i < spec.outlets.size(); ++i) {
        // per-outlet substream so adding outlets never perturbs the others
        Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (i + 1)));
        const OutletSpec& o = spec.outlets[i];
        switch (o.archetype) {
        case Archetype::Fridge: out.outlets.push_back(gen_fridge(o, horizon_s, rng)); break;
        case Archetype::Steady: out.outlets.push_back(gen_steady(o, horizon_s, rng)); break;
        case Archetype::Spiky: out.outlets.push_back(gen_spiky(o, horizon_s, rng)); break;
        }
    }
    out.pv_dc = gen_pv(spec.pv, horizon_s, Rng(seed ^ 0xa5a5a5a5a5a5a5a5ull));
    return out;
}

} // namespace oswitch
