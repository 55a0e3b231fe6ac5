#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "oswitch/bus.hpp"
#include "oswitch/electrical.hpp"

namespace oswitch {

/// Spontaneous-notification policy for power measurements. Exactly one mode
/// is active per unit.
struct NotificationMode {
    enum class Kind { Interval, AbsoluteDelta, PercentDelta };

    Kind kind = Kind::AbsoluteDelta;
    double param = 1.0; // period seconds / VA threshold / percent

    static NotificationMode interval(double period_s);
    static NotificationMode absolute_delta(double threshold);
    static NotificationMode percent_delta(double percent);
};

/// Per-channel notification bookkeeping: the last values put on the wire and
/// when they were sent.
struct NotifyState {
    MeasureSample last_sent;
    bool sent_any = false;
    double last_emit_time = -std::numeric_limits<double>::infinity();
};

/// Pure notification rule: decides whether `next` must be notified given the
/// mode and the channel's send history. Thresholds are strict ("overcomes").
bool should_notify(const NotificationMode& mode, const NotifyState& state, const MeasureSample& next, double now);

/// Running average of samples since the last reset.
struct AveragingAccumulator {
    double sum_p = 0.0;
    double sum_pf = 0.0;
    double sum_c = 0.0;
    std::int64_t count = 0;
    double window_start = 0.0;

    void add(const MeasureSample& s);
    MeasureSample mean() const; // requires count >= 1
    void reset(double now);
};

/// Quantization steps applied to measurements before they go on the wire.
struct WireQuant {
    double apparent_va = 1.0;
    double power_factor = 0.01;
    double current_a = 0.01;

    MeasureSample apply(const MeasureSample& s) const;
};

/// Emulated metering/actuation unit: 8 relay outputs with per-channel
/// metering and 16 dry-contact inputs. Relay state is latching: it survives
/// simulated power loss (see serialize/restore).
class MeterUnit {
public:
    static constexpr int kOutputCount = 8;
    static constexpr int kInputCount = 16;
    static constexpr double kMaxCurrentA = 16.0;

    MeterUnit(BusAddress address, NotificationMode mode, double self_draw_w = 2.0);

    /// Attaches to the bus; incoming frames addressed to this unit are
    /// processed and answered.
    void connect(Bus& bus);

    BusAddress address() const { return address_; }
    double self_draw_w() const { return self_draw_w_; }

    const NotificationMode& notify_mode() const { return notify_mode_; }
    void set_notify_mode(NotificationMode mode) { notify_mode_ = mode; }

    WireQuant wire_quant() const { return quant_; }
    void set_wire_quant(WireQuant q) { quant_ = q; }

    // -- synchronous primitives ---------------------------------------------

    /// Sets an output relay. Emits an out-variation frame only when the state
    /// actually changes. Turning a tripped channel on re-arms it.
    void control_out(int index, bool on, double now);

    bool read_state(ChannelKind kind, int index) const;

    /// Instantaneous measurement of the channel's load at the last sampling
    /// instant. Throws when the channel is tripped.
    MeasureSample read_measures(int index) const;

    /// Average since the last reset; resets the accumulator and restarts it.
    /// With an empty window, returns the instantaneous sample instead.
    MeasureSample read_avg_measures(int index, double now);

    // -- scenario/simulation hooks ------------------------------------------

    /// Drives a dry-contact input; emits an in-variation frame on change.
    void set_input(int index, bool state, double now);

    /// Feeds one true load sample into the channel: accumulates the average,
    /// checks the overload trip and evaluates the notification mode (emitting
    /// a power-variation frame on the bus when due). A channel whose relay is
    /// open observes a zero sample.
    void sample_load(int index, const MeasureSample& truth, double now);

    bool is_tripped(int index) const;
    int trip_count() const { return trip_count_; }

    // -- latching-relay persistence -----------------------------------------

    /// Relay states as a printable bit string (output 0 first).
    std::string serialize_relay_state() const;

    /// Restores relay states after a simulated power loss. Accumulators and
    /// notification history do not survive the outage.
    void restore_relay_state(const std::string& bits);

private:
    struct OutputChannel {
        bool relay_on = false;
        bool tripped = false;
        MeasureSample last_sample;
        AveragingAccumulator accumulator;
        NotifyState notify;
    };

    void on_frame(double time, const BusFrame& frame);
    void check_output_index(int index) const;
    void emit(const BusFrame& frame, double now);

    BusAddress address_;
    NotificationMode notify_mode_;
    double self_draw_w_;
    WireQuant quant_;
    std::array<OutputChannel, kOutputCount> outputs_;
    std::array<bool, kInputCount> inputs_{};
    Bus* bus_ = nullptr;
    int trip_count_ = 0;
};

} // namespace oswitch
