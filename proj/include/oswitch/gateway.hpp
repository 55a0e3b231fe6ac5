#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oswitch/bus.hpp"
#include "oswitch/electrical.hpp"

namespace oswitch {

/// Maps logical device names onto (meter address, channel, direction). The
/// interruptible flag feeds the consumption audit.
struct RegistryEntry {
    std::string name;
    BusAddress address = 0;
    int channel = 0;
    ChannelKind kind = ChannelKind::Output;
    bool interruptible = true;
};

class DeviceRegistry {
public:
    void add(const RegistryEntry& entry); // throws on duplicate name
    const RegistryEntry& lookup(const std::string& name) const;
    bool has(const std::string& name) const;
    const std::vector<RegistryEntry>& entries() const { return entries_; }

    /// Reverse lookup of a metering point; empty string when unregistered.
    std::string name_of(BusAddress address, int channel, ChannelKind kind) const;

    /// One line per device: `name,address,channel,kind,interruptible(0|1)`.
    void save(std::ostream& out) const;
    static DeviceRegistry load(std::istream& in);
    static DeviceRegistry load_file(const std::string& path);

private:
    std::vector<RegistryEntry> entries_;
    std::map<std::string, std::size_t> by_name_;
};

struct HistoryRow {
    double time_s;
    MeasureSample sample;
    DerivedMeasures derived;
    bool averaged;
};

struct HistoryBucket {
    double bucket_time;
    double mean_active_w;
    double mean_apparent_va;
    double mean_power_factor;
};

/// Event pushed to subscribed clients whenever the gateway learns something
/// from the bus.
struct PushEvent {
    enum class Kind { StateChanged, MeasureStored };
    Kind kind;
    double time_s;
    BusAddress address;
    int channel;
    ChannelKind channel_kind;
    bool state;           // StateChanged
    MeasureSample sample; // MeasureStored
};

/// Bus supervisor and controller: processes every frame on the bus, mirrors
/// device state, stores measurement history with derived electrical
/// quantities, and issues commands by logical name.
class Gateway {
public:
    using PushCallback = std::function<void(const PushEvent&)>;

    Gateway(Bus& bus, DeviceRegistry registry, double nominal_voltage_v = 230.0);

    const DeviceRegistry& registry() const { return registry_; }

    /// Transmits a controlOut frame for a registered output. Mirrored state
    /// changes only when the resulting out-variation frame comes back.
    void send_command(const std::string& name, bool on, double now);

    std::optional<bool> mirrored_state(const std::string& name) const;
    std::optional<bool> mirrored_state(BusAddress address, int channel, ChannelKind kind) const;

    /// Bucketed history for a named channel over [t0, t1): time-weighted
    /// means under last-observation-carried-forward, zero before the first
    /// sample.
    std::vector<HistoryBucket> query_history(const std::string& name, double t0, double t1,
                                             double resolution_s) const;

    const std::vector<HistoryRow>* history(BusAddress address, int channel) const;

    int subscribe(PushCallback cb);
    void unsubscribe(int id);

    /// `time_s,channel,apparent_va,power_factor,current_a,active_w,reactive_var`
    void export_history(std::ostream& out) const;

    std::size_t processed_frames() const { return processed_frames_; }
    std::size_t unknown_address_frames() const { return unknown_address_frames_; }

private:
    struct ChannelKey {
        BusAddress address;
        int channel;
        bool operator<(const ChannelKey& o) const {
            return address != o.address ? address < o.address : channel < o.channel;
        }
    };

    void handle_frame(double time, const BusFrame& frame);
    void store_measure(double time, BusAddress address, const MeasurePayload& payload);
    void push(const PushEvent& event);
    bool known_address(BusAddress address) const;

    Bus& bus_;
    DeviceRegistry registry_;
    double nominal_voltage_v_;
    std::map<ChannelKey, bool> mirrored_outputs_;
    std::map<ChannelKey, bool> mirrored_inputs_;
    std::map<ChannelKey, std::vector<HistoryRow>> history_;
    std::map<int, PushCallback> subscribers_;
    int next_subscriber_ = 1;
    std::size_t processed_frames_ = 0;
    std::size_t unknown_address_frames_ = 0;
};

} // namespace oswitch
