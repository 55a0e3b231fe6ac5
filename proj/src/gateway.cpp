#include "oswitch/gateway.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oswitch/csvio.hpp"
#include "oswitch/log.hpp"

namespace oswitch {

void DeviceRegistry::add(const RegistryEntry& entry) {
    if (entry.name.empty()) throw std::invalid_argument("registry: device name must not be empty");
    if (by_name_.count(entry.name) != 0)
        throw std::invalid_argument("registry: duplicate device name: " + entry.name);
    by_name_.emplace(entry.name, entries_.size());
    entries_.push_back(entry);
}

const RegistryEntry& DeviceRegistry::lookup(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::invalid_argument("registry: unknown device name: " + name);
    return entries_[it->second];
}

bool DeviceRegistry::has(const std::string& name) const {
    return by_name_.count(name) != 0;
}

std::string DeviceRegistry::name_of(BusAddress address, int channel, ChannelKind kind) const {
    for (const auto& e : entries_) {
        if (e.address == address && e.channel == channel && e.kind == kind) return e.name;
    }
    return {};
}

void DeviceRegistry::save(std::ostream& out) const {
    out << "name,address,channel,kind,interruptible\n";
    for (const auto& e : entries_) {
        out << e.name << ',' << static_cast<int>(e.address) << ',' << e.channel << ','
            << (e.kind == ChannelKind::Output ? "out" : "in") << ',' << (e.interruptible ? 1 : 0) << '\n';
    }
}

DeviceRegistry DeviceRegistry::load(std::istream& in) {
    DeviceRegistry reg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("name,", 0) == 0) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw std::runtime_error("registry: bad row at line " + std::to_string(lineno));
        RegistryEntry e;
        e.name = fields[0];
        e.address = static_cast<BusAddress>(parse_long(fields[1], "address"));
        e.channel = static_cast<int>(parse_long(fields[2], "channel"));
        if (fields[3] == "out")
            e.kind = ChannelKind::Output;
        else if (fields[3] == "in")
            e.kind = ChannelKind::Input;
        else
            throw std::runtime_error("registry: kind must be in|out at line " + std::to_string(lineno));
        e.interruptible = parse_long(fields[4], "interruptible") != 0;
        reg.add(e);
    }
    return reg;
}

DeviceRegistry DeviceRegistry::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("registry: cannot open file: " + path);
    return load(in);
}

Gateway::Gateway(Bus& bus, DeviceRegistry registry, double nominal_voltage_v)
    : bus_(bus), registry_(std::move(registry)), nominal_voltage_v_(nominal_voltage_v) {
    bus_.attach(kGatewayAddress, [this](double time, const BusFrame& frame) { handle_frame(time, frame); });
}

void Gateway::send_command(const std::string& name, bool on, double now) {
    const RegistryEntry& entry = registry_.lookup(name);
    if (entry.kind != ChannelKind::Output)
        throw std::invalid_argument("gateway: cannot command input channel: " + name);
    bus_.transmit(make_control_out(kGatewayAddress, entry.address, entry.channel, on), now);
}

std::optional<bool> Gateway::mirrored_state(const std::string& name) const {
    const RegistryEntry& entry = registry_.lookup(name);
    return mirrored_state(entry.address, entry.channel, entry.kind);
}

std::optional<bool> Gateway::mirrored_state(BusAddress address, int channel, ChannelKind kind) const {
    const auto& table = kind == ChannelKind::Output ? mirrored_outputs_ : mirrored_inputs_;
    auto it = table.find(ChannelKey{address, channel});
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool Gateway::known_address(BusAddress address) const {
    if (address == kGatewayAddress) return true;
    for (const auto& e : registry_.entries())
        if (e.address == address) return true;
    return false;
}

void Gateway::handle_frame(double time, const BusFrame& frame) {
    ++processed_frames_; // the supervisor discards nothing

    if (!known_address(frame.sender)) {
        ++unknown_address_frames_;
        log_warn("gateway: frame from unregistered address " + std::to_string(frame.sender));
        return;
    }

    switch (frame.kind) {
    case FrameKind::OutVariation: {
        const auto& var = std::get<VariationPayload>(frame.payload);
        mirrored_outputs_[ChannelKey{frame.sender, var.channel}] = var.state;
        push(PushEvent{PushEvent::Kind::StateChanged, time, frame.sender, var.channel, ChannelKind::Output,
                       var.state, {}});
        break;
    }
    case FrameKind::InVariation: {
        const auto& var = std::get<VariationPayload>(frame.payload);
        mirrored_inputs_[ChannelKey{frame.sender, var.channel}] = var.state;
        push(PushEvent{PushEvent::Kind::StateChanged, time, frame.sender, var.channel, ChannelKind::Input,
                       var.state, {}});
        break;
    }
    case FrameKind::StateReply: {
        const auto& reply = std::get<StateReplyPayload>(frame.payload);
        auto& table = reply.kind == ChannelKind::Output ? mirrored_outputs_ : mirrored_inputs_;
        table[ChannelKey{frame.sender, reply.channel}] = reply.state;
        break;
    }
    case FrameKind::PowerVariation:
    case FrameKind::MeasureReply:
        store_measure(time, frame.sender, std::get<MeasurePayload>(frame.payload));
        break;
    default:
        break; // commands/requests originate here; nothing to mirror
    }
}

void Gateway::store_measure(double time, BusAddress address, const MeasurePayload& payload) {
    const MeasureSample& s = payload.values;

    DerivedMeasures d;
    // sub-quantization currents read as 0 on the wire; fall back to the
    // nominal mains voltage instead of dividing by zero
    d.voltage_v = s.current_a > 0.0 ? s.apparent_va / s.current_a : nominal_voltage_v_;
    d.active_w = s.apparent_va * s.power_factor;
    const double pf = s.power_factor;
    d.reactive_var = s.apparent_va * std::sqrt(std::max(0.0, (1.0 - pf) * (1.0 + pf)));

    auto& rows = history_[ChannelKey{address, payload.channel}];
    if (!rows.empty() && !(time > rows.back().time_s)) return; // keep timestamps strictly increasing
    rows.push_back(HistoryRow{time, s, d, payload.averaged});

    push(PushEvent{PushEvent::Kind::MeasureStored, time, address, payload.channel, ChannelKind::Output, false,
                   s});
}

const std::vector<HistoryRow>* Gateway::history(BusAddress address, int channel) const {
    auto it = history_.find(ChannelKey{address, channel});
    if (it == history_.end()) return nullptr;
    return &it->second;
}

std::vector<HistoryBucket> Gateway::query_history(const std::string& name, double t0, double t1,
                                                  double resolution_s) const {
    if (!(t0 < t1)) throw std::invalid_argument("gateway: query requires t0 < t1");
    if (!(resolution_s > 0.0)) throw std::invalid_argument("gateway: query resolution must be > 0");

    const RegistryEntry& entry = registry_.lookup(name);
    const std::vector<HistoryRow>* rows = history(entry.address, entry.channel);

    std::vector<HistoryBucket> buckets;
    for (double bucket_start = t0; bucket_start < t1; bucket_start += resolution_s) {
        const double bucket_end = std::min(bucket_start + resolution_s, t1);
        double w_active = 0.0;
        double w_apparent = 0.0;
        double w_pf = 0.0;

        if (rows != nullptr && !rows->empty()) {
            // walk the LOCF segments overlapping this bucket; value is zero
            // before the first stored sample
            std::size_t i = 0;
            while (i < rows->size() && (*rows)[i].time_s <= bucket_start) ++i;
            // i is now the first row strictly inside the bucket; the carried
            // value comes from row i-1 when it exists
            double cursor = bucket_start;
            std::size_t held = i; // rows[held-1] is in effect at cursor
            while (cursor < bucket_end) {
                const double next_change =
                    held < rows->size() ? std::min((*rows)[held].time_s, bucket_end) : bucket_end;
                const double span = next_change - cursor;
                if (held > 0) {
                    const HistoryRow& r = (*rows)[held - 1];
                    w_active += r.derived.active_w * span;
                    w_apparent += r.sample.apparent_va * span;
                    w_pf += r.sample.power_factor * span;
                }
                cursor = next_change;
                if (held < rows->size() && (*rows)[held].time_s <= cursor) ++held;
            }
        }

        const double width = bucket_end - bucket_start;
        buckets.push_back(HistoryBucket{bucket_start, w_active / width, w_apparent / width, w_pf / width});
    }
    return buckets;
}

int Gateway::subscribe(PushCallback cb) {
    const int id = next_subscriber_++;
    subscribers_.emplace(id, std::move(cb));
    return id;
}

void Gateway::unsubscribe(int id) {
    subscribers_.erase(id);
}

void Gateway::push(const PushEvent& event) {
    for (auto& [id, cb] : subscribers_) cb(event);
}

void Gateway::export_history(std::ostream& out) const {
    out << "time_s,channel,apparent_va,power_factor,current_a,active_w,reactive_var\n";
    char buf[160];
    for (const auto& [key, rows] : history_) {
        std::string channel = registry_.name_of(key.address, key.channel, ChannelKind::Output);
        if (channel.empty())
            channel = std::to_string(key.address) + ":" + std::to_string(key.channel);
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.6f,%s,%.3f,%.4f,%.4f,%.3f,%.3f\n", r.time_s, channel.c_str(),
                          r.sample.apparent_va, r.sample.power_factor, r.sample.current_a, r.derived.active_w,
                          r.derived.reactive_var);
            out << buf;
        }
    }
}

} // namespace oswitch
