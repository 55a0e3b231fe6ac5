#include "oswitch/bus.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace oswitch {

const char* frame_kind_name(FrameKind kind) {
    switch (kind) {
    case FrameKind::Command: return "command";
    case FrameKind::StateReply: return "state-reply";
    case FrameKind::MeasureReply: return "measure-reply";
    case FrameKind::InVariation: return "in-variation";
    case FrameKind::OutVariation: return "out-variation";
    case FrameKind::PowerVariation: return "power-variation";
    case FrameKind::MeasureRequest: return "measure-request";
    case FrameKind::AvgMeasureRequest: return "avg-measure-request";
    }
    return "?";
}

std::size_t BusFrame::payload_bytes() const {
    struct Sizer {
        std::size_t operator()(const CommandPayload&) const { return 3; }    // op, channel, value
        std::size_t operator()(const StateReplyPayload&) const { return 3; } // kind, channel, state
        std::size_t operator()(const VariationPayload&) const { return 2; }  // channel, state
        std::size_t operator()(const MeasurePayload&) const { return 6; }    // channel, P:2, PF:1, C:2
        std::size_t operator()(const RequestPayload&) const { return 1; }    // channel
    };
    return std::visit(Sizer{}, payload);
}

BusFrame make_control_out(BusAddress sender, BusAddress recipient, int channel, bool on) {
    return BusFrame{sender, recipient, FrameKind::Command, CommandPayload{CommandOp::SetOut, channel, on}};
}

BusFrame make_read_state(BusAddress sender, BusAddress recipient, ChannelKind kind, int channel) {
    const CommandOp op = kind == ChannelKind::Output ? CommandOp::ReadOutState : CommandOp::ReadInState;
    return BusFrame{sender, recipient, FrameKind::Command, CommandPayload{op, channel, false}};
}

BusFrame make_state_reply(BusAddress sender, BusAddress recipient, ChannelKind kind, int channel, bool state) {
    return BusFrame{sender, recipient, FrameKind::StateReply, StateReplyPayload{kind, channel, state}};
}

BusFrame make_variation(BusAddress sender, ChannelKind kind, int channel, bool state) {
    const FrameKind fk = kind == ChannelKind::Output ? FrameKind::OutVariation : FrameKind::InVariation;
    return BusFrame{sender, kGatewayAddress, fk, VariationPayload{channel, state}};
}

BusFrame make_measure_request(BusAddress sender, BusAddress recipient, int channel, bool averaged) {
    const FrameKind fk = averaged ? FrameKind::AvgMeasureRequest : FrameKind::MeasureRequest;
    return BusFrame{sender, recipient, fk, RequestPayload{channel}};
}

BusFrame make_measure_reply(BusAddress sender, BusAddress recipient, int channel, const MeasureSample& values,
                            bool averaged) {
    return BusFrame{sender, recipient, FrameKind::MeasureReply, MeasurePayload{channel, values, averaged}};
}

BusFrame make_power_variation(BusAddress sender, int channel, const MeasureSample& values) {
    return BusFrame{sender, kGatewayAddress, FrameKind::PowerVariation, MeasurePayload{channel, values, false}};
}

Bus::Bus(EventQueue& queue, BusTiming timing, std::size_t max_payload_bytes)
    : queue_(queue), timing_(timing), max_payload_bytes_(max_payload_bytes) {
    if (timing_.baud_rate <= 0.0) throw std::invalid_argument("bus: baud rate must be > 0");
    if (timing_.bits_per_byte <= 0) throw std::invalid_argument("bus: bits per byte must be > 0");
}

void Bus::attach(BusAddress address, Handler handler) {
    if (nodes_.count(address) != 0)
        throw std::invalid_argument("bus: address " + std::to_string(address) + " already attached");
    nodes_.emplace(address, std::move(handler));
}

void Bus::detach(BusAddress address) {
    nodes_.erase(address);
}

bool Bus::attached(BusAddress address) const {
    return nodes_.count(address) != 0;
}

double Bus::serialization_time(std::size_t size_bytes) const {
    return static_cast<double>(size_bytes) * timing_.bits_per_byte / timing_.baud_rate;
}

double Bus::transmit(const BusFrame& frame, double request_time) {
    if (!attached(frame.sender))
        throw std::invalid_argument("bus: sender " + std::to_string(frame.sender) + " not attached");
    if (frame.payload_bytes() > max_payload_bytes_)
        throw std::invalid_argument("bus: payload exceeds " + std::to_string(max_payload_bytes_) + " bytes");

    const double acquisition = std::max(request_time, busy_until_);
    const double delivery = acquisition + serialization_time(frame.size_bytes());
    busy_until_ = delivery;
    log_.push_back(FrameLogEntry{delivery, frame});

    const double perceive = delivery + timing_.propagation_s;
    queue_.schedule(perceive, [this, frame, perceive] {
        for (auto& [addr, handler] : nodes_) handler(perceive, frame);
    });
    return delivery;
}

void Bus::export_log(std::ostream& out) const {
    out << "time_s,sender,recipient,kind,size_bytes\n";
    char buf[64];
    for (const auto& entry : log_) {
        std::snprintf(buf, sizeof(buf), "%.6f", entry.time_s);
        out << buf << ',' << static_cast<int>(entry.frame.sender) << ','
            << static_cast<int>(entry.frame.recipient) << ',' << frame_kind_name(entry.frame.kind) << ','
            << entry.frame.size_bytes() << '\n';
    }
}

} // namespace oswitch
