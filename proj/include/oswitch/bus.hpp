#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "oswitch/electrical.hpp"
#include "oswitch/eventloop.hpp"

namespace oswitch {

/// Node address on the shared serial bus. Address 0 is the gateway.
using BusAddress = std::uint8_t;
inline constexpr BusAddress kGatewayAddress = 0;

enum class FrameKind : std::uint8_t {
    Command,
    StateReply,
    MeasureReply,
    InVariation,
    OutVariation,
    PowerVariation,
    MeasureRequest,
    AvgMeasureRequest,
};

const char* frame_kind_name(FrameKind kind);

enum class ChannelKind : std::uint8_t { Input, Output };

enum class CommandOp : std::uint8_t { SetOut, ReadOutState, ReadInState };

struct CommandPayload {
    CommandOp op;
    int channel;
    bool value; // meaningful for SetOut only
};

struct StateReplyPayload {
    ChannelKind kind;
    int channel;
    bool state;
};

struct VariationPayload {
    int channel;
    bool state;
};

struct MeasurePayload {
    int channel;
    MeasureSample values; // already wire-quantized by the sender
    bool averaged;
};

struct RequestPayload {
    int channel;
};

using FramePayload =
    std::variant<CommandPayload, StateReplyPayload, VariationPayload, MeasurePayload, RequestPayload>;

/// An addressed message. The wire layout is a 4-byte header (sender,
/// recipient, kind, payload length) followed by a kind-specific payload.
struct BusFrame {
    BusAddress sender = 0;
    BusAddress recipient = 0;
    FrameKind kind = FrameKind::Command;
    FramePayload payload;

    std::size_t payload_bytes() const;
    std::size_t size_bytes() const { return 4 + payload_bytes(); }
};

BusFrame make_control_out(BusAddress sender, BusAddress recipient, int channel, bool on);
BusFrame make_read_state(BusAddress sender, BusAddress recipient, ChannelKind kind, int channel);
BusFrame make_state_reply(BusAddress sender, BusAddress recipient, ChannelKind kind, int channel, bool state);
BusFrame make_variation(BusAddress sender, ChannelKind kind, int channel, bool state);
BusFrame make_measure_request(BusAddress sender, BusAddress recipient, int channel, bool averaged);
BusFrame make_measure_reply(BusAddress sender, BusAddress recipient, int channel, const MeasureSample& values,
                            bool averaged);
BusFrame make_power_variation(BusAddress sender, int channel, const MeasureSample& values);

struct BusTiming {
    double baud_rate = 9600.0;
    int bits_per_byte = 10; // start + 8 data + stop
    double propagation_s = 0.001;
};

struct FrameLogEntry {
    double time_s; // end of the frame's medium occupation
    BusFrame frame;
};

/// Shared serial medium. Every attached node perceives every frame; frames
/// occupy the medium one at a time and are served in request order.
class Bus {
public:
    using Handler = std::function<void(double time, const BusFrame&)>;

    explicit Bus(EventQueue& queue, BusTiming timing = {}, std::size_t max_payload_bytes = 64);

    void attach(BusAddress address, Handler handler);
    void detach(BusAddress address);
    bool attached(BusAddress address) const;

    /// Queues the frame for transmission at request_time. Returns the
    /// delivery time (end of medium occupation); handlers run at delivery
    /// time plus the propagation constant.
    double transmit(const BusFrame& frame, double request_time);

    double serialization_time(std::size_t size_bytes) const;
    const BusTiming& timing() const { return timing_; }

    const std::vector<FrameLogEntry>& log() const { return log_; }

    /// One line per frame: `time_s,sender,recipient,kind,size_bytes`.
    void export_log(std::ostream& out) const;

    /// Broadcast-perceive, recipient-process rule: a node processes a frame
    /// when addressed, and the gateway processes everything.
    static bool should_process(BusAddress node, const BusFrame& frame) {
        return node == frame.recipient || node == kGatewayAddress;
    }

private:
    EventQueue& queue_;
    BusTiming timing_;
    std::size_t max_payload_bytes_;
    double busy_until_ = 0.0;
    std::map<BusAddress, Handler> nodes_;
    std::vector<FrameLogEntry> log_;
};

} // namespace oswitch
