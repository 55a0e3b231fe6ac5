#include "oswitch/meter.hpp"

#include <cmath>
#include <stdexcept>

namespace oswitch {

NotificationMode NotificationMode::interval(double period_s) {
    if (period_s <= 0.0) throw std::domain_error("meter: notification period must be > 0");
    return NotificationMode{Kind::Interval, period_s};
}

NotificationMode NotificationMode::absolute_delta(double threshold) {
    if (threshold <= 0.0) throw std::domain_error("meter: notification threshold must be > 0");
    return NotificationMode{Kind::AbsoluteDelta, threshold};
}

NotificationMode NotificationMode::percent_delta(double percent) {
    if (percent <= 0.0 || percent > 100.0)
        throw std::domain_error("meter: notification percentage must be in (0,100]");
    return NotificationMode{Kind::PercentDelta, percent};
}

namespace {

bool exceeds_percent(double last, double next, double percent) {
    if (last == 0.0) return next != 0.0; // no reference value yet: any change counts
    return std::abs(next - last) > (percent / 100.0) * std::abs(last);
}

} // namespace

bool should_notify(const NotificationMode& mode, const NotifyState& state, const MeasureSample& next, double now) {
    switch (mode.kind) {
    case NotificationMode::Kind::Interval:
        return now - state.last_emit_time >= mode.param;
    case NotificationMode::Kind::AbsoluteDelta: {
        if (!state.sent_any) return true;
        const MeasureSample& last = state.last_sent;
        return std::abs(next.apparent_va - last.apparent_va) > mode.param ||
               std::abs(next.power_factor - last.power_factor) > mode.param ||
               std::abs(next.current_a - last.current_a) > mode.param;
    }
    case NotificationMode::Kind::PercentDelta: {
        if (!state.sent_any) return true;
        const MeasureSample& last = state.last_sent;
        return exceeds_percent(last.apparent_va, next.apparent_va, mode.param) ||
               exceeds_percent(last.power_factor, next.power_factor, mode.param) ||
               exceeds_percent(last.current_a, next.current_a, mode.param);
    }
    }
    return false;
}

void AveragingAccumulator::add(const MeasureSample& s) {
    sum_p += s.apparent_va;
    sum_pf += s.power_factor;
    sum_c += s.current_a;
    ++count;
}

MeasureSample AveragingAccumulator::mean() const {
    if (count < 1) throw std::logic_error("meter: mean of empty accumulator");
    const double n = static_cast<double>(count);
    return MeasureSample{sum_p / n, sum_pf / n, sum_c / n};
}

void AveragingAccumulator::reset(double now) {
    sum_p = sum_pf = sum_c = 0.0;
    count = 0;
    window_start = now;
}

namespace {

double quantize_step(double value, double step) {
    if (step <= 0.0) return value;
    return std::round(value / step) * step;
}

} // namespace

MeasureSample WireQuant::apply(const MeasureSample& s) const {
    MeasureSample q;
    q.apparent_va = quantize_step(s.apparent_va, apparent_va);
    q.power_factor = quantize_step(s.power_factor, power_factor);
    q.current_a = quantize_step(s.current_a, current_a);
    // quantization must not break the zero-current invariant
    if (q.current_a == 0.0 && q.apparent_va != 0.0) q.current_a = current_a;
    return q;
}

MeterUnit::MeterUnit(BusAddress address, NotificationMode mode, double self_draw_w)
    : address_(address), notify_mode_(mode), self_draw_w_(self_draw_w) {
    if (self_draw_w_ < 0.0) throw std::domain_error("meter: self draw must be >= 0");
}

void MeterUnit::connect(Bus& bus) {
    bus.attach(address_, [this](double time, const BusFrame& frame) { on_frame(time, frame); });
    bus_ = &bus;
}

void MeterUnit::check_output_index(int index) const {
    if (index < 0 || index >= kOutputCount)
        throw std::out_of_range("meter: output index out of range: " + std::to_string(index));
}

void MeterUnit::emit(const BusFrame& frame, double now) {
    if (bus_ != nullptr) bus_->transmit(frame, now);
}

void MeterUnit::control_out(int index, bool on, double now) {
    check_output_index(index);
    OutputChannel& ch = outputs_[static_cast<std::size_t>(index)];
    if (on) ch.tripped = false; // explicit re-arm after a trip
    if (ch.relay_on == on) return;
    ch.relay_on = on;
    emit(make_variation(address_, ChannelKind::Output, index, on), now);
}

bool MeterUnit::read_state(ChannelKind kind, int index) const {
    if (kind == ChannelKind::Output) {
        check_output_index(index);
        return outputs_[static_cast<std::size_t>(index)].relay_on;
    }
    if (index < 0 || index >= kInputCount)
        throw std::out_of_range("meter: input index out of range: " + std::to_string(index));
    return inputs_[static_cast<std::size_t>(index)];
}

MeasureSample MeterUnit::read_measures(int index) const {
    check_output_index(index);
    const OutputChannel& ch = outputs_[static_cast<std::size_t>(index)];
    if (ch.tripped) throw std::runtime_error("meter: channel " + std::to_string(index) + " is tripped");
    if (!ch.relay_on) return MeasureSample{0.0, 1.0, 0.0};
    return ch.last_sample;
}

MeasureSample MeterUnit::read_avg_measures(int index, double now) {
    check_output_index(index);
    OutputChannel& ch = outputs_[static_cast<std::size_t>(index)];
    if (ch.tripped) throw std::runtime_error("meter: channel " + std::to_string(index) + " is tripped");
    MeasureSample result;
    if (ch.accumulator.count > 0) {
        result = ch.accumulator.mean();
    } else {
        result = ch.relay_on ? ch.last_sample : MeasureSample{0.0, 1.0, 0.0};
    }
    ch.accumulator.reset(now);
    return result;
}

void MeterUnit::set_input(int index, bool state, double now) {
    if (index < 0 || index >= kInputCount)
        throw std::out_of_range("meter: input index out of range: " + std::to_string(index));
    if (inputs_[static_cast<std::size_t>(index)] == state) return;
    inputs_[static_cast<std::size_t>(index)] = state;
    emit(make_variation(address_, ChannelKind::Input, index, state), now);
}

void MeterUnit::sample_load(int index, const MeasureSample& truth, double now) {
    check_output_index(index);
    OutputChannel& ch = outputs_[static_cast<std::size_t>(index)];

    // open relay: the circuit draws nothing, whatever the load would want
    const MeasureSample observed = ch.relay_on && !ch.tripped ? truth : MeasureSample{0.0, 1.0, 0.0};

    if (ch.relay_on && !ch.tripped && observed.current_a > kMaxCurrentA) {
        ch.relay_on = false;
        ch.tripped = true;
        ++trip_count_;
        emit(make_variation(address_, ChannelKind::Output, index, false), now);
        return;
    }

    ch.last_sample = observed;
    ch.accumulator.add(observed);

    const MeasureSample wire = quant_.apply(observed);
    if (should_notify(notify_mode_, ch.notify, wire, now)) {
        ch.notify.last_sent = wire;
        ch.notify.sent_any = true;
        ch.notify.last_emit_time = now;
        emit(make_power_variation(address_, index, wire), now);
    }
}

bool MeterUnit::is_tripped(int index) const {
    check_output_index(index);
    return outputs_[static_cast<std::size_t>(index)].tripped;
}

std::string MeterUnit::serialize_relay_state() const {
    std::string bits;
    bits.reserve(kOutputCount);
    for (const auto& ch : outputs_) bits.push_back(ch.relay_on ? '1' : '0');
    return bits;
}

void MeterUnit::restore_relay_state(const std::string& bits) {
    if (bits.size() != static_cast<std::size_t>(kOutputCount))
        throw std::invalid_argument("meter: relay state string must have 8 bits");
    for (int i = 0; i < kOutputCount; ++i) {
        OutputChannel fresh;
        fresh.relay_on = bits[static_cast<std::size_t>(i)] == '1';
        outputs_[static_cast<std::size_t>(i)] = fresh;
    }
    inputs_.fill(false);
}

void MeterUnit::on_frame(double time, const BusFrame& frame) {
    if (frame.recipient != address_) return; // perceived but not ours

    switch (frame.kind) {
    case FrameKind::Command: {
        const auto& cmd = std::get<CommandPayload>(frame.payload);
        switch (cmd.op) {
        case CommandOp::SetOut:
            control_out(cmd.channel, cmd.value, time);
            break;
        case CommandOp::ReadOutState:
            emit(make_state_reply(address_, frame.sender, ChannelKind::Output, cmd.channel,
                                  read_state(ChannelKind::Output, cmd.channel)),
                 time);
            break;
        case CommandOp::ReadInState:
            emit(make_state_reply(address_, frame.sender, ChannelKind::Input, cmd.channel,
                                  read_state(ChannelKind::Input, cmd.channel)),
                 time);
            break;
        }
        break;
    }
    case FrameKind::MeasureRequest: {
        const auto& req = std::get<RequestPayload>(frame.payload);
        emit(make_measure_reply(address_, frame.sender, req.channel, quant_.apply(read_measures(req.channel)),
                                false),
             time);
        break;
    }
    case FrameKind::AvgMeasureRequest: {
        const auto& req = std::get<RequestPayload>(frame.payload);
        emit(make_measure_reply(address_, frame.sender, req.channel,
                                quant_.apply(read_avg_measures(req.channel, time)), true),
             time);
        break;
    }
    default:
        break; // replies and variations are not for meters to act on
    }
}

} // namespace oswitch
