#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace oswitch {

/// Deterministic discrete-event queue. Entries with equal timestamps run in
/// scheduling order (a monotonic sequence number breaks ties).
class EventQueue {
public:
    using Callback = std::function<void()>;

    void schedule(double time, Callback fn);

    double now() const { return now_; }
    bool empty() const { return queue_.empty(); }
    double next_time() const;

    /// Runs the earliest event; returns false when the queue is empty.
    bool run_next();

    /// Runs every event with time <= t_end, then advances the clock to t_end.
    void run_until(double t_end);

    /// Drains the queue completely.
    void run_all();

private:
    struct Entry {
        double time;
        std::uint64_t seq;
        Callback fn;
    };
    struct After {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, After> queue_;
    double now_ = 0.0;
    std::uint64_t next_seq_ = 0;
};

} // namespace oswitch
