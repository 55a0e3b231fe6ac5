#include "oswitch/eventloop.hpp"

#include <stdexcept>
#include <utility>

namespace oswitch {

void EventQueue::schedule(double time, Callback fn) {
    if (time < now_)
        throw std::invalid_argument("eventloop: cannot schedule in the past");
    queue_.push(Entry{time, next_seq_++, std::move(fn)});
}

double EventQueue::next_time() const {
    if (queue_.empty())
        throw std::out_of_range("eventloop: queue is empty");
    return queue_.top().time;
}

bool EventQueue::run_next() {
    if (queue_.empty()) return false;
    // move the callback out before popping; it may schedule new events
    Entry entry = queue_.top();
    queue_.pop();
    now_ = entry.time;
    entry.fn();
    return true;
}

void EventQueue::run_until(double t_end) {
    while (!queue_.empty() && queue_.top().time <= t_end) run_next();
    if (t_end > now_) now_ = t_end;
}

void EventQueue::run_all() {
    while (run_next()) {}
}

} // namespace oswitch
