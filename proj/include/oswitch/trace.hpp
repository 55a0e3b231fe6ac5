#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oswitch {

/// Piecewise-constant time series with last-observation-carried-forward
/// semantics: value_at(t) returns the value of the latest breakpoint <= t,
/// held until the next breakpoint (and indefinitely after the last one).
class StepSeries {
public:
    StepSeries() = default;
    StepSeries(std::vector<double> times, std::vector<double> values);

    /// Appends a breakpoint; time must be strictly greater than the last one.
    void append(double time_s, double value);

    bool empty() const { return times_.empty(); }
    std::size_t size() const { return times_.size(); }

    double start_time() const;
    double last_time() const;

    /// Held value at time t. Throws std::out_of_range for t < start_time().
    double value_at(double t) const;

    /// Exact integral of the held value over [a, b] (a <= b required).
    double integrate(double a, double b) const;

    /// Minimum of all recorded values.
    double min_value() const;

    /// Breakpoint times strictly inside (a, b].
    std::vector<double> breakpoints_in(double a, double b) const;

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t index_at(double t) const;

    std::vector<double> times_;
    std::vector<double> values_;
};

/// Parses an outlet trace CSV (`time_s,outlet_id,watts`, header required)
/// into one series per outlet id 0..max_id. Rows must be time-sorted per
/// outlet. Missing outlet ids yield empty series.
std::vector<StepSeries> load_outlet_traces(const std::string& path);

/// Parses a PV trace CSV (`time_s,dc_watts`, header required).
StepSeries load_pv_trace(const std::string& path);

void write_outlet_traces(std::ostream& out, const std::vector<StepSeries>& traces);
void write_pv_trace(std::ostream& out, const StepSeries& trace);

} // namespace oswitch
