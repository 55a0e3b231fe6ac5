#include "oswitch/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oswitch/csvio.hpp"

namespace oswitch {

StepSeries::StepSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size())
        throw std::invalid_argument("trace: times/values length mismatch");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("trace: breakpoints must be strictly increasing");
    }
}

void StepSeries::append(double time_s, double value) {
    if (!times_.empty() && !(time_s > times_.back()))
        throw std::invalid_argument("trace: breakpoints must be strictly increasing");
    times_.push_back(time_s);
    values_.push_back(value);
}

double StepSeries::start_time() const {
    if (empty()) throw std::out_of_range("trace: empty series");
    return times_.front();
}

double StepSeries::last_time() const {
    if (empty()) throw std::out_of_range("trace: empty series");
    return times_.back();
}

std::size_t StepSeries::index_at(double t) const {
    if (empty() || t < times_.front())
        throw std::out_of_range("trace: time before series start");
    // last index with times_[i] <= t
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double StepSeries::value_at(double t) const {
    return values_[index_at(t)];
}

double StepSeries::integrate(double a, double b) const {
    if (b < a) throw std::invalid_argument("trace: integrate requires a <= b");
    if (a == b) return 0.0;
    std::size_t i = index_at(a);
    double total = 0.0;
    double cursor = a;
    while (i + 1 < times_.size() && times_[i + 1] < b) {
        total += values_[i] * (times_[i + 1] - cursor);
        cursor = times_[i + 1];
        ++i;
    }
    total += values_[i] * (b - cursor);
    return total;
}

double StepSeries::min_value() const {
    if (empty()) throw std::out_of_range("trace: empty series");
    return *std::min_element(values_.begin(), values_.end());
}

std::vector<double> StepSeries::breakpoints_in(double a, double b) const {
    std::vector<double> out;
    auto lo = std::upper_bound(times_.begin(), times_.end(), a);
    auto hi = std::upper_bound(times_.begin(), times_.end(), b);
    out.assign(lo, hi);
    return out;
}

std::vector<StepSeries> load_outlet_traces(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trace: cannot open outlet trace file: " + path);

    std::vector<StepSeries> traces;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            if (line.rfind("time_s", 0) != 0)
                throw std::runtime_error("trace: outlet CSV missing header: " + path);
            continue;
        }
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw std::runtime_error("trace: bad outlet CSV row at line " + std::to_string(lineno));
        double t = parse_double(fields[0], "time_s");
        int outlet = static_cast<int>(parse_double(fields[1], "outlet_id"));
        double w = parse_double(fields[2], "watts");
        if (outlet < 0)
            throw std::runtime_error("trace: negative outlet id at line " + std::to_string(lineno));
        if (traces.size() <= static_cast<std::size_t>(outlet))
            traces.resize(static_cast<std::size_t>(outlet) + 1);
        traces[static_cast<std::size_t>(outlet)].append(t, w);
    }
    return traces;
}

StepSeries load_pv_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trace: cannot open pv trace file: " + path);

    StepSeries trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            if (line.rfind("time_s", 0) != 0)
                throw std::runtime_error("trace: pv CSV missing header: " + path);
            continue;
        }
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw std::runtime_error("trace: bad pv CSV row at line " + std::to_string(lineno));
        trace.append(parse_double(fields[0], "time_s"), parse_double(fields[1], "dc_watts"));
    }
    return trace;
}

namespace {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    // trim trailing zeros but keep at least one decimal digit off: integers print bare
    std::string s(buf);
    auto dot = s.find('.');
    auto last = s.find_last_not_of('0');
    if (last == dot) last -= 1;
    return s.substr(0, last + 1);
}

} // namespace

void write_outlet_traces(std::ostream& out, const std::vector<StepSeries>& traces) {
    out << "time_s,outlet_id,watts\n";
    // merged by time so the file reads chronologically
    std::vector<std::size_t> cursor(traces.size(), 0);
    for (;;) {
        int best = -1;
        for (std::size_t o = 0; o < traces.size(); ++o) {
            if (cursor[o] >= traces[o].size()) continue;
            if (best < 0 ||
                traces[o].times()[cursor[o]] < traces[static_cast<std::size_t>(best)].times()[cursor[static_cast<std::size_t>(best)]])
                best = static_cast<int>(o);
        }
        if (best < 0) break;
        auto b = static_cast<std::size_t>(best);
        out << format_number(traces[b].times()[cursor[b]]) << ',' << best << ','
            << format_number(traces[b].values()[cursor[b]]) << '\n';
        ++cursor[b];
    }
}

void write_pv_trace(std::ostream& out, const StepSeries& trace) {
    out << "time_s,dc_watts\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << format_number(trace.times()[i]) << ',' << format_number(trace.values()[i]) << '\n';
}

} // namespace oswitch
