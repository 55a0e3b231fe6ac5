#include "oswitch/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oswitch/csvio.hpp"

namespace oswitch {

void ClosingSchedule::add_open_interval(int weekday, double open_hour, double close_hour) {
    if (weekday < 0 || weekday >= kDaysPerWeek)
        throw std::out_of_range("audit: weekday must be 0..6");
    if (open_hour < 0.0 || close_hour > 24.0 || !(open_hour < close_hour))
        throw std::domain_error("audit: open interval must satisfy 0 <= open < close <= 24");
    auto& spans = open_hours_[static_cast<std::size_t>(weekday)];
    for (const auto& [o, c] : spans) {
        if (open_hour < c && o < close_hour)
            throw std::domain_error("audit: overlapping open intervals on weekday " +
                                    std::to_string(weekday));
    }
    spans.emplace_back(open_hour, close_hour);
    std::sort(spans.begin(), spans.end());
}

bool ClosingSchedule::is_closed(double time_s) const {
    double t = std::fmod(time_s, 7.0 * 86400.0);
    if (t < 0.0) t += 7.0 * 86400.0;
    const int weekday = static_cast<int>(t / 86400.0);
    const double hour = std::fmod(t, 86400.0) / 3600.0;
    for (const auto& [open, close] : open_hours_[static_cast<std::size_t>(weekday)]) {
        if (hour >= open && hour < close) return false;
    }
    return true;
}

std::vector<std::pair<double, double>> ClosingSchedule::closed_intervals(double a, double b) const {
    std::vector<std::pair<double, double>> out;
    if (!(a < b)) return out;

    const int first_day = static_cast<int>(std::floor(a / 86400.0));
    const int last_day = static_cast<int>(std::floor((b - 1e-9) / 86400.0));
    for (int day = first_day; day <= last_day; ++day) {
        const double day_start = day * 86400.0;
        int weekday = day % kDaysPerWeek;
        if (weekday < 0) weekday += kDaysPerWeek;

        // closed = complement of the open spans within the day
        double cursor = 0.0;
        std::vector<std::pair<double, double>> closed;
        for (const auto& [open, close] : open_hours_[static_cast<std::size_t>(weekday)]) {
            if (open > cursor) closed.emplace_back(cursor, open);
            cursor = std::max(cursor, close);
        }
        if (cursor < 24.0) closed.emplace_back(cursor, 24.0);

        for (const auto& [from_h, to_h] : closed) {
            const double lo = std::max(a, day_start + from_h * 3600.0);
            const double hi = std::min(b, day_start + to_h * 3600.0);
            if (lo < hi) out.emplace_back(lo, hi);
        }
    }
    return out;
}

namespace {

int weekday_from_token(const std::string& token) {
    static const char* names[] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
    for (int i = 0; i < 7; ++i)
        if (token == names[i]) return i;
    return static_cast<int>(parse_long(token, "weekday"));
}

} // namespace

ClosingSchedule ClosingSchedule::load(std::istream& in) {
    ClosingSchedule schedule;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (lineno == 1 && t.rfind("weekday", 0) == 0) continue;
        auto fields = split_csv_line(t);
        if (fields.size() != 3)
            throw std::runtime_error("audit: schedule row needs weekday,open_hour,close_hour at line " +
                                     std::to_string(lineno));
        schedule.add_open_interval(weekday_from_token(fields[0]), parse_double(fields[1], "open_hour"),
                                   parse_double(fields[2], "close_hour"));
    }
    return schedule;
}

ClosingSchedule ClosingSchedule::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("audit: cannot open schedule file: " + path);
    return load(in);
}

double baseline(const StepSeries& trace) {
    if (trace.empty()) throw std::invalid_argument("audit: baseline of empty trace");
    return trace.min_value();
}

double closing_hours_average(const StepSeries& trace, const ClosingSchedule& schedule) {
    if (trace.empty()) throw std::invalid_argument("audit: closing average of empty trace");
    const double a = trace.start_time();
    const double b = trace.last_time();
    double energy = 0.0;
    double span = 0.0;
    for (const auto& [lo, hi] : schedule.closed_intervals(a, b)) {
        energy += trace.integrate(lo, hi);
        span += hi - lo;
    }
    if (span <= 0.0)
        throw std::runtime_error("audit: schedule has no closed time overlapping the trace");
    return energy / span;
}

WeeklyProfile weekly_profile(const StepSeries& trace, double tariff_per_kwh) {
    WeeklyProfile profile;
    if (trace.empty()) return profile;

    const double a = trace.start_time();
    const double b = trace.last_time();
    const int first_day = static_cast<int>(std::floor(a / 86400.0));
    const int last_day = static_cast<int>(std::floor((b - 1e-9) / 86400.0));

    double weekend_kwh = 0.0;
    int weekend_days = 0;
    double working_kwh = 0.0;
    int working_days = 0;

    for (int day = first_day; day <= last_day; ++day) {
        const double lo = std::max(a, day * 86400.0);
        const double hi = std::min(b, (day + 1) * 86400.0);
        if (!(lo < hi)) continue;
        DayProfile d;
        d.day_index = day;
        d.kwh = trace.integrate(lo, hi) / 3600.0 / 1000.0;
        d.cost = d.kwh * tariff_per_kwh;
        profile.days.push_back(d);
        profile.total_kwh += d.kwh;
        profile.total_cost += d.cost;

        const int weekday = ((day % 7) + 7) % 7;
        if (weekday >= 5) {
            weekend_kwh += d.kwh;
            ++weekend_days;
        } else {
            working_kwh += d.kwh;
            ++working_days;
        }
    }

    if (weekend_days > 0 && working_days > 0 && working_kwh > 0.0) {
        profile.weekend_weekday_ratio =
            (weekend_kwh / weekend_days) / (working_kwh / working_days);
    }
    return profile;
}

StepSeries sum_traces(const std::vector<const StepSeries*>& traces) {
    std::vector<double> times;
    for (const auto* t : traces) {
        if (t == nullptr || t->empty()) continue;
        times.insert(times.end(), t->times().begin(), t->times().end());
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    StepSeries sum;
    for (double t : times) {
        double total = 0.0;
        for (const auto* trace : traces) {
            if (trace == nullptr || trace->empty()) continue;
            if (t < trace->start_time()) continue; // not yet observed: counts as zero
            total += trace->value_at(t);
        }
        sum.append(t, total);
    }
    return sum;
}

ReductionReport reduction_potential(const std::map<std::string, StepSeries>& per_line_traces,
                                    const std::map<std::string, bool>& interruptible,
                                    const ClosingSchedule& schedule) {
    if (per_line_traces.empty()) throw std::invalid_argument("audit: no lines to analyze");

    std::vector<const StepSeries*> all;
    std::vector<const StepSeries*> keep; // non-interruptible equipment stays on
    for (const auto& [name, trace] : per_line_traces) {
        all.push_back(&trace);
        auto flag = interruptible.find(name);
        if (flag == interruptible.end())
            throw std::invalid_argument("audit: line '" + name + "' has no interruptible flag");
        if (!flag->second) keep.push_back(&trace);
    }

    ReductionReport report;
    report.closing_avg_w = closing_hours_average(sum_traces(all), schedule);
    report.reducible_to_w = keep.empty() ? 0.0 : closing_hours_average(sum_traces(keep), schedule);
    report.interruptible_share =
        report.closing_avg_w > 0.0 ? 1.0 - report.reducible_to_w / report.closing_avg_w : 0.0;
    return report;
}

AuditReport run_audit(const std::map<std::string, StepSeries>& per_line_traces,
                      const std::map<std::string, bool>& interruptible, const ClosingSchedule& schedule,
                      double tariff_per_kwh) {
    if (per_line_traces.empty()) throw std::invalid_argument("audit: no lines to analyze");

    std::vector<const StepSeries*> all;
    for (const auto& [name, trace] : per_line_traces) all.push_back(&trace);
    const StepSeries total = sum_traces(all);

    AuditReport report;
    report.tariff_per_kwh = tariff_per_kwh;
    report.baseline_w = baseline(total);
    report.closing_avg_w = closing_hours_average(total, schedule);
    report.weekly = weekly_profile(total, tariff_per_kwh);
    report.reduction = reduction_potential(per_line_traces, interruptible, schedule);
    return report;
}

void write_audit_csv(std::ostream& out, const AuditReport& report) {
    out << "day,kwh,cost\n";
    char buf[96];
    for (const auto& d : report.weekly.days) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f\n", d.day_index, d.kwh, d.cost);
        out << buf;
    }
}

void write_audit_summary(std::ostream& out, const AuditReport& report) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "baseline_w: %.3f\n", report.baseline_w);
    out << buf;
    std::snprintf(buf, sizeof(buf), "closing_avg_w: %.3f\n", report.closing_avg_w);
    out << buf;
    std::snprintf(buf, sizeof(buf), "reducible_to_w: %.3f\n", report.reduction.reducible_to_w);
    out << buf;
    std::snprintf(buf, sizeof(buf), "interruptible_share: %.4f\n", report.reduction.interruptible_share);
    out << buf;
    std::snprintf(buf, sizeof(buf), "weekend_weekday_ratio: %.4f\n", report.weekly.weekend_weekday_ratio);
    out << buf;
    std::snprintf(buf, sizeof(buf), "total_kwh: %.6f\n", report.weekly.total_kwh);
    out << buf;
    std::snprintf(buf, sizeof(buf), "tariff_per_kwh: %.4f\n", report.tariff_per_kwh);
    out << buf;
    out << "tariff_basis: energy unit cost interpreted per kWh\n";
    std::snprintf(buf, sizeof(buf), "total_cost: %.6f\n", report.weekly.total_cost);
    out << buf;
}

} // namespace oswitch
