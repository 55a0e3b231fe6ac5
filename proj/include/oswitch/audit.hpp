#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "oswitch/trace.hpp"

namespace oswitch {

/// Weekly opening schedule. Day 0 is Monday; trace time 0 is Monday 00:00.
/// A weekday without open intervals is closed all day.
class ClosingSchedule {
public:
    static constexpr int kDaysPerWeek = 7;

    /// Adds an open interval [open_hour, close_hour) to a weekday (0 = Mon).
    void add_open_interval(int weekday, double open_hour, double close_hour);

    bool is_closed(double time_s) const;

    /// Closed sub-intervals of [a, b), in order.
    std::vector<std::pair<double, double>> closed_intervals(double a, double b) const;

    /// `weekday,open_hour,close_hour` lines; weekday as mon..sun or 0..6.
    static ClosingSchedule load(std::istream& in);
    static ClosingSchedule load_file(const std::string& path);

private:
    std::vector<std::vector<std::pair<double, double>>> open_hours_{
        std::vector<std::vector<std::pair<double, double>>>(kDaysPerWeek)};
};

struct DayProfile {
    int day_index = 0;
    double kwh = 0.0;
    double cost = 0.0;
};

struct WeeklyProfile {
    std::vector<DayProfile> days;
    double total_kwh = 0.0;
    double total_cost = 0.0;
    double weekend_weekday_ratio = 0.0; // mean weekend-day energy / mean working-day energy
};

struct ReductionReport {
    double closing_avg_w = 0.0;   // all lines during closing hours
    double reducible_to_w = 0.0;  // non-interruptible lines only
    double interruptible_share = 0.0;
};

struct AuditReport {
    double baseline_w = 0.0;
    double closing_avg_w = 0.0;
    WeeklyProfile weekly;
    ReductionReport reduction;
    double tariff_per_kwh = 0.0;
};

/// Minimum held value over the whole observation (the non-interruptible
/// floor). Throws on an empty trace.
double baseline(const StepSeries& trace);

/// Time-weighted mean of the held value restricted to closed hours within
/// the trace's observation window. Throws when no closed time overlaps.
double closing_hours_average(const StepSeries& trace, const ClosingSchedule& schedule);

/// Daily energy and cost over the trace's span, plus the weekend/weekday
/// consumption ratio. Day boundaries at multiples of 86400 s from time 0.
WeeklyProfile weekly_profile(const StepSeries& trace, double tariff_per_kwh);

/// What the closing-hours draw falls to once every interruptible line is
/// switched off, and the share that removal represents.
ReductionReport reduction_potential(const std::map<std::string, StepSeries>& per_line_traces,
                                    const std::map<std::string, bool>& interruptible,
                                    const ClosingSchedule& schedule);

/// Sums per-line traces into one total-consumption series.
StepSeries sum_traces(const std::vector<const StepSeries*>& traces);

AuditReport run_audit(const std::map<std::string, StepSeries>& per_line_traces,
                      const std::map<std::string, bool>& interruptible, const ClosingSchedule& schedule,
                      double tariff_per_kwh);

void write_audit_csv(std::ostream& out, const AuditReport& report);
void write_audit_summary(std::ostream& out, const AuditReport& report);

} // namespace oswitch
