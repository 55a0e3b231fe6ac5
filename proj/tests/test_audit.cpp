#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oswitch/audit.hpp"

using namespace oswitch;

namespace {

// office-hours schedule: open 8-18 on working days, closed all weekend
ClosingSchedule office_schedule() {
    ClosingSchedule s;
    for (int d = 0; d < 5; ++d) s.add_open_interval(d, 8.0, 18.0);
    return s;
}

// a week-long trace holding `closed_w` outside opening hours and `open_w`
// inside them
StepSeries office_trace(double open_w, double closed_w, int days = 7) {
    StepSeries t;
    t.append(0.0, closed_w);
    for (int d = 0; d < days; ++d) {
        const double day = d * 86400.0;
        const int weekday = d % 7;
        if (weekday < 5) {
            t.append(day + 8.0 * 3600.0, open_w);
            t.append(day + 18.0 * 3600.0, closed_w);
        }
    }
    t.append(days * 86400.0, closed_w);
    return t;
}

} // namespace

TEST_CASE("baseline: minimum plateau of the big office fixture") {
    // closing plateau at the measured big-office floor, busy hours above it
    StepSeries t = office_trace(9000.0, 4341.0);
    CHECK(baseline(t) == doctest::Approx(4341.0));
    CHECK(baseline(StepSeries({0.0}, {123.0})) == 123.0);   // single sample
    CHECK(baseline(StepSeries({0.0, 10.0}, {5.0, 5.0})) == 5.0); // constant
    CHECK_THROWS_AS(baseline(StepSeries()), std::invalid_argument);
}

TEST_CASE("closing average: constant trace and plateau restriction") {
    // small office: constant night draw
    StepSeries constant({0.0, 7 * 86400.0}, {1017.0, 1017.0});
    CHECK(closing_hours_average(constant, office_schedule()) == doctest::Approx(1017.0));

    // 1000 W when closed, 5000 W when open: restriction sees only 1000
    StepSeries split = office_trace(5000.0, 1000.0);
    CHECK(closing_hours_average(split, office_schedule()) == doctest::Approx(1000.0));

    // a schedule without closed time overlapping the trace
    ClosingSchedule always_open;
    for (int d = 0; d < 7; ++d) always_open.add_open_interval(d, 0.0, 24.0);
    CHECK_THROWS_AS(closing_hours_average(split, always_open), std::runtime_error);
}

TEST_CASE("closing average: medium and big office plateaus reproduce") {
    StepSeries medium = office_trace(6000.0, 2710.0);
    CHECK(closing_hours_average(medium, office_schedule()) == doctest::Approx(2710.0));
    StepSeries big = office_trace(9500.0, 5552.0);
    CHECK(closing_hours_average(big, office_schedule()) == doctest::Approx(5552.0));
}

TEST_CASE("baseline never exceeds the closing average") {
    StepSeries t = office_trace(7321.0, 905.0);
    CHECK(baseline(t) <= closing_hours_average(t, office_schedule()));
}

TEST_CASE("baseline <= closing average on random traces") {
    std::mt19937_64 rng(246);
    const ClosingSchedule schedule = office_schedule();
    for (int trial = 0; trial < 100; ++trial) {
        StepSeries t;
        double time = 0.0;
        t.append(time, 500.0 + static_cast<double>(rng() % 5000));
        const int steps = 20 + static_cast<int>(rng() % 200);
        for (int i = 0; i < steps; ++i) {
            time += 300.0 + static_cast<double>(rng() % 20000);
            t.append(time, static_cast<double>(rng() % 8000));
        }
        if (t.last_time() < 86400.0) t.append(2 * 86400.0, 100.0); // span at least a weekend night
        CHECK(baseline(t) <= closing_hours_average(t, schedule) + 1e-9);
    }
}

TEST_CASE("weekly profile: constant kilowatt day costs 4.80 at 0.20 per kWh") {
    StepSeries t({0.0, 86400.0}, {1000.0, 0.0});
    WeeklyProfile p = weekly_profile(t, 0.20);
    REQUIRE(p.days.size() == 1);
    CHECK(p.days[0].kwh == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(p.days[0].cost == doctest::Approx(4.80).epsilon(1e-12));
}

TEST_CASE("weekly profile: weekend at a quarter of the working days") {
    StepSeries t;
    t.append(0.0, 4000.0);
    t.append(5 * 86400.0, 1000.0); // saturday + sunday at 25%
    t.append(7 * 86400.0, 4000.0);
    WeeklyProfile p = weekly_profile(t, 0.20);
    REQUIRE(p.days.size() == 7);
    CHECK(p.weekend_weekday_ratio == doctest::Approx(0.25));
}

TEST_CASE("weekly profile: zero trace, zero energy") {
    StepSeries t({0.0, 86400.0}, {0.0, 0.0});
    WeeklyProfile p = weekly_profile(t, 0.20);
    CHECK(p.total_kwh == 0.0);
    CHECK(p.weekend_weekday_ratio == 0.0);
}

TEST_CASE("weekly profile: splitting at midnight is additive") {
    StepSeries t;
    t.append(0.0, 1234.0);
    t.append(30000.0, 777.0);
    t.append(90000.0, 2222.0);
    t.append(2 * 86400.0, 0.0);
    WeeklyProfile whole = weekly_profile(t, 0.20);

    double split_sum = 0.0;
    for (const auto& d : whole.days) split_sum += d.kwh;
    const double direct = t.integrate(0.0, 2 * 86400.0) / 3.6e6;
    CHECK(std::abs(split_sum - direct) <= 1e-9);
}

TEST_CASE("reduction potential: the 80 percent interruptible construction") {
    std::map<std::string, StepSeries> lines;
    lines["hvac"] = office_trace(6000.0, 4000.0);   // interruptible during closing
    lines["alarms"] = office_trace(1500.0, 1000.0); // must stay on
    std::map<std::string, bool> flags{{"hvac", true}, {"alarms", false}};

    ReductionReport r = reduction_potential(lines, flags, office_schedule());
    CHECK(r.closing_avg_w == doctest::Approx(5000.0));
    CHECK(r.reducible_to_w == doctest::Approx(1000.0));
    CHECK(r.interruptible_share == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("reduction potential: all-or-nothing flags") {
    std::map<std::string, StepSeries> lines;
    lines["a"] = office_trace(2000.0, 600.0);
    lines["b"] = office_trace(900.0, 400.0);

    std::map<std::string, bool> none{{"a", false}, {"b", false}};
    ReductionReport keep_all = reduction_potential(lines, none, office_schedule());
    CHECK(keep_all.reducible_to_w == doctest::Approx(keep_all.closing_avg_w));
    CHECK(keep_all.interruptible_share == doctest::Approx(0.0));

    std::map<std::string, bool> all{{"a", true}, {"b", true}};
    ReductionReport drop_all = reduction_potential(lines, all, office_schedule());
    CHECK(drop_all.reducible_to_w == doctest::Approx(0.0));
    CHECK(drop_all.interruptible_share == doctest::Approx(1.0));

    std::map<std::string, StepSeries> empty;
    CHECK_THROWS_AS(reduction_potential(empty, none, office_schedule()), std::invalid_argument);
}

TEST_CASE("reduction potential: flagging one more line never raises the floor") {
    std::map<std::string, StepSeries> lines;
    lines["a"] = office_trace(2000.0, 600.0);
    lines["b"] = office_trace(900.0, 400.0);
    lines["c"] = office_trace(100.0, 250.0);

    std::map<std::string, bool> flags{{"a", false}, {"b", false}, {"c", false}};
    double previous = reduction_potential(lines, flags, office_schedule()).reducible_to_w;
    for (const char* name : {"a", "b", "c"}) {
        flags[name] = true;
        const double now = reduction_potential(lines, flags, office_schedule()).reducible_to_w;
        CHECK(now <= previous + 1e-12);
        previous = now;
    }
}

TEST_CASE("schedule parsing: names, numbers, bad rows") {
    std::istringstream in("weekday,open_hour,close_hour\nmon,8,18\n2,9,17.5\n");
    ClosingSchedule s = ClosingSchedule::load(in);
    CHECK_FALSE(s.is_closed(9.0 * 3600.0));                 // monday 09:00 open
    CHECK(s.is_closed(19.0 * 3600.0));                      // monday evening closed
    CHECK_FALSE(s.is_closed(2 * 86400.0 + 10.0 * 3600.0));  // wednesday 10:00 open
    CHECK(s.is_closed(5 * 86400.0 + 12.0 * 3600.0));        // saturday closed all day

    std::istringstream bad("mon,8\n");
    CHECK_THROWS_AS(ClosingSchedule::load(bad), std::runtime_error);
    ClosingSchedule overlap;
    overlap.add_open_interval(0, 8.0, 12.0);
    CHECK_THROWS_AS(overlap.add_open_interval(0, 11.0, 14.0), std::domain_error);
}

TEST_CASE("run_audit produces a coherent report") {
    std::map<std::string, StepSeries> lines;
    lines["hvac"] = office_trace(6000.0, 4000.0);
    lines["alarms"] = office_trace(1500.0, 1000.0);
    std::map<std::string, bool> flags{{"hvac", true}, {"alarms", false}};

    AuditReport report = run_audit(lines, flags, office_schedule(), 0.20);
    CHECK(report.baseline_w == doctest::Approx(5000.0));
    CHECK(report.closing_avg_w == doctest::Approx(5000.0));
    CHECK(report.weekly.days.size() == 7);
    CHECK(report.reduction.interruptible_share == doctest::Approx(0.8));

    std::ostringstream csv, summary;
    write_audit_csv(csv, report);
    write_audit_summary(summary, report);
    CHECK(csv.str().rfind("day,kwh,cost\n", 0) == 0);
    CHECK(summary.str().find("interruptible_share: 0.8000") != std::string::npos);
}
