#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "oswitch/inverter.hpp"

using namespace oswitch;

namespace {

StepSeries constant_dc(double watts) {
    return StepSeries({0.0}, {watts});
}

InverterConfig no_battery() {
    InverterConfig cfg;
    cfg.battery_capacity_wh = 0.0;
    return cfg;
}

} // namespace

TEST_CASE("available power: efficiency product, output cap, dead panel") {
    InverterState empty;

    Inverter a(no_battery(), constant_dc(220.0));
    CHECK(a.available_ac_w(empty, 0.0) == doctest::Approx(198.0));

    Inverter b(no_battery(), constant_dc(1200.0));
    CHECK(b.available_ac_w(empty, 0.0) == doctest::Approx(800.0));

    Inverter c(no_battery(), constant_dc(0.0));
    CHECK(c.available_ac_w(empty, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("available power: a charged battery backfills to the output rating") {
    InverterConfig cfg; // battery 600 Wh
    Inverter inv(cfg, constant_dc(50.0));
    InverterState state{300.0};
    CHECK(inv.available_ac_w(state, 0.0) == doctest::Approx(800.0));
}

TEST_CASE("read outside the trace is an error") {
    Inverter inv(no_battery(), StepSeries({100.0}, {220.0}));
    InverterState state;
    CHECK_THROWS_AS(inv.available_ac_w(state, 50.0), std::out_of_range);
}

TEST_CASE("step_energy: surplus charges the battery through its efficiency") {
    InverterConfig cfg; // battery 600 Wh at 0.9
    Inverter inv(cfg, constant_dc(220.0));
    InverterState state{0.0};

    auto split = inv.step_energy(state, 0.0, 3600.0, 100.0);
    CHECK(split.solar_wh == doctest::Approx(100.0));
    CHECK(split.battery_wh == doctest::Approx(0.0));
    CHECK(split.grid_wh == doctest::Approx(0.0));
    CHECK(state.battery_level_wh == doctest::Approx(98.0 * 0.9));
}

TEST_CASE("step_energy: shortfall falls back to the grid when the battery is empty") {
    Inverter inv(no_battery(), constant_dc(220.0));
    InverterState state;
    auto split = inv.step_energy(state, 0.0, 3600.0, 300.0);
    CHECK(split.solar_wh == doctest::Approx(198.0));
    CHECK(split.battery_wh == doctest::Approx(0.0));
    CHECK(split.grid_wh == doctest::Approx(102.0));
}

TEST_CASE("step_energy: no demand, everything charges") {
    InverterConfig cfg;
    Inverter inv(cfg, constant_dc(220.0));
    InverterState state{0.0};
    auto split = inv.step_energy(state, 0.0, 3600.0, 0.0);
    CHECK(split.solar_wh == doctest::Approx(0.0));
    CHECK(state.battery_level_wh == doctest::Approx(198.0 * 0.9));
}

TEST_CASE("step_energy: battery discharges until empty, then grid") {
    InverterConfig cfg;
    cfg.battery_capacity_wh = 100.0;
    cfg.battery_efficiency = 0.9;
    Inverter inv(cfg, constant_dc(0.0));
    InverterState state{100.0};

    // demand 180 W for 1 h from a dead panel: battery delivers 90 Wh
    auto split = inv.step_energy(state, 0.0, 3600.0, 180.0);
    CHECK(split.solar_wh == doctest::Approx(0.0));
    CHECK(split.battery_wh == doctest::Approx(90.0));
    CHECK(split.grid_wh == doctest::Approx(90.0));
    CHECK(state.battery_level_wh == doctest::Approx(0.0));
}

TEST_CASE("seconds_to_battery_empty") {
    InverterConfig cfg;
    cfg.battery_capacity_wh = 100.0;
    cfg.battery_efficiency = 0.9;
    Inverter inv(cfg, constant_dc(0.0));
    InverterState state{100.0};
    // 90 Wh deliverable at 180 W -> half an hour
    CHECK(inv.seconds_to_battery_empty(state, 0.0, 180.0) == doctest::Approx(1800.0));
    CHECK(std::isinf(inv.seconds_to_battery_empty(state, 0.0, 0.0)));
}

TEST_CASE("energy conservation and battery bounds on random steps") {
    std::mt19937_64 rng(808);
    InverterConfig cfg;
    cfg.battery_capacity_wh = 250.0;
    Inverter inv(cfg, constant_dc(220.0));
    InverterState state{0.0};

    for (int i = 0; i < 2000; ++i) {
        const double before = state.battery_level_wh;
        const double dt_s = 1.0 + 600.0 * std::ldexp(static_cast<double>(rng()), -64);
        const double demand = 400.0 * std::ldexp(static_cast<double>(rng()), -64);
        auto split = inv.step_energy(state, 0.0, dt_s, demand);

        const double dt_h = dt_s / 3600.0;
        CHECK(split.solar_wh + split.battery_wh + split.grid_wh ==
              doctest::Approx(demand * dt_h).epsilon(1e-9));
        CHECK(state.battery_level_wh >= -1e-12);
        CHECK(state.battery_level_wh <= cfg.battery_capacity_wh + 1e-12);
        // solar energy in covers direct serving plus any charge added
        const double solar_in = 198.0 * dt_h;
        const double charge = std::max(0.0, state.battery_level_wh - before);
        CHECK(solar_in + 1e-9 >= split.solar_wh + charge);
    }
}

TEST_CASE("zero-capacity battery degenerates to solar-or-grid") {
    Inverter inv(no_battery(), constant_dc(220.0));
    InverterState state;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const double demand = 500.0 * std::ldexp(static_cast<double>(rng()), -64);
        auto split = inv.step_energy(state, 0.0, 60.0, demand);
        CHECK(split.battery_wh == 0.0);
        CHECK(state.battery_level_wh == 0.0);
    }
}
