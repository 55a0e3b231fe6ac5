#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "oswitch/config.hpp"
#include "oswitch/scenario.hpp"

using namespace oswitch;

TEST_CASE("config: sections, keys, comments, errors") {
    const std::string text = R"(
# comment
[run]
duration_s = 3600
; another comment
label = hello world

[policy]
policy = naive
)";
    ConfigFile cfg = ConfigFile::parse_text(text);
    CHECK(cfg.get_double("run", "duration_s") == 3600.0);
    CHECK(cfg.get("run", "label") == "hello world");
    CHECK(cfg.get_or("run", "missing", "fallback") == "fallback");
    CHECK(cfg.get_long_or("run", "missing", 9) == 9);
    CHECK(cfg.sections() == std::vector<std::string>{"run", "policy"});
    CHECK_THROWS_AS(cfg.get("run", "missing"), std::runtime_error);
    CHECK_THROWS_AS(cfg.get("nope", "missing"), std::runtime_error);
    CHECK_THROWS_AS(ConfigFile::parse_text("key = 1\n"), std::runtime_error);     // outside section
    CHECK_THROWS_AS(ConfigFile::parse_text("[run\nkey = 1\n"), std::runtime_error);
    CHECK_THROWS_AS(ConfigFile::parse_text("[run]\nnonsense\n"), std::runtime_error);
}

namespace {

Scenario tiny_scenario_from_text(const std::string& extra_policy = "") {
    const std::string text = R"(
[run]
duration_s = 600
decision_period_s = 30
warmup_days = 0
seed = 5
[inverter]
battery_capacity_wh = 0
[delays]
l_r = 1.0
[policy]
policy = naive
)" + extra_policy + R"(
[slots]
slots_per_day = 48
[traces]
generate = SPEC
notify_mode = abs_delta
notify_param = 5
)";
    // generation spec written next to nothing: use a temp file
    const std::string spec_path = "/tmp/oswitch_test_traces.spec";
    std::ofstream spec(spec_path);
    spec << "[general]\ndays = 1\nseed = 5\n[pv]\npeak_dc_w = 200\n"
            "[outlet 0]\narchetype = steady\npower_w = 50\n"
            "[outlet 1]\narchetype = steady\npower_w = 80\n";
    spec.close();

    std::string patched = text;
    patched.replace(patched.find("SPEC"), 4, spec_path);
    return Scenario::from_config(ConfigFile::parse_text(patched), "");
}

} // namespace

TEST_CASE("scenario: loads from config with generated traces") {
    Scenario sc = tiny_scenario_from_text();
    CHECK(sc.outlet_count() == 2);
    CHECK(sc.duration_s == 600.0);
    CHECK(sc.warmup_days == 0);
    CHECK(sc.policy.kind == PolicyKind::Naive);
    CHECK(sc.inverter.battery_capacity_wh == 0.0);
    CHECK(sc.notify.kind == NotificationMode::Kind::AbsoluteDelta);
    CHECK_NOTHROW(sc.validate());

    DeviceRegistry reg = sc.build_registry();
    CHECK(reg.has("outlet0"));
    CHECK(reg.has("pvswitch1"));
    CHECK(reg.lookup("pvswitch0").address == 2);
}

TEST_CASE("scenario: missing file and bad values reject") {
    CHECK_THROWS_WITH_AS(Scenario::load("/nonexistent/file.scenario"),
                         doctest::Contains("scenario file not found"), std::runtime_error);
    CHECK_THROWS_AS(tiny_scenario_from_text("margin = 1.5\n"), std::domain_error);
}

TEST_CASE("scenario: trace coverage is validated at load time") {
    Scenario sc = tiny_scenario_from_text();
    sc.outlet_traces[0] = StepSeries({100.0}, {50.0}); // starts after time 0
    CHECK_THROWS_AS(sc.validate(), std::runtime_error);
}

TEST_CASE("delay model: monitor delay is the sum of its parts") {
    DelayModel delays{1.0, 0.001, 0.01};
    CHECK(delays.l_monitor() == doctest::Approx(1.011));
    DelayModel bad{-1.0, 0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}
