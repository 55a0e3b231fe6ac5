#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oswitch/electrical.hpp"

using namespace oswitch;

TEST_CASE("derive_measures: unity power factor has zero reactive power") {
    auto d = derive_measures(MeasureSample{100.0, 1.0, 0.5});
    CHECK(d.voltage_v == doctest::Approx(200.0));
    CHECK(d.active_w == doctest::Approx(100.0));
    CHECK(d.reactive_var == doctest::Approx(0.0));
}

TEST_CASE("derive_measures: 3-4-5 triangle") {
    auto d = derive_measures(MeasureSample{100.0, 0.8, 1.0});
    CHECK(d.voltage_v == doctest::Approx(100.0));
    CHECK(d.active_w == doctest::Approx(80.0));
    CHECK(d.reactive_var == doctest::Approx(60.0));
}

TEST_CASE("derive_measures: zero current guard") {
    CHECK_THROWS_AS(derive_measures(MeasureSample{0.0, 0.9, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(derive_measures(MeasureSample{50.0, 0.9, 0.0}), std::domain_error);
}

TEST_CASE("derive_measures: power factor domain") {
    CHECK_THROWS_AS(derive_measures(MeasureSample{100.0, 1.5, 1.0}), std::domain_error);
    CHECK_THROWS_AS(derive_measures(MeasureSample{100.0, -0.1, 1.0}), std::domain_error);
}

TEST_CASE("derive_measures: recomposition is exact to 1e-9 on random samples") {
    std::mt19937_64 rng(20260809);
    for (int i = 0; i < 10000; ++i) {
        const double p = 1e-3 + 4000.0 * std::ldexp(static_cast<double>(rng()), -64);
        const double pf = std::ldexp(static_cast<double>(rng()), -64);
        const double c = 1e-3 + 16.0 * std::ldexp(static_cast<double>(rng()), -64);
        auto d = derive_measures(MeasureSample{p, pf, c});
        const double recomposed = std::sqrt(d.active_w * d.active_w + d.reactive_var * d.reactive_var);
        CHECK(std::abs(recomposed - p) <= 1e-9 * p);
    }
}

TEST_CASE("trms: constant signal") {
    std::vector<double> v(17, 3.5);
    CHECK(trms(v) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("trms: sine sampled over one full period") {
    const double amplitude = 7.25;
    for (int n : {64, 128, 1024}) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] = amplitude * std::sin(2.0 * std::numbers::pi * i / n);
        const double expected = amplitude / std::numbers::sqrt2;
        CHECK(std::abs(trms(v) - expected) <= 1e-3 * expected);
    }
}

TEST_CASE("trms: square wave") {
    std::vector<double> v;
    for (int i = 0; i < 40; ++i) v.push_back(i % 2 == 0 ? 2.0 : -2.0);
    CHECK(trms(v) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("trms: empty sequence is a domain error") {
    const std::vector<double> empty;
    CHECK_THROWS_AS(trms(empty), std::domain_error);
}

TEST_CASE("trms: scale equivariance and dominance over the mean") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 50;
        std::vector<double> v(n);
        double mean = 0.0;
        for (auto& x : v) {
            x = 20.0 * std::ldexp(static_cast<double>(rng()), -64) - 10.0;
            mean += x;
        }
        mean /= static_cast<double>(n);

        const double base = trms(v);
        CHECK(base + 1e-12 >= std::abs(mean));

        const double k = 7.0 * std::ldexp(static_cast<double>(rng()), -64) - 3.5;
        std::vector<double> scaled(v);
        for (auto& x : scaled) x *= k;
        CHECK(trms(scaled) == doctest::Approx(std::abs(k) * base).epsilon(1e-9));
    }
}
