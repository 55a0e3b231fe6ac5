#include "oswitch/electrical.hpp"

#include <cmath>
#include <stdexcept>

namespace oswitch {

void MeasureSample::validate() const {
    if (apparent_va < 0.0)
        throw std::domain_error("electrical: apparent power must be >= 0");
    if (power_factor < 0.0 || power_factor > 1.0)
        throw std::domain_error("electrical: power factor must be in [0,1]");
    if (current_a < 0.0)
        throw std::domain_error("electrical: current must be >= 0");
    if (current_a == 0.0 && apparent_va != 0.0)
        throw std::domain_error("electrical: nonzero apparent power with zero current");
}

DerivedMeasures derive_measures(const MeasureSample& sample) {
    sample.validate();
    if (sample.current_a <= 0.0)
        throw std::invalid_argument("electrical: voltage derivation requires current > 0");

    DerivedMeasures d;
    d.voltage_v = sample.apparent_va / sample.current_a;
    d.active_w = sample.apparent_va * sample.power_factor;
    // P * sqrt(1 - PF^2), factored to stay exact at PF = 1 and PF = 0
    const double pf = sample.power_factor;
    d.reactive_var = sample.apparent_va * std::sqrt((1.0 - pf) * (1.0 + pf));
    return d;
}

double trms(std::span<const double> samples) {
    if (samples.empty())
        throw std::domain_error("electrical: trms of empty sample sequence");
    double sum_sq = 0.0;
    for (double v : samples) sum_sq += v * v;
    return std::sqrt(sum_sq / static_cast<double>(samples.size()));
}

} // namespace oswitch
