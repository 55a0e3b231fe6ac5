#pragma once

#include <span>

namespace oswitch {

/// One meter reading as reported on the wire: apparent power, power factor
/// (cos phi, stored directly) and TRMS current.
struct MeasureSample {
    double apparent_va = 0.0;
    double power_factor = 1.0;
    double current_a = 0.0;

    /// Throws std::domain_error on invariant violations (negative magnitudes,
    /// power factor outside [0,1], apparent power without current).
    void validate() const;
};

/// Quantities the supervisor derives from a MeasureSample.
struct DerivedMeasures {
    double voltage_v = 0.0;
    double active_w = 0.0;
    double reactive_var = 0.0;
};

/// V = P/I, Pa = P*PF, Pr = sqrt(P^2 - Pa^2). Requires current > 0; a sample
/// with apparent power but no current is rejected as invalid.
DerivedMeasures derive_measures(const MeasureSample& sample);

/// True root-mean-square of a sampled waveform: sqrt(sum(x_i^2)/n).
/// Throws std::domain_error on an empty sequence.
double trms(std::span<const double> samples);

} // namespace oswitch
