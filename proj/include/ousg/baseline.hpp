#pragma once

#include "ousg/hierarchy.hpp"
#include "ousg/ou_process.hpp"

namespace ousg {

// Closed-form sampling policy with full knowledge of the process parameters.
struct BaselineConfig {
  double sampling_cost = 0.1;
  OuParams params;
  double gamma = 0.0;
};

void validate(const BaselineConfig& cfg);

// T* = (18 pi c_s^2 / sigma^2)^(1/3), the interval used at the threshold.
double t_star(double sampling_cost, double sigma);

// T* + (1 - e^{-theta T*}) / sqrt(1 - e^{-2 theta T*}) * sqrt(pi) / (sigma sqrt(theta)) * d,
// with d = |x_t - gamma| so the policy is symmetric about the threshold and the
// offset never drops below T*.
double next_sample_offset(double x_t, const BaselineConfig& cfg);

// Walks the series from t = 0, advancing by the offset rounded to the nearest
// integer with a floor of one step.
SamplingTrace run_baseline_episode(const TimeSeries& series, const BaselineConfig& cfg);

}  // namespace ousg
