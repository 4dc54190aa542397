#pragma once

#include <cstddef>
#include <vector>

#include "ousg/rng.hpp"

namespace ousg {

// One value per integer time index; the process lives on the unit grid.
using TimeSeries = std::vector<double>;

// Mean-reversion parameters of the monitored process.
// theta: mean-reversion rate per step, sigma: volatility per sqrt(step).
// sigma == 0 is accepted as the degenerate noiseless limit.
struct OuParams {
  double theta = 0.0;
  double sigma = 0.0;
  double mu = 0.0;
};

struct ParamRanges {
  double theta_min = 0.02;
  double theta_max = 0.03;
  double sigma_min = 0.4;
  double sigma_max = 0.6;
};

// Throw ConfigError when invalid.
void validate(const OuParams& params);
void validate(const ParamRanges& ranges);

// Standard deviation of the stationary distribution, sigma / sqrt(2 theta).
double stationary_sd(const OuParams& params);

// One step of the exact AR(1) discretization at unit step:
//   x' = x e^{-theta} + mu (1 - e^{-theta}) + sigma sqrt((1 - e^{-2 theta}) / (2 theta)) z
double ou_step(const OuParams& params, double x, Rng& rng);

// Realization of the given length; x(0) is drawn from the stationary distribution.
TimeSeries generate_ou(const OuParams& params, std::size_t length, Rng& rng);

// Same recursion with an explicit initial value.
TimeSeries generate_ou_from(const OuParams& params, double x0, std::size_t length, Rng& rng);

// theta ~ U[theta_min, theta_max], sigma ~ U[sigma_min, sigma_max], mu = 0.
OuParams sample_params(const ParamRanges& ranges, Rng& rng);

}  // namespace ousg
