#include "ousg/ou_process.hpp"

#include <cmath>
#include <string>

#include "ousg/errors.hpp"

namespace ousg {

void validate(const OuParams& params) {
  if (!(params.theta > 0.0) || !std::isfinite(params.theta))
    throw ConfigError("OU theta must be positive and finite, got " + std::to_string(params.theta));
  if (!(params.sigma >= 0.0) || !std::isfinite(params.sigma))
    throw ConfigError("OU sigma must be nonnegative and finite, got " + std::to_string(params.sigma));
  if (!std::isfinite(params.mu)) throw ConfigError("OU mu must be finite");
}

void validate(const ParamRanges& ranges) {
  if (!(ranges.theta_min > 0.0) || !(ranges.theta_min <= ranges.theta_max))
    throw ConfigError("theta range requires 0 < theta_min <= theta_max");
  if (!(ranges.sigma_min > 0.0) || !(ranges.sigma_min <= ranges.sigma_max))
    throw ConfigError("sigma range requires 0 < sigma_min <= sigma_max");
}

double stationary_sd(const OuParams& params) {
  return params.sigma / std::sqrt(2.0 * params.theta);
}

namespace {

struct StepCoef {
  double decay;  // e^{-theta}
  double drift;  // mu (1 - e^{-theta})
  double noise;  // sigma sqrt((1 - e^{-2 theta}) / (2 theta))
};

StepCoef step_coef(const OuParams& p) {
  const double decay = std::exp(-p.theta);
  const double var = (1.0 - std::exp(-2.0 * p.theta)) / (2.0 * p.theta);
  return {decay, p.mu * (1.0 - decay), p.sigma * std::sqrt(var)};
}

TimeSeries run_recursion(const OuParams& params, double x0, std::size_t length, Rng& rng) {
  if (length < 2) throw ConfigError("series length must be >= 2, got " + std::to_string(length));
  const StepCoef c = step_coef(params);
  std::normal_distribution<double> normal(0.0, 1.0);
  TimeSeries xs(length);
  xs[0] = x0;
  for (std::size_t t = 1; t < length; ++t)
    xs[t] = xs[t - 1] * c.decay + c.drift + c.noise * normal(rng);
  return xs;
}

}  // namespace

double ou_step(const OuParams& params, double x, Rng& rng) {
  validate(params);
  const StepCoef c = step_coef(params);
  std::normal_distribution<double> normal(0.0, 1.0);
  return x * c.decay + c.drift + c.noise * normal(rng);
}

TimeSeries generate_ou(const OuParams& params, std::size_t length, Rng& rng) {
  validate(params);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double x0 = params.mu + stationary_sd(params) * normal(rng);
  return run_recursion(params, x0, length, rng);
}

TimeSeries generate_ou_from(const OuParams& params, double x0, std::size_t length, Rng& rng) {
  validate(params);
  return run_recursion(params, x0, length, rng);
}

OuParams sample_params(const ParamRanges& ranges, Rng& rng) {
  validate(ranges);
  std::uniform_real_distribution<double> theta(ranges.theta_min, ranges.theta_max);
  std::uniform_real_distribution<double> sigma(ranges.sigma_min, ranges.sigma_max);
  OuParams p;
  p.theta = theta(rng);
  p.sigma = sigma(rng);
  p.mu = 0.0;
  return p;
}

}  // namespace ousg
