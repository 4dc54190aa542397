#include "ousg/baseline.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ousg/errors.hpp"

namespace ousg {

void validate(const BaselineConfig& cfg) {
  if (!(cfg.sampling_cost > 0.0) || !std::isfinite(cfg.sampling_cost))
    throw ConfigError("sampling cost must be positive, got " + std::to_string(cfg.sampling_cost));
  validate(cfg.params);
  if (!(cfg.params.sigma > 0.0))
    throw ConfigError("baseline policy requires sigma > 0");
  if (!std::isfinite(cfg.gamma)) throw ConfigError("gamma must be finite");
}

double t_star(double sampling_cost, double sigma) {
  if (!(sampling_cost > 0.0) || !(sigma > 0.0))
    throw ConfigError("t_star requires positive sampling cost and sigma");
  return std::cbrt(18.0 * std::numbers::pi * sampling_cost * sampling_cost / (sigma * sigma));
}

double next_sample_offset(double x_t, const BaselineConfig& cfg) {
  validate(cfg);
  const double theta = cfg.params.theta;
  const double sigma = cfg.params.sigma;
  const double ts = t_star(cfg.sampling_cost, sigma);
  const double coef = (1.0 - std::exp(-theta * ts)) / std::sqrt(1.0 - std::exp(-2.0 * theta * ts)) *
                      std::sqrt(std::numbers::pi) / (sigma * std::sqrt(theta));
  return ts + coef * std::abs(x_t - cfg.gamma);
}

SamplingTrace run_baseline_episode(const TimeSeries& series, const BaselineConfig& cfg) {
  validate(cfg);
  if (series.size() < 2) throw ConfigError("baseline episode needs a series of length >= 2");

  SamplingTrace trace;
  trace.times.push_back(0);
  trace.values.push_back(series[0]);

  const std::size_t last = series.size() - 1;
  std::size_t t = 0;
  while (true) {
    const double offset = next_sample_offset(series[t], cfg);
    const auto step = static_cast<std::size_t>(std::max<long long>(1, std::llround(offset)));
    const std::size_t next = t + step;
    if (next > last) break;
    trace.times.push_back(next);
    trace.values.push_back(series[next]);
    t = next;
  }
  return trace;
}

}  // namespace ousg
