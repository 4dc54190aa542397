#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ousg/hierarchy.hpp"
#include "ousg/ou_process.hpp"

namespace ousg {

// Every index t >= 1 where the series changes sides of gamma. A value exactly
// on the threshold keeps the previous side, so a tangential touch is not
// counted twice.
std::vector<std::size_t> find_crossings(const TimeSeries& series, double gamma);

struct EpisodeMetrics {
  std::vector<std::size_t> delays;  // one per detected crossing
  std::size_t n_crossings = 0;
  std::size_t n_missed = 0;
  double error_cost = 0.0;
  double sampling_ratio = 0.0;
};

// A crossing at t_k counts as detected when a sample lands in [t_k, t_{k+1});
// its delay is measured to the earliest such sample and its error cost
// accumulates |x(t) - gamma| from t_k up to that sample (rectangle rule).
// A missed crossing accrues cost over its whole window. Sample times beyond
// the series end are ignored.
EpisodeMetrics score_trace(const TimeSeries& series, const SamplingTrace& trace,
                           double gamma);

struct MetricsSummary {
  std::optional<double> mean_delay;  // pooled over detected crossings
  std::optional<double> miss_rate;   // pooled: total missed / total crossings
  double mean_cost = 0.0;            // per-episode average
  double mean_sampling_ratio = 0.0;
  std::size_t total_crossings = 0;
  std::size_t total_detected = 0;
  std::size_t total_missed = 0;
  std::size_t episodes = 0;
};

// Pooled aggregation; delay and miss rate stay unset when undefined instead
// of collapsing to zero.
MetricsSummary aggregate(const std::vector<EpisodeMetrics>& episodes);

}  // namespace ousg
