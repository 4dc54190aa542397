#include "ousg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ousg/errors.hpp"

namespace ousg {

namespace {

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::vector<std::size_t> find_crossings(const TimeSeries& series, double gamma) {
  if (series.size() < 2) throw ConfigError("crossing scan needs a series of length >= 2");
  std::vector<std::size_t> out;
  int prev = sgn(series[0] - gamma);
  if (prev == 0) prev = 1;
  for (std::size_t t = 1; t < series.size(); ++t) {
    int cur = sgn(series[t] - gamma);
    if (cur == 0) cur = prev;
    if (cur != prev) out.push_back(t);
    prev = cur;
  }
  return out;
}

EpisodeMetrics score_trace(const TimeSeries& series, const SamplingTrace& trace,
                           double gamma) {
  const std::size_t length = series.size();
  if (trace.times.empty()) throw UsageError("trace has no samples");
  if (trace.times.size() != trace.values.size())
    throw UsageError("trace times and values differ in length");
  for (std::size_t k = 1; k < trace.times.size(); ++k)
    if (trace.times[k] <= trace.times[k - 1])
      throw UsageError("trace times must be strictly increasing");

  // Samples beyond the series end carry no information about it.
  std::size_t in_range = trace.times.size();
  while (in_range > 0 && trace.times[in_range - 1] >= length) --in_range;

  const std::vector<std::size_t> crossings = find_crossings(series, gamma);

  EpisodeMetrics m;
  m.n_crossings = crossings.size();
  m.sampling_ratio = static_cast<double>(in_range) / static_cast<double>(length);

  const auto begin = trace.times.begin();
  const auto end = trace.times.begin() + static_cast<std::ptrdiff_t>(in_range);
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const std::size_t t_true = crossings[k];
    const std::size_t window_end = (k + 1 < crossings.size()) ? crossings[k + 1] : length;
    const auto it = std::lower_bound(begin, end, t_true);
    if (it != end && *it < window_end) {
      m.delays.push_back(*it - t_true);
      for (std::size_t t = t_true; t < *it; ++t) m.error_cost += std::abs(series[t] - gamma);
    } else {
      ++m.n_missed;
      for (std::size_t t = t_true; t < window_end; ++t)
        m.error_cost += std::abs(series[t] - gamma);
    }
  }
  return m;
}

MetricsSummary aggregate(const std::vector<EpisodeMetrics>& episodes) {
  if (episodes.empty()) throw UsageError("cannot aggregate zero episodes");

  MetricsSummary s;
  s.episodes = episodes.size();
  double delay_sum = 0.0;
  double cost_sum = 0.0;
  double ratio_sum = 0.0;
  for (const EpisodeMetrics& m : episodes) {
    s.total_crossings += m.n_crossings;
    s.total_missed += m.n_missed;
    s.total_detected += m.delays.size();
    for (std::size_t d : m.delays) delay_sum += static_cast<double>(d);
    cost_sum += m.error_cost;
    ratio_sum += m.sampling_ratio;
  }
  if (s.total_detected > 0)
    s.mean_delay = delay_sum / static_cast<double>(s.total_detected);
  if (s.total_crossings > 0)
    s.miss_rate = static_cast<double>(s.total_missed) / static_cast<double>(s.total_crossings);
  s.mean_cost = cost_sum / static_cast<double>(s.episodes);
  s.mean_sampling_ratio = ratio_sum / static_cast<double>(s.episodes);
  return s;
}

}  // namespace ousg
