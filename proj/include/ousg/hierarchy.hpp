#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ousg/gan.hpp"
#include "ousg/ou_process.hpp"

namespace ousg {

// Ordered stack of GAN levels; level k sits at levels[k-1] and conditions on
// k values. The stack size is the prediction length N.
struct Hierarchy {
  std::vector<GanLevel> levels;
  std::size_t size() const { return levels.size(); }
};

// Threshold and buffer half-width for the crossing-point test.
struct DetectorConfig {
  double gamma = 0.0;
  double rho = 0.0;
};

struct PredictionSet {
  std::size_t base_t = 0;
  Vec predictions;  // x̂(base_t + 1) .. x̂(base_t + N)
};

struct SamplingTrace {
  std::vector<std::size_t> times;  // strictly increasing, starts at 0
  Vec values;
};

// Throws UsageError when the level stack is malformed.
void validate(const Hierarchy& h);

// x̂(t+i) for i = 1..N, each level fed the sample plus all lower predictions.
PredictionSet predict_cascade(const Hierarchy& h, double x_t, std::size_t base_t = 0);

// A prediction is a crossing point when it lies inside [gamma - rho, gamma + rho]
// or on the far side of gamma from the current sample.
bool is_crossing_point(double pred, double x_t, const DetectorConfig& cfg);

// Earliest predicted crossing instant, else base_t + N + 1.
std::size_t next_sample_time(const PredictionSet& preds, double x_t,
                             const DetectorConfig& cfg);

// ---- training ----------------------------------------------------------------

struct TrainConfig {
  std::size_t n_levels = 1;
  std::size_t episodes_per_level = 5000;
  std::size_t series_length = 1000;
  ParamRanges ranges;
  double gamma = 0.0;
  std::uint64_t seed = 1;
  NetSizes sizes;
  double learning_rate = 1e-3;
};

void validate(const TrainConfig& cfg);

struct TrainStepInfo {
  std::size_t level = 0;
  std::size_t episode = 0;
  std::size_t t = 0;
  StepReport report;
};

using TrainObserver = std::function<void(const TrainStepInfo&)>;
// Called once per completed (and frozen) level with the hierarchy so far.
using LevelObserver = std::function<void(std::size_t level, const Hierarchy&)>;

// Level-by-level training: each level runs its episode budget walking fresh
// series under the sampling rule of the partial hierarchy (buffer width 0),
// updating only the newest level, then freezes.
Hierarchy train_hierarchy(const TrainConfig& cfg, const TrainObserver& on_step = {},
                          const LevelObserver& on_level = {});

// ---- testing -----------------------------------------------------------------

// Walks one series from t = 0: cascade, next sampling time, read the sample.
// With online updates enabled the episode works on its own unfrozen copy and
// the level whose prediction the sample realizes takes one training step.
SamplingTrace run_test_episode(const Hierarchy& h, const TimeSeries& series,
                               const DetectorConfig& cfg, bool online);

// Mean squared prediction error per level on held-out series, cascading from
// every time index until n_points cascade evaluations are collected.
struct EvalConfig {
  ParamRanges ranges;
  std::size_t series_length = 1000;
  std::size_t n_points = 10000;
  std::uint64_t seed = 1;
};

Vec hierarchy_level_mse(const Hierarchy& h, const EvalConfig& cfg);

// ---- persistence ---------------------------------------------------------------

// One file for all levels: magic "OUSG", format version, level count, a
// per-level shape table, then raw little-endian doubles in declaration order.
// Optimizer state is not persisted; loaded levels come back frozen.
void save_hierarchy(const std::string& path, const Hierarchy& h);
Hierarchy load_hierarchy(const std::string& path);

}  // namespace ousg
