#include "ousg/hierarchy.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <utility>

#include "ousg/errors.hpp"
#include "ousg/weight_io.hpp"

namespace ousg {

namespace {

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

constexpr char kMagic[4] = {'O', 'U', 'S', 'G'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kTensorsPerLevel = 18;  // 12 generator + 6 discriminator

}  // namespace

void validate(const Hierarchy& h) {
  for (std::size_t k = 0; k < h.levels.size(); ++k) {
    const GanLevel& lv = h.levels[k];
    if (lv.index != k + 1 || lv.gen.input_size != k + 1)
      throw UsageError("malformed hierarchy: level at position " + std::to_string(k + 1) +
                       " has index " + std::to_string(lv.index) + " and input size " +
                       std::to_string(lv.gen.input_size));
  }
}

PredictionSet predict_cascade(const Hierarchy& h, double x_t, std::size_t base_t) {
  validate(h);
  PredictionSet out;
  out.base_t = base_t;
  out.predictions.reserve(h.size());
  Vec s;
  s.reserve(h.size());
  s.push_back(x_t);
  for (const GanLevel& level : h.levels) {
    const double pred = predict(level, s);
    out.predictions.push_back(pred);
    s.push_back(pred);
  }
  return out;
}

bool is_crossing_point(double pred, double x_t, const DetectorConfig& cfg) {
  if (std::abs(pred - cfg.gamma) <= cfg.rho) return true;
  return sgn(pred - cfg.gamma) != sgn(x_t - cfg.gamma);
}

std::size_t next_sample_time(const PredictionSet& preds, double x_t,
                             const DetectorConfig& cfg) {
  for (std::size_t k = 0; k < preds.predictions.size(); ++k)
    if (is_crossing_point(preds.predictions[k], x_t, cfg)) return preds.base_t + k + 1;
  return preds.base_t + preds.predictions.size() + 1;
}

void validate(const TrainConfig& cfg) {
  if (cfg.n_levels < 1) throw ConfigError("training needs at least one level");
  if (cfg.episodes_per_level < 1) throw ConfigError("episodes per level must be >= 1");
  if (cfg.series_length < cfg.n_levels + 2)
    throw ConfigError("series length " + std::to_string(cfg.series_length) +
                      " too short for " + std::to_string(cfg.n_levels) + " levels");
  validate(cfg.ranges);
  if (!std::isfinite(cfg.gamma)) throw ConfigError("gamma must be finite");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
}

Hierarchy train_hierarchy(const TrainConfig& cfg, const TrainObserver& on_step,
                          const LevelObserver& on_level) {
  validate(cfg);
  const DetectorConfig rule{cfg.gamma, 0.0};  // buffer applies in testing only
  const std::ptrdiff_t length = static_cast<std::ptrdiff_t>(cfg.series_length);

  Hierarchy h;
  for (std::size_t i = 1; i <= cfg.n_levels; ++i) {
    Rng init_rng = seeded_rng(cfg.seed, kSeedInit, i);
    h.levels.push_back(make_gan_level(i, cfg.sizes, cfg.learning_rate, init_rng));
    GanLevel& level = h.levels.back();

    for (std::size_t episode = 0; episode < cfg.episodes_per_level; ++episode) {
      Rng rng = seeded_rng(cfg.seed, kSeedTrain, i, episode);
      const OuParams params = sample_params(cfg.ranges, rng);
      const TimeSeries xs = generate_ou(params, cfg.series_length, rng);

      Vec s;
      std::size_t t = 0;
      while (static_cast<std::ptrdiff_t>(t) <= length - static_cast<std::ptrdiff_t>(i) - 1) {
        s.assign(1, xs[t]);
        PredictionSet preds;
        preds.base_t = t;
        preds.predictions.reserve(i);
        for (std::size_t j = 1; j < i; ++j) {  // frozen lower levels
          const double pred = predict(h.levels[j - 1], s);
          preds.predictions.push_back(pred);
          s.push_back(pred);
        }
        const StepReport report = train_step(level, s, xs[t + i]);
        preds.predictions.push_back(report.prediction);
        if (on_step) on_step({i, episode, t, report});
        t = next_sample_time(preds, xs[t], rule);
      }
    }

    level.frozen = true;
    if (on_level) on_level(i, h);
  }
  return h;
}

namespace {

SamplingTrace walk_episode(const Hierarchy& h, const TimeSeries& xs,
                           const DetectorConfig& cfg, Hierarchy* online) {
  const std::size_t last = xs.size() - 1;
  const std::size_t n = h.size();

  SamplingTrace trace;
  trace.times.push_back(0);
  trace.values.push_back(xs[0]);

  std::size_t t = 0;
  double x_t = xs[0];
  while (true) {
    const PredictionSet preds = predict_cascade(h, x_t, t);
    const std::size_t next = next_sample_time(preds, x_t, cfg);
    if (next > last) break;
    const double x_next = xs[next];
    trace.times.push_back(next);
    trace.values.push_back(x_next);

    const std::size_t dt = next - t;
    if (online && dt <= n) {
      // Conditioning vector that produced x̂(next): the sample at t followed
      // by the lower-level predictions.
      Vec s;
      s.reserve(dt);
      s.push_back(x_t);
      for (std::size_t k = 0; k + 1 < dt; ++k) s.push_back(preds.predictions[k]);
      train_step(online->levels[dt - 1], s, x_next);
    }
    t = next;
    x_t = x_next;
  }
  return trace;
}

}  // namespace

SamplingTrace run_test_episode(const Hierarchy& h, const TimeSeries& series,
                               const DetectorConfig& cfg, bool online) {
  validate(h);
  if (series.size() < 2) throw ConfigError("test episode needs a series of length >= 2");
  if (!(cfg.rho >= 0.0)) throw ConfigError("buffer width rho must be >= 0");
  if (!online) return walk_episode(h, series, cfg, nullptr);

  Hierarchy local = h;
  for (GanLevel& level : local.levels) level.frozen = false;  // testing-phase updates
  return walk_episode(local, series, cfg, &local);
}

Vec hierarchy_level_mse(const Hierarchy& h, const EvalConfig& cfg) {
  validate(h);
  const std::size_t n = h.size();
  if (n == 0) throw UsageError("cannot evaluate an empty hierarchy");
  if (cfg.series_length < n + 2) throw ConfigError("evaluation series too short");

  Vec acc(n, 0.0);
  std::size_t count = 0;
  std::uint64_t episode = 0;
  while (count < cfg.n_points) {
    Rng rng = seeded_rng(cfg.seed, kSeedEval, episode++);
    const OuParams params = sample_params(cfg.ranges, rng);
    const TimeSeries xs = generate_ou(params, cfg.series_length, rng);
    for (std::size_t t = 0; t + n < xs.size() && count < cfg.n_points; ++t) {
      const PredictionSet preds = predict_cascade(h, xs[t], t);
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = preds.predictions[i] - xs[t + 1 + i];
        acc[i] += diff * diff;
      }
      ++count;
    }
  }
  for (double& v : acc) v /= static_cast<double>(count);
  return acc;
}

void save_hierarchy(const std::string& path, const Hierarchy& h) {
  validate(h);
  WeightWriter w(path);
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(h.size()));
  for (const GanLevel& level : h.levels) {
    w.u32(static_cast<std::uint32_t>(level.index));
    w.u32(kTensorsPerLevel);
    for (const auto& view : tensor_views(level.gen)) {
      w.u32(static_cast<std::uint32_t>(view.rows));
      w.u32(static_cast<std::uint32_t>(view.cols));
    }
    for (const auto& view : tensor_views(level.disc)) {
      w.u32(static_cast<std::uint32_t>(view.rows));
      w.u32(static_cast<std::uint32_t>(view.cols));
    }
  }
  for (const GanLevel& level : h.levels) {
    for (const auto& view : tensor_views(level.gen)) w.f64_array(*view.data);
    for (const auto& view : tensor_views(level.disc)) w.f64_array(*view.data);
  }
  w.finish();
}

namespace {

struct Shape {
  std::uint32_t rows = 0, cols = 0;
};

std::string level_field(std::size_t level, const char* name) {
  return "level " + std::to_string(level) + " " + name;
}

}  // namespace

Hierarchy load_hierarchy(const std::string& path) {
  WeightReader r(path);
  char magic[4];
  r.bytes(magic, sizeof magic, "magic");
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw PersistenceError("bad magic in " + path + ": not a weight file");
  const std::uint32_t version = r.u32("version");
  if (version != kFormatVersion)
    throw PersistenceError("unsupported weight format version " + std::to_string(version) +
                           " in " + path + " (expected " + std::to_string(kFormatVersion) + ")");
  const std::uint32_t levels = r.u32("level count");
  if (levels == 0) throw PersistenceError("level count is zero in " + path);

  Hierarchy h;
  h.levels.reserve(levels);
  for (std::uint32_t k = 1; k <= levels; ++k) {
    const std::uint32_t index = r.u32(level_field(k, "index"));
    if (index != k)
      throw PersistenceError("level index out of order: expected " + std::to_string(k) +
                             ", file has " + std::to_string(index));
    const std::uint32_t tensors = r.u32(level_field(k, "tensor count"));
    if (tensors != kTensorsPerLevel)
      throw PersistenceError(level_field(k, "tensor count") + " is " +
                             std::to_string(tensors) + ", expected " +
                             std::to_string(kTensorsPerLevel));
    std::vector<Shape> shapes(tensors);
    for (std::uint32_t j = 0; j < tensors; ++j) {
      shapes[j].rows = r.u32(level_field(k, "shape rows"));
      shapes[j].cols = r.u32(level_field(k, "shape cols"));
    }

    // Hidden sizes are implied by the shape table.
    const std::size_t lstm_hidden = shapes[0].rows;
    const std::size_t gen_fc = shapes[8].rows;
    const std::size_t disc_h1 = shapes[12].rows;
    const std::size_t disc_h2 = shapes[14].rows;

    GanLevel level;
    level.index = k;
    level.gen = make_generator_zeros(k, lstm_hidden, gen_fc);
    level.disc = make_discriminator_zeros(disc_h1, disc_h2);
    level.gen_opt = make_adam(param_count(level.gen));
    level.disc_opt = make_adam(param_count(level.disc));
    level.frozen = true;

    std::size_t j = 0;
    for (const auto& view : tensor_views(level.gen)) {
      if (shapes[j].rows != view.rows || shapes[j].cols != view.cols)
        throw PersistenceError("shape mismatch for " + level_field(k, view.name) +
                               ": file has " + std::to_string(shapes[j].rows) + "x" +
                               std::to_string(shapes[j].cols) + ", expected " +
                               std::to_string(view.rows) + "x" + std::to_string(view.cols));
      ++j;
    }
    for (const auto& view : tensor_views(level.disc)) {
      if (shapes[j].rows != view.rows || shapes[j].cols != view.cols)
        throw PersistenceError("shape mismatch for " + level_field(k, view.name) +
                               ": file has " + std::to_string(shapes[j].rows) + "x" +
                               std::to_string(shapes[j].cols) + ", expected " +
                               std::to_string(view.rows) + "x" + std::to_string(view.cols));
      ++j;
    }
    h.levels.push_back(std::move(level));
  }

  for (std::uint32_t k = 1; k <= levels; ++k) {
    GanLevel& level = h.levels[k - 1];
    for (auto& view : tensor_views(level.gen))
      r.f64_array(*view.data, view.rows * view.cols, level_field(k, view.name));
    for (auto& view : tensor_views(level.disc))
      r.f64_array(*view.data, view.rows * view.cols, level_field(k, view.name));
    for (const auto& view : tensor_views(level.gen))
      for (double v : *view.data)
        if (!std::isfinite(v))
          throw PersistenceError("non-finite value in " + level_field(k, view.name));
    for (const auto& view : tensor_views(level.disc))
      for (double v : *view.data)
        if (!std::isfinite(v))
          throw PersistenceError("non-finite value in " + level_field(k, view.name));
  }
  if (!r.at_end()) throw PersistenceError("trailing data after weights in " + path);
  return h;
}

}  // namespace ousg
