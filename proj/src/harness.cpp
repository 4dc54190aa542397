#include "ousg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "ousg/errors.hpp"
#include "ousg/parallel.hpp"

namespace ousg {

namespace {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string("nan");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  validate(cfg.ranges);
  if (!std::isfinite(cfg.gamma)) throw ConfigError("gamma must be finite");
  if (cfg.rho_grid.empty()) throw ConfigError("rho grid must be nonempty");
  for (double rho : cfg.rho_grid)
    if (!(rho >= 0.0) || !std::isfinite(rho))
      throw ConfigError("rho values must be nonnegative, got " + std::to_string(rho));
  if (cfg.n_grid.empty()) throw ConfigError("N grid must be nonempty");
  for (std::size_t n : cfg.n_grid)
    if (n < 1) throw ConfigError("N values must be >= 1");
  if (cfg.episodes_train < 1 || cfg.episodes_test < 1)
    throw ConfigError("episode counts must be >= 1");
  const std::size_t max_n = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
  if (cfg.series_length < max_n + 2)
    throw ConfigError("series length " + std::to_string(cfg.series_length) +
                      " too short for N = " + std::to_string(max_n));
  if (!(cfg.sampling_cost > 0.0)) throw ConfigError("sampling cost must be positive");
  if (cfg.eval_points < 1) throw ConfigError("eval points must be >= 1");
  if (cfg.out_dir.empty()) throw ConfigError("output directory must be set");
}

std::string weights_path(const std::string& out_dir, std::size_t n) {
  return out_dir + "/hier_n" + std::to_string(n) + ".ousg";
}

std::string sweep_csv_header() {
  return "detector,rho,n,mean_delay,miss_rate,mean_cost,sampling_ratio,n_crossings,seed";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\n";
  for (const SweepRow& r : rows) {
    out += r.detector;
    out += ',' + fmt_double(r.rho);
    out += ',' + std::to_string(r.n);
    out += ',' + fmt_opt(r.mean_delay);
    out += ',' + fmt_opt(r.miss_rate);
    out += ',' + fmt_double(r.mean_cost);
    out += ',' + fmt_double(r.sampling_ratio);
    out += ',' + std::to_string(r.n_crossings);
    out += ',' + std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

TestEpisodes make_test_episodes(const ParamRanges& ranges, std::size_t count,
                                std::size_t length, std::uint64_t master_seed) {
  TestEpisodes eps;
  eps.params.resize(count);
  eps.series.resize(count);
  for (std::size_t e = 0; e < count; ++e) {
    Rng rng = seeded_rng(master_seed, kSeedTest, e);
    eps.params[e] = sample_params(ranges, rng);
    eps.series[e] = generate_ou(eps.params[e], length, rng);
  }
  return eps;
}

MetricsSummary sweep_cell_gan(const Hierarchy& h, const TestEpisodes& episodes,
                              const DetectorConfig& cfg, bool online, unsigned threads) {
  std::vector<EpisodeMetrics> metrics(episodes.series.size());
  parallel_for(episodes.series.size(), threads, [&](std::size_t e) {
    const SamplingTrace trace = run_test_episode(h, episodes.series[e], cfg, online);
    metrics[e] = score_trace(episodes.series[e], trace, cfg.gamma);
  });
  return aggregate(metrics);
}

MetricsSummary sweep_cell_baseline(const TestEpisodes& episodes, double sampling_cost,
                                   double gamma, unsigned threads) {
  std::vector<EpisodeMetrics> metrics(episodes.series.size());
  parallel_for(episodes.series.size(), threads, [&](std::size_t e) {
    const BaselineConfig cfg{sampling_cost, episodes.params[e], gamma};
    const SamplingTrace trace = run_baseline_episode(episodes.series[e], cfg);
    metrics[e] = score_trace(episodes.series[e], trace, gamma);
  });
  return aggregate(metrics);
}

SweepRow make_row(const std::string& detector, double rho, std::size_t n,
                  const MetricsSummary& summary, std::uint64_t seed) {
  SweepRow row;
  row.detector = detector;
  row.rho = rho;
  row.n = n;
  row.mean_delay = summary.mean_delay;
  row.miss_rate = summary.miss_rate;
  row.mean_cost = summary.mean_cost;
  row.sampling_ratio = summary.mean_sampling_ratio;
  row.n_crossings = summary.total_crossings;
  row.seed = seed;
  return row;
}

TrainResult cmd_train(const ExperimentConfig& cfg) {
  validate(cfg);
  ensure_out_dir(cfg.out_dir);

  std::vector<std::size_t> grid = cfg.n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t max_n = grid.back();

  TrainConfig train_cfg;
  train_cfg.n_levels = max_n;
  train_cfg.episodes_per_level = cfg.episodes_train;
  train_cfg.series_length = cfg.series_length;
  train_cfg.ranges = cfg.ranges;
  train_cfg.gamma = cfg.gamma;
  train_cfg.seed = cfg.seed;
  train_cfg.sizes = cfg.sizes;
  train_cfg.learning_rate = cfg.learning_rate;

  TrainResult result;
  auto snapshot = [&](std::size_t level, const Hierarchy& h) {
    if (std::find(grid.begin(), grid.end(), level) == grid.end()) return;
    const std::string path = weights_path(cfg.out_dir, level);
    save_hierarchy(path, h);
    result.weight_files.push_back(path);
    std::cout << "trained level " << level << "/" << max_n << ", wrote " << path << "\n";
  };
  const Hierarchy h = train_hierarchy(train_cfg, {}, snapshot);

  EvalConfig eval_cfg{cfg.ranges, cfg.series_length, cfg.eval_points, cfg.seed};
  result.level_mse = hierarchy_level_mse(h, eval_cfg);

  std::string csv = "n,level,mse,points,seed\n";
  for (std::size_t n : grid)
    for (std::size_t level = 1; level <= n; ++level)
      csv += std::to_string(n) + ',' + std::to_string(level) + ',' +
             fmt_double(result.level_mse[level - 1]) + ',' + std::to_string(cfg.eval_points) +
             ',' + std::to_string(cfg.seed) + '\n';
  result.loss_csv = cfg.out_dir + "/loss_vs_level.csv";
  write_text_file(result.loss_csv, csv);
  std::cout << "wrote " << result.loss_csv << "\n";
  return result;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);

  std::vector<Hierarchy> hierarchies;
  hierarchies.reserve(cfg.n_grid.size());
  for (std::size_t n : cfg.n_grid) {
    const std::string path = weights_path(cfg.out_dir, n);
    if (!fs::exists(path))
      throw ConfigError("no trained weights for N = " + std::to_string(n) +
                        " (expected " + path + "); run train first");
    Hierarchy h = load_hierarchy(path);
    if (h.size() != n)
      throw ConfigError("weight file " + path + " holds " + std::to_string(h.size()) +
                        " levels, expected " + std::to_string(n));
    hierarchies.push_back(std::move(h));
  }

  const TestEpisodes episodes =
      make_test_episodes(cfg.ranges, cfg.episodes_test, cfg.series_length, cfg.seed);

  const MetricsSummary base =
      sweep_cell_baseline(episodes, cfg.sampling_cost, cfg.gamma, cfg.threads);

  // One summary per (N, rho) cell.
  std::vector<std::vector<MetricsSummary>> cells(cfg.n_grid.size());
  for (std::size_t a = 0; a < cfg.n_grid.size(); ++a) {
    cells[a].resize(cfg.rho_grid.size());
    for (std::size_t b = 0; b < cfg.rho_grid.size(); ++b) {
      const DetectorConfig det{cfg.gamma, cfg.rho_grid[b]};
      cells[a][b] = sweep_cell_gan(hierarchies[a], episodes, det, cfg.online_updates,
                                   cfg.threads);
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t b = 0; b < cfg.rho_grid.size(); ++b) {
    rows.push_back(make_row("baseline", cfg.rho_grid[b], 0, base, cfg.seed));
    for (std::size_t a = 0; a < cfg.n_grid.size(); ++a)
      rows.push_back(make_row("gan-" + std::to_string(cfg.n_grid[a]), cfg.rho_grid[b],
                              cfg.n_grid[a], cells[a][b], cfg.seed));
  }
  return rows;
}

std::string cmd_sweep(const ExperimentConfig& cfg) {
  const std::vector<SweepRow> rows = run_sweep(cfg);
  ensure_out_dir(cfg.out_dir);
  const std::string path = cfg.out_dir + "/sweep.csv";
  write_text_file(path, sweep_csv(rows));
  std::cout << "wrote " << path << "\n";
  return path;
}

std::string cmd_demo(const ExperimentConfig& cfg, const std::string& dump_series_path) {
  validate(cfg);
  ensure_out_dir(cfg.out_dir);

  const std::size_t n = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
  const std::string wpath = weights_path(cfg.out_dir, n);
  if (!fs::exists(wpath))
    throw ConfigError("no trained weights for N = " + std::to_string(n) +
                      " (expected " + wpath + "); run train first");
  const Hierarchy h = load_hierarchy(wpath);

  Rng rng = seeded_rng(cfg.seed, kSeedDemo, 0);
  const OuParams params = sample_params(cfg.ranges, rng);
  const TimeSeries xs = generate_ou(params, cfg.series_length, rng);

  const BaselineConfig base_cfg{cfg.sampling_cost, params, cfg.gamma};
  const SamplingTrace base = run_baseline_episode(xs, base_cfg);
  const DetectorConfig det{cfg.gamma, cfg.rho_grid.back()};
  const SamplingTrace gan = run_test_episode(h, xs, det, cfg.online_updates);

  std::vector<char> base_flag(xs.size(), 0), gan_flag(xs.size(), 0);
  for (std::size_t t : base.times) base_flag[t] = 1;
  for (std::size_t t : gan.times) gan_flag[t] = 1;

  std::string csv = "t,x,baseline_sample,gan_sample\n";
  for (std::size_t t = 0; t < xs.size(); ++t)
    csv += std::to_string(t) + ',' + fmt_double(xs[t]) + ',' +
           (base_flag[t] ? "1" : "0") + ',' + (gan_flag[t] ? "1" : "0") + '\n';
  const std::string path = cfg.out_dir + "/demo.csv";
  write_text_file(path, csv);
  std::cout << "wrote " << path << "\n";

  if (!dump_series_path.empty()) {
    std::string dump;
    char buf[64];
    for (double v : xs) {
      std::snprintf(buf, sizeof buf, "%.17g\n", v);
      dump += buf;
    }
    write_text_file(dump_series_path, dump);
    std::cout << "wrote " << dump_series_path << "\n";
  }
  return path;
}

}  // namespace ousg
