#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ousg/baseline.hpp"
#include "ousg/hierarchy.hpp"
#include "ousg/metrics.hpp"
#include "ousg/ou_process.hpp"

namespace ousg {

// Experiment settings; defaults follow the standard operating point
// (theta in [0.02, 0.03], sigma in [0.4, 0.6], mu = 0, gamma = 0, c_s = 0.1).
struct ExperimentConfig {
  ParamRanges ranges;
  double gamma = 0.0;
  std::vector<double> rho_grid{0.0, 0.05, 0.1, 0.15, 0.2};
  std::vector<std::size_t> n_grid{1, 5, 10, 15, 20};
  std::size_t episodes_train = 5000;
  std::size_t episodes_test = 500;  // paper-scale runs use 10000
  std::size_t series_length = 1000;
  std::size_t eval_points = 10000;
  double sampling_cost = 0.1;
  bool online_updates = true;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  NetSizes sizes;
  double learning_rate = 1e-3;
};

void validate(const ExperimentConfig& cfg);

// Weight file written by `train` and consumed by `sweep`/`demo`.
std::string weights_path(const std::string& out_dir, std::size_t n);

// One aggregate row of the sweep output.
struct SweepRow {
  std::string detector;  // "baseline" or "gan-<N>"
  double rho = 0.0;
  std::size_t n = 0;  // prediction length; 0 for the baseline
  std::optional<double> mean_delay;
  std::optional<double> miss_rate;
  double mean_cost = 0.0;
  double sampling_ratio = 0.0;
  std::size_t n_crossings = 0;
  std::uint64_t seed = 0;
};

std::string sweep_csv_header();
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Paired test episodes: every detector scores the same realizations.
struct TestEpisodes {
  std::vector<OuParams> params;
  std::vector<TimeSeries> series;
};

TestEpisodes make_test_episodes(const ParamRanges& ranges, std::size_t count,
                                std::size_t length, std::uint64_t master_seed);

// Aggregate over all episodes for one detector cell.
MetricsSummary sweep_cell_gan(const Hierarchy& h, const TestEpisodes& episodes,
                              const DetectorConfig& cfg, bool online, unsigned threads);
MetricsSummary sweep_cell_baseline(const TestEpisodes& episodes, double sampling_cost,
                                   double gamma, unsigned threads);

SweepRow make_row(const std::string& detector, double rho, std::size_t n,
                  const MetricsSummary& summary, std::uint64_t seed);

// ---- subcommands ----------------------------------------------------------

struct TrainResult {
  std::vector<std::string> weight_files;        // one per N in the grid
  std::vector<double> level_mse;                // post-freeze MSE per level, 1..max(N)
  std::string loss_csv;                         // path of the loss-vs-level table
};

// Trains the level stack once up to max(n_grid), snapshotting each N in the
// grid (training is level-by-level with freezing, so every trained prefix is
// exactly the hierarchy that training to that N alone would produce), then
// evaluates post-freeze per-level loss and writes loss_vs_level.csv.
TrainResult cmd_train(const ExperimentConfig& cfg);

// Runs the rho x N sweep plus the baseline on paired episodes.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);
// run_sweep + sweep.csv; returns the CSV path.
std::string cmd_sweep(const ExperimentConfig& cfg);

// One episode's series with baseline and detector sample flags (demo.csv);
// optionally dumps the raw series, one value per line.
std::string cmd_demo(const ExperimentConfig& cfg, const std::string& dump_series_path = "");

}  // namespace ousg
