#pragma once

#include <CLI11.hpp>

#include "ousg/harness.hpp"

namespace ousg {

// Binds every experiment setting to a flag of the same name; a config file
// supplies flat key=value defaults that flags override.
inline void bind_experiment_options(CLI::App& app, ExperimentConfig& cfg) {
  app.set_config("--config", "", "flat key=value config file; flags override it");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--out", cfg.out_dir, "output directory for weights and CSV files");
  app.add_option("--n-grid", cfg.n_grid, "prediction lengths to train/evaluate")
      ->delimiter(',');
  app.add_option("--rho-grid", cfg.rho_grid, "buffer zone widths")->delimiter(',');
  app.add_option("--episodes", cfg.episodes_test, "test episodes per sweep cell");
  app.add_option("--episodes-train", cfg.episodes_train, "training episodes per level");
  app.add_option("--length", cfg.series_length, "episode length L");
  app.add_option("--gamma", cfg.gamma, "detection threshold");
  app.add_option("--theta-min", cfg.ranges.theta_min, "mean-reversion range lower bound");
  app.add_option("--theta-max", cfg.ranges.theta_max, "mean-reversion range upper bound");
  app.add_option("--sigma-min", cfg.ranges.sigma_min, "volatility range lower bound");
  app.add_option("--sigma-max", cfg.ranges.sigma_max, "volatility range upper bound");
  app.add_option("--sampling-cost", cfg.sampling_cost, "baseline sampling cost c_s");
  app.add_option("--eval-points", cfg.eval_points, "prediction points for the loss table");
  app.add_option("--online", cfg.online_updates, "online updates during test episodes");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
}

}  // namespace ousg
