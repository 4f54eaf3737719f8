#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "l1loc/localizer.hpp"
#include "l1loc/model.hpp"

namespace l1loc {

enum class SensorLayout { grid, perimeter, explicit_positions };

// Derives independent per-purpose seeds from a trial seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

struct RunConfig {
  double area_half_width = 100.0;
  SensorLayout layout = SensorLayout::grid;
  int sensor_count = 25;
  std::vector<Point> sensor_positions;  // explicit layout only
  int target_count = 2;
  double min_separation = 0.0;  // 0 means the default w/5
  double p_min = 1.0;
  double p_max = 3.0;
  double shadowing_db = 0.0;
  double true_alpha = 2.0;
  double true_beta = 1.0;
  double alpha_min = 1.0;
  double alpha_max = 6.0;
  double beta_min = 0.5;
  int nu_min = 1;
  int nu_max = 3;
  int grid_granularity = 5;
  int iters_phase_one = 5;
  int iters_phase_two = 5;
  int trials = 1;
  std::uint64_t seed = 0;

  double separation() const {
    return min_separation > 0.0 ? min_separation : area_half_width / 5.0;
  }
  LocalizerConfig localizer(std::uint64_t trial_seed) const;
};

// Strict parse: unknown keys anywhere in the document are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

std::vector<Point> place_sensors(const RunConfig& cfg);

// Targets uniform in [-0.9w, 0.9w]^2 with pairwise separation >= min_sep,
// powers uniform in [p_min, p_max]. Deterministic per seed.
Scenario generate_scenario(const RunConfig& cfg, std::uint64_t seed);

struct TrialResult {
  std::uint64_t seed = 0;
  int n_true = 0;
  int n_hat = 0;
  double position_rmse = 0.0;
  double power_rmse = 0.0;
  double alpha_error = 0.0;
  double beta_error = 0.0;
  double wall_time_ms = 0.0;
  int matched_count = 0;
  std::string status = "ok";
};

// Minimum-cost assignment over min(N, N_hat) pairs: exhaustive permutations
// for small instances, Hungarian otherwise. RMSEs over matched pairs only.
TrialResult match_and_score(const Scenario& truth, const EstimateReport& est);

struct TrialBatch {
  std::vector<TrialResult> trials;
  TrialResult agg_mean;
  TrialResult agg_median;
  std::vector<std::string> traces;  // serialized JSONL per trial
};

TrialBatch run_trials(const RunConfig& cfg, bool keep_traces = false,
                      bool with_timing = false);

std::string trace_to_jsonl(const EstimateReport& report,
                           std::optional<int> trial = std::nullopt);
std::string batch_to_csv(const TrialBatch& batch);
std::string scenario_to_json(const Scenario& s);

// End-to-end simulate: run the batch and write the CSV (and optionally the
// concatenated traces) to disk. This is what the CLI's `simulate` calls.
void simulate_to_files(const RunConfig& cfg, const std::string& csv_path,
                       const std::string& trace_path = "",
                       bool with_timing = false);

}  // namespace l1loc
