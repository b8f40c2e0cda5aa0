#pragma once

#include "explift/recovery.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace explift {

// Ensemble family used by the stability harness.
enum class ExperimentFamily {
  gn,       // diagonal projectors plus unit-norm I_k(1), R_k(1): thm2 with r = 1, node 1, normalized
  thm1,     // thm1_ensemble with default nodes
  example,  // example_ensemble
};

std::string family_name(ExperimentFamily f);
ExperimentFamily family_from_name(const std::string& name);

MeasurementEnsemble experiment_ensemble(ExperimentFamily f, int n);

struct ExperimentConfig {
  std::vector<int> n_values;
  int trials = 100;
  double epsilon = 1e-3;
  std::uint64_t seed = 20260101;
  ExperimentFamily family = ExperimentFamily::gn;
  RecoveryOptions solver = default_noisy_options();
  // Random samples for kappa_hat per n; 0 skips the estimate.
  int kappa_samples = 1000;
  bool per_trial = false;
  // Forces f = 0 (noiseless limit of the harness).
  bool zero_noise = false;
  int threads = 0;
  std::string output;

  // Throws std::invalid_argument on trials < 1, epsilon <= 0, n < 3, empty n_values.
  void validate() const;
};

// FNV-1a of the canonical config JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct TrialRecord {
  int n = 0;
  int trial = 0;
  double ratio = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct StabilityRow {
  int n = 0;
  int trials = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double sigma_min = 0.0;
  double kappa_hat = 0.0;
  int nonconverged = 0;
};

struct TrendSummary {
  int increases = 0;
  int decreases = 0;
  double kendall_tau = 0.0;  // of max_ratio against n
  std::string label;         // "increasing", "decreasing", "flat" or "mixed"
};

TrendSummary summarize_trend(const std::vector<StabilityRow>& rows);

struct StabilityReport {
  std::vector<StabilityRow> rows;
  std::vector<TrialRecord> trials;  // filled when cfg.per_trial
  TrendSummary trend;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string family;
  double epsilon = 0.0;
  // Not part of serialized reports, which must be reproducible byte for byte.
  double wall_seconds = 0.0;
};

// Per n: build the ensemble; per trial draw Haar-uniform unit x and f uniform
// in the epsilon-ball from the stream keyed (seed, n, trial), solve with
// recover_noisy and record ||Y - xx^*||_2 / epsilon.
StabilityReport run_stability_experiment(const ExperimentConfig& cfg);

struct LinearityRow {
  int n = 0;
  double epsilon = 0.0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  int nonconverged = 0;
};

struct LinearityReport {
  std::vector<LinearityRow> rows;
  // Per n: largest max_ratio over epsilons divided by the smallest.
  std::vector<std::pair<int, double>> spread;
  double factor = 2.0;
  bool passed = false;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string family;
  double wall_seconds = 0.0;
};

// Same signals and noise directions for every epsilon: f = epsilon * u with u
// uniform in the unit ball. Needs at least two positive epsilons.
LinearityReport run_linearity_sweep(const ExperimentConfig& cfg, const std::vector<double>& epsilons,
                                    double factor = 2.0);

}  // namespace explift
