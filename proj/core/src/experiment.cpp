#include "explift/experiment.hpp"

#include "explift/parallel.hpp"
#include "explift/rng.hpp"
#include "explift/serialize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace explift {

namespace {

struct Instance {
  HermitianMatrix x;
  RealVector unit_noise;  // uniform in the unit ball, scaled by epsilon later
};

Instance draw_instance(std::uint64_t seed, int n, int m, int trial) {
  Rng rng = make_stream(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
  Instance inst{HermitianMatrix::outer(random_unit_vector(n, rng)), RealVector()};
  inst.unit_noise = uniform_ball(m, 1.0, rng);
  return inst;
}

TrialRecord solve_trial(const MeasurementOperator& op, const Instance& inst, double epsilon,
                        bool zero_noise, const RecoveryOptions& opts, int n, int trial) {
  RealVector b = op.apply(inst.x);
  if (!zero_noise) b += epsilon * inst.unit_noise;
  const RecoveryResult res = recover_noisy(op, b, opts);
  TrialRecord rec;
  rec.n = n;
  rec.trial = trial;
  rec.ratio = (res.y - inst.x).frobenius_norm() / epsilon;
  rec.residual = res.residual;
  rec.iterations = res.iterations;
  rec.converged = res.converged;
  return rec;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string family_name(ExperimentFamily f) {
  switch (f) {
    case ExperimentFamily::gn: return "gn";
    case ExperimentFamily::thm1: return "thm1";
    case ExperimentFamily::example: return "example";
  }
  return "unknown";
}

ExperimentFamily family_from_name(const std::string& name) {
  if (name == "gn") return ExperimentFamily::gn;
  if (name == "thm1") return ExperimentFamily::thm1;
  if (name == "example") return ExperimentFamily::example;
  throw std::invalid_argument("unknown experiment family '" + name + "' (gn, thm1, example)");
}

MeasurementEnsemble experiment_ensemble(ExperimentFamily f, int n) {
  switch (f) {
    case ExperimentFamily::gn: return thm2_ensemble(n, 1, NodeList({1.0}), true);
    case ExperimentFamily::thm1: return thm1_ensemble(n, default_thm1_nodes(n));
    case ExperimentFamily::example: return example_ensemble(n);
  }
  throw std::invalid_argument("experiment_ensemble: unknown family");
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw std::invalid_argument("config: n_values is empty");
  for (int n : n_values)
    if (n < 3) throw std::invalid_argument("config: every n must be >= 3, got " + std::to_string(n));
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("config: epsilon must be positive and finite");
  }
  if (!(solver.tol > 0.0)) throw std::invalid_argument("config: solver tol must be positive");
  if (solver.max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
  if (kappa_samples < 0) throw std::invalid_argument("config: kappa_samples must be >= 0");
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = config_to_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TrendSummary summarize_trend(const std::vector<StabilityRow>& rows) {
  TrendSummary t;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].max_ratio > rows[i - 1].max_ratio) ++t.increases;
    if (rows[i].max_ratio < rows[i - 1].max_ratio) ++t.decreases;
  }
  long concordant = 0;
  long discordant = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double dn = rows[j].n - rows[i].n;
      const double dr = rows[j].max_ratio - rows[i].max_ratio;
      if (dn * dr > 0) ++concordant;
      if (dn * dr < 0) ++discordant;
    }
  const long pairs = static_cast<long>(rows.size() * (rows.size() - 1) / 2);
  t.kendall_tau = pairs > 0 ? static_cast<double>(concordant - discordant) / pairs : 0.0;
  if (t.increases == 0 && t.decreases == 0) {
    t.label = "flat";
  } else if (t.decreases == 0) {
    t.label = "increasing";
  } else if (t.increases == 0) {
    t.label = "decreasing";
  } else {
    t.label = "mixed";
  }
  return t;
}

StabilityReport run_stability_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  StabilityReport rep;
  rep.seed = cfg.seed;
  rep.config_hash = config_hash(cfg);
  rep.family = family_name(cfg.family);
  rep.epsilon = cfg.epsilon;

  for (int n : cfg.n_values) {
    const MeasurementOperator op(experiment_ensemble(cfg.family, n));
    const auto records = parallel_map(
        static_cast<std::size_t>(cfg.trials),
        [&](std::size_t t) {
          const Instance inst = draw_instance(cfg.seed, n, op.m(), static_cast<int>(t));
          return solve_trial(op, inst, cfg.epsilon, cfg.zero_noise, cfg.solver, n,
                             static_cast<int>(t));
        },
        cfg.threads);

    StabilityRow row;
    row.n = n;
    row.trials = cfg.trials;
    row.sigma_min = op.sigma_min();
    double sum = 0.0;
    for (const TrialRecord& rec : records) {
      row.max_ratio = std::max(row.max_ratio, rec.ratio);
      sum += rec.ratio;
      row.nonconverged += !rec.converged;
    }
    row.mean_ratio = sum / cfg.trials;
    if (cfg.kappa_samples > 0) {
      const KernelBasis kernel = kernel_basis_numeric(op);
      row.kappa_hat = kernel.empty()
                          ? 0.0
                          : estimate_stability(op, kernel, op.ensemble().r, cfg.kappa_samples,
                                               stream_key(cfg.seed, {static_cast<std::uint64_t>(n)}))
                                .kappa_hat;
    }
    rep.rows.push_back(row);
    if (cfg.per_trial) rep.trials.insert(rep.trials.end(), records.begin(), records.end());
  }
  rep.trend = summarize_trend(rep.rows);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

LinearityReport run_linearity_sweep(const ExperimentConfig& cfg, const std::vector<double>& epsilons,
                                    double factor) {
  cfg.validate();
  if (epsilons.size() < 2) throw std::invalid_argument("linearity sweep needs at least two epsilons");
  for (double e : epsilons)
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw std::invalid_argument("linearity sweep: every epsilon must be positive and finite");
    }
  if (!(factor >= 1.0)) throw std::invalid_argument("linearity sweep: factor must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  LinearityReport rep;
  rep.factor = factor;
  rep.seed = cfg.seed;
  rep.config_hash = config_hash(cfg);
  rep.family = family_name(cfg.family);
  rep.passed = true;

  for (int n : cfg.n_values) {
    const MeasurementOperator op(experiment_ensemble(cfg.family, n));
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double eps : epsilons) {
      const auto records = parallel_map(
          static_cast<std::size_t>(cfg.trials),
          [&](std::size_t t) {
            const Instance inst = draw_instance(cfg.seed, n, op.m(), static_cast<int>(t));
            return solve_trial(op, inst, eps, false, cfg.solver, n, static_cast<int>(t));
          },
          cfg.threads);
      LinearityRow row;
      row.n = n;
      row.epsilon = eps;
      double sum = 0.0;
      for (const TrialRecord& rec : records) {
        row.max_ratio = std::max(row.max_ratio, rec.ratio);
        sum += rec.ratio;
        row.nonconverged += !rec.converged;
      }
      row.mean_ratio = sum / cfg.trials;
      lo = std::min(lo, row.max_ratio);
      hi = std::max(hi, row.max_ratio);
      rep.rows.push_back(row);
    }
    const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    rep.spread.emplace_back(n, spread);
    rep.passed = rep.passed && spread <= factor;
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

}  // namespace explift
