// explift command-line tool: ensemble generation, measurement, recovery,
// certification and the stability harness.
#include "explift/completeness.hpp"
#include "explift/experiment.hpp"
#include "explift/recovery.hpp"
#include "explift/serialize.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace explift;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;
constexpr const char* kOutputDirEnv = "EXPLIFT_OUTPUT_DIR";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Globals {
  std::uint64_t seed = 20260101;
  double tol = 1e-9;
  std::string output;
  std::string format = "json";
};

// Resolves where a result goes: --output, else $EXPLIFT_OUTPUT_DIR/<fallback>,
// else empty (stdout).
std::string resolve_output(const Globals& g, const std::string& fallback) {
  if (!g.output.empty()) return g.output;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    return (fs::path(dir) / fallback).string();
  }
  return {};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string sibling(const std::string& path, const std::string& suffix, const std::string& ext) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

// gen ------------------------------------------------------------------------

struct GenArgs {
  std::string recipe = "thm1";
  int n = 4;
  int r = 1;
  std::vector<double> nodes;
  std::optional<double> phase;
  bool normalized = false;
  std::string blocks;
};

MeasurementEnsemble build_ensemble(const GenArgs& a) {
  const Recipe kind = recipe_from_name(a.recipe);
  switch (kind) {
    case Recipe::thm1:
      return thm1_ensemble(a.n, a.nodes.empty() ? default_thm1_nodes(a.n) : NodeList(a.nodes),
                           a.phase);
    case Recipe::thm2:
      return thm2_ensemble(a.n, a.r, a.nodes.empty() ? default_thm2_nodes(a.r) : NodeList(a.nodes),
                           a.normalized);
    case Recipe::thm3: {
      if (a.blocks.empty()) throw InputError("thm3 needs --blocks with the coefficient blocks");
      return thm3_ensemble(a.n, a.r, blocks_from_json(read_file(a.blocks)));
    }
    case Recipe::example:
      return a.n == 4 ? example_n4() : example_ensemble(a.n);
    case Recipe::custom: break;
  }
  throw InputError("recipe '" + a.recipe + "' cannot be generated");
}

// bench ----------------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::vector<int> n_values;
  int trials = -1;
  double epsilon = -1.0;
  std::string family;
  int kappa_samples = -1;
  int max_iters = -1;
  bool per_trial = false;
  bool zero_noise = false;
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4};
};

ExperimentConfig make_config(const BenchArgs& a, const Globals& g, bool seed_given, bool tol_given) {
  ExperimentConfig cfg;
  cfg.n_values = {3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  if (!a.config.empty()) cfg = config_from_json(read_file(a.config), cfg);
  if (!a.n_values.empty()) cfg.n_values = a.n_values;
  if (a.trials >= 0) cfg.trials = a.trials;
  if (a.epsilon >= 0.0) cfg.epsilon = a.epsilon;
  if (!a.family.empty()) cfg.family = family_from_name(a.family);
  if (a.kappa_samples >= 0) cfg.kappa_samples = a.kappa_samples;
  if (a.max_iters >= 0) cfg.solver.max_iters = a.max_iters;
  if (a.per_trial) cfg.per_trial = true;
  if (a.zero_noise) cfg.zero_noise = true;
  if (seed_given || a.config.empty()) cfg.seed = g.seed;
  if (tol_given) cfg.solver.tol = g.tol;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complete-measurement phase retrieval toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", g.tol, "Solver / check tolerance")->capture_default_str();
  app.add_option("--output,-o", g.output,
                 std::string("Output file (default: stdout, or $") + kOutputDirEnv + ")");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Emit a measurement ensemble as JSON");
  gen_cmd->add_option("--recipe", gen.recipe, "thm1, thm2, thm3, example")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Dimension")->capture_default_str();
  gen_cmd->add_option("--r", gen.r, "Rank (thm2)")->capture_default_str();
  gen_cmd->add_option("--nodes", gen.nodes, "Node list (thm1, thm2)");
  gen_cmd->add_option("--phase", gen.phase, "Phase (thm1)");
  gen_cmd->add_flag("--normalized", gen.normalized, "Unit-norm operators (thm2)");
  gen_cmd->add_option("--blocks", gen.blocks, "Coefficient blocks JSON (thm3)");

  std::string ensemble_path;
  std::string state_path;
  auto* measure_cmd = app.add_subcommand("measure", "Measure a state or signal");
  measure_cmd->add_option("--ensemble", ensemble_path, "Ensemble JSON")->required();
  measure_cmd->add_option("--state", state_path, "Matrix [[[re,im],..],..] or signal [[re,im],..]")
      ->required();

  std::string outcome_path;
  std::string truth_path;
  bool noisy = false;
  bool strict = false;
  int max_iters = -1;
  auto* recover_cmd = app.add_subcommand("recover", "Recover a state from measurements");
  recover_cmd->add_option("--ensemble", ensemble_path, "Ensemble JSON")->required();
  recover_cmd->add_option("--outcome", outcome_path, "Outcome CSV or JSON array")->required();
  recover_cmd->add_flag("--noisy", noisy, "Least squares over the PSD cone instead of feasibility");
  recover_cmd->add_flag("--strict", strict, "Exit 1 when the solver does not converge");
  recover_cmd->add_option("--max-iters", max_iters, "Iteration cap");
  recover_cmd->add_option("--truth", truth_path, "Signal [[re,im],..] to align the extracted signal with");

  std::string level = "structural";
  std::int64_t trials = 10'000;
  auto* certify_cmd = app.add_subcommand("certify", "Certify r-completeness of an ensemble");
  certify_cmd->add_option("--ensemble", ensemble_path, "Ensemble JSON")->required();
  certify_cmd->add_option("--level", level, "structural, sampled or oracle")
      ->check(CLI::IsMember({"structural", "sampled", "oracle"}))
      ->capture_default_str();
  certify_cmd->add_option("--trials", trials, "Samples for sampled/oracle levels")
      ->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Stability experiments");
  bench_cmd->require_subcommand(1);
  auto add_bench_options = [&](CLI::App* c) {
    c->add_option("--config", bench.config, "Config JSON");
    c->add_option("--n", bench.n_values, "Dimensions");
    c->add_option("--trials", bench.trials, "Trials per dimension");
    c->add_option("--family", bench.family, "gn, thm1 or example");
    c->add_option("--kappa-samples", bench.kappa_samples, "Samples for kappa_hat (0 skips)");
    c->add_option("--max-iters", bench.max_iters, "Solver iteration cap");
  };
  auto* stability_cmd = bench_cmd->add_subcommand("stability", "Max error ratio per dimension");
  add_bench_options(stability_cmd);
  stability_cmd->add_option("--epsilon", bench.epsilon, "Noise radius");
  stability_cmd->add_flag("--per-trial", bench.per_trial, "Also write per-trial CSV");
  stability_cmd->add_flag("--zero-noise", bench.zero_noise, "Force f = 0");
  auto* linearity_cmd = bench_cmd->add_subcommand("linearity", "Error ratio across noise levels");
  add_bench_options(linearity_cmd);
  linearity_cmd->add_option("--epsilons", bench.epsilons, "Noise radii")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*gen_cmd) {
      write_output(resolve_output(g, "ensemble.json"), ensemble_to_json(build_ensemble(gen)));
      return kOk;
    }

    if (*measure_cmd) {
      const MeasurementOperator op(ensemble_from_json(read_file(ensemble_path)));
      const HermitianMatrix x = state_from_json(read_file(state_path));
      if (x.dim() != op.n()) throw InputError("state dimension does not match the ensemble");
      const RealVector b = op.apply(x);
      const bool csv = g.format == "csv";
      write_output(resolve_output(g, csv ? "outcome.csv" : "outcome.json"),
                   csv ? outcome_to_csv(b) : outcome_to_json(b));
      return kOk;
    }

    if (*recover_cmd) {
      const MeasurementOperator op(ensemble_from_json(read_file(ensemble_path)));
      const RealVector b = outcome_from_text(read_file(outcome_path));
      if (b.size() != op.m()) {
        throw InputError("outcome has " + std::to_string(b.size()) + " values, ensemble has " +
                         std::to_string(op.m()) + " operators");
      }
      RecoveryOptions opts = noisy ? default_noisy_options() : RecoveryOptions{};
      opts.tol = g.tol;
      if (max_iters > 0) opts.max_iters = max_iters;
      RecoveryRecord rec;
      rec.result = noisy ? recover_noisy(op, b, opts) : recover_noiseless(op, b, opts);
      rec.signal = extract_signal(rec.result.y);
      if (!truth_path.empty()) {
        const ComplexVector truth = signal_from_json(read_file(truth_path));
        if (truth.size() != rec.signal->x.size()) throw InputError("truth dimension mismatch");
        rec.alignment = align_phase(truth, rec.signal->x);
      }
      write_output(resolve_output(g, "recovery.json"), recovery_to_json(rec));
      if (!rec.result.converged) {
        std::cerr << "recover: solver did not converge after " << rec.result.iterations
                  << " iterations (residual " << rec.result.residual << ")\n";
        if (strict) return kCheckFailed;
      }
      return kOk;
    }

    if (*certify_cmd) {
      const MeasurementEnsemble e = ensemble_from_json(read_file(ensemble_path));
      CompletenessCertificate cert;
      if (level == "structural") {
        cert = certify_structural(e);
      } else if (level == "sampled") {
        const KernelBasis k = kernel_basis_numeric(MeasurementOperator(e));
        cert = kernel_spectral_check(k, e.r, trials, g.seed);
      } else {
        cert = discrimination_oracle(MeasurementOperator(e), e.r, trials, g.seed);
      }
      write_output(resolve_output(g, "certificate.json"), certificate_to_json(cert));
      std::cerr << level_name(cert.level) << " certificate for r=" << cert.r << ": "
                << (cert.passed ? "PASSED" : "FAILED") << "\n";
      for (const CheckRecord& c : cert.checks) {
        std::cerr << "  [" << (c.passed ? "ok" : "FAIL") << "] " << c.name << ": " << c.detail
                  << "\n";
      }
      return cert.passed ? kOk : kCheckFailed;
    }

    if (*stability_cmd) {
      const ExperimentConfig cfg = make_config(bench, g, seed_opt->count() > 0, tol_opt->count() > 0);
      const StabilityReport rep = run_stability_experiment(cfg);
      std::string out = resolve_output(g, g.format == "csv" ? "stability.csv" : "stability.json");
      if (out.empty()) out = cfg.output.empty() ? (g.format == "csv" ? "stability.csv" : "stability.json") : cfg.output;
      write_output(out, g.format == "csv" ? report_to_csv(rep) : report_to_json(rep));
      write_output(sibling(out, "", ".dat"), report_plot_data(rep));
      if (cfg.per_trial) write_output(sibling(out, "_trials", ".csv"), trials_to_csv(rep.trials));
      std::cerr << "stability: " << rep.rows.size() << " dimensions, trend " << rep.trend.label
                << " (kendall tau " << rep.trend.kendall_tau << "), " << rep.wall_seconds
                << " s, report " << out << "\n";
      return kOk;
    }

    if (*linearity_cmd) {
      BenchArgs a = bench;
      if (a.n_values.empty() && a.config.empty()) a.n_values = {6};
      if (a.family.empty() && a.config.empty()) a.family = "thm1";
      const ExperimentConfig cfg = make_config(a, g, seed_opt->count() > 0, tol_opt->count() > 0);
      const LinearityReport rep = run_linearity_sweep(cfg, a.epsilons);
      std::string out = resolve_output(g, g.format == "csv" ? "linearity.csv" : "linearity.json");
      if (out.empty()) out = cfg.output.empty() ? (g.format == "csv" ? "linearity.csv" : "linearity.json") : cfg.output;
      write_output(out, g.format == "csv" ? linearity_to_csv(rep) : linearity_to_json(rep));
      write_output(sibling(out, "", ".dat"), linearity_plot_data(rep));
      for (const auto& [n, s] : rep.spread) {
        std::cerr << "linearity n=" << n << ": max ratio spread " << s << " (limit " << rep.factor
                  << ")\n";
      }
      return rep.passed ? kOk : kCheckFailed;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kOk;
}
