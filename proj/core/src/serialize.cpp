#include "explift/serialize.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace explift {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const HermitianMatrix& a) {
  json rows = json::array();
  for (int i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.dim(); ++j) row.push_back(complex_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix_json(const RealMatrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix parse_complex_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("matrix row " + std::to_string(i) + " does not have " + std::to_string(n) +
                       " entries");
    }
    for (Eigen::Index l = 0; l < n; ++l) m(i, l) = parse_complex(row[l]);
  }
  return m;
}

RealMatrix parse_real_matrix(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("expected a real matrix");
  RealMatrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != j[0].size()) throw ParseError("ragged real matrix");
    for (std::size_t l = 0; l < j[i].size(); ++l) m(i, l) = j[i][l].get<double>();
  }
  return m;
}

json params_json(const RecipeParams& p) {
  json out = json::object();
  if (!p.nodes.empty()) out["nodes"] = p.nodes;
  if (p.phase) out["phase"] = *p.phase;
  out["normalized"] = p.normalized;
  out["imag_first"] = p.imag_first;
  if (!p.blocks.empty()) {
    json blocks = json::array();
    for (const AntidiagBlock& b : p.blocks) {
      blocks.push_back({{"k", b.k},
                        {"real", real_matrix_json(b.real_coeffs)},
                        {"imag", real_matrix_json(b.imag_coeffs)}});
    }
    out["blocks"] = std::move(blocks);
  }
  return out;
}

RecipeParams parse_params(const json& j, Recipe kind) {
  RecipeParams p;
  p.kind = kind;
  if (j.is_null()) return p;
  if (!j.is_object()) throw ParseError("params must be an object");
  if (j.contains("nodes")) p.nodes = j.at("nodes").get<std::vector<double>>();
  if (j.contains("phase") && !j.at("phase").is_null()) p.phase = j.at("phase").get<double>();
  p.normalized = j.value("normalized", false);
  p.imag_first = j.value("imag_first", false);
  if (j.contains("blocks")) {
    for (const json& b : j.at("blocks")) {
      AntidiagBlock blk;
      blk.k = b.at("k").get<int>();
      blk.real_coeffs = parse_real_matrix(b.at("real"));
      blk.imag_coeffs = parse_real_matrix(b.at("imag"));
      p.blocks.push_back(std::move(blk));
    }
  }
  return p;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what());
  }
}

json solver_json(const RecoveryOptions& o) {
  return {{"tol", o.tol}, {"max_iters", o.max_iters}, {"dykstra", o.dykstra}};
}

}  // namespace

std::string ensemble_to_json(const MeasurementEnsemble& e) {
  json out;
  out["n"] = e.n;
  out["r"] = e.r;
  out["recipe"] = recipe_name(e.recipe.kind);
  out["params"] = params_json(e.recipe);
  json mats = json::array();
  for (const HermitianMatrix& g : e.matrices) mats.push_back(matrix_json(g));
  out["matrices"] = std::move(mats);
  return out.dump(1);
}

MeasurementEnsemble ensemble_from_json(const std::string& text) {
  const json doc = parse_document(text);
  try {
    MeasurementEnsemble e;
    e.n = doc.at("n").get<int>();
    e.r = doc.value("r", 1);
    if (e.n < 1) throw ParseError("n must be positive");
    Recipe kind = Recipe::custom;
    if (doc.contains("recipe")) kind = recipe_from_name(doc.at("recipe").get<std::string>());
    e.recipe = parse_params(doc.value("params", json()), kind);
    const json& mats = doc.at("matrices");
    if (!mats.is_array() || mats.empty()) throw ParseError("matrices must be a non-empty array");
    for (std::size_t i = 0; i < mats.size(); ++i) {
      const ComplexMatrix m = parse_complex_matrix(mats[i]);
      if (m.rows() != e.n) {
        throw ParseError("matrix " + std::to_string(i) + " is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.rows()) + ", expected n=" + std::to_string(e.n));
      }
      try {
        e.matrices.emplace_back(m, 1e-9);
      } catch (const std::invalid_argument& ex) {
        throw ParseError("matrix " + std::to_string(i) + ": " + ex.what());
      }
    }
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed ensemble: ") + ex.what());
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

std::vector<AntidiagBlock> blocks_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_array()) throw ParseError("blocks must be a JSON array");
  try {
    return parse_params(json{{"blocks", doc}}, Recipe::thm3).blocks;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed blocks: ") + ex.what());
  }
}

std::string outcome_to_csv(const RealVector& b) {
  std::string out = "index,value\n";
  for (Eigen::Index i = 0; i < b.size(); ++i) out += std::to_string(i) + "," + num(b(i)) + "\n";
  return out;
}

std::string outcome_to_json(const RealVector& b) {
  json out = json::array();
  for (Eigen::Index i = 0; i < b.size(); ++i) out.push_back(b(i));
  return out.dump();
}

RealVector outcome_from_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError("empty outcome");
  std::vector<double> vals;
  if (text[first] == '[') {
    const json doc = parse_document(text);
    if (!doc.is_array()) throw ParseError("outcome JSON must be a flat array");
    for (const json& v : doc) {
      if (!v.is_number()) throw ParseError("outcome JSON must contain numbers only");
      vals.push_back(v.get<double>());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.rfind("index", 0) == 0) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": no comma");
      try {
        std::size_t used = 0;
        const long idx = std::stol(line.substr(0, comma), &used);
        const std::string rest = line.substr(comma + 1);
        const double v = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("trailing text");
        if (idx != static_cast<long>(vals.size())) {
          throw ParseError("line " + std::to_string(lineno) + ": expected index " +
                           std::to_string(vals.size()));
        }
        vals.push_back(v);
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": malformed row '" + line + "'");
      }
    }
  }
  if (vals.empty()) throw ParseError("empty outcome");
  RealVector b(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!std::isfinite(vals[i])) throw ParseError("non-finite outcome value");
    b(static_cast<Eigen::Index>(i)) = vals[i];
  }
  return b;
}

std::string coord_to_csv(const MeasurementOperator& m) {
  std::string out;
  const RealMatrix& c = m.coord();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) out += (j ? "," : "") + num(c(i, j));
    out += "\n";
  }
  return out;
}

HermitianMatrix state_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_array() || doc.empty()) throw ParseError("state must be a non-empty array");
  try {
    if (doc[0].is_array() && !doc[0].empty() && doc[0][0].is_array()) {
      return HermitianMatrix(parse_complex_matrix(doc), 1e-9);
    }
    ComplexVector x(static_cast<Eigen::Index>(doc.size()));
    for (std::size_t i = 0; i < doc.size(); ++i) x(i) = parse_complex(doc[i]);
    return HermitianMatrix::outer(x);
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

ComplexVector signal_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_array() || doc.empty()) throw ParseError("signal must be a non-empty array");
  ComplexVector x(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) x(i) = parse_complex(doc[i]);
  return x;
}

std::string matrix_to_json(const HermitianMatrix& y) { return matrix_json(y).dump(); }

std::string certificate_to_json(const CompletenessCertificate& c) {
  json checks = json::array();
  for (const CheckRecord& r : c.checks) {
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  json out = {{"level", level_name(c.level)}, {"r", c.r},          {"passed", c.passed},
              {"checks", checks},             {"note", c.note}};
  if (c.level != CertLevel::structural) {
    out["trials"] = c.trials;
    out["tol"] = c.tol;
    out["violations"] = c.violations;
  }
  if (c.level == CertLevel::sampled) {
    out["min_positive"] = c.min_positive;
    out["min_negative"] = c.min_negative;
  }
  return out.dump(2);
}

std::string recovery_to_json(const RecoveryRecord& rec) {
  const RecoveryResult& r = rec.result;
  json out = {{"method", r.method},
              {"converged", r.converged},
              {"polished", r.polished},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"min_eigenvalue", r.min_eigenvalue},
              {"matrix", matrix_json(r.y)}};
  if (rec.signal) {
    json x = json::array();
    for (Eigen::Index i = 0; i < rec.signal->x.size(); ++i) x.push_back(complex_json(rec.signal->x(i)));
    out["signal"] = {{"x", x},
                     {"lambda1", rec.signal->lambda1},
                     {"degenerate_top_eigenvalue", rec.signal->degenerate}};
  }
  if (rec.alignment) {
    out["alignment"] = {{"phi", rec.alignment->phi}, {"error", rec.alignment->error}};
  }
  if (!r.history.empty()) out["affine_distance_history"] = r.history;
  return out.dump(2);
}

std::string stability_estimate_to_json(const StabilityEstimate& s) {
  json out = {{"sigma_min", s.sigma_min},   {"kappa_hat", s.kappa_hat},
              {"samples", s.samples},       {"kernel_empty", s.kernel_empty},
              {"note", s.note}};
  // JSON has no infinity; a non-positive kappa_hat leaves the bound undefined.
  if (std::isfinite(s.c_m_bound)) {
    out["c_m_bound"] = s.c_m_bound;
  } else {
    out["c_m_bound"] = nullptr;
  }
  return out.dump(2);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json out = {{"n_values", cfg.n_values},
              {"trials", cfg.trials},
              {"epsilon", cfg.epsilon},
              {"seed", cfg.seed},
              {"family", family_name(cfg.family)},
              {"solver", solver_json(cfg.solver)},
              {"kappa_samples", cfg.kappa_samples},
              {"per_trial", cfg.per_trial},
              {"zero_noise", cfg.zero_noise}};
  return out.dump();
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  try {
    if (doc.contains("n_values")) base.n_values = doc.at("n_values").get<std::vector<int>>();
    if (doc.contains("trials")) base.trials = doc.at("trials").get<int>();
    if (doc.contains("epsilon")) base.epsilon = doc.at("epsilon").get<double>();
    if (doc.contains("seed")) base.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("family")) base.family = family_from_name(doc.at("family").get<std::string>());
    if (doc.contains("kappa_samples")) base.kappa_samples = doc.at("kappa_samples").get<int>();
    if (doc.contains("per_trial")) base.per_trial = doc.at("per_trial").get<bool>();
    if (doc.contains("zero_noise")) base.zero_noise = doc.at("zero_noise").get<bool>();
    if (doc.contains("threads")) base.threads = doc.at("threads").get<int>();
    if (doc.contains("output")) base.output = doc.at("output").get<std::string>();
    if (doc.contains("solver")) {
      const json& s = doc.at("solver");
      base.solver.tol = s.value("tol", base.solver.tol);
      base.solver.max_iters = s.value("max_iters", base.solver.max_iters);
      base.solver.dykstra = s.value("dykstra", base.solver.dykstra);
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed config: ") + ex.what());
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
  return base;
}

std::string report_to_csv(const StabilityReport& rep) {
  std::string out = "n,trials,max_ratio,mean_ratio,sigma_min,kappa_hat,nonconverged\n";
  for (const StabilityRow& r : rep.rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.trials) + "," + num(r.max_ratio) + "," +
           num(r.mean_ratio) + "," + num(r.sigma_min) + "," + num(r.kappa_hat) + "," +
           std::to_string(r.nonconverged) + "\n";
  }
  return out;
}

std::string trials_to_csv(const std::vector<TrialRecord>& trials) {
  std::string out = "n,trial,ratio,residual,iterations,converged\n";
  for (const TrialRecord& t : trials) {
    out += std::to_string(t.n) + "," + std::to_string(t.trial) + "," + num(t.ratio) + "," +
           num(t.residual) + "," + std::to_string(t.iterations) + "," + (t.converged ? "1" : "0") +
           "\n";
  }
  return out;
}

std::string report_to_json(const StabilityReport& rep) {
  json rows = json::array();
  for (const StabilityRow& r : rep.rows) {
    rows.push_back({{"n", r.n},
                    {"trials", r.trials},
                    {"max_ratio", r.max_ratio},
                    {"mean_ratio", r.mean_ratio},
                    {"sigma_min", r.sigma_min},
                    {"kappa_hat", r.kappa_hat},
                    {"nonconverged", r.nonconverged}});
  }
  json out = {{"seed", rep.seed},
              {"config_hash", rep.config_hash},
              {"family", rep.family},
              {"epsilon", rep.epsilon},
              {"rows", rows},
              {"trend",
               {{"label", rep.trend.label},
                {"increases", rep.trend.increases},
                {"decreases", rep.trend.decreases},
                {"kendall_tau", rep.trend.kendall_tau}}}};
  return out.dump(2);
}

std::string report_plot_data(const StabilityReport& rep) {
  std::string out = "# n max_ratio\n";
  for (const StabilityRow& r : rep.rows) out += std::to_string(r.n) + " " + num(r.max_ratio) + "\n";
  return out;
}

std::string linearity_to_csv(const LinearityReport& rep) {
  std::string out = "n,epsilon,max_ratio,mean_ratio,nonconverged\n";
  for (const LinearityRow& r : rep.rows) {
    out += std::to_string(r.n) + "," + num(r.epsilon) + "," + num(r.max_ratio) + "," +
           num(r.mean_ratio) + "," + std::to_string(r.nonconverged) + "\n";
  }
  return out;
}

std::string linearity_to_json(const LinearityReport& rep) {
  json rows = json::array();
  for (const LinearityRow& r : rep.rows) {
    rows.push_back({{"n", r.n},
                    {"epsilon", r.epsilon},
                    {"max_ratio", r.max_ratio},
                    {"mean_ratio", r.mean_ratio},
                    {"nonconverged", r.nonconverged}});
  }
  json spread = json::array();
  for (const auto& [n, s] : rep.spread) {
    spread.push_back({{"n", n}, {"spread", std::isfinite(s) ? json(s) : json(nullptr)}});
  }
  json out = {{"seed", rep.seed},     {"config_hash", rep.config_hash},
              {"family", rep.family}, {"factor", rep.factor},
              {"passed", rep.passed}, {"rows", rows},
              {"spread", spread}};
  return out.dump(2);
}

std::string linearity_plot_data(const LinearityReport& rep) {
  std::string out;
  double last_eps = -1.0;
  std::vector<LinearityRow> rows = rep.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const LinearityRow& a, const LinearityRow& b) { return a.epsilon > b.epsilon; });
  for (const LinearityRow& r : rows) {
    if (r.epsilon != last_eps) {
      if (last_eps >= 0.0) out += "\n\n";
      out += "# epsilon " + num(r.epsilon) + "\n# n max_ratio\n";
      last_eps = r.epsilon;
    }
    out += std::to_string(r.n) + " " + num(r.max_ratio) + "\n";
  }
  return out;
}

}  // namespace explift
