#pragma once

#include "explift/completeness.hpp"
#include "explift/experiment.hpp"
#include "explift/recovery.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace explift {

// Malformed or inconsistent input text.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// {"n", "r", "recipe", "params", "matrices": [[[re, im], ...], ...]} with full
// row-major matrices.
std::string ensemble_to_json(const MeasurementEnsemble& e);
MeasurementEnsemble ensemble_from_json(const std::string& text);

// [{"k": int, "real": [[...], ...], "imag": [[...], ...]}, ...]
std::vector<AntidiagBlock> blocks_from_json(const std::string& text);

// "index,value" rows with a header line.
std::string outcome_to_csv(const RealVector& b);
std::string outcome_to_json(const RealVector& b);
// Accepts either format; a leading '[' selects JSON.
RealVector outcome_from_text(const std::string& text);

// Coordinate matrix as plain CSV, one operator per row.
std::string coord_to_csv(const MeasurementOperator& m);

// A matrix [[[re, im], ...], ...] or a signal [[re, im], ...]; signals become xx^*.
HermitianMatrix state_from_json(const std::string& text);
std::string matrix_to_json(const HermitianMatrix& y);
// A signal [[re, im], ...].
ComplexVector signal_from_json(const std::string& text);

std::string certificate_to_json(const CompletenessCertificate& c);

struct RecoveryRecord {
  RecoveryResult result;
  std::optional<SignalEstimate> signal;
  std::optional<PhaseAlignment> alignment;
};
std::string recovery_to_json(const RecoveryRecord& rec);

std::string stability_estimate_to_json(const StabilityEstimate& s);

// Canonical config text; also the input of config_hash.
std::string config_to_json(const ExperimentConfig& cfg);
// Keys absent from the text keep the values in `base`.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});

// n,trials,max_ratio,mean_ratio,sigma_min,kappa_hat,nonconverged
std::string report_to_csv(const StabilityReport& rep);
// n,trial,ratio,residual,iterations,converged
std::string trials_to_csv(const std::vector<TrialRecord>& trials);
std::string report_to_json(const StabilityReport& rep);
// Two whitespace-separated columns: n max_ratio.
std::string report_plot_data(const StabilityReport& rep);

// n,epsilon,max_ratio,mean_ratio,nonconverged
std::string linearity_to_csv(const LinearityReport& rep);
std::string linearity_to_json(const LinearityReport& rep);
// Two columns per epsilon block: n max_ratio, blocks separated by blank lines.
std::string linearity_plot_data(const LinearityReport& rep);

}  // namespace explift
