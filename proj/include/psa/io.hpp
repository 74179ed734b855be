#pragma once

// File formats: predictions/logits as headered CSV (p_0..p_{K-1} or
// z_0..z_{K-1}), labels as single-column CSV (header y), priors/weights and
// calibration params as JSON with explicit K. Floats are serialized with 17
// significant digits so write-then-read round-trips bit-exactly.

#include <optional>
#include <string>
#include <vector>

#include "psa/calibration.hpp"
#include "psa/types.hpp"

namespace psa::io {

// Either probabilities or logits, depending on the file's header prefix.
struct LoadedPredictions {
  std::optional<PredictionMatrix> preds;
  std::optional<LogitMatrix> logits;

  std::size_t cols() const {
    return preds ? preds->cols() : logits->cols();
  }
};

PredictionMatrix read_predictions_csv(const std::string& path);
LogitMatrix read_logits_csv(const std::string& path);
LoadedPredictions read_predictions_any(const std::string& path);
std::vector<int> read_labels_csv(const std::string& path);

void write_predictions_csv(const std::string& path, const PredictionMatrix& m);
void write_logits_csv(const std::string& path, const LogitMatrix& m);
void write_labels_csv(const std::string& path, const std::vector<int>& labels);

// {"K": k, "priors": [...]} or {"K": k, "weights": [...]}
struct PriorsOrWeights {
  std::optional<std::vector<double>> priors;
  std::optional<std::vector<double>> weights;
};
PriorsOrWeights read_priors_json(const std::string& path);
void write_priors_json(const std::string& path, const std::vector<double>& priors);
void write_weights_json(const std::string& path, const std::vector<double>& weights);

CalibrationParams read_calibration_json(const std::string& path);
void write_calibration_json(const std::string& path, const CalibrationParams& params);

// Report JSON: method, priors or weights, trace, termination, wall_seconds,
// inside_simplex flag for inversion outputs.
std::string report_to_json(const EstimationReport& report, bool is_ratio);
void write_report_json(const std::string& path, const EstimationReport& report,
                       bool is_ratio);

std::string format_double(double x);  // 17 significant digits

}  // namespace psa::io
