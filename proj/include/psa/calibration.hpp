#pragma once

// Temperature Scaling (TS) and Bias-Corrected Temperature Scaling (BCTS),
// fitted on a labeled validation set by full-batch gradient descent on
// (log T, b) with backtracking line search. Applied to logits before any
// prior estimation.

#include <vector>

#include "psa/types.hpp"

namespace psa {

struct CalibrationParams {
  double temperature = 1.0;
  std::vector<double> biases;  // length K, all-zero for plain TS

  static CalibrationParams identity(std::size_t k) {
    return CalibrationParams{1.0, std::vector<double>(k, 0.0)};
  }
  void validate() const;
};

// Row i, class j = softmax_j(z_ij / T + b_j).
PredictionMatrix apply_calibration(const LogitMatrix& z, const CalibrationParams& params);

// Average negative log-likelihood of y under apply_calibration(z, params).
double calibration_nll(const LogitMatrix& z, const LabelVector& y,
                       const CalibrationParams& params);

// Analytic gradient of calibration_nll w.r.t. (log T, b). Exposed for the
// finite-difference checks.
void calibration_nll_gradient(const LogitMatrix& z, const LabelVector& y,
                              const CalibrationParams& params,
                              double* d_log_t, std::vector<double>* d_biases);

CalibrationParams fit_temperature(const LogitMatrix& z, const LabelVector& y,
                                  std::vector<std::string>* warnings = nullptr);

// Joint (T, b) fit; b identified by pinning the last bias to zero.
CalibrationParams fit_bcts(const LogitMatrix& z, const LabelVector& y,
                           std::vector<std::string>* warnings = nullptr);

// Entrywise log with floor 1e-12; valid up to the per-row constant that
// calibration is invariant to.
LogitMatrix logits_from_probabilities(const PredictionMatrix& preds);

}  // namespace psa
