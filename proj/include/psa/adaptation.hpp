#pragma once

// Train-prior estimation, Bayes-rule prediction adaptation (to new priors
// or to prior ratios), and accuracy evaluation.

#include <string>
#include <vector>

#include "psa/types.hpp"

namespace psa {

// p^N_T: class-label frequencies on the training set.
PriorVector estimate_train_priors_counts(const LabelVector& y, std::size_t num_classes);

// p^f_T: column means of training predictions (the recommended default).
PriorVector estimate_train_priors_predictions(const PredictionMatrix& train_preds);

// Row i, class k proportional to preds(i,k) * new_priors(k) / train_priors(k),
// renormalized per row. Zero train priors are floored.
PredictionMatrix adapt_predictions(const PredictionMatrix& preds,
                                   const PriorVector& train_priors,
                                   const PriorVector& new_priors,
                                   double epsilon_floor = 1e-12);

// Row i, class k proportional to preds(i,k) * weights(k). Negative weights
// (possible from BBSE) are clamped to zero with a warning; a row whose
// reweighted mass vanishes keeps its original values with a warning.
PredictionMatrix adapt_predictions_ratio(const PredictionMatrix& preds,
                                         const std::vector<double>& weights,
                                         std::vector<std::string>* warnings = nullptr);

// Fraction of rows whose argmax decision equals the label.
double evaluate_accuracy(const PredictionMatrix& preds, const LabelVector& y);

}  // namespace psa
