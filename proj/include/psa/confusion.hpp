#pragma once

// Confusion-matrix estimation from labeled validation predictions and
// decision statistics from unlabeled test predictions.

#include <string>
#include <vector>

#include "psa/types.hpp"

namespace psa {

// Hard CM: entry (i,k) = fraction of class-k validation samples decided as i.
// A class unseen in validation gets a uniform column and a warning.
ConfusionMatrix estimate_cm_hard(const PredictionMatrix& preds, const LabelVector& y,
                                 std::vector<std::string>* warnings = nullptr);

// Soft CM: column k = mean prediction row over class-k validation samples.
ConfusionMatrix estimate_cm_soft(const PredictionMatrix& preds, const LabelVector& y,
                                 std::vector<std::string>* warnings = nullptr);

// Entry (i,k) = cm(i,k) * train_priors(k); total mass 1.
ConfusionMatrix conditional_to_joint(const ConfusionMatrix& cm,
                                     const PriorVector& train_priors);

DecisionCounts decision_counts(const PredictionMatrix& preds);
PriorVector decision_rates_hard(const PredictionMatrix& preds);
PriorVector decision_rates_soft(const PredictionMatrix& preds);

}  // namespace psa
