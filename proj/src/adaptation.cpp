#include "psa/adaptation.hpp"

#include <algorithm>
#include <cmath>

#include "psa/kernels.hpp"

namespace psa {

PriorVector estimate_train_priors_counts(const LabelVector& y, std::size_t num_classes) {
  if (y.size() == 0) throw ValidationError("estimate_train_priors_counts: no labels");
  if (num_classes != y.num_classes())
    throw ValidationError("estimate_train_priors_counts: K mismatch");
  std::vector<double> counts(num_classes, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i)
    counts[static_cast<std::size_t>(y[i])] += 1.0;
  return normalize(counts);
}

PriorVector estimate_train_priors_predictions(const PredictionMatrix& train_preds) {
  std::vector<double> sums(train_preds.cols(), 0.0);
  for (std::size_t i = 0; i < train_preds.rows(); ++i)
    kernels::axpy(1.0, train_preds.row(i), sums.data(), train_preds.cols());
  return normalize(sums);
}

PredictionMatrix adapt_predictions(const PredictionMatrix& preds,
                                   const PriorVector& train_priors,
                                   const PriorVector& new_priors,
                                   double epsilon_floor) {
  const std::size_t k = preds.cols();
  if (train_priors.size() != k || new_priors.size() != k)
    throw ValidationError("adapt_predictions: prior length does not match K");
  std::vector<double> w(k);
  for (std::size_t j = 0; j < k; ++j)
    w[j] = new_priors[j] / std::max(train_priors[j], epsilon_floor);

  Matrix out(preds.rows(), k);
  for (std::size_t i = 0; i < preds.rows(); ++i)
    kernels::reweight_row(preds.row(i), w.data(), out.row(i), k);
  return PredictionMatrix(std::move(out));
}

PredictionMatrix adapt_predictions_ratio(const PredictionMatrix& preds,
                                         const std::vector<double>& weights,
                                         std::vector<std::string>* warnings) {
  const std::size_t k = preds.cols();
  if (weights.size() != k)
    throw ValidationError("adapt_predictions_ratio: weight length does not match K");
  std::vector<double> w(weights);
  bool clamped = false;
  for (double& x : w) {
    if (!std::isfinite(x))
      throw ValidationError("adapt_predictions_ratio: non-finite weight");
    if (x < 0.0) {
      x = 0.0;
      clamped = true;
    }
  }
  if (clamped && warnings)
    warnings->push_back("adapt_predictions_ratio: negative ratio weights clamped to 0");
  if (kernels::sum(w.data(), k) <= 0.0)
    throw ValidationError("adapt_predictions_ratio: no positive weight");

  std::size_t dead_rows = 0;
  Matrix out(preds.rows(), k);
  for (std::size_t i = 0; i < preds.rows(); ++i) {
    const double mass = kernels::reweight_row(preds.row(i), w.data(), out.row(i), k);
    if (mass <= 0.0) ++dead_rows;  // reweight_row kept the original row
  }
  if (dead_rows > 0 && warnings)
    warnings->push_back("adapt_predictions_ratio: " + std::to_string(dead_rows) +
                        " row(s) had zero reweighted mass and were left unadapted");
  return PredictionMatrix(std::move(out));
}

double evaluate_accuracy(const PredictionMatrix& preds, const LabelVector& y) {
  if (preds.rows() != y.size())
    throw ValidationError("evaluate_accuracy: predictions and labels disagree in length");
  if (preds.cols() != y.num_classes())
    throw ValidationError("evaluate_accuracy: prediction width does not match K");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.rows(); ++i)
    if (argmax_decision(preds.row(i), preds.cols()) ==
        static_cast<std::size_t>(y[i]))
      ++correct;
  return static_cast<double>(correct) / static_cast<double>(preds.rows());
}

}  // namespace psa
