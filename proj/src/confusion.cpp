#include "psa/confusion.hpp"

#include <cstdint>

#include "psa/kernels.hpp"

namespace psa {

namespace {

void check_shapes(const PredictionMatrix& preds, const LabelVector& y) {
  if (preds.rows() != y.size())
    throw ValidationError("confusion: predictions and labels disagree in length");
  if (preds.cols() != y.num_classes())
    throw ValidationError("confusion: prediction width does not match K");
}

void fill_uniform_column(Matrix& m, std::size_t k, std::size_t col,
                         std::vector<std::string>* warnings) {
  for (std::size_t i = 0; i < k; ++i) m(i, col) = 1.0 / static_cast<double>(k);
  if (warnings)
    warnings->push_back("confusion: class " + std::to_string(col) +
                        " absent from validation set; column set to uniform");
}

}  // namespace

ConfusionMatrix estimate_cm_hard(const PredictionMatrix& preds, const LabelVector& y,
                                 std::vector<std::string>* warnings) {
  check_shapes(preds, y);
  const std::size_t k = preds.cols();
  Matrix m(k, k);
  std::vector<std::int64_t> class_totals(k, 0);
  for (std::size_t r = 0; r < preds.rows(); ++r) {
    const std::size_t d = argmax_decision(preds.row(r), k);
    const auto c = static_cast<std::size_t>(y[r]);
    m(d, c) += 1.0;
    ++class_totals[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (class_totals[c] == 0) {
      fill_uniform_column(m, k, c, warnings);
    } else {
      for (std::size_t i = 0; i < k; ++i)
        m(i, c) /= static_cast<double>(class_totals[c]);
    }
  }
  return ConfusionMatrix(std::move(m), CMForm::conditional, CMFlavor::hard);
}

ConfusionMatrix estimate_cm_soft(const PredictionMatrix& preds, const LabelVector& y,
                                 std::vector<std::string>* warnings) {
  check_shapes(preds, y);
  const std::size_t k = preds.cols();
  Matrix m(k, k);
  std::vector<std::int64_t> class_totals(k, 0);
  // Accumulate columns; transposed layout so each prediction row is an axpy.
  Matrix cols(k, k);  // row c = running sum of predictions with label c
  for (std::size_t r = 0; r < preds.rows(); ++r) {
    const auto c = static_cast<std::size_t>(y[r]);
    kernels::axpy(1.0, preds.row(r), cols.row(c), k);
    ++class_totals[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (class_totals[c] == 0) {
      fill_uniform_column(m, k, c, warnings);
    } else {
      for (std::size_t i = 0; i < k; ++i)
        m(i, c) = cols(c, i) / static_cast<double>(class_totals[c]);
    }
  }
  return ConfusionMatrix(std::move(m), CMForm::conditional, CMFlavor::soft);
}

ConfusionMatrix conditional_to_joint(const ConfusionMatrix& cm,
                                     const PriorVector& train_priors) {
  if (cm.form() != CMForm::conditional)
    throw ValidationError("conditional_to_joint: input must be conditional");
  const std::size_t k = cm.size();
  if (train_priors.size() != k)
    throw ValidationError("conditional_to_joint: prior length does not match K");
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < k; ++c) m(i, c) = cm(i, c) * train_priors[c];
  return ConfusionMatrix(std::move(m), CMForm::joint, cm.flavor());
}

DecisionCounts decision_counts(const PredictionMatrix& preds) {
  std::vector<std::int64_t> counts(preds.cols(), 0);
  for (std::size_t r = 0; r < preds.rows(); ++r)
    ++counts[argmax_decision(preds.row(r), preds.cols())];
  return DecisionCounts(std::move(counts));
}

PriorVector decision_rates_hard(const PredictionMatrix& preds) {
  const DecisionCounts counts = decision_counts(preds);
  std::vector<double> v(counts.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = static_cast<double>(counts[i]);
  return normalize(v);
}

PriorVector decision_rates_soft(const PredictionMatrix& preds) {
  const std::size_t k = preds.cols();
  std::vector<double> means(k, 0.0);
  for (std::size_t r = 0; r < preds.rows(); ++r)
    kernels::axpy(1.0, preds.row(r), means.data(), k);
  return normalize(means);
}

}  // namespace psa
