#include "psa/types.hpp"

#include <cmath>
#include <limits>

namespace psa {

namespace {

constexpr double kIngestTol = 1e-6;

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw ValidationError(std::string(what) + ": non-finite entry");
}

}  // namespace

PriorVector::PriorVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("PriorVector: empty");
  check_finite(values_, "PriorVector");
  double sum = 0.0;
  for (double x : values_) {
    if (x < 0.0)
      throw ValidationError("PriorVector: negative entry violates nonnegativity invariant");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kIngestTol)
    throw ValidationError("PriorVector: entries sum to " + std::to_string(sum) +
                          ", violates sum-to-one invariant (tolerance 1e-6)");
  for (double& x : values_) x /= sum;
}

PriorVector PriorVector::uniform(std::size_t k) {
  if (k == 0) throw ValidationError("PriorVector: K must be positive");
  return PriorVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

UnconstrainedEstimate::UnconstrainedEstimate(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("UnconstrainedEstimate: empty");
  check_finite(values_, "UnconstrainedEstimate");
  double sum = 0.0;
  for (double x : values_) sum += x;
  if (std::abs(sum - 1.0) > kIngestTol)
    throw ValidationError(
        "UnconstrainedEstimate: entries sum to " + std::to_string(sum) +
        ", violates mass-preservation invariant (tolerance 1e-6)");
}

UnconstrainedEstimate UnconstrainedEstimate::ratio(std::vector<double> values) {
  if (values.empty()) throw ValidationError("UnconstrainedEstimate: empty");
  check_finite(values, "UnconstrainedEstimate");
  UnconstrainedEstimate out(std::vector<double>{1.0});
  out.values_ = std::move(values);
  return out;
}

bool UnconstrainedEstimate::inside_simplex() const {
  for (double x : values_)
    if (x < 0.0) return false;
  return true;
}

PredictionMatrix::PredictionMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.cols() == 0)
    throw ValidationError("PredictionMatrix: empty");
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m_.cols(); ++j) {
      double x = m_(i, j);
      if (!(x >= 0.0 && x <= 1.0))
        throw ValidationError("PredictionMatrix: entry (" + std::to_string(i) +
                              "," + std::to_string(j) +
                              ") outside [0,1], violates posterior invariant");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kIngestTol)
      throw ValidationError("PredictionMatrix: row " + std::to_string(i) +
                            " sums to " + std::to_string(sum) +
                            ", violates row-stochastic invariant (tolerance 1e-6)");
    // Already-normalized rows are left bit-identical so that serialization
    // round-trips exactly.
    if (std::abs(sum - 1.0) > 1e-12)
      for (std::size_t j = 0; j < m_.cols(); ++j) m_(i, j) /= sum;
  }
}

LogitMatrix::LogitMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.cols() == 0) throw ValidationError("LogitMatrix: empty");
  for (double x : m_.data())
    if (!std::isfinite(x))
      throw ValidationError("LogitMatrix: non-finite entry violates finiteness invariant");
}

ConfusionMatrix::ConfusionMatrix(Matrix m, CMForm form, CMFlavor flavor)
    : m_(std::move(m)), form_(form), flavor_(flavor) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw ValidationError("ConfusionMatrix: must be square and nonempty");
  for (double x : m_.data())
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ValidationError("ConfusionMatrix: negative or non-finite entry");
  const std::size_t k = m_.rows();
  if (form_ == CMForm::conditional) {
    for (std::size_t c = 0; c < k; ++c) {
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += m_(i, c);
      if (std::abs(sum - 1.0) > kIngestTol)
        throw ValidationError("ConfusionMatrix: column " + std::to_string(c) +
                              " sums to " + std::to_string(sum) +
                              ", violates column-stochastic invariant");
      for (std::size_t i = 0; i < k; ++i) m_(i, c) /= sum;
    }
  } else {
    double sum = 0.0;
    for (double x : m_.data()) sum += x;
    if (std::abs(sum - 1.0) > kIngestTol)
      throw ValidationError("ConfusionMatrix: joint form sums to " +
                            std::to_string(sum) + ", violates unit-mass invariant");
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 0; c < k; ++c) m_(i, c) /= sum;
  }
}

DecisionCounts::DecisionCounts(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty()) throw ValidationError("DecisionCounts: empty");
  for (std::int64_t c : counts_) {
    if (c < 0)
      throw ValidationError("DecisionCounts: negative count violates nonnegativity invariant");
    total_ += c;
  }
}

LabelVector::LabelVector(std::vector<int> labels, std::size_t num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes) {
  if (num_classes_ == 0) throw ValidationError("LabelVector: K must be positive");
  for (int y : labels_)
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes_)
      throw ValidationError("LabelVector: label " + std::to_string(y) +
                            " outside [0," + std::to_string(num_classes_) +
                            "), violates label-range invariant");
}

PriorVector normalize(const std::vector<double>& v) {
  if (v.empty()) throw ValidationError("normalize: empty input");
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0)
      throw ValidationError("normalize: entries must be finite and nonnegative");
    sum += x;
  }
  if (sum <= 0.0) throw ValidationError("normalize: all-zero input");
  std::vector<double> out(v);
  for (double& x : out) x /= sum;
  return PriorVector(std::move(out));
}

std::size_t argmax_decision(const double* row, std::size_t n) {
  if (n == 0) throw ValidationError("argmax_decision: empty row");
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (row[j] > row[best]) best = j;
  return best;
}

std::size_t argmax_decision(const std::vector<double>& row) {
  return argmax_decision(row.data(), row.size());
}

}  // namespace psa
