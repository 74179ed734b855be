#pragma once

// Core domain types for prior-shift adaptation: probability vectors,
// prediction/logit matrices, confusion matrices and decision counts.
// All types validate their invariants on construction and are immutable
// afterwards, so they can be shared read-only across threads.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace psa {

// Data/parse problems (bad files, invariant violations). CLI exit code 3.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures (singular matrices, NaN objectives). CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class SingularMatrixError : public NumericalError {
 public:
  explicit SingularMatrixError(const std::string& msg) : NumericalError(msg) {}
};

// Bad method names, unknown flags. CLI exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dense row-major matrix of doubles. Plain storage, no math personality.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw ValidationError("Matrix: data size does not match rows*cols");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Point on the probability simplex. Ingest tolerance 1e-6 on the sum,
// renormalized exactly after validation.
class PriorVector {
 public:
  explicit PriorVector(std::vector<double> values);
  static PriorVector uniform(std::size_t k);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Output of confusion-matrix inversion: sums to 1 but entries may be
// negative (the inconsistent-estimate pathology).
class UnconstrainedEstimate {
 public:
  explicit UnconstrainedEstimate(std::vector<double> values);

  // Prior-ratio estimates are not unit-mass; this skips the sum check.
  static UnconstrainedEstimate ratio(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  bool inside_simplex() const;

 private:
  std::vector<double> values_;
};

// N x K row-stochastic matrix of classifier posteriors.
class PredictionMatrix {
 public:
  explicit PredictionMatrix(Matrix m);

  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  const double* row(std::size_t i) const { return m_.row(i); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

// N x K matrix of pre-softmax scores; only finiteness is required.
class LogitMatrix {
 public:
  explicit LogitMatrix(Matrix m);

  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  const double* row(std::size_t i) const { return m_.row(i); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

enum class CMForm { conditional, joint };
enum class CMFlavor { hard, soft };

// K x K confusion matrix. Entry (i,k) is p(D=i|Y=k) in conditional form
// (columns sum to 1) or p(D=i,Y=k) in joint form (total mass 1).
class ConfusionMatrix {
 public:
  ConfusionMatrix(Matrix m, CMForm form, CMFlavor flavor);

  std::size_t size() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t k) const { return m_(i, k); }
  const double* row(std::size_t i) const { return m_.row(i); }
  const Matrix& matrix() const { return m_; }
  CMForm form() const { return form_; }
  CMFlavor flavor() const { return flavor_; }

 private:
  Matrix m_;
  CMForm form_;
  CMFlavor flavor_;
};

// Per-class counts of argmax decisions on a test set.
class DecisionCounts {
 public:
  explicit DecisionCounts(std::vector<std::int64_t> counts);

  std::size_t size() const { return counts_.size(); }
  std::int64_t operator[](std::size_t k) const { return counts_[k]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t total() const { return total_; }

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

// Class labels in [0, K).
class LabelVector {
 public:
  LabelVector(std::vector<int> labels, std::size_t num_classes);

  std::size_t size() const { return labels_.size(); }
  int operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  std::size_t num_classes() const { return num_classes_; }

 private:
  std::vector<int> labels_;
  std::size_t num_classes_;
};

enum class Termination { converged, max_iters };

struct EstimationReport {
  std::string method;
  std::vector<double> values;                    // priors or weights
  std::vector<std::pair<int, double>> trace;     // (iteration, objective)
  Termination termination = Termination::converged;
  double wall_seconds = 0.0;
};

// Normalizes a nonnegative vector to a simplex point.
PriorVector normalize(const std::vector<double>& v);

// Index of the largest entry; ties broken towards the lowest index.
std::size_t argmax_decision(const double* row, std::size_t n);
std::size_t argmax_decision(const std::vector<double>& row);

}  // namespace psa
