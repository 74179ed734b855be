#pragma once

// Analytic two-Gaussian testbed: 1-D class-conditional Gaussians, parametric
// logistic classifiers, exact hard and soft confusion matrices, and a
// prior-shift resampler.
//
// All randomness comes from std::mt19937_64 (whose output sequence the
// standard pins down) with explicit 53-bit uniform conversion and Box-Muller
// normals, so runs are reproducible per seed. Streams are split by purpose:
// labels draw from mt19937_64(seed), sample values from
// mt19937_64(seed ^ 0x9e3779b97f4a7c15); the resampler derives one substream
// per class by mixing the class index into the seed.

#include <cstdint>
#include <utility>
#include <vector>

#include "psa/types.hpp"

namespace psa {

struct GaussianPair {
  double mean0 = -2.0;
  double mean1 = 2.0;
  double sigma = 2.0;  // standard deviation, shared by both classes

  void validate() const;
};

struct LogisticClassifier {
  double slope = 1.0;      // a in f(x) = 1/(1+exp(-(a x + b)))
  double intercept = 0.0;  // b

  void validate() const;
};

struct Dataset {
  std::vector<double> x;
  std::vector<int> labels;
};

Dataset generate_dataset(const GaussianPair& pair, const PriorVector& priors,
                         std::size_t n, std::uint64_t seed);

// Predictions [1-f(x), f(x)] and logits [0, a x + b].
std::pair<PredictionMatrix, LogitMatrix> classifier_predictions(
    const LogisticClassifier& clf, const std::vector<double>& x);

// Exact hard CM from the Gaussian CDF at the decision threshold -b/a.
ConfusionMatrix true_confusion_matrix(const GaussianPair& pair,
                                      const LogisticClassifier& clf);

// Exact soft CM: column j = (E[1-f|Y=j], E[f|Y=j]) by adaptive quadrature.
ConfusionMatrix true_soft_confusion_matrix(const GaussianPair& pair,
                                           const LogisticClassifier& clf);

// Draws without replacement per class to match target class counts
// (largest-remainder rounding). Output is grouped by class.
Dataset resample_to_priors(const Dataset& data, const PriorVector& target_priors,
                           std::size_t n_out, std::uint64_t seed);

// Standard normal CDF, shared with the analytic tests.
double normal_cdf(double z);

}  // namespace psa
