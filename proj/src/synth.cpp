#include "psa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace psa {

namespace {

constexpr std::uint64_t kStreamSalt = 0x9e3779b97f4a7c15ull;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; consumes two uniforms per call, no state carried over.
double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double simpson_rule(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(const F& f, double a, double m, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_rule(a, m, fa, flm, fm);
  const double right = simpson_rule(m, b, fm, frm, fb);
  const double err = left + right - whole;
  if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth <= 0)
    throw NumericalError("true_soft_confusion_matrix: quadrature did not converge");
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, m, b, fa, fm, fb,
                          simpson_rule(a, b, fa, fm, fb), tol, 60);
}

double gaussian_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void GaussianPair::validate() const {
  if (!(sigma > 0.0)) throw ValidationError("GaussianPair: sigma must be positive");
  if (!std::isfinite(mean0) || !std::isfinite(mean1))
    throw ValidationError("GaussianPair: non-finite mean");
}

void LogisticClassifier::validate() const {
  if (!std::isfinite(slope) || !std::isfinite(intercept))
    throw ValidationError("LogisticClassifier: non-finite parameter");
}

Dataset generate_dataset(const GaussianPair& pair, const PriorVector& priors,
                         std::size_t n, std::uint64_t seed) {
  pair.validate();
  if (priors.size() != 2)
    throw ValidationError("generate_dataset: testbed is two-class (K=2)");
  if (n == 0) throw ValidationError("generate_dataset: n must be >= 1");

  std::mt19937_64 label_rng(seed);
  std::mt19937_64 sample_rng(seed ^ kStreamSalt);
  Dataset out;
  out.x.reserve(n);
  out.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = uniform01(label_rng) < priors[0] ? 0 : 1;
    const double mean = (y == 0) ? pair.mean0 : pair.mean1;
    out.x.push_back(mean + pair.sigma * standard_normal(sample_rng));
    out.labels.push_back(y);
  }
  return out;
}

std::pair<PredictionMatrix, LogitMatrix> classifier_predictions(
    const LogisticClassifier& clf, const std::vector<double>& x) {
  clf.validate();
  if (x.empty()) throw ValidationError("classifier_predictions: no samples");
  Matrix preds(x.size(), 2), logits(x.size(), 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw ValidationError("classifier_predictions: non-finite sample");
    const double score = clf.slope * x[i] + clf.intercept;
    const double f = logistic(score);
    preds(i, 0) = 1.0 - f;
    preds(i, 1) = f;
    logits(i, 0) = 0.0;
    logits(i, 1) = score;
  }
  return {PredictionMatrix(std::move(preds)), LogitMatrix(std::move(logits))};
}

ConfusionMatrix true_confusion_matrix(const GaussianPair& pair,
                                      const LogisticClassifier& clf) {
  pair.validate();
  clf.validate();
  if (clf.slope == 0.0)
    throw ValidationError("true_confusion_matrix: slope a=0 has no decision threshold");
  const double t = -clf.intercept / clf.slope;
  // P(decide 1 | Y=j) = P(a x + b > 0) = P(x > t) for a > 0, P(x < t) for a < 0.
  Matrix m(2, 2);
  for (int j = 0; j < 2; ++j) {
    const double mean = (j == 0) ? pair.mean0 : pair.mean1;
    const double upper_tail = 1.0 - normal_cdf((t - mean) / pair.sigma);
    const double decide1 = clf.slope > 0.0 ? upper_tail : 1.0 - upper_tail;
    m(1, static_cast<std::size_t>(j)) = decide1;
    m(0, static_cast<std::size_t>(j)) = 1.0 - decide1;
  }
  return ConfusionMatrix(std::move(m), CMForm::conditional, CMFlavor::hard);
}

ConfusionMatrix true_soft_confusion_matrix(const GaussianPair& pair,
                                           const LogisticClassifier& clf) {
  pair.validate();
  clf.validate();
  constexpr double kTol = 1e-10;
  const double span = 12.0 * pair.sigma;
  Matrix m(2, 2);
  for (int j = 0; j < 2; ++j) {
    const double mean = (j == 0) ? pair.mean0 : pair.mean1;
    const auto integrand = [&](double x) {
      return logistic(clf.slope * x + clf.intercept) *
             gaussian_pdf(x, mean, pair.sigma);
    };
    const double ef = integrate(integrand, mean - span, mean + span, kTol);
    m(1, static_cast<std::size_t>(j)) = ef;
    m(0, static_cast<std::size_t>(j)) = 1.0 - ef;
  }
  return ConfusionMatrix(std::move(m), CMForm::conditional, CMFlavor::soft);
}

Dataset resample_to_priors(const Dataset& data, const PriorVector& target_priors,
                           std::size_t n_out, std::uint64_t seed) {
  const std::size_t k = target_priors.size();
  if (data.x.size() != data.labels.size())
    throw ValidationError("resample_to_priors: samples and labels disagree in length");
  if (n_out == 0) throw ValidationError("resample_to_priors: n_out must be >= 1");

  // Largest-remainder rounding of n_out * target.
  std::vector<std::size_t> want(k, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double exact = target_priors[c] * static_cast<double>(n_out);
    want[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += want[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n_out; ++i, ++assigned)
    ++want[remainders[i % k].second];

  std::vector<std::vector<std::size_t>> by_class(k);
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    const auto y = static_cast<std::size_t>(data.labels[i]);
    if (y >= k)
      throw ValidationError("resample_to_priors: label outside target prior range");
    by_class[y].push_back(i);
  }

  Dataset out;
  out.x.reserve(n_out);
  out.labels.reserve(n_out);
  for (std::size_t c = 0; c < k; ++c) {
    if (want[c] == 0) continue;
    auto& pool = by_class[c];
    if (pool.size() < want[c])
      throw ValidationError("resample_to_priors: class " + std::to_string(c) +
                            " has " + std::to_string(pool.size()) +
                            " samples, needs " + std::to_string(want[c]));
    std::mt19937_64 rng(seed ^ (kStreamSalt * (c + 1)));
    // Partial Fisher-Yates: the first want[c] entries become the draw.
    for (std::size_t i = 0; i < want[c]; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(uniform01(rng) *
                                       static_cast<double>(pool.size() - i));
      std::swap(pool[i], pool[std::min(j, pool.size() - 1)]);
      out.x.push_back(data.x[pool[i]]);
      out.labels.push_back(data.labels[pool[i]]);
    }
  }
  return out;
}

}  // namespace psa
