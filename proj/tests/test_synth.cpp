#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "psa/synth.hpp"

using namespace psa;

TEST_CASE("dataset generation is deterministic per seed") {
  const GaussianPair pair;
  const PriorVector p({0.5, 0.5});
  const Dataset a = generate_dataset(pair, p, 1000, 7);
  const Dataset b = generate_dataset(pair, p, 1000, 7);
  const Dataset c = generate_dataset(pair, p, 1000, 8);
  CHECK(a.x == b.x);
  CHECK(a.labels == b.labels);
  CHECK(a.x != c.x);
}

TEST_CASE("label frequencies follow the requested priors") {
  const Dataset d = generate_dataset(GaussianPair{}, PriorVector({0.9, 0.1}),
                                     20000, 13);
  double frac1 = 0.0;
  for (int y : d.labels) frac1 += y;
  frac1 /= static_cast<double>(d.labels.size());
  CHECK(frac1 == doctest::Approx(0.1).epsilon(0.15));
}

TEST_CASE("sample moments match the class-conditional Gaussians") {
  const GaussianPair pair;
  const Dataset d = generate_dataset(pair, PriorVector({0.5, 0.5}), 50000, 19);
  double m0 = 0.0, m1 = 0.0, n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    if (d.labels[i] == 0) {
      m0 += d.x[i];
      n0 += 1.0;
    } else {
      m1 += d.x[i];
      n1 += 1.0;
    }
  }
  CHECK(m0 / n0 == doctest::Approx(-2.0).epsilon(0.03));
  CHECK(m1 / n1 == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("classifier predictions are the logistic of a x + b") {
  const std::vector<double> x = {-1.0, 0.0, 2.0};
  auto [preds, logits] = classifier_predictions(LogisticClassifier{2.0, 0.5}, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = 2.0 * x[i] + 0.5;
    CHECK(logits(i, 0) == doctest::Approx(0.0));
    CHECK(logits(i, 1) == doctest::Approx(z));
    CHECK(preds(i, 1) == doctest::Approx(1.0 / (1.0 + std::exp(-z))));
    CHECK(preds(i, 0) + preds(i, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("analytic hard CM for the matched classifier") {
  const ConfusionMatrix cm =
      true_confusion_matrix(GaussianPair{}, LogisticClassifier{1.0, 0.0});
  // Threshold at 0, classes at +-2 with sigma 2: Phi(1) = 0.84134.
  CHECK(cm(0, 0) == doctest::Approx(normal_cdf(1.0)).epsilon(1e-12));
  CHECK(cm(0, 0) == doctest::Approx(0.841).epsilon(5e-4));
  CHECK(cm(1, 0) == doctest::Approx(0.159).epsilon(5e-3));
  CHECK(cm(0, 1) == doctest::Approx(1.0 - normal_cdf(1.0)).epsilon(1e-9));
}

TEST_CASE("classifiers with the same decision threshold share the hard CM") {
  const GaussianPair pair;
  const ConfusionMatrix c1 = true_confusion_matrix(pair, LogisticClassifier{1.0, 0.0});
  const ConfusionMatrix c2 = true_confusion_matrix(pair, LogisticClassifier{2.0, 0.0});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      CHECK(c1(i, k) == doctest::Approx(c2(i, k)).epsilon(1e-14));

  // But their soft CMs differ (the steeper classifier is more confident).
  const ConfusionMatrix s1 = true_soft_confusion_matrix(pair, LogisticClassifier{1.0, 0.0});
  const ConfusionMatrix s2 = true_soft_confusion_matrix(pair, LogisticClassifier{2.0, 0.0});
  CHECK(s2(0, 0) > s1(0, 0));
}

TEST_CASE("quadrature soft CM agrees with a Monte-Carlo oracle") {
  const GaussianPair pair;
  const LogisticClassifier clf{1.0, 0.0};
  const ConfusionMatrix soft = true_soft_confusion_matrix(pair, clf);

  // Independent oracle: sample each class, average the posterior.
  const Dataset d = generate_dataset(pair, PriorVector({0.5, 0.5}), 200000, 29);
  auto [preds, logits] = classifier_predictions(clf, d.x);
  double s00 = 0.0, s01 = 0.0, n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    if (d.labels[i] == 0) {
      s00 += preds(i, 0);
      n0 += 1.0;
    } else {
      s01 += preds(i, 0);
      n1 += 1.0;
    }
  }
  CHECK(soft(0, 0) == doctest::Approx(s00 / n0).epsilon(0.01));
  CHECK(soft(0, 1) == doctest::Approx(s01 / n1).epsilon(0.02));

  // Columns are distributions.
  CHECK(soft(0, 0) + soft(1, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a slope-zero classifier has no decision threshold") {
  CHECK_THROWS_AS(true_confusion_matrix(GaussianPair{}, LogisticClassifier{0.0, 1.0}),
                  ValidationError);
}

TEST_CASE("resampler hits the target class counts via largest remainder") {
  const Dataset d = generate_dataset(GaussianPair{}, PriorVector({0.5, 0.5}),
                                     10000, 31);
  const Dataset r = resample_to_priors(d, PriorVector({0.9, 0.1}), 5000, 37);
  REQUIRE(r.x.size() == 5000);
  std::size_t n1 = 0;
  for (int y : r.labels) n1 += static_cast<std::size_t>(y);
  CHECK(n1 == 500);
  CHECK(r.labels.size() - n1 == 4500);

  // Asking for more of a class than exists fails loudly.
  CHECK_THROWS_AS(resample_to_priors(d, PriorVector({1.0, 0.0}), 9000, 37),
                  ValidationError);
}

TEST_CASE("normal_cdf sanity") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_cdf(-8.0) < 1e-14);
}
