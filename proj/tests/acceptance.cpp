// End-to-end acceptance suite. Each numbered check prints a single PASS/FAIL
// line; the process exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "psa/adaptation.hpp"
#include "psa/calibration.hpp"
#include "psa/confusion.hpp"
#include "psa/estimators.hpp"
#include "psa/simplex.hpp"
#include "psa/sweep.hpp"
#include "psa/synth.hpp"

using namespace psa;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const char* title, bool ok, const std::string& detail) {
  std::printf("%s  %2d. %s%s%s\n", ok ? "PASS" : "FAIL", idx, title,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> interior_point(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& x : p) {
    x = u(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

PredictionMatrix random_predictions(std::mt19937_64& rng, std::size_t n,
                                    std::size_t k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix m(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      m(i, j) = u(rng);
      sum += m(i, j);
    }
    for (std::size_t j = 0; j < k; ++j) m(i, j) /= sum;
  }
  return PredictionMatrix(std::move(m));
}

Matrix diag_dominant_cm(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(k, k);
  for (std::size_t c = 0; c < k; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      m(i, c) = (i == c ? 4.0 : 0.2) + 0.3 * u(rng);
      sum += m(i, c);
    }
    for (std::size_t i = 0; i < k; ++i) m(i, c) /= sum;
  }
  return m;
}

// Exact simplex-projection oracle for K <= 4: enumerate candidate supports.
std::vector<double> exact_projection_oracle(const std::vector<double>& v) {
  const std::size_t k = v.size();
  std::vector<double> best;
  double best_d = 1e300;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    double s = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) {
        s += v[i];
        ++cnt;
      }
    const double shift = (1.0 - s) / cnt;
    std::vector<double> cand(k, 0.0);
    bool feasible = true;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) {
        cand[i] = v[i] + shift;
        if (cand[i] < -1e-12) feasible = false;
      }
    if (!feasible) continue;
    double d = 0.0;
    for (std::size_t i = 0; i < k; ++i) d += (cand[i] - v[i]) * (cand[i] - v[i]);
    if (d < best_d) {
      best_d = d;
      best = cand;
    }
  }
  return best;
}

// --- criteria -------------------------------------------------------------

void criterion_1_inversion_pathology() {
  const auto t0 = Clock::now();
  const ConfusionMatrix cm(Matrix(2, 2, {0.8, 0.2, 0.2, 0.8}),
                           CMForm::conditional, CMFlavor::hard);
  const auto inv = estimate_priors_inversion(cm, PriorVector({1.0, 0.0}));
  bool ok = std::abs(inv[0] - 4.0 / 3.0) < 1e-12 &&
            std::abs(inv[1] + 1.0 / 3.0) < 1e-12;

  SolverOptions opts;
  auto [p, rep] = estimate_priors_cm_mle(cm, DecisionCounts({1000, 0}), opts);
  double sum = 0.0, mn = 1.0;
  for (std::size_t i = 0; i < 2; ++i) {
    sum += p[i];
    mn = std::min(mn, p[i]);
  }
  ok = ok && std::abs(sum - 1.0) < 1e-9 && mn >= 0.0;

  auto obj = [&](double p0) {
    return 1000.0 * std::log(std::max(0.8 * p0 + 0.2 * (1.0 - p0), 1e-12));
  };
  double best_grid = -1e300;
  for (int i = 0; i <= 1000; ++i) best_grid = std::max(best_grid, obj(i / 1000.0));
  ok = ok && obj(p[0]) >= best_grid - 1e-9;
  const double dt = elapsed(t0);
  ok = ok && dt < 1.0;
  report(1, "inversion leaves the simplex, constrained MLE does not", ok,
         "inversion=(" + std::to_string(inv[0]) + "," + std::to_string(inv[1]) +
             "), mle p0=" + std::to_string(p[0]) + ", " + std::to_string(dt) + "s");
}

void criterion_2_bbse_pathology() {
  const ConfusionMatrix joint(Matrix(2, 2, {0.4, 0.1, 0.1, 0.4}), CMForm::joint,
                              CMFlavor::hard);
  const auto w = estimate_ratio_bbse(joint, PriorVector({1.0, 0.0}));
  const bool ok = std::abs(w[0] - 8.0 / 3.0) < 1e-12 &&
                  std::abs(w[1] + 2.0 / 3.0) < 1e-12;
  report(2, "joint-CM ratio inversion counter-example", ok,
         "w=(" + std::to_string(w[0]) + "," + std::to_string(w[1]) + ")");
}

void criterion_3_analytic_cm() {
  const ConfusionMatrix cm =
      true_confusion_matrix(GaussianPair{}, LogisticClassifier{1.0, 0.0});
  const double expect[2][2] = {{0.841, 0.159}, {0.159, 0.841}};
  bool ok = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      ok = ok && std::abs(cm(i, j) - expect[i][j]) < 5e-4;
  report(3, "analytic hard CM of the matched classifier", ok,
         "cm(0,0)=" + std::to_string(cm(0, 0)));
}

void criterion_4_calibration_recovery() {
  const auto t0 = Clock::now();
  const GaussianPair pair;
  const Dataset d = generate_dataset(pair, PriorVector({0.5, 0.5}), 50000, 404);
  const LabelVector y(d.labels, 2);

  auto [po, zo] = classifier_predictions(LogisticClassifier{2.0, 0.0}, d.x);
  const CalibrationParams ts = fit_temperature(zo, y);
  const CalibrationParams bc = fit_bcts(zo, y);
  bool ok = std::abs(ts.temperature - 2.0) <= 0.1 &&
            std::abs(bc.temperature - 2.0) <= 0.1;
  for (double b : bc.biases) ok = ok && std::abs(b) <= 0.1;

  auto [pc, zc] = classifier_predictions(LogisticClassifier{1.0, 0.0}, d.x);
  const CalibrationParams ts1 = fit_temperature(zc, y);
  ok = ok && std::abs(ts1.temperature - 1.0) <= 0.1;
  const double dt = elapsed(t0);
  ok = ok && dt < 30.0;
  report(4, "TS/BCTS temperature recovery on 50k samples", ok,
         "T(overconfident)=" + std::to_string(ts.temperature) +
             ", T(matched)=" + std::to_string(ts1.temperature) + ", " +
             std::to_string(dt) + "s");
}

void criterion_5_monotone_likelihood() {
  std::mt19937_64 rng(505);
  int agree = 0;
  bool monotone = true;
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + rng() % 9;          // K in {2,...,10}
    const std::size_t m = 50 + rng() % 951;       // M <= 1000
    const auto preds = random_predictions(rng, m, k);
    const PriorVector pt(interior_point(rng, k));
    SolverOptions opts;
    auto [p_em, r_em] = estimate_priors_em(preds, pt, opts);
    auto [p_pga, r_pga] = estimate_priors_mle_pga(preds, pt, opts);
    for (const auto* rep : {&r_em, &r_pga})
      for (std::size_t i = 1; i < rep->trace.size(); ++i)
        monotone = monotone &&
                   rep->trace[i].second >= rep->trace[i - 1].second - 1e-12;
    if (linf(p_em.values(), p_pga.values()) < 1e-3) ++agree;
  }
  const bool ok = monotone && agree >= 195;
  report(5, "monotone EM/PGA traces, EM vs MLE-PGA agreement", ok,
         "agreement " + std::to_string(agree) + "/200, monotone=" +
             (monotone ? "yes" : "no"));
}

void criterion_6_gradient_checks() {
  std::mt19937_64 rng(606);
  const double h = 1e-6;
  auto rel_ok = [&](double g, double fd) {
    return std::abs(g - fd) <= 1e-4 * std::max(1.0, std::abs(fd));
  };
  bool ok = true;

  // Posterior log-likelihood gradient.
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng() % 4;
    const auto preds = random_predictions(rng, 60, k);
    const PriorVector pt(interior_point(rng, k));
    const auto p = interior_point(rng, k);
    const auto g = posterior_log_likelihood_gradient(preds, pt, p);
    for (std::size_t j = 0; j < k; ++j) {
      auto up = p, dn = p;
      up[j] += h;
      dn[j] -= h;
      const double fd = (posterior_log_likelihood(preds, pt, up) -
                         posterior_log_likelihood(preds, pt, dn)) /
                        (2 * h);
      ok = ok && rel_ok(g[j], fd);
    }
  }

  // MAP gradient = likelihood gradient + Dirichlet term.
  const double alpha = 3.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng() % 4;
    const auto preds = random_predictions(rng, 60, k);
    const PriorVector pt(interior_point(rng, k));
    const auto p = interior_point(rng, k);
    auto g = posterior_log_likelihood_gradient(preds, pt, p);
    const auto gd = dirichlet_log_gradient(alpha, p);
    auto map_obj = [&](const std::vector<double>& q) {
      double o = posterior_log_likelihood(preds, pt, q);
      for (double x : q) o += (alpha - 1.0) * std::log(x);
      return o;
    };
    for (std::size_t j = 0; j < k; ++j) {
      auto up = p, dn = p;
      up[j] += h;
      dn[j] -= h;
      const double fd = (map_obj(up) - map_obj(dn)) / (2 * h);
      ok = ok && rel_ok(g[j] + gd[j], fd);
    }
  }

  // CM-likelihood gradient.
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng() % 4;
    const ConfusionMatrix cm(diag_dominant_cm(rng, k), CMForm::conditional,
                             CMFlavor::hard);
    std::vector<double> w(k);
    for (double& x : w) x = static_cast<double>(rng() % 1000);
    const auto p = interior_point(rng, k);
    const auto g = cm_log_likelihood_gradient(cm, w, p);
    for (std::size_t j = 0; j < k; ++j) {
      auto up = p, dn = p;
      up[j] += h;
      dn[j] -= h;
      const double fd = (cm_log_likelihood_weighted(cm, w, up) -
                         cm_log_likelihood_weighted(cm, w, dn)) /
                        (2 * h);
      ok = ok && rel_ok(g[j], fd);
    }
  }
  report(6, "analytic gradients vs central finite differences", ok, "");
}

void criterion_7_inversion_mle_consistency() {
  std::mt19937_64 rng(707);
  int pass = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng() % 4;
    const Matrix cmat = diag_dominant_cm(rng, k);
    const ConfusionMatrix cm(cmat, CMForm::conditional, CMFlavor::hard);
    const auto truth = interior_point(rng, k);
    std::vector<double> w(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) w[i] += 5000.0 * cmat(i, j) * truth[j];
    SolverOptions opts;
    auto [p, rep] = estimate_priors_cm_mle_weighted(cm, w, opts);
    const auto inv = estimate_priors_inversion(cm, normalize(w));
    if (linf(p.values(), inv.values()) < 1e-3) ++pass;
  }
  report(7, "constrained MLE matches inversion on consistent inputs", pass == 100,
         std::to_string(pass) + "/100");
}

void criterion_8_map_closed_form() {
  std::mt19937_64 rng(808);
  bool ok = true;
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 2 + rng() % 4;
    Matrix eye(k, k);
    for (std::size_t i = 0; i < k; ++i) eye(i, i) = 1.0;
    const ConfusionMatrix cm(std::move(eye), CMForm::conditional, CMFlavor::hard);
    std::vector<std::int64_t> n(k);
    std::int64_t total = 0;
    for (auto& x : n) {
      x = 1 + static_cast<std::int64_t>(rng() % 400);
      total += x;
    }
    SolverOptions opts;
    auto [p, rep] =
        estimate_priors_cm_map(cm, DecisionCounts(n), DirichletHyperPrior{3.0}, opts);
    for (std::size_t j = 0; j < k; ++j) {
      const double expect = (static_cast<double>(n[j]) + 2.0) /
                            (static_cast<double>(total) + 2.0 * k);
      ok = ok && std::abs(p[j] - expect) < 1e-6;
    }
  }

  // alpha = 1 makes the MAP objective the plain likelihood.
  for (int t = 0; t < 10; ++t) {
    const std::size_t k = 2 + rng() % 4;
    const ConfusionMatrix cm(diag_dominant_cm(rng, k), CMForm::conditional,
                             CMFlavor::hard);
    std::vector<std::int64_t> n(k);
    for (auto& x : n) x = 1 + static_cast<std::int64_t>(rng() % 400);
    SolverOptions opts;
    auto [p_map, r1] =
        estimate_priors_cm_map(cm, DecisionCounts(n), DirichletHyperPrior{1.0}, opts);
    auto [p_mle, r2] = estimate_priors_cm_mle(cm, DecisionCounts(n), opts);
    ok = ok && linf(p_map.values(), p_mle.values()) < 1e-6;
  }
  report(8, "MAP closed form on identity CM; alpha=1 reduces to MLE", ok, "");
}

void criterion_9_end_to_end() {
  const auto t0 = Clock::now();
  const GaussianPair pair;
  const LogisticClassifier overconfident{2.0, 0.0};
  int good = 0;
  double last_p0 = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset val =
        generate_dataset(pair, PriorVector({0.5, 0.5}), 5000, 900 + 7 * seed);
    const Dataset test =
        generate_dataset(pair, PriorVector({0.9, 0.1}), 20000, 90000 + 13 * seed);
    auto [vp_raw, vz] = classifier_predictions(overconfident, val.x);
    auto [tp_raw, tz] = classifier_predictions(overconfident, test.x);
    const LabelVector val_labels(val.labels, 2);
    const LabelVector test_labels(test.labels, 2);

    const CalibrationParams cal = fit_bcts(vz, val_labels);
    const PredictionMatrix val_preds = apply_calibration(vz, cal);
    const PredictionMatrix test_preds = apply_calibration(tz, cal);

    EstimatorContext ctx;
    ctx.val_preds = &val_preds;
    ctx.val_labels = &val_labels;
    ctx.test_preds = &test_preds;
    ctx.train_priors = PriorVector({0.5, 0.5});
    const auto res = run_estimator(Method::scm_l, ctx);
    last_p0 = (*res.priors)[0];

    const double acc_none = evaluate_accuracy(test_preds, test_labels);
    const double acc_est = evaluate_accuracy(
        adapt_predictions(test_preds, *ctx.train_priors, *res.priors), test_labels);
    const double acc_oracle = evaluate_accuracy(
        adapt_predictions(test_preds, *ctx.train_priors, PriorVector({0.9, 0.1})),
        test_labels);
    if (acc_none < acc_est && acc_est <= acc_oracle + 0.005 &&
        std::abs(last_p0 - 0.9) <= 0.03)
      ++good;
  }
  const double dt = elapsed(t0);
  const bool ok = good >= 18 && dt < 60.0;
  report(9, "adaptation closes the gap to the oracle on the testbed", ok,
         std::to_string(good) + "/20 seeds, last p0=" + std::to_string(last_p0) +
             ", " + std::to_string(dt) + "s");
}

void criterion_10_simplex_projection() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  bool ok = true;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + rng() % 3;  // K <= 4
    std::vector<double> v(k);
    for (double& x : v) x = u(rng);
    const auto p = project_to_simplex(v).values();
    const auto oracle = exact_projection_oracle(v);
    ok = ok && linf(p, oracle) < 1e-6;

    const auto pp = project_to_simplex(p).values();
    ok = ok && linf(pp, p) < 1e-15;  // idempotent

    const double c = u(rng);
    std::vector<double> shifted(v);
    for (double& x : shifted) x += c;
    ok = ok && linf(project_to_simplex(shifted).values(), p) < 1e-12;
  }
  report(10, "simplex projection vs exact oracle; idempotence; shift invariance",
         ok, "");
}

void criterion_11_sweep_trend() {
  const GaussianPair pair;
  const LogisticClassifier clf{1.0, 0.0};
  const Dataset val = generate_dataset(pair, PriorVector({0.5, 0.5}), 5000, 1111);
  const Dataset test = generate_dataset(pair, PriorVector({0.9, 0.1}), 20000, 2222);
  auto [val_preds, vz] = classifier_predictions(clf, val.x);
  auto [test_preds, tz] = classifier_predictions(clf, test.x);
  const LabelVector val_labels(val.labels, 2);
  const LabelVector test_labels(test.labels, 2);

  EstimatorContext ctx;
  ctx.val_preds = &val_preds;
  ctx.val_labels = &val_labels;
  ctx.test_preds = &test_preds;
  ctx.train_priors = PriorVector({0.5, 0.5});

  const auto rows =
      run_sweep(Method::scm_l, ctx, test_labels, {10, 10000}, 20, 4242);
  const double med_small = median(rows[0].accuracies);
  const double med_large = median(rows[1].accuracies);
  bool ok = med_large >= med_small;

  const auto flat =
      run_sweep(Method::none, ctx, test_labels, {10, 100, 1000, 10000}, 20, 4242);
  for (const auto& r : flat)
    ok = ok && std::abs(r.mean_accuracy - flat[0].mean_accuracy) < 1e-12 &&
         r.std_accuracy < 1e-12;
  report(11, "adapted accuracy improves with subsample size; baseline flat", ok,
         "median@10=" + std::to_string(med_small) +
             ", median@10000=" + std::to_string(med_large));
}

}  // namespace

int main() {
  criterion_1_inversion_pathology();
  criterion_2_bbse_pathology();
  criterion_3_analytic_cm();
  criterion_4_calibration_recovery();
  criterion_5_monotone_likelihood();
  criterion_6_gradient_checks();
  criterion_7_inversion_mle_consistency();
  criterion_8_map_closed_form();
  criterion_9_end_to_end();
  criterion_10_simplex_projection();
  criterion_11_sweep_trend();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
