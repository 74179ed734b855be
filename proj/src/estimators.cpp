#include "psa/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "psa/confusion.hpp"
#include "psa/kernels.hpp"
#include "psa/simplex.hpp"

namespace psa {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Dense K x K solve by Gauss-Jordan with partial pivoting. Also produces the
// inverse, which the 1-norm condition estimate needs anyway.
struct LinearSolve {
  std::vector<double> solution;
  double condition;
};

double norm1(const Matrix& m) {
  double best = 0.0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, c));
    best = std::max(best, s);
  }
  return best;
}

LinearSolve solve_with_condition(const Matrix& a, const std::vector<double>& rhs) {
  const std::size_t k = a.rows();
  Matrix work = a;
  Matrix inv(k, k);
  for (std::size_t i = 0; i < k; ++i) inv(i, i) = 1.0;

  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    if (std::abs(work(pivot, col)) < 1e-300)
      throw SingularMatrixError(
          "confusion matrix is singular; use the likelihood-based '-l' "
          "estimator instead of inversion");
    if (pivot != col)
      for (std::size_t j = 0; j < k; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    const double d = work(col, col);
    for (std::size_t j = 0; j < k; ++j) {
      work(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }

  const double cond = norm1(a) * norm1(inv);
  if (!(cond <= 1e12))
    throw SingularMatrixError(
        "confusion matrix is near-singular (condition estimate " +
        std::to_string(cond) +
        "); use the likelihood-based '-l' estimator instead of inversion");

  std::vector<double> x(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    x[i] = kernels::dot(inv.row(i), rhs.data(), k);
  return {std::move(x), cond};
}

std::vector<double> floored_priors(const PriorVector& p, double floor) {
  std::vector<double> out = p.values();
  for (double& x : out) x = std::max(x, floor);
  return out;
}

// Projected gradient ascent with backtracking line search. The line search
// only accepts non-decreasing steps, so the trace is monotone by
// construction.
std::pair<PriorVector, EstimationReport> pga_maximize(
    const std::string& method, std::size_t k,
    const std::function<double(const std::vector<double>&)>& objective,
    const std::function<std::vector<double>(const std::vector<double>&)>& gradient,
    const SolverOptions& opts, bool collapse_is_error) {
  const auto t0 = Clock::now();
  EstimationReport report;
  report.method = method;

  std::vector<double> p(k, 1.0 / static_cast<double>(k));
  double f = objective(p);
  if (!std::isfinite(f))
    throw NumericalError(method + ": non-finite objective at initialization");
  report.trace.emplace_back(0, f);

  report.termination = Termination::max_iters;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    const std::vector<double> g = gradient(p);
    double step = opts.step_init;
    bool accepted = false;
    std::vector<double> cand;
    double fc = f;
    while (step > 1e-18) {
      std::vector<double> moved(k);
      for (std::size_t j = 0; j < k; ++j) moved[j] = p[j] + step * g[j];
      cand = project_to_simplex(moved).values();
      fc = objective(cand);
      if (std::isnan(fc)) {
        report.wall_seconds = seconds_since(t0);
        throw NumericalError(method + ": NaN objective during line search");
      }
      if (fc >= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Strict descent at every step size: the iterate is wedged without
      // meeting the tolerance.
      if (collapse_is_error) {
        report.wall_seconds = seconds_since(t0);
        throw NumericalError(method + ": line-search step collapse at iteration " +
                             std::to_string(iter));
      }
      break;
    }
    const double delta = fc - f;
    p = std::move(cand);
    f = fc;
    report.trace.emplace_back(iter, f);
    if (delta < opts.tol) {
      report.termination = Termination::converged;
      break;
    }
  }

  PriorVector out = project_to_simplex(p);
  report.values = out.values();
  report.wall_seconds = seconds_since(t0);
  return {std::move(out), std::move(report)};
}

void check_cm_counts(const ConfusionMatrix& cm, std::size_t stat_len) {
  if (cm.form() != CMForm::conditional)
    throw ValidationError("cm likelihood: confusion matrix must be conditional");
  if (cm.size() != stat_len)
    throw ValidationError("cm likelihood: counts length does not match K");
}

}  // namespace

void SolverOptions::validate() const {
  if (max_iters < 1) throw ValidationError("SolverOptions: max_iters must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("SolverOptions: tol must be positive");
  if (!(step_init > 0.0)) throw ValidationError("SolverOptions: step_init must be positive");
  if (!(epsilon_floor > 0.0 && epsilon_floor <= 1e-6))
    throw ValidationError("SolverOptions: epsilon_floor must be in (0, 1e-6]");
}

void DirichletHyperPrior::validate() const {
  if (!(alpha > 0.0)) throw ValidationError("DirichletHyperPrior: alpha must be positive");
}

UnconstrainedEstimate estimate_priors_inversion(const ConfusionMatrix& cm,
                                                const PriorVector& decision_rates) {
  if (cm.form() != CMForm::conditional)
    throw ValidationError("estimate_priors_inversion: confusion matrix must be conditional");
  if (cm.size() != decision_rates.size())
    throw ValidationError("estimate_priors_inversion: shape mismatch");
  auto sol = solve_with_condition(cm.matrix(), decision_rates.values());
  return UnconstrainedEstimate(std::move(sol.solution));
}

UnconstrainedEstimate estimate_ratio_bbse(const ConfusionMatrix& cm_joint,
                                          const PriorVector& decision_rates) {
  if (cm_joint.form() != CMForm::joint)
    throw ValidationError("estimate_ratio_bbse: confusion matrix must be joint");
  if (cm_joint.size() != decision_rates.size())
    throw ValidationError("estimate_ratio_bbse: shape mismatch");
  auto sol = solve_with_condition(cm_joint.matrix(), decision_rates.values());
  return UnconstrainedEstimate::ratio(std::move(sol.solution));
}

double posterior_log_likelihood(const PredictionMatrix& test_preds,
                                const PriorVector& train_priors,
                                const std::vector<double>& p,
                                double epsilon_floor) {
  const std::size_t n = test_preds.rows(), k = test_preds.cols();
  const std::vector<double> pt = floored_priors(train_priors, epsilon_floor);
  std::vector<double> ratio(k);
  for (std::size_t j = 0; j < k; ++j) ratio[j] = p[j] / pt[j];
  // Kahan summation: near a fixed point the trace is compared at ~1e-12
  // resolution, which naive accumulation over many rows cannot hold.
  double ll = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = kernels::dot(test_preds.row(i), ratio.data(), k);
    const double term = std::log(std::max(s, epsilon_floor)) - comp;
    const double next = ll + term;
    comp = (next - ll) - term;
    ll = next;
  }
  return ll;
}

std::vector<double> posterior_log_likelihood_gradient(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const std::vector<double>& p, double epsilon_floor) {
  const std::size_t n = test_preds.rows(), k = test_preds.cols();
  const std::vector<double> pt = floored_priors(train_priors, epsilon_floor);
  std::vector<double> ratio(k), inv_pt(k), grad(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    ratio[j] = p[j] / pt[j];
    inv_pt[j] = 1.0 / pt[j];
  }
  std::vector<double> g_row(k);
  for (std::size_t i = 0; i < n; ++i) {
    const double* f = test_preds.row(i);
    const double denom = std::max(kernels::dot(f, ratio.data(), k), epsilon_floor);
    kernels::multiply(f, inv_pt.data(), g_row.data(), k);
    kernels::axpy(1.0 / denom, g_row.data(), grad.data(), k);
  }
  return grad;
}

std::pair<PriorVector, EstimationReport> estimate_priors_em(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const SolverOptions& opts) {
  opts.validate();
  if (test_preds.cols() != train_priors.size())
    throw ValidationError("estimate_priors_em: shape mismatch");
  const auto t0 = Clock::now();
  const std::size_t n = test_preds.rows(), k = test_preds.cols();
  const std::vector<double> pt = floored_priors(train_priors, opts.epsilon_floor);
  std::vector<double> inv_pt(k);
  for (std::size_t j = 0; j < k; ++j) inv_pt[j] = 1.0 / pt[j];

  EstimationReport report;
  report.method = "em";
  std::vector<double> p(k, 1.0 / static_cast<double>(k));
  report.trace.emplace_back(
      0, posterior_log_likelihood(test_preds, train_priors, p, opts.epsilon_floor));

  report.termination = Termination::max_iters;
  std::vector<double> ratio(k), w(k), accum(k);
  double prev_obj = report.trace.back().second;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    kernels::multiply(p.data(), inv_pt.data(), ratio.data(), k);
    std::fill(accum.begin(), accum.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double mass = kernels::reweight_row(test_preds.row(i), ratio.data(),
                                                w.data(), k);
      if (mass > 0.0) {
        kernels::axpy(1.0, w.data(), accum.data(), k);
      } else {
        // Row orthogonal to the current estimate; its posterior is the
        // estimate itself.
        kernels::axpy(1.0, p.data(), accum.data(), k);
      }
    }
    for (std::size_t j = 0; j < k; ++j) p[j] = accum[j] / static_cast<double>(n);
    const double obj =
        posterior_log_likelihood(test_preds, train_priors, p, opts.epsilon_floor);
    if (std::isnan(obj)) {
      report.wall_seconds = seconds_since(t0);
      throw NumericalError("em: NaN objective");
    }
    report.trace.emplace_back(iter, obj);
    // EM ascends the objective, so a sub-tol gain means a fixed point;
    // iterating past it only accumulates rounding noise in the trace.
    if (obj - prev_obj < opts.tol) {
      report.termination = Termination::converged;
      break;
    }
    prev_obj = obj;
  }

  PriorVector out = normalize(p);
  report.values = out.values();
  report.wall_seconds = seconds_since(t0);
  return {std::move(out), std::move(report)};
}

std::pair<PriorVector, EstimationReport> estimate_priors_mle_pga(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const SolverOptions& opts) {
  opts.validate();
  if (test_preds.cols() != train_priors.size())
    throw ValidationError("estimate_priors_mle_pga: shape mismatch");
  return pga_maximize(
      "mle-pga", test_preds.cols(),
      [&](const std::vector<double>& p) {
        return posterior_log_likelihood(test_preds, train_priors, p,
                                        opts.epsilon_floor);
      },
      [&](const std::vector<double>& p) {
        return posterior_log_likelihood_gradient(test_preds, train_priors, p,
                                                 opts.epsilon_floor);
      },
      opts, /*collapse_is_error=*/true);
}

std::vector<double> dirichlet_log_gradient(double alpha,
                                           const std::vector<double>& p,
                                           double epsilon_floor) {
  std::vector<double> g(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    g[j] = (alpha - 1.0) / std::max(p[j], epsilon_floor);
  return g;
}

std::pair<PriorVector, EstimationReport> estimate_priors_map_pga(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const DirichletHyperPrior& hyper, const SolverOptions& opts) {
  opts.validate();
  hyper.validate();
  if (test_preds.cols() != train_priors.size())
    throw ValidationError("estimate_priors_map_pga: shape mismatch");
  const double am1 = hyper.alpha - 1.0;
  return pga_maximize(
      "map-pga", test_preds.cols(),
      [&](const std::vector<double>& p) {
        double obj = posterior_log_likelihood(test_preds, train_priors, p,
                                              opts.epsilon_floor);
        for (double x : p) obj += am1 * std::log(std::max(x, opts.epsilon_floor));
        return obj;
      },
      [&](const std::vector<double>& p) {
        std::vector<double> g = posterior_log_likelihood_gradient(
            test_preds, train_priors, p, opts.epsilon_floor);
        for (std::size_t j = 0; j < g.size(); ++j)
          g[j] += am1 / std::max(p[j], opts.epsilon_floor);
        return g;
      },
      opts, /*collapse_is_error=*/true);
}

double cm_log_likelihood_weighted(const ConfusionMatrix& cm,
                                  const std::vector<double>& weights,
                                  const std::vector<double>& p,
                                  double epsilon_floor) {
  const std::size_t k = cm.size();
  double ll = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    if (weights[r] == 0.0) continue;
    const double q = kernels::dot(cm.row(r), p.data(), k);
    ll += weights[r] * std::log(std::max(q, epsilon_floor));
  }
  return ll;
}

std::vector<double> cm_log_likelihood_gradient(const ConfusionMatrix& cm,
                                               const std::vector<double>& weights,
                                               const std::vector<double>& p,
                                               double epsilon_floor) {
  const std::size_t k = cm.size();
  std::vector<double> grad(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    if (weights[r] == 0.0) continue;
    const double q = std::max(kernels::dot(cm.row(r), p.data(), k), epsilon_floor);
    kernels::axpy(weights[r] / q, cm.row(r), grad.data(), k);
  }
  return grad;
}

double cm_log_likelihood(const PriorVector& priors, const ConfusionMatrix& cm,
                         const DecisionCounts& counts) {
  check_cm_counts(cm, counts.size());
  if (priors.size() != cm.size())
    throw ValidationError("cm_log_likelihood: prior length does not match K");
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(counts[i]);
  return cm_log_likelihood_weighted(cm, w, priors.values());
}

std::pair<PriorVector, EstimationReport> estimate_priors_cm_mle_weighted(
    const ConfusionMatrix& cm, const std::vector<double>& weights,
    const SolverOptions& opts) {
  opts.validate();
  check_cm_counts(cm, weights.size());
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("cm mle: negative decision weight");
    total += w;
  }
  if (total <= 0.0) throw ValidationError("cm mle: total decision mass must be positive");
  return pga_maximize(
      "cm-l", cm.size(),
      [&](const std::vector<double>& p) {
        return cm_log_likelihood_weighted(cm, weights, p, opts.epsilon_floor);
      },
      [&](const std::vector<double>& p) {
        return cm_log_likelihood_gradient(cm, weights, p, opts.epsilon_floor);
      },
      opts, /*collapse_is_error=*/false);
}

std::pair<PriorVector, EstimationReport> estimate_priors_cm_mle(
    const ConfusionMatrix& cm, const DecisionCounts& counts,
    const SolverOptions& opts) {
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(counts[i]);
  return estimate_priors_cm_mle_weighted(cm, w, opts);
}

std::pair<PriorVector, EstimationReport> estimate_priors_cm_map_weighted(
    const ConfusionMatrix& cm, const std::vector<double>& weights,
    const DirichletHyperPrior& hyper, const SolverOptions& opts) {
  opts.validate();
  hyper.validate();
  check_cm_counts(cm, weights.size());
  for (double w : weights)
    if (w < 0.0) throw ValidationError("cm map: negative decision weight");
  const double am1 = hyper.alpha - 1.0;
  return pga_maximize(
      "cm-m", cm.size(),
      [&](const std::vector<double>& p) {
        double obj = cm_log_likelihood_weighted(cm, weights, p, opts.epsilon_floor);
        for (double x : p) obj += am1 * std::log(std::max(x, opts.epsilon_floor));
        return obj;
      },
      [&](const std::vector<double>& p) {
        std::vector<double> g =
            cm_log_likelihood_gradient(cm, weights, p, opts.epsilon_floor);
        for (std::size_t j = 0; j < g.size(); ++j)
          g[j] += am1 / std::max(p[j], opts.epsilon_floor);
        return g;
      },
      opts, /*collapse_is_error=*/false);
}

std::pair<PriorVector, EstimationReport> estimate_priors_cm_map(
    const ConfusionMatrix& cm, const DecisionCounts& counts,
    const DirichletHyperPrior& hyper, const SolverOptions& opts) {
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(counts[i]);
  return estimate_priors_cm_map_weighted(cm, w, hyper, opts);
}

namespace {

const std::vector<std::pair<std::string, Method>> kMethodTable = {
    {"cm", Method::cm},       {"scm", Method::scm},
    {"cm-l", Method::cm_l},   {"scm-l", Method::scm_l},
    {"cm-m", Method::cm_m},   {"scm-m", Method::scm_m},
    {"em", Method::em},       {"mle-pga", Method::mle_pga},
    {"map-pga", Method::map_pga}, {"bbse", Method::bbse},
    {"bbse-s", Method::bbse_s},   {"oracle", Method::oracle},
    {"none", Method::none},
};

}  // namespace

Method parse_method(const std::string& name) {
  for (const auto& [n, m] : kMethodTable)
    if (n == name) return m;
  std::string valid;
  for (const auto& [n, m] : kMethodTable) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw UsageError("unknown method '" + name + "'; valid methods: " + valid);
}

std::string method_name(Method m) {
  for (const auto& [n, mm] : kMethodTable)
    if (mm == m) return n;
  return "?";
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, m] : kMethodTable) v.push_back(n);
    return v;
  }();
  return names;
}

namespace {

PriorVector require_train_priors(const EstimatorContext& ctx) {
  if (ctx.train_priors) return *ctx.train_priors;
  if (ctx.val_preds) return decision_rates_soft(*ctx.val_preds);
  throw ValidationError("estimator requires train priors or validation predictions");
}

const PredictionMatrix& require_test(const EstimatorContext& ctx) {
  if (!ctx.test_preds) throw ValidationError("estimator requires test predictions");
  return *ctx.test_preds;
}

ConfusionMatrix val_cm(const EstimatorContext& ctx, CMFlavor flavor) {
  if (!ctx.val_preds || !ctx.val_labels)
    throw ValidationError("estimator requires validation predictions and labels");
  return flavor == CMFlavor::hard
             ? estimate_cm_hard(*ctx.val_preds, *ctx.val_labels, ctx.warnings)
             : estimate_cm_soft(*ctx.val_preds, *ctx.val_labels, ctx.warnings);
}

EstimationResult from_unconstrained(const std::string& name,
                                    UnconstrainedEstimate est, bool is_ratio,
                                    double wall_seconds,
                                    std::vector<std::string>* warnings) {
  EstimationResult result;
  result.report.method = name;
  result.report.values = est.values();
  result.report.termination = Termination::converged;
  result.report.wall_seconds = wall_seconds;
  if (is_ratio) {
    result.weights = est.values();
  } else if (est.inside_simplex()) {
    result.priors = normalize(est.values());
  } else {
    if (warnings)
      warnings->push_back(name +
                          ": estimate outside simplex (negative entries); "
                          "clamped to the nearest valid priors for adaptation");
    std::vector<double> clamped = est.values();
    for (double& x : clamped) x = std::max(x, 0.0);
    result.priors = normalize(clamped);
  }
  return result;
}

std::vector<double> soft_pseudo_counts(const PredictionMatrix& test_preds) {
  const PriorVector rates = decision_rates_soft(test_preds);
  std::vector<double> w = rates.values();
  const double m = static_cast<double>(test_preds.rows());
  for (double& x : w) x *= m;
  return w;
}

}  // namespace

EstimationResult run_estimator(Method method, const EstimatorContext& ctx) {
  EstimationResult result;
  const auto t0 = Clock::now();
  switch (method) {
    case Method::none: {
      result.report.method = "none";
      result.report.termination = Termination::converged;
      break;
    }
    case Method::oracle: {
      if (!ctx.oracle_priors)
        throw UsageError("method 'oracle' requires ground-truth priors");
      result.priors = *ctx.oracle_priors;
      result.report.method = "oracle";
      result.report.values = ctx.oracle_priors->values();
      result.report.termination = Termination::converged;
      break;
    }
    case Method::cm: {
      auto cm = val_cm(ctx, CMFlavor::hard);
      auto est = estimate_priors_inversion(cm, decision_rates_hard(require_test(ctx)));
      result = from_unconstrained("cm", std::move(est), false, seconds_since(t0),
                                  ctx.warnings);
      break;
    }
    case Method::scm: {
      auto cm = val_cm(ctx, CMFlavor::soft);
      auto est = estimate_priors_inversion(cm, decision_rates_soft(require_test(ctx)));
      result = from_unconstrained("scm", std::move(est), false, seconds_since(t0),
                                  ctx.warnings);
      break;
    }
    case Method::bbse: {
      auto joint = conditional_to_joint(val_cm(ctx, CMFlavor::hard),
                                        require_train_priors(ctx));
      auto est = estimate_ratio_bbse(joint, decision_rates_hard(require_test(ctx)));
      result = from_unconstrained("bbse", std::move(est), true, seconds_since(t0),
                                  ctx.warnings);
      break;
    }
    case Method::bbse_s: {
      auto joint = conditional_to_joint(val_cm(ctx, CMFlavor::soft),
                                        require_train_priors(ctx));
      auto est = estimate_ratio_bbse(joint, decision_rates_soft(require_test(ctx)));
      result = from_unconstrained("bbse-s", std::move(est), true, seconds_since(t0),
                                  ctx.warnings);
      break;
    }
    case Method::em: {
      auto [p, rep] = estimate_priors_em(require_test(ctx),
                                         require_train_priors(ctx), ctx.opts);
      result.priors = std::move(p);
      result.report = std::move(rep);
      break;
    }
    case Method::mle_pga: {
      auto [p, rep] = estimate_priors_mle_pga(require_test(ctx),
                                              require_train_priors(ctx), ctx.opts);
      result.priors = std::move(p);
      result.report = std::move(rep);
      break;
    }
    case Method::map_pga: {
      auto [p, rep] = estimate_priors_map_pga(
          require_test(ctx), require_train_priors(ctx), ctx.hyper, ctx.opts);
      result.priors = std::move(p);
      result.report = std::move(rep);
      break;
    }
    case Method::cm_l: {
      auto cm = val_cm(ctx, CMFlavor::hard);
      auto [p, rep] = estimate_priors_cm_mle(cm, decision_counts(require_test(ctx)),
                                             ctx.opts);
      result.priors = std::move(p);
      result.report = std::move(rep);
      break;
    }
    case Method::scm_l: {
      auto cm = val_cm(ctx, CMFlavor::soft);
      auto [p, rep] = estimate_priors_cm_mle_weighted(
          cm, soft_pseudo_counts(require_test(ctx)), ctx.opts);
      result.priors = std::move(p);
      result.report = std::move(rep);
      result.report.method = "scm-l";
      break;
    }
    case Method::cm_m: {
      auto cm = val_cm(ctx, CMFlavor::hard);
      auto [p, rep] = estimate_priors_cm_map(cm, decision_counts(require_test(ctx)),
                                             ctx.hyper, ctx.opts);
      result.priors = std::move(p);
      result.report = std::move(rep);
      break;
    }
    case Method::scm_m: {
      auto cm = val_cm(ctx, CMFlavor::soft);
      auto [p, rep] = estimate_priors_cm_map_weighted(
          cm, soft_pseudo_counts(require_test(ctx)), ctx.hyper, ctx.opts);
      result.priors = std::move(p);
      result.report = std::move(rep);
      result.report.method = "scm-m";
      break;
    }
  }
  return result;
}

}  // namespace psa
