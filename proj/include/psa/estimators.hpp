#pragma once

// Prior and prior-ratio estimators: confusion-matrix inversion, BBSE,
// EM, projected-gradient MLE/MAP on posterior predictions, and the
// constrained CM-likelihood estimators (with MAP extension) that never
// leave the simplex.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psa/types.hpp"

namespace psa {

struct SolverOptions {
  int max_iters = 10000;
  double tol = 1e-10;           // objective-change stopping threshold
  double step_init = 0.1;
  double epsilon_floor = 1e-12; // floor for log arguments and divisors
  std::uint64_t seed = 0;       // reserved; all solvers are deterministic

  void validate() const;
};

struct DirichletHyperPrior {
  double alpha = 3.0;  // symmetric concentration

  void validate() const;
};

// p_E(Y) = C^{-1} p(D). May leave the simplex; throws SingularMatrixError
// when the condition estimate exceeds 1e12.
UnconstrainedEstimate estimate_priors_inversion(const ConfusionMatrix& cm,
                                                const PriorVector& decision_rates);

// BBSE: solves C_{d,y} w = p(D) for the prior ratio w.
UnconstrainedEstimate estimate_ratio_bbse(const ConfusionMatrix& cm_joint,
                                          const PriorVector& decision_rates);

std::pair<PriorVector, EstimationReport> estimate_priors_em(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const SolverOptions& opts);

std::pair<PriorVector, EstimationReport> estimate_priors_mle_pga(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const SolverOptions& opts);

std::pair<PriorVector, EstimationReport> estimate_priors_map_pga(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const DirichletHyperPrior& hyper, const SolverOptions& opts);

// sum_k n_k log(c_{k,:} . P), log arguments floored; the multinomial
// constant is dropped.
double cm_log_likelihood(const PriorVector& priors, const ConfusionMatrix& cm,
                         const DecisionCounts& counts);

std::pair<PriorVector, EstimationReport> estimate_priors_cm_mle(
    const ConfusionMatrix& cm, const DecisionCounts& counts,
    const SolverOptions& opts);

std::pair<PriorVector, EstimationReport> estimate_priors_cm_map(
    const ConfusionMatrix& cm, const DecisionCounts& counts,
    const DirichletHyperPrior& hyper, const SolverOptions& opts);

// Real-weight variants backing the soft-CM estimators, where the decision
// statistics are M * soft rates rather than integer counts.
std::pair<PriorVector, EstimationReport> estimate_priors_cm_mle_weighted(
    const ConfusionMatrix& cm, const std::vector<double>& weights,
    const SolverOptions& opts);

std::pair<PriorVector, EstimationReport> estimate_priors_cm_map_weighted(
    const ConfusionMatrix& cm, const std::vector<double>& weights,
    const DirichletHyperPrior& hyper, const SolverOptions& opts);

// Analytic gradients, exposed for finite-difference checks.
double posterior_log_likelihood(const PredictionMatrix& test_preds,
                                const PriorVector& train_priors,
                                const std::vector<double>& p,
                                double epsilon_floor = 1e-12);
std::vector<double> posterior_log_likelihood_gradient(
    const PredictionMatrix& test_preds, const PriorVector& train_priors,
    const std::vector<double>& p, double epsilon_floor = 1e-12);
double cm_log_likelihood_weighted(const ConfusionMatrix& cm,
                                  const std::vector<double>& weights,
                                  const std::vector<double>& p,
                                  double epsilon_floor = 1e-12);
std::vector<double> cm_log_likelihood_gradient(const ConfusionMatrix& cm,
                                               const std::vector<double>& weights,
                                               const std::vector<double>& p,
                                               double epsilon_floor = 1e-12);
std::vector<double> dirichlet_log_gradient(double alpha,
                                           const std::vector<double>& p,
                                           double epsilon_floor = 1e-12);

// Method registry for the CLI and the sweep harness.
enum class Method {
  cm, scm, cm_l, scm_l, cm_m, scm_m,
  em, mle_pga, map_pga, bbse, bbse_s, oracle, none,
};

Method parse_method(const std::string& name);  // throws UsageError
std::string method_name(Method m);
const std::vector<std::string>& method_names();

struct EstimatorContext {
  const PredictionMatrix* val_preds = nullptr;
  const LabelVector* val_labels = nullptr;
  const PredictionMatrix* test_preds = nullptr;
  std::optional<PriorVector> train_priors;
  std::optional<PriorVector> oracle_priors;
  DirichletHyperPrior hyper;
  SolverOptions opts;
  std::vector<std::string>* warnings = nullptr;
};

struct EstimationResult {
  std::optional<PriorVector> priors;            // for prior estimators
  std::optional<std::vector<double>> weights;   // for ratio estimators (bbse)
  EstimationReport report;
};

// Runs the named estimator with its standard input bindings:
// cm/cm-l/cm-m use the hard CM and hard counts, scm/scm-l/scm-m the soft CM
// with soft statistics, bbse the hard joint CM with hard rates, bbse-s the
// soft joint CM with soft rates.
EstimationResult run_estimator(Method method, const EstimatorContext& ctx);

}  // namespace psa
