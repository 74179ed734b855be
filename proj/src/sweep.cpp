#include "psa/sweep.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "psa/adaptation.hpp"
#include "psa/confusion.hpp"
#include "psa/io.hpp"

namespace psa {

namespace {

PredictionMatrix subsample_rows(const PredictionMatrix& preds, std::size_t n,
                                std::mt19937_64& rng) {
  std::vector<std::size_t> idx(preds.rows());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates over the first n positions.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng() % (idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  Matrix m(n, preds.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < preds.cols(); ++c)
      m(i, c) = preds(idx[i], c);
  return PredictionMatrix(std::move(m));
}

double adapted_accuracy(Method method, const EstimatorContext& ctx,
                        const PredictionMatrix& sub_preds,
                        const LabelVector& test_labels) {
  if (method == Method::none)
    return evaluate_accuracy(*ctx.test_preds, test_labels);

  EstimatorContext est_ctx = ctx;
  est_ctx.test_preds = &sub_preds;
  const EstimationResult result = run_estimator(method, est_ctx);

  PredictionMatrix adapted = [&] {
    if (result.weights)
      return adapt_predictions_ratio(*ctx.test_preds, *result.weights, ctx.warnings);
    const PriorVector train = ctx.train_priors
                                  ? *ctx.train_priors
                                  : decision_rates_soft(*ctx.val_preds);
    return adapt_predictions(*ctx.test_preds, train, *result.priors,
                             ctx.opts.epsilon_floor);
  }();
  return evaluate_accuracy(adapted, test_labels);
}

}  // namespace

std::vector<SweepRow> run_sweep(Method method, const EstimatorContext& ctx,
                                const LabelVector& test_labels,
                                const std::vector<std::size_t>& sizes,
                                std::size_t repeats, std::uint64_t seed) {
  if (!ctx.test_preds) throw ValidationError("run_sweep: test predictions required");
  if (repeats == 0) throw ValidationError("run_sweep: repeats must be >= 1");
  const std::size_t n_test = ctx.test_preds->rows();
  for (std::size_t s : sizes)
    if (s == 0 || s > n_test)
      throw ValidationError("run_sweep: size " + std::to_string(s) +
                            " outside [1, " + std::to_string(n_test) + "]");

  std::vector<SweepRow> rows;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const std::size_t size = sizes[si];
    std::vector<double> accs;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (si * repeats + rep + 1)));
      const PredictionMatrix sub = size == n_test
                                       ? *ctx.test_preds
                                       : subsample_rows(*ctx.test_preds, size, rng);
      accs.push_back(adapted_accuracy(method, ctx, sub, test_labels));
    }
    double mean = 0.0;
    for (double a : accs) mean += a;
    mean /= static_cast<double>(accs.size());
    double var = 0.0;
    for (double a : accs) var += (a - mean) * (a - mean);
    var = accs.size() > 1 ? var / static_cast<double>(accs.size() - 1) : 0.0;
    rows.push_back({size, method_name(method), mean, std::sqrt(var), std::move(accs)});
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "size,method,mean_accuracy,std_accuracy\n";
  for (const auto& r : rows)
    out << r.size << "," << r.method << "," << io::format_double(r.mean_accuracy)
        << "," << io::format_double(r.std_accuracy) << "\n";
  return out.str();
}

}  // namespace psa
