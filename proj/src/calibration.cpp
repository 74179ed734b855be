#include "psa/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psa/kernels.hpp"

namespace psa {

namespace {

constexpr double kLogTMin = -6.907755278982137;  // ln 1e-3
constexpr double kLogTMax = 6.907755278982137;   // ln 1e3
constexpr double kFitTol = 1e-10;
constexpr int kFitMaxIters = 10000;

// NLL and, optionally, its gradient w.r.t. (log T, all K biases).
double nll_impl(const LogitMatrix& z, const LabelVector& y,
                double temperature, const std::vector<double>& biases,
                double* d_log_t, std::vector<double>* d_biases) {
  const std::size_t n = z.rows(), k = z.cols();
  const double inv_t = 1.0 / temperature;
  std::vector<double> a(k), p(k);
  double nll = 0.0;
  if (d_log_t) *d_log_t = 0.0;
  if (d_biases) d_biases->assign(k, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double* zi = z.row(i);
    for (std::size_t j = 0; j < k; ++j) a[j] = zi[j] * inv_t + biases[j];
    kernels::softmax_row(a.data(), p.data(), k);
    const int yi = y[i];
    const double m = kernels::max_value(a.data(), k);
    double lse = 0.0;
    for (std::size_t j = 0; j < k; ++j) lse += std::exp(a[j] - m);
    nll += m + std::log(lse) - a[static_cast<std::size_t>(yi)];

    if (d_log_t || d_biases) {
      for (std::size_t j = 0; j < k; ++j) {
        const double r = p[j] - (static_cast<int>(j) == yi ? 1.0 : 0.0);
        if (d_biases) (*d_biases)[j] += r;
        if (d_log_t) *d_log_t -= r * zi[j] * inv_t;
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  nll *= inv_n;
  if (d_log_t) *d_log_t *= inv_n;
  if (d_biases) kernels::scale(d_biases->data(), inv_n, k);
  if (!std::isfinite(nll))
    throw NumericalError("calibration: non-finite objective");
  return nll;
}

// Gradient descent on theta = (log T [, b_0..b_{K-2}]); the last bias stays
// pinned at zero.
CalibrationParams fit_impl(const LogitMatrix& z, const LabelVector& y,
                           bool with_biases, std::vector<std::string>* warnings) {
  const std::size_t k = z.cols();
  if (z.rows() != y.size())
    throw ValidationError("calibration fit: logits and labels disagree in length");
  if (z.rows() < k + (with_biases ? 1u : 0u))
    throw ValidationError("calibration fit: too few samples");

  double log_t = 0.0;
  std::vector<double> biases(k, 0.0);
  double d_log_t = 0.0;
  std::vector<double> d_biases;

  auto eval = [&](double lt, const std::vector<double>& b, bool grad) {
    return nll_impl(z, y, std::exp(lt), b, grad ? &d_log_t : nullptr,
                    grad && with_biases ? &d_biases : nullptr);
  };

  double obj = eval(log_t, biases, true);
  int iter = 0;
  for (; iter < kFitMaxIters; ++iter) {
    double step = 1.0;
    double cand_obj = obj;
    double cand_log_t = log_t;
    std::vector<double> cand_biases = biases;
    bool improved = false;
    while (step > 1e-20) {
      cand_log_t = std::clamp(log_t - step * d_log_t, kLogTMin, kLogTMax);
      if (with_biases) {
        for (std::size_t j = 0; j + 1 < k; ++j)
          cand_biases[j] = biases[j] - step * d_biases[j];
      }
      cand_obj = eval(cand_log_t, cand_biases, false);
      if (cand_obj < obj) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
    const double decrease = obj - cand_obj;
    log_t = cand_log_t;
    biases = cand_biases;
    obj = eval(log_t, biases, true);
    if (decrease < kFitTol) break;
  }

  if (warnings && (log_t <= kLogTMin + 1e-12 || log_t >= kLogTMax - 1e-12))
    warnings->push_back("calibration: temperature clamped at bound T=" +
                        std::to_string(std::exp(log_t)) +
                        "; validation set is likely degenerate");

  CalibrationParams out{std::exp(log_t), std::move(biases)};
  return out;
}

}  // namespace

void CalibrationParams::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw ValidationError("CalibrationParams: temperature must be positive and finite");
  for (double b : biases)
    if (!std::isfinite(b))
      throw ValidationError("CalibrationParams: non-finite bias");
}

PredictionMatrix apply_calibration(const LogitMatrix& z, const CalibrationParams& params) {
  params.validate();
  const std::size_t n = z.rows(), k = z.cols();
  if (!params.biases.empty() && params.biases.size() != k)
    throw ValidationError("apply_calibration: bias length does not match K");
  const std::vector<double> zero(k, 0.0);
  const std::vector<double>& b = params.biases.empty() ? zero : params.biases;

  Matrix out(n, k);
  std::vector<double> a(k);
  const double inv_t = 1.0 / params.temperature;
  for (std::size_t i = 0; i < n; ++i) {
    const double* zi = z.row(i);
    for (std::size_t j = 0; j < k; ++j) a[j] = zi[j] * inv_t + b[j];
    kernels::softmax_row(a.data(), out.row(i), k);
  }
  return PredictionMatrix(std::move(out));
}

double calibration_nll(const LogitMatrix& z, const LabelVector& y,
                       const CalibrationParams& params) {
  params.validate();
  std::vector<double> b = params.biases;
  if (b.empty()) b.assign(z.cols(), 0.0);
  return nll_impl(z, y, params.temperature, b, nullptr, nullptr);
}

void calibration_nll_gradient(const LogitMatrix& z, const LabelVector& y,
                              const CalibrationParams& params,
                              double* d_log_t, std::vector<double>* d_biases) {
  params.validate();
  std::vector<double> b = params.biases;
  if (b.empty()) b.assign(z.cols(), 0.0);
  nll_impl(z, y, params.temperature, b, d_log_t, d_biases);
}

CalibrationParams fit_temperature(const LogitMatrix& z, const LabelVector& y,
                                  std::vector<std::string>* warnings) {
  return fit_impl(z, y, false, warnings);
}

CalibrationParams fit_bcts(const LogitMatrix& z, const LabelVector& y,
                           std::vector<std::string>* warnings) {
  return fit_impl(z, y, true, warnings);
}

LogitMatrix logits_from_probabilities(const PredictionMatrix& preds) {
  const std::size_t n = preds.rows(), k = preds.cols();
  Matrix out(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      out(i, j) = std::log(std::max(preds(i, j), 1e-12));
  return LogitMatrix(std::move(out));
}

}  // namespace psa
