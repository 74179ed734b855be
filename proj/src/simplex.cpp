#include "psa/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace psa {

PriorVector project_to_simplex(const std::vector<double>& v) {
  if (v.empty()) throw ValidationError("project_to_simplex: empty input");
  for (double x : v)
    if (!std::isfinite(x))
      throw ValidationError("project_to_simplex: non-finite entry");

  const std::size_t k = v.size();
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());

  // Largest rho with u_rho + (1 - sum_{i<=rho} u_i)/rho > 0.
  double cumsum = 0.0, theta = 0.0;
  std::size_t rho = 0;
  for (std::size_t i = 0; i < k; ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;

  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = std::max(v[i] - theta, 0.0);

  // Snap float-level dust to zero, then restore unit mass exactly.
  double mass = 0.0;
  for (double& x : out) {
    if (x < 1e-15) x = 0.0;
    mass += x;
  }
  if (mass <= 0.0) {
    // Only reachable through pathological rounding; fall back to the vertex
    // nearest to v.
    std::fill(out.begin(), out.end(), 0.0);
    out[argmax_decision(v)] = 1.0;
    return PriorVector(std::move(out));
  }
  for (double& x : out) x /= mass;
  return PriorVector(std::move(out));
}

}  // namespace psa
