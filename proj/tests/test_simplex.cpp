#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "psa/simplex.hpp"

using namespace psa;

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

// Brute-force oracle: scan a fine simplex grid for the closest point.
std::vector<double> grid_project(const std::vector<double>& v, int steps) {
  const std::size_t k = v.size();
  std::vector<double> best;
  double best_d = 1e300;
  std::vector<int> idx(k - 1, 0);
  std::vector<double> cand(k);
  // Iterate over all compositions of `steps` into k parts.
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int remaining) {
    if (pos == k - 1) {
      for (std::size_t j = 0; j < k - 1; ++j)
        cand[j] = static_cast<double>(idx[j]) / steps;
      cand[k - 1] = static_cast<double>(remaining) / steps;
      const double d = dist2(cand, v);
      if (d < best_d) {
        best_d = d;
        best = cand;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      idx[pos] = c;
      rec(pos + 1, remaining - c);
    }
  };
  rec(0, steps);
  return best;
}

}  // namespace

TEST_CASE("projection of a simplex point is the identity") {
  const std::vector<double> p = {0.2, 0.5, 0.3};
  const auto out = project_to_simplex(p).values();
  for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(p[i]).epsilon(1e-14));
}

TEST_CASE("idempotence and exact shift invariance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + rng() % 5;
    std::vector<double> v(k);
    for (double& x : v) x = u(rng);
    const auto p1 = project_to_simplex(v).values();
    const auto p2 = project_to_simplex(p1).values();
    for (std::size_t i = 0; i < k; ++i) CHECK(p2[i] == doctest::Approx(p1[i]).epsilon(1e-12));

    const double c = u(rng);
    std::vector<double> shifted(v);
    for (double& x : shifted) x += c;
    const auto ps = project_to_simplex(shifted).values();
    for (std::size_t i = 0; i < k; ++i) CHECK(ps[i] == doctest::Approx(p1[i]).epsilon(1e-10));
  }
}

TEST_CASE("matches brute-force grid oracle for K <= 4") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 2 + rng() % 3;
    std::vector<double> v(k);
    for (double& x : v) x = u(rng);
    const auto exact = project_to_simplex(v).values();
    const auto grid = grid_project(v, 400);
    // The grid point cannot be closer than the true projection by more than
    // the grid resolution allows.
    CHECK(dist2(exact, v) <= dist2(grid, v) + 1e-12);
    for (std::size_t i = 0; i < k; ++i)
      CHECK(std::abs(exact[i] - grid[i]) < 1.0 / 400 + 1e-9);
  }
}

TEST_CASE("clamps negatives and handles extreme inputs") {
  const auto p = project_to_simplex({10.0, -10.0}).values();
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));

  const auto q = project_to_simplex({0.0, 0.0, 0.0}).values();
  for (double x : q) CHECK(x == doctest::Approx(1.0 / 3.0));
}
