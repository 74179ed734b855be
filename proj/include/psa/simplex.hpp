#pragma once

// Euclidean projection onto the probability simplex (sort-and-threshold,
// O(K log K)). The pi(.) primitive of every projected-gradient estimator.

#include <vector>

#include "psa/types.hpp"

namespace psa {

PriorVector project_to_simplex(const std::vector<double>& v);

}  // namespace psa
