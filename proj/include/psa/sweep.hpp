#pragma once

// Sample-size sweep: estimate priors on seeded test subsamples of varying
// size, adapt the FULL test set with each estimate, evaluate accuracy.

#include <cstdint>
#include <string>
#include <vector>

#include "psa/estimators.hpp"

namespace psa {

struct SweepRow {
  std::size_t size = 0;
  std::string method;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::vector<double> accuracies;  // one entry per repeat
};

// ctx.test_preds is the full test set; subsampling happens inside, with an
// independent substream per (size, repeat) so repeats can run in any order.
std::vector<SweepRow> run_sweep(Method method, const EstimatorContext& ctx,
                                const LabelVector& test_labels,
                                const std::vector<std::size_t>& sizes,
                                std::size_t repeats, std::uint64_t seed);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace psa
