#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spearsift/eval/metrics.hpp"
#include "spearsift/learn/model.hpp"
#include "spearsift/parallel.hpp"

namespace spearsift::eval {

using Fold = std::vector<std::size_t>;  // row indices, ascending

/// Seeded shuffle within each class, then round-robin over folds (the fold
/// counter carries over from one class to the next). Throws TooFewRows when
/// a class has fewer than k rows or k < 2.
std::vector<Fold> stratified_kfold(const learn::Dataset& data, int k, std::uint64_t seed);

struct EvaluationReport {
  std::string algorithm;    // "nb" | "tree" | "forest" | "table"
  std::string feature_set;  // free-form label, e.g. "vs-spam/email"
  std::uint64_t seed = 0;
  int k = 0;
  std::vector<std::string> features;
  std::vector<Confusion> folds;
  Confusion aggregate;
  double accuracy = 0.0;          // percent
  double weighted_fp_rate = 0.0;  // fraction
  std::array<double, 2> fp_rates{};

  bool operator==(const EvaluationReport&) const = default;
};

/// Fold f trains with seed derive_seed(seed, f + 1); folds come from
/// stratified_kfold(data, k, derive_seed(seed, 0)).
EvaluationReport cross_validate(const learn::Dataset& data, const learn::TrainConfig& config, int k,
                                std::uint64_t seed, Execution exec = Execution::Parallel);

}  // namespace spearsift::eval
