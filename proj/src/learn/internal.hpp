#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spearsift/learn/model.hpp"
#include "spearsift/rng.hpp"

namespace spearsift::learn::detail {

double entropy2(double negatives, double positives);

std::vector<double> compute_fallback(const Dataset& data);

// Columns plus, for every numeric attribute, the row indices sorted by value.
// Built once per training set and shared by every tree grown from it.
struct PresortedData {
  explicit PresortedData(const Dataset& data);

  const Dataset* data;
  std::vector<std::vector<double>> columns;
  std::vector<std::vector<std::uint32_t>> order;  // empty for nominal attributes
};

struct GrowOptions {
  SplitCriterion criterion = SplitCriterion::GainRatio;
  int min_leaf = 2;
  // Attributes drawn per node; 0 evaluates all of them.
  int m_try = 0;
  Rng* rng = nullptr;
  // C4.5 regularization: branch size at least clamp(0.1 * W / 2, min_leaf, 25)
  // for numeric splits, and numeric gain reduced by log2(#thresholds) / W.
  bool c45_rules = false;
};

// Unpruned tree over the rows with positive weight.
TreeModel grow_tree(const PresortedData& data, std::span<const double> weights, const GrowOptions& options);

// Pessimistic-error subtree replacement at confidence `cf`.
void prune_tree(TreeModel& tree, double cf);

// Upper-bound error correction used by pessimistic pruning.
double added_errors(double n, double e, double cf);

}  // namespace spearsift::learn::detail
