#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spearsift/learn/dataset.hpp"

namespace spearsift::eval {

// Binary confusion matrix indexed [truth][predicted]; index 1 is the positive
// (SPEAR) class.
struct Confusion {
  std::array<std::array<std::size_t, 2>, 2> counts{};

  void add(bool truth, bool predicted) { ++counts[truth ? 1 : 0][predicted ? 1 : 0]; }
  std::size_t total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
  std::size_t correct() const { return counts[0][0] + counts[1][1]; }
  std::size_t class_total(int c) const { return counts[c][0] + counts[c][1]; }
  /// Fraction in [0,1]. Throws EmptyConfusion.
  double accuracy() const;

  Confusion& operator+=(const Confusion& other);
  bool operator==(const Confusion&) const = default;
};

/// Per-class false-positive rate: instances of the other class predicted as
/// this one, over instances of the other class (0 when there are none).
std::array<double, 2> fp_rates(const Confusion& confusion);

/// Class-prevalence weighted FP rate. Throws EmptyConfusion.
double weighted_fp_rate(const Confusion& confusion);

/// Sample Pearson correlation. Throws LengthMismatch or ZeroVariance.
double pearson(std::span<const double> x, std::span<const double> y);

/// 11 buckets: [0,49], [50,99], ..., [450,499], [500]. Throws OutOfRange.
std::array<std::size_t, 11> bucket_connections(std::span<const int> values);

struct RankedFeature {
  std::string name;
  std::size_t attribute = 0;  // index in the dataset
  double info_gain = 0.0;     // bits
  bool numeric = false;
  std::array<double, 2> mean{};    // [negative, positive]; numerics only
  std::array<double, 2> stddev{};  // sample standard deviation
};

using InfoGainRanking = std::vector<RankedFeature>;

/// H(class) - H(class | feature) for already-discrete feature codes.
double information_gain(std::span<const int> feature, std::span<const int> labels);

/// Every attribute ranked by information gain, numerics discretized by MDL
/// first. Ties keep attribute order. Throws SingleClassTraining.
InfoGainRanking info_gain_ranking(const learn::Dataset& data);

}  // namespace spearsift::eval
