#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spearsift::eval {

// One accepted or rejected binary split of an interval.
struct MdlSplit {
  bool found = false;      // a cut point exists (values not constant)
  bool accepted = false;   // gain exceeds the MDL criterion
  double cut = 0.0;
  double gain = 0.0;
  double criterion = 0.0;
  std::size_t cut_index = 0;  // last sorted position on the left side
};

/// Best entropy split of the whole input and its MDL test. Labels are small
/// non-negative class indices. Throws LengthMismatch.
MdlSplit mdl_best_split(std::span<const double> values, std::span<const int> labels);

/// Fayyad-Irani recursive MDL discretization. Returns sorted cut points
/// strictly inside (min, max). Throws LengthMismatch.
std::vector<double> mdl_discretize(std::span<const double> values, std::span<const int> labels);

/// Interval index of `value` given sorted cuts (value <= cut[i] -> i).
int interval_of(double value, std::span<const double> cuts);

}  // namespace spearsift::eval
