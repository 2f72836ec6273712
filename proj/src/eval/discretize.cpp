#include "spearsift/eval/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spearsift/error.hpp"

namespace spearsift::eval {

namespace {

struct Item {
  double value;
  int label;
};

double entropy(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (double c : counts)
    if (c > 0) h -= (c / total) * std::log2(c / total);
  return h;
}

int distinct_classes(std::span<const double> counts) {
  return static_cast<int>(std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }));
}

// items[begin, end) sorted by value.
MdlSplit best_split(const std::vector<Item>& items, std::size_t begin, std::size_t end, int num_classes) {
  MdlSplit out;
  const std::size_t n = end - begin;
  if (n < 2) return out;
  std::vector<double> total(static_cast<std::size_t>(num_classes), 0.0), left(total.size(), 0.0), right(total.size());
  for (std::size_t i = begin; i < end; ++i) total[static_cast<std::size_t>(items[i].label)] += 1;

  const double nn = static_cast<double>(n);
  double best_e = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = begin; i + 1 < end; ++i) {
    left[static_cast<std::size_t>(items[i].label)] += 1;
    if (items[i].value == items[i + 1].value) continue;
    const double nl = static_cast<double>(i + 1 - begin);
    for (std::size_t c = 0; c < total.size(); ++c) right[c] = total[c] - left[c];
    const double e = (nl * entropy(left) + (nn - nl) * entropy(right)) / nn;
    if (!out.found || e < best_e) {
      out.found = true;
      best_e = e;
      best_i = i;
    }
  }
  if (!out.found) return out;

  std::fill(left.begin(), left.end(), 0.0);
  for (std::size_t i = begin; i <= best_i; ++i) left[static_cast<std::size_t>(items[i].label)] += 1;
  for (std::size_t c = 0; c < total.size(); ++c) right[c] = total[c] - left[c];

  const double ent = entropy(total);
  const double k = distinct_classes(total), k1 = distinct_classes(left), k2 = distinct_classes(right);
  const double delta = std::log2(std::pow(3.0, k) - 2.0) - (k * ent - k1 * entropy(left) - k2 * entropy(right));
  out.gain = ent - best_e;
  out.criterion = (std::log2(nn - 1.0) + delta) / nn;
  out.accepted = out.gain > out.criterion;
  const double a = items[best_i].value, b = items[best_i + 1].value;
  out.cut = a + (b - a) / 2.0;
  out.cut_index = best_i;
  return out;
}

std::vector<Item> prepare(std::span<const double> values, std::span<const int> labels, int& num_classes) {
  if (values.size() != labels.size())
    throw Error(Errc::LengthMismatch,
                std::to_string(values.size()) + " values but " + std::to_string(labels.size()) + " labels");
  std::vector<Item> items(values.size());
  num_classes = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (labels[i] < 0) throw Error(Errc::OutOfRange, "negative class label");
    items[i] = {values[i], labels[i]};
    num_classes = std::max(num_classes, labels[i] + 1);
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.value < y.value; });
  return items;
}

void split_recursive(const std::vector<Item>& items, std::size_t begin, std::size_t end, int num_classes,
                     std::vector<double>& cuts) {
  const MdlSplit s = best_split(items, begin, end, num_classes);
  if (!s.found || !s.accepted) return;
  cuts.push_back(s.cut);
  split_recursive(items, begin, s.cut_index + 1, num_classes, cuts);
  split_recursive(items, s.cut_index + 1, end, num_classes, cuts);
}

}  // namespace

MdlSplit mdl_best_split(std::span<const double> values, std::span<const int> labels) {
  int num_classes = 0;
  const auto items = prepare(values, labels, num_classes);
  return best_split(items, 0, items.size(), num_classes);
}

std::vector<double> mdl_discretize(std::span<const double> values, std::span<const int> labels) {
  int num_classes = 0;
  const auto items = prepare(values, labels, num_classes);
  std::vector<double> cuts;
  split_recursive(items, 0, items.size(), num_classes, cuts);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

int interval_of(double value, std::span<const double> cuts) {
  return static_cast<int>(std::lower_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
}

}  // namespace spearsift::eval
