#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <unordered_map>

#include "internal.hpp"
#include "spearsift/error.hpp"
#include "spearsift/eval/discretize.hpp"

namespace spearsift::learn {

namespace {

constexpr double kImprovement = 1e-12;

using Counts = std::array<double, 2>;

// Discretized code of every attribute for every row, column-major.
struct DiscreteView {
  std::vector<std::vector<int>> codes;
  std::vector<std::vector<double>> cuts;
  std::vector<int> labels;
};

DiscreteView discretize(const Dataset& data) {
  const std::size_t n = data.num_rows(), k = data.num_attributes();
  DiscreteView view;
  view.codes.assign(k, std::vector<int>(n));
  view.cuts.resize(k);
  view.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) view.labels[r] = data.label(r) ? 1 : 0;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<double> column(n);
    for (std::size_t r = 0; r < n; ++r) column[r] = data.value(r, a);
    if (data.attribute(a).kind == AttributeKind::Numeric) {
      view.cuts[a] = eval::mdl_discretize(column, view.labels);
      for (std::size_t r = 0; r < n; ++r) view.codes[a][r] = eval::interval_of(column[r], view.cuts[a]);
    } else {
      for (std::size_t r = 0; r < n; ++r) view.codes[a][r] = std::isnan(column[r]) ? -1 : static_cast<int>(column[r]);
    }
  }
  return view;
}

std::string row_key(const DiscreteView& view, const std::vector<int>& subset, std::size_t row) {
  std::string key(subset.size() * sizeof(int), '\0');
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const int code = view.codes[static_cast<std::size_t>(subset[i])][row];
    std::memcpy(key.data() + i * sizeof(int), &code, sizeof(int));
  }
  return key;
}

bool majority_positive(const Counts& c) { return c[1] >= c[0]; }

// Leave-one-out accuracy of the table over `subset`.
double loo_accuracy(const DiscreteView& view, const std::vector<int>& subset) {
  const std::size_t n = view.labels.size();
  std::unordered_map<std::string, Counts> cells;
  std::vector<std::string> keys(n);
  Counts global{};
  for (std::size_t r = 0; r < n; ++r) {
    keys[r] = row_key(view, subset, r);
    cells[keys[r]][view.labels[r]] += 1;
    global[view.labels[r]] += 1;
  }
  std::size_t correct = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const int y = view.labels[r];
    Counts c = cells[keys[r]];
    c[y] -= 1;
    if (c[0] + c[1] <= 0) {
      c = global;
      c[y] -= 1;
    }
    if (majority_positive(c) == (y == 1)) ++correct;
  }
  return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0;
}

}  // namespace

TrainedModel train_decision_table(const Dataset& data, const TableParams& params) {
  if (data.num_attributes() == 0) throw Error(Errc::DegenerateMatrix, "no attributes");
  if (data.num_rows() < 2) throw Error(Errc::TooFewRows, "decision table needs at least 2 rows");
  const DiscreteView view = discretize(data);
  const int k = static_cast<int>(data.num_attributes());

  // Best-first forward search; ties in the open list go to the earlier entry.
  struct Entry {
    double score;
    std::size_t order;
    std::vector<int> subset;
  };
  auto worse = [](const Entry& x, const Entry& y) {
    if (x.score != y.score) return x.score < y.score;
    return x.order > y.order;
  };
  std::vector<Entry> open;
  std::set<std::vector<int>> visited;
  std::size_t inserted = 0;

  std::vector<int> best;
  double best_score = loo_accuracy(view, best);
  open.push_back({best_score, inserted++, best});
  visited.insert(best);
  int stale = 0;
  while (!open.empty() && stale < params.stale_limit) {
    std::pop_heap(open.begin(), open.end(), worse);
    const Entry head = std::move(open.back());
    open.pop_back();
    bool improved = false;
    for (int a = 0; a < k; ++a) {
      if (std::binary_search(head.subset.begin(), head.subset.end(), a)) continue;
      std::vector<int> child = head.subset;
      child.insert(std::upper_bound(child.begin(), child.end(), a), a);
      if (!visited.insert(child).second) continue;
      const double score = loo_accuracy(view, child);
      if (score > best_score + kImprovement) {
        best_score = score;
        best = child;
        improved = true;
      } else if (std::abs(score - best_score) <= kImprovement &&
                 (child.size() < best.size() || (child.size() == best.size() && child < best))) {
        // Equal accuracy: keep the smaller subset. Not an improvement for the
        // stale counter.
        best = child;
      }
      open.push_back({score, inserted++, std::move(child)});
      std::push_heap(open.begin(), open.end(), worse);
    }
    stale = improved ? 0 : stale + 1;
  }

  TableModel table;
  table.params = params;
  table.selected = best;
  table.loo_accuracy = best_score;
  for (int a : best) table.cuts.push_back(view.cuts[static_cast<std::size_t>(a)]);
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    std::vector<int> key;
    key.reserve(best.size());
    for (int a : best) key.push_back(view.codes[static_cast<std::size_t>(a)][r]);
    table.cells[key][view.labels[r]] += 1;
    table.global[view.labels[r]] += 1;
  }

  TrainedModel model;
  model.attributes = data.attributes();
  model.fingerprint = data.fingerprint();
  model.fallback = detail::compute_fallback(data);
  model.body = std::move(table);
  return model;
}

}  // namespace spearsift::learn
