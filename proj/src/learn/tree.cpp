#include <algorithm>
#include <cmath>
#include <numeric>

#include "internal.hpp"
#include "spearsift/error.hpp"

namespace spearsift::learn {

namespace detail {

namespace {

constexpr double kGainEps = 1e-12;

double entropy_of(const std::array<double, 2>& c) { return entropy2(c[0], c[1]); }

struct Candidate {
  bool valid = false;
  double gain = -1.0;
  double raw_gain = 0.0;  // before the threshold penalty
  double split_info = 0.0;
  double threshold = 0.0;
};

double split_information(std::span<const double> branch_weights, double total) {
  double info = 0.0;
  for (double w : branch_weights)
    if (w > 0) info -= (w / total) * std::log2(w / total);
  return info;
}

// Standard normal quantile by bisection on the CDF.
double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

class TreeGrower {
 public:
  TreeGrower(const PresortedData& data, std::span<const double> weights, const GrowOptions& options)
      : data_(data), weights_(weights), options_(options), k_(data.data->num_attributes()) {}

  TreeModel grow() {
    const std::size_t n = data_.data->num_rows();
    for (std::uint32_t r = 0; r < n; ++r)
      if (weights_[r] > 0) rows_.push_back(r);
    sorted_.resize(k_);
    for (std::size_t a = 0; a < k_; ++a) {
      if (data_.order[a].empty()) continue;
      sorted_[a].reserve(rows_.size());
      for (auto r : data_.order[a])
        if (weights_[r] > 0) sorted_[a].push_back(r);
    }
    scratch_.resize(rows_.size());
    child_of_.assign(n, 0);

    TreeModel tree;
    tree.nodes.emplace_back();
    struct Work {
      std::uint32_t node;
      std::size_t begin, end;
    };
    std::vector<Work> stack{{0, 0, rows_.size()}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      std::array<double, 2> dist{};
      for (std::size_t i = w.begin; i < w.end; ++i) {
        const auto r = rows_[i];
        dist[data_.data->label(r) ? 1 : 0] += weights_[r];
      }
      tree.nodes[w.node].distribution = dist;
      const double total = dist[0] + dist[1];
      if (dist[0] == 0 || dist[1] == 0 || total < 2.0 * options_.min_leaf) continue;

      const auto [attribute, candidate] = choose_split(w.begin, w.end, dist);
      if (attribute < 0) continue;

      const Attribute& attr = data_.data->attribute(static_cast<std::size_t>(attribute));
      const bool numeric = attr.kind == AttributeKind::Numeric;
      const std::size_t branches = numeric ? 2 : attr.cardinality();
      const auto& column = data_.columns[static_cast<std::size_t>(attribute)];
      for (std::size_t i = w.begin; i < w.end; ++i) {
        const auto r = rows_[i];
        child_of_[r] = numeric ? (column[r] <= candidate.threshold ? 0u : 1u)
                               : static_cast<std::uint32_t>(column[r]);
      }
      std::vector<std::size_t> offsets = partition(rows_, w.begin, w.end, branches);
      for (std::size_t a = 0; a < k_; ++a)
        if (!sorted_[a].empty()) partition(sorted_[a], w.begin, w.end, branches);

      auto& node = tree.nodes[w.node];
      node.attribute = attribute;
      node.threshold = candidate.threshold;
      node.first_child = static_cast<std::uint32_t>(tree.nodes.size());
      node.num_children = static_cast<std::uint32_t>(branches);
      const std::uint32_t first = node.first_child;
      tree.nodes.resize(tree.nodes.size() + branches);
      for (std::size_t b = branches; b-- > 0;) {
        const std::size_t begin = offsets[b], end = offsets[b + 1];
        const auto child = static_cast<std::uint32_t>(first + b);
        if (begin == end) {
          // Empty branch predicts like its parent.
          tree.nodes[child].distribution = dist;
        } else {
          stack.push_back({child, begin, end});
        }
      }
    }
    return tree;
  }

 private:
  // Stable counting partition of order[begin, end) by child_of_; returns the
  // branch boundaries (branches + 1 entries).
  std::vector<std::size_t> partition(std::vector<std::uint32_t>& order, std::size_t begin, std::size_t end,
                                     std::size_t branches) {
    std::vector<std::size_t> offsets(branches + 1, 0);
    for (std::size_t i = begin; i < end; ++i) ++offsets[child_of_[order[i]] + 1];
    offsets[0] = begin;
    for (std::size_t b = 1; b <= branches; ++b) offsets[b] += offsets[b - 1];
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = order[i];
      scratch_[cursor[child_of_[r]]++ - begin] = r;
    }
    std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(end - begin),
              order.begin() + static_cast<std::ptrdiff_t>(begin));
    return offsets;
  }

  Candidate evaluate_numeric(std::size_t a, std::size_t begin, std::size_t end, const std::array<double, 2>& dist) {
    Candidate best;
    const auto& order = sorted_[a];
    const auto& column = data_.columns[a];
    const double total = dist[0] + dist[1];
    const double parent_entropy = entropy_of(dist);
    double min_split = options_.min_leaf;
    if (options_.c45_rules) min_split = std::clamp(0.1 * total / 2.0, static_cast<double>(options_.min_leaf), 25.0);
    std::size_t thresholds = 0;
    std::array<double, 2> left{};
    std::array<double, 2> prev{};
    double prev_value = 0.0;
    bool have_prev = false;
    std::size_t i = begin;
    while (i < end) {
      const double v = column[order[i]];
      std::array<double, 2> group{};
      std::size_t j = i;
      while (j < end && column[order[j]] == v) {
        const auto r = order[j];
        group[data_.data->label(r) ? 1 : 0] += weights_[r];
        ++j;
      }
      if (have_prev) {
        const double wl = left[0] + left[1];
        if (wl >= min_split && total - wl >= min_split) ++thresholds;
        const bool prev_pure = prev[0] == 0 || prev[1] == 0;
        const bool group_pure = group[0] == 0 || group[1] == 0;
        const bool same_class = (prev[1] > 0) == (group[1] > 0);
        if (!(prev_pure && group_pure && same_class)) {
          const std::array<double, 2> right{dist[0] - left[0], dist[1] - left[1]};
          const double wr = right[0] + right[1];
          if (wl >= min_split && wr >= min_split) {
            const double gain = parent_entropy - (wl * entropy_of(left) + wr * entropy_of(right)) / total;
            if (gain > best.gain + kGainEps) {
              best.valid = true;
              best.gain = gain;
              const double weights[2] = {wl, wr};
              best.split_info = split_information(weights, total);
              double mid = prev_value + (v - prev_value) / 2.0;
              if (mid >= v) mid = prev_value;
              best.threshold = mid;
            }
          }
        }
      }
      left[0] += group[0];
      left[1] += group[1];
      prev = group;
      prev_value = v;
      have_prev = true;
      i = j;
    }
    if (!best.valid) return best;
    best.gain = std::max(0.0, best.gain);
    best.raw_gain = best.gain;
    if (options_.c45_rules) {
      best.gain -= std::log2(static_cast<double>(thresholds)) / total;
      if (best.gain <= kGainEps) best.valid = false;
    }
    return best;
  }

  Candidate evaluate_nominal(std::size_t a, std::size_t begin, std::size_t end, const std::array<double, 2>& dist) {
    const std::size_t values = data_.data->attribute(a).cardinality();
    std::vector<std::array<double, 2>> counts(values, {0.0, 0.0});
    const auto& column = data_.columns[a];
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = rows_[i];
      counts[static_cast<std::size_t>(column[r])][data_.data->label(r) ? 1 : 0] += weights_[r];
    }
    const double total = dist[0] + dist[1];
    std::vector<double> branch_weights(values);
    int big_branches = 0;
    double conditional = 0.0;
    for (std::size_t v = 0; v < values; ++v) {
      branch_weights[v] = counts[v][0] + counts[v][1];
      if (branch_weights[v] >= options_.min_leaf) ++big_branches;
      conditional += branch_weights[v] * entropy_of(counts[v]);
    }
    Candidate c;
    if (big_branches < 2) return c;
    c.valid = true;
    c.gain = std::max(0.0, entropy_of(dist) - conditional / total);
    c.raw_gain = c.gain;
    c.split_info = split_information(branch_weights, total);
    return c;
  }

  Candidate evaluate(std::size_t a, std::size_t begin, std::size_t end, const std::array<double, 2>& dist) {
    return data_.data->attribute(a).kind == AttributeKind::Numeric ? evaluate_numeric(a, begin, end, dist)
                                                                   : evaluate_nominal(a, begin, end, dist);
  }

  std::pair<int, Candidate> choose_split(std::size_t begin, std::size_t end, const std::array<double, 2>& dist) {
    std::vector<std::pair<std::size_t, Candidate>> evaluated;
    const bool sample = options_.m_try > 0 && static_cast<std::size_t>(options_.m_try) < k_;
    if (!sample) {
      for (std::size_t a = 0; a < k_; ++a) evaluated.emplace_back(a, evaluate(a, begin, end, dist));
    } else {
      std::vector<std::size_t> perm(k_);
      std::iota(perm.begin(), perm.end(), 0);
      // Keep drawing past m_try until some attribute has positive gain.
      bool found_gain = false;
      for (std::size_t i = 0; i < k_; ++i) {
        if (i >= static_cast<std::size_t>(options_.m_try) && found_gain) break;
        const std::size_t j = i + static_cast<std::size_t>(options_.rng->below(k_ - i));
        std::swap(perm[i], perm[j]);
        auto c = evaluate(perm[i], begin, end, dist);
        if (c.valid && c.gain > kGainEps) found_gain = true;
        evaluated.emplace_back(perm[i], c);
      }
      std::sort(evaluated.begin(), evaluated.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    }

    // Zero-gain splits are taken only when nothing has positive gain at all,
    // so that e.g. XOR stays learnable.
    bool any_raw_gain = false;
    double average_gain = 0.0;
    int positive = 0;
    for (const auto& [a, c] : evaluated) {
      if (c.raw_gain > kGainEps) any_raw_gain = true;
      if (!c.valid || c.gain <= kGainEps) continue;
      average_gain += c.gain;
      ++positive;
    }
    int best = -1;
    Candidate best_c;
    if (positive == 0) {
      if (any_raw_gain) return {-1, {}};
      for (const auto& [a, c] : evaluated)
        if (c.valid) return {static_cast<int>(a), c};
      return {-1, {}};
    }
    average_gain /= positive;
    double best_score = -1.0;
    for (const auto& [a, c] : evaluated) {
      if (!c.valid || c.gain <= kGainEps) continue;
      double score;
      if (options_.criterion == SplitCriterion::GainRatio) {
        if (c.gain < average_gain - 1e-3) continue;
        score = c.split_info > 0 ? c.gain / c.split_info : 0.0;
      } else {
        score = c.gain;
      }
      if (score > best_score + kGainEps) {
        best_score = score;
        best = static_cast<int>(a);
        best_c = c;
      }
    }
    return {best, best_c};
  }

  const PresortedData& data_;
  std::span<const double> weights_;
  GrowOptions options_;
  std::size_t k_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::vector<std::uint32_t>> sorted_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::uint32_t> child_of_;
};

}  // namespace

double entropy2(double negatives, double positives) {
  const double total = negatives + positives;
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (double c : {negatives, positives})
    if (c > 0) h -= (c / total) * std::log2(c / total);
  return h;
}

std::vector<double> compute_fallback(const Dataset& data) {
  std::vector<double> out(data.num_attributes(), 0.0);
  for (std::size_t a = 0; a < data.num_attributes(); ++a) {
    const auto& attr = data.attribute(a);
    if (attr.kind == AttributeKind::Numeric) {
      double sum = 0;
      for (std::size_t r = 0; r < data.num_rows(); ++r) sum += data.value(r, a);
      out[a] = data.num_rows() ? sum / static_cast<double>(data.num_rows()) : 0.0;
    } else {
      std::vector<std::size_t> counts(attr.cardinality(), 0);
      for (std::size_t r = 0; r < data.num_rows(); ++r) {
        const double v = data.value(r, a);
        if (v >= 0 && v < static_cast<double>(counts.size())) ++counts[static_cast<std::size_t>(v)];
      }
      if (!counts.empty())
        out[a] = static_cast<double>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    }
  }
  return out;
}

PresortedData::PresortedData(const Dataset& d) : data(&d) {
  const std::size_t n = d.num_rows(), k = d.num_attributes();
  columns.assign(k, std::vector<double>(n));
  order.resize(k);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < k; ++a) columns[a][r] = d.value(r, a);
  for (std::size_t a = 0; a < k; ++a) {
    if (d.attribute(a).kind != AttributeKind::Numeric) continue;
    order[a].resize(n);
    std::iota(order[a].begin(), order[a].end(), 0u);
    const auto& col = columns[a];
    std::stable_sort(order[a].begin(), order[a].end(), [&col](std::uint32_t x, std::uint32_t y) { return col[x] < col[y]; });
  }
}

TreeModel grow_tree(const PresortedData& data, std::span<const double> weights, const GrowOptions& options) {
  return TreeGrower(data, weights, options).grow();
}

double added_errors(double n, double e, double cf) {
  if (n <= 0) return 0.0;
  if (e < 1) {
    const double base = n * (1 - std::pow(cf, 1 / n));
    if (e == 0) return base;
    return base + e * (added_errors(n, 1, cf) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = normal_quantile(1 - cf);
  const double f = (e + 0.5) / n;
  const double r = (f + (z * z) / (2 * n) + z * std::sqrt((f / n) - (f * f / n) + (z * z / (4 * n * n)))) /
                   (1 + (z * z) / n);
  return r * n - e;
}

void prune_tree(TreeModel& tree, double cf) {
  auto leaf_estimate = [cf](const TreeNode& node) {
    const double n = node.distribution[0] + node.distribution[1];
    const double e = n - std::max(node.distribution[0], node.distribution[1]);
    return e + added_errors(n, e, cf);
  };
  auto make_leaf = [](TreeNode& node) {
    node.num_children = 0;
    node.attribute = -1;
    node.threshold = 0.0;
    node.first_child = 0;
  };
  auto leaf_errors = [](const TreeNode& node) {
    return node.distribution[0] + node.distribution[1] - std::max(node.distribution[0], node.distribution[1]);
  };
  // Children always have larger indices than their parent. First collapse
  // subtrees that do not reduce training error, then prune pessimistically.
  std::vector<double> train_errors(tree.nodes.size(), 0.0);
  for (std::size_t i = tree.nodes.size(); i-- > 0;) {
    auto& node = tree.nodes[i];
    if (node.is_leaf()) {
      train_errors[i] = leaf_errors(node);
      continue;
    }
    double subtree = 0.0;
    for (std::uint32_t c = 0; c < node.num_children; ++c) subtree += train_errors[node.first_child + c];
    if (subtree >= leaf_errors(node) - 1e-3) {
      make_leaf(node);
      subtree = leaf_errors(node);
    }
    train_errors[i] = subtree;
  }
  std::vector<double> estimate(tree.nodes.size(), 0.0);
  for (std::size_t i = tree.nodes.size(); i-- > 0;) {
    auto& node = tree.nodes[i];
    if (node.is_leaf()) {
      estimate[i] = leaf_estimate(node);
      continue;
    }
    double subtree = 0.0;
    for (std::uint32_t c = 0; c < node.num_children; ++c) subtree += estimate[node.first_child + c];
    const double as_leaf = leaf_estimate(node);
    if (as_leaf <= subtree + 0.1) {
      make_leaf(node);
      estimate[i] = as_leaf;
    } else {
      estimate[i] = subtree;
    }
  }
  // Drop unreachable nodes, keeping breadth-first order.
  std::vector<TreeNode> compact;
  compact.push_back(tree.nodes[0]);
  for (std::size_t i = 0; i < compact.size(); ++i) {
    if (compact[i].is_leaf()) continue;
    const std::uint32_t old_first = compact[i].first_child;
    compact[i].first_child = static_cast<std::uint32_t>(compact.size());
    for (std::uint32_t c = 0; c < compact[i].num_children; ++c) compact.push_back(tree.nodes[old_first + c]);
  }
  tree.nodes = std::move(compact);
}

}  // namespace detail

const TreeNode& tree_leaf(const TreeModel& tree, const std::vector<Attribute>& attributes, std::span<const double> row) {
  const TreeNode* node = &tree.nodes.at(0);
  while (!node->is_leaf()) {
    const auto a = static_cast<std::size_t>(node->attribute);
    const double v = row[a];
    std::uint32_t branch;
    if (attributes[a].kind == AttributeKind::Numeric) {
      branch = v <= node->threshold ? 0u : 1u;
    } else {
      branch = static_cast<std::uint32_t>(v);
      if (branch >= node->num_children) branch = 0;
    }
    node = &tree.nodes[node->first_child + branch];
  }
  return *node;
}

TrainedModel train_decision_tree(const Dataset& data, const TreeParams& params) {
  if (data.num_attributes() == 0) throw Error(Errc::DegenerateMatrix, "no attributes");
  if (data.num_rows() < 2) throw Error(Errc::TooFewRows, "decision tree needs at least 2 rows");
  detail::PresortedData presorted(data);
  std::vector<double> weights(data.num_rows(), 1.0);
  detail::GrowOptions options;
  options.criterion = params.criterion;
  options.min_leaf = std::max(1, params.min_leaf);
  options.c45_rules = params.prune;
  TreeModel tree = detail::grow_tree(presorted, weights, options);
  tree.params = params;
  if (params.prune) detail::prune_tree(tree, params.confidence);

  TrainedModel model;
  model.attributes = data.attributes();
  model.fingerprint = data.fingerprint();
  model.fallback = detail::compute_fallback(data);
  model.body = std::move(tree);
  return model;
}

}  // namespace spearsift::learn
