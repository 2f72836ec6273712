#include <cmath>

#include "internal.hpp"
#include "spearsift/error.hpp"

namespace spearsift::learn {

namespace {

TreeModel grow_member(const detail::PresortedData& data, const ForestParams& params, int m_try, int index) {
  const std::size_t n = data.data->num_rows();
  Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(index)));
  std::vector<double> weights(n, params.bootstrap ? 0.0 : 1.0);
  if (params.bootstrap)
    for (std::size_t i = 0; i < n; ++i) weights[static_cast<std::size_t>(rng.below(n))] += 1.0;
  detail::GrowOptions options;
  options.criterion = SplitCriterion::Gain;
  options.min_leaf = 1;
  options.m_try = m_try;
  options.rng = &rng;
  TreeModel tree = detail::grow_tree(data, weights, options);
  tree.params.min_leaf = 1;
  tree.params.prune = false;
  tree.params.criterion = SplitCriterion::Gain;
  return tree;
}

}  // namespace

TrainedModel train_random_forest(const Dataset& data, const ForestParams& params, Execution exec) {
  if (data.num_attributes() == 0) throw Error(Errc::DegenerateMatrix, "no attributes");
  if (data.num_rows() < 2) throw Error(Errc::TooFewRows, "random forest needs at least 2 rows");
  if (params.n_trees < 1) throw Error(Errc::InvalidConfig, "n_trees must be positive");
  const int k = static_cast<int>(data.num_attributes());
  int m_try = params.m_try > 0 ? std::min(params.m_try, k)
                               : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
  m_try = std::max(1, m_try);

  detail::PresortedData presorted(data);
  ForestModel forest;
  forest.params = params;
  forest.m_try = m_try;
  forest.trees.resize(static_cast<std::size_t>(params.n_trees));
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < params.n_trees; ++t)
      forest.trees[static_cast<std::size_t>(t)] = grow_member(presorted, params, m_try, t);
  } else {
    for (int t = 0; t < params.n_trees; ++t)
      forest.trees[static_cast<std::size_t>(t)] = grow_member(presorted, params, m_try, t);
  }

  TrainedModel model;
  model.attributes = data.attributes();
  model.fingerprint = data.fingerprint();
  model.seed = params.seed;
  model.fallback = detail::compute_fallback(data);
  model.body = std::move(forest);
  return model;
}

}  // namespace spearsift::learn
