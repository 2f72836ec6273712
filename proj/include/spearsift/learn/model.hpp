#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spearsift/learn/dataset.hpp"
#include "spearsift/parallel.hpp"

namespace spearsift::learn {

enum class ModelKind { NaiveBayes, DecisionTree, RandomForest, DecisionTable };

std::string_view to_string(ModelKind kind);      // "nb" | "tree" | "forest" | "table"
std::string_view display_name(ModelKind kind);   // "Naive Bayes", ...
std::optional<ModelKind> parse_model_kind(std::string_view text);

struct Prediction {
  bool positive = false;
  double score = 0.0;  // confidence for the positive class
};

// Threshold 0.5, ties go to the positive class.
inline Prediction from_score(double score) { return {score >= 0.5, score}; }

// --- Naive Bayes ---------------------------------------------------------

struct NaiveBayesParams {
  double min_variance = 1e-9;
};

struct NaiveBayesModel {
  struct AttributeStats {
    std::array<double, 2> mean{};      // numeric
    std::array<double, 2> variance{};  // numeric, floored
    std::array<std::vector<double>, 2> log_prob;  // nominal, Laplace (+1) smoothed
  };
  NaiveBayesParams params;
  std::array<double, 2> prior{};  // [negative, positive]
  std::vector<AttributeStats> attributes;
};

// --- Decision trees --------------------------------------------------------

enum class SplitCriterion { GainRatio, Gain };

struct TreeParams {
  int min_leaf = 2;
  double confidence = 0.25;
  bool prune = true;
  SplitCriterion criterion = SplitCriterion::GainRatio;
};

// Numeric nodes have two children (value <= threshold goes to the first);
// nominal nodes have one child per dictionary value. Leaves keep the weighted
// class distribution of the training rows that reached them.
struct TreeNode {
  int attribute = -1;
  double threshold = 0.0;
  std::uint32_t first_child = 0;
  std::uint32_t num_children = 0;
  std::array<double, 2> distribution{};

  bool is_leaf() const { return num_children == 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  TreeParams params;
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestParams {
  int n_trees = 100;
  int m_try = 0;  // 0 -> ceil(sqrt(#attributes))
  bool bootstrap = true;
  std::uint64_t seed = 1;
};

struct ForestModel {
  ForestParams params;
  int m_try = 0;
  std::vector<TreeModel> trees;
};

// --- Decision table --------------------------------------------------------

struct TableParams {
  int stale_limit = 5;
};

struct TableModel {
  TableParams params;
  std::vector<int> selected;                // attribute indices, ascending
  std::vector<std::vector<double>> cuts;    // per selected attribute; empty for nominals
  std::map<std::vector<int>, std::array<double, 2>> cells;
  std::array<double, 2> global{};
  double loo_accuracy = 0.0;
};

// --- Trained model -----------------------------------------------------------

struct TrainedModel {
  std::vector<Attribute> attributes;
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  // Substitute per attribute for unknown values at prediction time: the most
  // frequent training code for nominals, the training mean for numerics.
  std::vector<double> fallback;
  std::variant<NaiveBayesModel, TreeModel, ForestModel, TableModel> body;

  ModelKind kind() const { return static_cast<ModelKind>(body.index()); }
};

struct TrainConfig {
  ModelKind kind = ModelKind::RandomForest;
  NaiveBayesParams naive_bayes;
  TreeParams tree;
  ForestParams forest;
  TableParams table;
};

/// Throws SingleClassTraining.
TrainedModel train_naive_bayes(const Dataset& data, const NaiveBayesParams& params = {});
/// Single-class input yields a single leaf. Throws DegenerateMatrix (no
/// attributes) or TooFewRows (< 2 rows).
TrainedModel train_decision_tree(const Dataset& data, const TreeParams& params = {});
TrainedModel train_random_forest(const Dataset& data, const ForestParams& params = {},
                                 Execution exec = Execution::Parallel);
TrainedModel train_decision_table(const Dataset& data, const TableParams& params = {});
TrainedModel train(const Dataset& data, const TrainConfig& config, Execution exec = Execution::Parallel);

/// Throws SchemaMismatch when `fingerprint` differs from the model's.
Prediction predict(const TrainedModel& model, std::span<const double> row, std::uint64_t fingerprint);
Prediction predict(const TrainedModel& model, const Dataset& data, std::size_t row);

/// Posterior [P(negative|x), P(positive|x)].
std::array<double, 2> naive_bayes_posterior(const NaiveBayesModel& model, const std::vector<Attribute>& attributes,
                                            std::span<const double> row);
/// Leaf reached by `row`.
const TreeNode& tree_leaf(const TreeModel& tree, const std::vector<Attribute>& attributes,
                          std::span<const double> row);

/// Number of unknown values replaced by a fallback since process start.
std::size_t fallback_substitutions();

std::string serialize(const TrainedModel& model);
/// Throws BadModel.
TrainedModel deserialize(std::string_view text);

void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);

}  // namespace spearsift::learn
