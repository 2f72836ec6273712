#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "internal.hpp"
#include "json.hpp"
#include "spearsift/error.hpp"
#include "spearsift/eval/discretize.hpp"

namespace spearsift::learn {

using nlohmann::json;

namespace {

std::atomic<std::size_t> g_substitutions{0};

constexpr int kFormatVersion = 1;

double positive_fraction(const std::array<double, 2>& d) {
  const double total = d[0] + d[1];
  return total > 0 ? d[1] / total : 0.5;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size() || s.empty()) throw Error(Errc::BadModel, "bad fingerprint '" + s + "'");
  return v;
}

json tree_to_json(const TreeModel& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({n.attribute, n.threshold, n.first_child, n.num_children, n.distribution[0], n.distribution[1]});
  return {{"min_leaf", t.params.min_leaf},
          {"confidence", t.params.confidence},
          {"prune", t.params.prune},
          {"criterion", t.params.criterion == SplitCriterion::Gain ? "gain" : "gain_ratio"},
          {"nodes", std::move(nodes)}};
}

TreeModel tree_from_json(const json& j, std::size_t num_attributes) {
  TreeModel t;
  t.params.min_leaf = j.at("min_leaf").get<int>();
  t.params.confidence = j.at("confidence").get<double>();
  t.params.prune = j.at("prune").get<bool>();
  const auto criterion = j.at("criterion").get<std::string>();
  if (criterion == "gain") t.params.criterion = SplitCriterion::Gain;
  else if (criterion == "gain_ratio") t.params.criterion = SplitCriterion::GainRatio;
  else throw Error(Errc::BadModel, "unknown split criterion '" + criterion + "'");
  for (const auto& n : j.at("nodes")) {
    if (!n.is_array() || n.size() != 6) throw Error(Errc::BadModel, "tree node must have 6 fields");
    TreeNode node;
    node.attribute = n[0].get<int>();
    node.threshold = n[1].get<double>();
    node.first_child = n[2].get<std::uint32_t>();
    node.num_children = n[3].get<std::uint32_t>();
    node.distribution = {n[4].get<double>(), n[5].get<double>()};
    t.nodes.push_back(node);
  }
  if (t.nodes.empty()) throw Error(Errc::BadModel, "tree has no nodes");
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    if (n.is_leaf()) continue;
    if (n.attribute < 0 || static_cast<std::size_t>(n.attribute) >= num_attributes || n.first_child <= i ||
        static_cast<std::size_t>(n.first_child) + n.num_children > t.nodes.size())
      throw Error(Errc::BadModel, "tree node " + std::to_string(i) + " is inconsistent");
  }
  return t;
}

std::vector<double> resolve_row(const TrainedModel& model, std::span<const double> row) {
  std::vector<double> x(row.begin(), row.end());
  std::size_t substituted = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto& attr = model.attributes[a];
    bool unknown = std::isnan(x[a]);
    if (!unknown && attr.kind == AttributeKind::Nominal)
      unknown = x[a] < 0 || x[a] >= static_cast<double>(attr.cardinality()) || x[a] != std::floor(x[a]);
    if (unknown) {
      x[a] = model.fallback[a];
      ++substituted;
    }
  }
  if (substituted) g_substitutions += substituted;
  return x;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::NaiveBayes: return "nb";
    case ModelKind::DecisionTree: return "tree";
    case ModelKind::RandomForest: return "forest";
    case ModelKind::DecisionTable: return "table";
  }
  return "?";
}

std::string_view display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::NaiveBayes: return "Naive Bayes";
    case ModelKind::DecisionTree: return "Decision Tree (J48)";
    case ModelKind::RandomForest: return "Random Forest";
    case ModelKind::DecisionTable: return "Decision Table";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  for (auto k : {ModelKind::NaiveBayes, ModelKind::DecisionTree, ModelKind::RandomForest, ModelKind::DecisionTable})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

TrainedModel train(const Dataset& data, const TrainConfig& config, Execution exec) {
  TrainedModel model;
  switch (config.kind) {
    case ModelKind::NaiveBayes: model = train_naive_bayes(data, config.naive_bayes); break;
    case ModelKind::DecisionTree: model = train_decision_tree(data, config.tree); break;
    case ModelKind::RandomForest: model = train_random_forest(data, config.forest, exec); break;
    case ModelKind::DecisionTable: model = train_decision_table(data, config.table); break;
  }
  model.seed = config.forest.seed;
  return model;
}

Prediction predict(const TrainedModel& model, std::span<const double> row, std::uint64_t fingerprint) {
  if (fingerprint != model.fingerprint)
    throw Error(Errc::SchemaMismatch, "vector schema " + hex64(fingerprint) + " does not match model schema " +
                                          hex64(model.fingerprint));
  if (row.size() != model.attributes.size())
    throw Error(Errc::LengthMismatch, "expected " + std::to_string(model.attributes.size()) + " values, got " +
                                          std::to_string(row.size()));
  const std::vector<double> x = resolve_row(model, row);
  struct Visitor {
    const TrainedModel& model;
    const std::vector<double>& x;

    Prediction operator()(const NaiveBayesModel& nb) const {
      return from_score(naive_bayes_posterior(nb, model.attributes, x)[1]);
    }
    Prediction operator()(const TreeModel& tree) const {
      return from_score(positive_fraction(tree_leaf(tree, model.attributes, x).distribution));
    }
    Prediction operator()(const ForestModel& forest) const {
      std::size_t votes = 0;
      for (const auto& tree : forest.trees) {
        const auto& d = tree_leaf(tree, model.attributes, x).distribution;
        if (d[1] >= d[0]) ++votes;
      }
      return from_score(static_cast<double>(votes) / static_cast<double>(forest.trees.size()));
    }
    Prediction operator()(const TableModel& table) const {
      std::vector<int> key;
      key.reserve(table.selected.size());
      for (std::size_t i = 0; i < table.selected.size(); ++i) {
        const auto a = static_cast<std::size_t>(table.selected[i]);
        key.push_back(model.attributes[a].kind == AttributeKind::Numeric ? eval::interval_of(x[a], table.cuts[i])
                                                                         : static_cast<int>(x[a]));
      }
      const auto it = table.cells.find(key);
      return from_score(positive_fraction(it != table.cells.end() ? it->second : table.global));
    }
  };
  return std::visit(Visitor{model, x}, model.body);
}

Prediction predict(const TrainedModel& model, const Dataset& data, std::size_t row) {
  return predict(model, data.row(row), data.fingerprint());
}

std::size_t fallback_substitutions() { return g_substitutions.load(); }

std::string serialize(const TrainedModel& model) {
  json attrs = json::array();
  for (const auto& a : model.attributes)
    attrs.push_back({{"name", a.name},
                     {"kind", a.kind == AttributeKind::Numeric ? "numeric" : "nominal"},
                     {"values", a.values}});
  json body;
  struct Visitor {
    json& out;
    void operator()(const NaiveBayesModel& nb) const {
      json stats = json::array();
      for (const auto& s : nb.attributes)
        stats.push_back({{"mean", s.mean}, {"variance", s.variance}, {"log_prob", s.log_prob}});
      out = {{"min_variance", nb.params.min_variance}, {"prior", nb.prior}, {"attributes", std::move(stats)}};
    }
    void operator()(const TreeModel& t) const { out = tree_to_json(t); }
    void operator()(const ForestModel& f) const {
      json trees = json::array();
      for (const auto& t : f.trees) trees.push_back(tree_to_json(t));
      out = {{"n_trees", f.params.n_trees}, {"m_try_param", f.params.m_try}, {"bootstrap", f.params.bootstrap},
             {"forest_seed", f.params.seed}, {"m_try", f.m_try}, {"trees", std::move(trees)}};
    }
    void operator()(const TableModel& t) const {
      json cells = json::array();
      for (const auto& [key, counts] : t.cells) cells.push_back({key, counts[0], counts[1]});
      out = {{"stale_limit", t.params.stale_limit}, {"selected", t.selected}, {"cuts", t.cuts},
             {"cells", std::move(cells)}, {"global", t.global}, {"loo_accuracy", t.loo_accuracy}};
    }
  };
  std::visit(Visitor{body}, model.body);
  json doc = {{"format", "spearsift-model"},
              {"version", kFormatVersion},
              {"kind", std::string(to_string(model.kind()))},
              {"fingerprint", hex64(model.fingerprint)},
              {"seed", model.seed},
              {"attributes", std::move(attrs)},
              {"fallback", model.fallback},
              {"model", std::move(body)}};
  return doc.dump(1) + "\n";
}

TrainedModel deserialize(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "spearsift-model") throw Error(Errc::BadModel, "not a model file");
    if (doc.at("version").get<int>() != kFormatVersion)
      throw Error(Errc::BadModel, "unsupported model version " + doc.at("version").dump());
    const auto kind = parse_model_kind(doc.at("kind").get<std::string>());
    if (!kind) throw Error(Errc::BadModel, "unknown model kind " + doc.at("kind").dump());

    TrainedModel m;
    m.fingerprint = parse_hex64(doc.at("fingerprint").get<std::string>());
    m.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& a : doc.at("attributes")) {
      Attribute attr;
      attr.name = a.at("name").get<std::string>();
      const auto k = a.at("kind").get<std::string>();
      if (k != "numeric" && k != "nominal") throw Error(Errc::BadModel, "unknown attribute kind '" + k + "'");
      attr.kind = k == "numeric" ? AttributeKind::Numeric : AttributeKind::Nominal;
      attr.values = a.at("values").get<std::vector<std::string>>();
      m.attributes.push_back(std::move(attr));
    }
    if (schema_fingerprint(m.attributes) != m.fingerprint)
      throw Error(Errc::BadModel, "fingerprint does not match the attribute list");
    m.fallback = doc.at("fallback").get<std::vector<double>>();
    if (m.fallback.size() != m.attributes.size()) throw Error(Errc::BadModel, "fallback length mismatch");
    const std::size_t k = m.attributes.size();
    const json& body = doc.at("model");
    switch (*kind) {
      case ModelKind::NaiveBayes: {
        NaiveBayesModel nb;
        nb.params.min_variance = body.at("min_variance").get<double>();
        nb.prior = body.at("prior").get<std::array<double, 2>>();
        for (const auto& s : body.at("attributes")) {
          NaiveBayesModel::AttributeStats st;
          st.mean = s.at("mean").get<std::array<double, 2>>();
          st.variance = s.at("variance").get<std::array<double, 2>>();
          st.log_prob = s.at("log_prob").get<std::array<std::vector<double>, 2>>();
          nb.attributes.push_back(std::move(st));
        }
        if (nb.attributes.size() != k) throw Error(Errc::BadModel, "naive Bayes attribute count mismatch");
        m.body = std::move(nb);
        break;
      }
      case ModelKind::DecisionTree: m.body = tree_from_json(body, k); break;
      case ModelKind::RandomForest: {
        ForestModel f;
        f.params.n_trees = body.at("n_trees").get<int>();
        f.params.m_try = body.at("m_try_param").get<int>();
        f.params.bootstrap = body.at("bootstrap").get<bool>();
        f.params.seed = body.at("forest_seed").get<std::uint64_t>();
        f.m_try = body.at("m_try").get<int>();
        for (const auto& t : body.at("trees")) f.trees.push_back(tree_from_json(t, k));
        if (f.trees.empty()) throw Error(Errc::BadModel, "forest has no trees");
        m.body = std::move(f);
        break;
      }
      case ModelKind::DecisionTable: {
        TableModel t;
        t.params.stale_limit = body.at("stale_limit").get<int>();
        t.selected = body.at("selected").get<std::vector<int>>();
        t.cuts = body.at("cuts").get<std::vector<std::vector<double>>>();
        if (t.cuts.size() != t.selected.size()) throw Error(Errc::BadModel, "table cuts mismatch");
        for (int a : t.selected)
          if (a < 0 || static_cast<std::size_t>(a) >= k) throw Error(Errc::BadModel, "table attribute out of range");
        for (const auto& c : body.at("cells"))
          t.cells[c.at(0).get<std::vector<int>>()] = {c.at(1).get<double>(), c.at(2).get<double>()};
        t.global = body.at("global").get<std::array<double, 2>>();
        t.loo_accuracy = body.at("loo_accuracy").get<double>();
        m.body = std::move(t);
        break;
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::BadModel, e.what());
  }
}

void save_model(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << serialize(model);
  if (!out) throw Error(Errc::Io, "write failed: " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return deserialize(buf.str());
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

}  // namespace spearsift::learn
