#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "spearsift/error.hpp"
#include "spearsift/learn/model.hpp"
#include "spearsift/rng.hpp"

using namespace spearsift;
using namespace spearsift::learn;

namespace {

Attribute nominal(std::string name, int values) {
  Attribute a{std::move(name), AttributeKind::Nominal, {}};
  for (int v = 0; v < values; ++v) a.values.push_back("v" + std::to_string(v));
  return a;
}

Attribute numeric(std::string name) { return {std::move(name), AttributeKind::Numeric, {}}; }

Dataset xor_data() {
  Dataset d({nominal("a", 2), nominal("b", 2)});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double row[] = {double(a), double(b)};
      d.add_row(row, a != b);
    }
  return d;
}

Dataset noisy_numeric(std::uint64_t seed, std::size_t n, std::size_t k) {
  std::vector<Attribute> attrs;
  for (std::size_t a = 0; a < k; ++a) attrs.push_back(a % 3 == 2 ? nominal("n" + std::to_string(a), 3) : numeric("x" + std::to_string(a)));
  Dataset d(attrs);
  Rng rng(seed);
  std::vector<double> row(k);
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = rng.bernoulli(0.4);
    for (std::size_t a = 0; a < k; ++a)
      row[a] = a % 3 == 2 ? double(rng.below(3)) : rng.normal(pos ? 0.7 : 0.0, 1.0);
    d.add_row(row, pos);
  }
  return d;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

}  // namespace

TEST_CASE("naive bayes: 6-row Laplace fixture") {
  Dataset d({nominal("f", 2)});
  for (int i = 0; i < 3; ++i) {
    const double t[] = {1.0}, f[] = {0.0};
    d.add_row(t, true);
    d.add_row(f, false);
  }
  const auto m = train_naive_bayes(d);
  const double t[] = {1.0}, f[] = {0.0};
  // Hand Bayes: P(T|pos) = 4/5, P(T|neg) = 1/5, equal priors.
  CHECK(std::abs(predict(m, t, d.fingerprint()).score - 0.8) < 1e-9);
  CHECK(std::abs(predict(m, f, d.fingerprint()).score - 0.2) < 1e-9);
  const auto& nb = std::get<NaiveBayesModel>(m.body);
  const auto post = naive_bayes_posterior(nb, m.attributes, t);
  CHECK(std::abs(post[0] + post[1] - 1.0) < 1e-12);
}

TEST_CASE("naive bayes: gaussian matches a hand computation") {
  Dataset d({numeric("x")});
  const double pos[] = {1, 2, 3}, neg[] = {5, 6, 7, 9};
  for (double v : pos) d.add_row(std::span<const double>(&v, 1), true);
  for (double v : neg) d.add_row(std::span<const double>(&v, 1), false);
  const auto m = train_naive_bayes(d);
  auto pdf = [](double x, double mu, double var) { return std::exp(-(x - mu) * (x - mu) / (2 * var)) / std::sqrt(2 * M_PI * var); };
  const double x = 4.0;
  // Unbiased variances: pos mean 2 var 1; neg mean 6.75 var 2.9166...
  const double lp = 3.0 / 7 * pdf(x, 2, 1), ln = 4.0 / 7 * pdf(x, 6.75, 8.75 / 3);
  CHECK(std::abs(predict(m, std::span<const double>(&x, 1), d.fingerprint()).score - lp / (lp + ln)) < 1e-9);
  Dataset one({numeric("x")});
  one.add_row(std::span<const double>(pos, 1), true);
  CHECK(code_of([&] { train_naive_bayes(one); }) == Errc::SingleClassTraining);
}

TEST_CASE("decision tree learns XOR exactly") {
  const auto d = xor_data();
  TreeParams p;
  p.min_leaf = 1;
  p.prune = false;
  const auto m = train_decision_tree(d, p);
  for (std::size_t r = 0; r < d.num_rows(); ++r) CHECK(predict(m, d, r).positive == d.label(r));
  const auto& tree = std::get<TreeModel>(m.body);
  // root + 2 inner + 4 leaves
  CHECK(tree.nodes.size() == 7);
  // Gain criterion too.
  p.criterion = SplitCriterion::Gain;
  const auto g = train_decision_tree(d, p);
  for (std::size_t r = 0; r < d.num_rows(); ++r) CHECK(predict(g, d, r).positive == d.label(r));
}

TEST_CASE("decision tree: numeric threshold at a midpoint; single class gives a leaf") {
  Dataset d({numeric("x")});
  for (double v : {1.0, 2.0, 3.0}) d.add_row(std::span<const double>(&v, 1), false);
  for (double v : {10.0, 11.0, 12.0}) d.add_row(std::span<const double>(&v, 1), true);
  const auto m = train_decision_tree(d, {.min_leaf = 1, .confidence = 0.25, .prune = false});
  const auto& tree = std::get<TreeModel>(m.body);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].threshold == 6.5);

  Dataset one({numeric("x")});
  for (double v : {1.0, 2.0}) one.add_row(std::span<const double>(&v, 1), true);
  CHECK(std::get<TreeModel>(train_decision_tree(one).body).nodes.size() == 1);
  CHECK(code_of([] { train_decision_tree(Dataset(std::vector<Attribute>{})); }) == Errc::DegenerateMatrix);
}

TEST_CASE("pruned tree does not overfit pure noise") {
  Dataset d({numeric("a"), numeric("b")});
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const double row[] = {rng.uniform(), rng.uniform()};
    d.add_row(row, i % 3 == 0);
  }
  const auto m = train_decision_tree(d);
  CHECK(std::get<TreeModel>(m.body).nodes.size() < 15);
}

TEST_CASE("decision table matches exhaustive subset enumeration") {
  SUBCASE("features 1 and 2 jointly determine the class") {
    Dataset d({nominal("noise", 2), nominal("a", 2), nominal("b", 2)});
    std::vector<std::vector<int>> rows;
    std::vector<int> labels;
    Rng rng(11);
    for (int i = 0; i < 40; ++i) {
      const int n = int(rng.below(2)), a = i % 2, b = (i / 2) % 2;
      const double row[] = {double(n), double(a), double(b)};
      d.add_row(row, a != b);
      rows.push_back({n, a, b});
      labels.push_back(a != b);
    }
    const auto m = train_decision_table(d);
    const auto& t = std::get<TableModel>(m.body);
    CHECK(t.selected == std::vector<int>{1, 2});
    CHECK(t.selected == oracle::best_table_subset(rows, labels, 3));
    for (std::size_t r = 0; r < d.num_rows(); ++r) CHECK(predict(m, d, r).positive == d.label(r));
  }
  SUBCASE("random fixtures with a unique optimum") {
    Rng rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const int k = 2 + int(rng.below(3));
      std::vector<Attribute> attrs;
      for (int a = 0; a < k; ++a) attrs.push_back(nominal("f" + std::to_string(a), 3));
      Dataset d(attrs);
      std::vector<std::vector<int>> rows;
      std::vector<int> labels;
      const int n = 20 + int(rng.below(30));
      for (int i = 0; i < n; ++i) {
        std::vector<int> r(k);
        std::vector<double> v(k);
        for (int a = 0; a < k; ++a) v[a] = r[a] = int(rng.below(3));
        const bool y = rng.bernoulli(0.2) ? rng.bernoulli(0.5) : (r[0] + r[k - 1]) % 2 == 1;
        d.add_row(v, y);
        rows.push_back(r);
        labels.push_back(y);
      }
      const auto best = oracle::best_table_subset(rows, labels, k);
      const double best_score = oracle::table_loo(rows, labels, best);
      int ties = 0;
      for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<int> s;
        for (int a = 0; a < k; ++a)
          if (mask & (1 << a)) s.push_back(a);
        ties += std::abs(oracle::table_loo(rows, labels, s) - best_score) <= 1e-12;
      }
      const auto m = train_decision_table(d);
      const auto& t = std::get<TableModel>(m.body);
      CHECK(std::abs(t.loo_accuracy - best_score) < 1e-12);
      CHECK(std::abs(oracle::table_loo(rows, labels, t.selected) - t.loo_accuracy) < 1e-12);
      if (ties == 1) {
        CHECK(t.selected == best);
        ++checked;
      }
    }
    CHECK(checked > 20);
  }
}

TEST_CASE("random forest is seed-deterministic and thread-independent") {
  const auto d = noisy_numeric(5, 300, 7);
  ForestParams p;
  p.n_trees = 25;
  p.seed = 42;
  const auto a = train_random_forest(d, p, Execution::Parallel);
  const auto b = train_random_forest(d, p, Execution::Parallel);
  const auto s = train_random_forest(d, p, Execution::Serial);
  CHECK(serialize(a) == serialize(b));
  CHECK(serialize(a) == serialize(s));
  p.seed = 43;
  CHECK(serialize(train_random_forest(d, p)) != serialize(a));
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    const auto pr = predict(a, d, r);
    CHECK(pr.score >= 0.0);
    CHECK(pr.score <= 1.0);
  }
  p.n_trees = 0;
  CHECK(code_of([&] { train_random_forest(d, p); }) == Errc::InvalidConfig);
}

TEST_CASE("one-tree forest without bagging equals an unpruned gain tree") {
  const auto d = noisy_numeric(8, 200, 5);
  ForestParams fp;
  fp.n_trees = 1;
  fp.bootstrap = false;
  fp.m_try = 5;
  const auto forest = train_random_forest(d, fp);
  const auto tree = train_decision_tree(d, {.min_leaf = 1, .confidence = 0.25, .prune = false, .criterion = SplitCriterion::Gain});
  CHECK(std::get<ForestModel>(forest.body).trees[0].nodes == std::get<TreeModel>(tree.body).nodes);
}

TEST_CASE("serialization round-trips every model kind") {
  const auto d = noisy_numeric(9, 120, 4);
  for (auto kind : {ModelKind::NaiveBayes, ModelKind::DecisionTree, ModelKind::RandomForest, ModelKind::DecisionTable}) {
    TrainConfig c;
    c.kind = kind;
    c.forest.n_trees = 10;
    const auto m = train(d, c);
    const auto text = serialize(m);
    const auto back = deserialize(text);
    CHECK(serialize(back) == text);
    CHECK(back.kind() == kind);
    for (std::size_t r = 0; r < d.num_rows(); ++r) CHECK(predict(back, d, r).score == predict(m, d, r).score);
    CHECK(parse_model_kind(to_string(kind)) == kind);
  }
  const auto path = (std::filesystem::temp_directory_path() / "spearsift_model.json").string();
  const auto m = train_naive_bayes(d);
  save_model(path, m);
  CHECK(serialize(load_model(path)) == serialize(m));
  std::filesystem::remove(path);
  CHECK(code_of([] { deserialize("{}"); }) == Errc::BadModel);
  CHECK(code_of([] { deserialize("garbage"); }) == Errc::BadModel);
}

TEST_CASE("predict checks schema and length; unknown values fall back") {
  const auto d = noisy_numeric(10, 80, 3);
  const auto m = train_decision_tree(d);
  const double row[] = {0.0, 0.0, 1.0};
  CHECK(code_of([&] { predict(m, row, d.fingerprint() + 1); }) == Errc::SchemaMismatch);
  CHECK(code_of([&] { predict(m, std::span<const double>(row, 2), d.fingerprint()); }) == Errc::LengthMismatch);
  const auto before = fallback_substitutions();
  const double unknown[] = {std::nan(""), 0.0, 1.0};
  CHECK_NOTHROW(predict(m, unknown, d.fingerprint()));
  CHECK(fallback_substitutions() == before + 1);
}

TEST_CASE("naive bayes: constant feature leaves the prior unchanged") {
  // Numeric: identical means and floored variances cancel exactly.
  Dataset d({numeric("k")});
  for (int i = 0; i < 10; ++i) {
    const double v = 3.0;
    d.add_row(std::span<const double>(&v, 1), i < 3);
  }
  const double v = 3.0;
  CHECK(std::abs(predict(train_naive_bayes(d), std::span<const double>(&v, 1), d.fingerprint()).score - 0.3) < 1e-9);
  // Nominal: +1 smoothing cancels only when the classes are the same size
  // (with 3 vs 7 rows the likelihoods are 4/5 and 8/9).
  Dataset b({nominal("c", 2)});
  for (int i = 0; i < 8; ++i) {
    const double one = 1.0;
    b.add_row(std::span<const double>(&one, 1), i < 4);
  }
  const double one = 1.0;
  CHECK(std::abs(predict(train_naive_bayes(b), std::span<const double>(&one, 1), b.fingerprint()).score - 0.5) < 1e-12);
}

TEST_CASE("tree leaf proportion is the score") {
  Dataset d({numeric("x")});
  for (int i = 0; i < 10; ++i) {
    const double v = 1.0;
    d.add_row(std::span<const double>(&v, 1), i < 7);
  }
  const double v = 1.0;
  CHECK(predict(train_decision_tree(d), std::span<const double>(&v, 1), d.fingerprint()).score == doctest::Approx(0.7));
}

TEST_CASE("unpruned trees fit any consistent dataset") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = noisy_numeric(seed, 150, 4);
    const auto m = train_decision_tree(d, {.min_leaf = 1, .confidence = 0.25, .prune = false});
    std::size_t correct = 0;
    for (std::size_t r = 0; r < d.num_rows(); ++r) correct += predict(m, d, r).positive == d.label(r);
    CHECK(correct == d.num_rows());
  }
}

TEST_CASE("decision table edge cases") {
  SUBCASE("one feature determines the class") {
    Dataset d({nominal("noise", 3), nominal("key", 2)});
    Rng rng(1);
    for (int i = 0; i < 30; ++i) {
      const double row[] = {double(rng.below(3)), double(i % 2)};
      d.add_row(row, i % 2 == 1);
    }
    const auto m = train_decision_table(d);
    CHECK(std::get<TableModel>(m.body).selected == std::vector<int>{1});
    for (std::size_t r = 0; r < d.num_rows(); ++r) CHECK(predict(m, d, r).positive == d.label(r));
  }
  SUBCASE("constant features give the majority predictor") {
    Dataset d({nominal("a", 2), numeric("b")});
    for (int i = 0; i < 12; ++i) {
      const double row[] = {0.0, 5.0};
      d.add_row(row, i < 4);
    }
    const auto m = train_decision_table(d);
    CHECK(std::get<TableModel>(m.body).selected.empty());
    const double row[] = {0.0, 5.0};
    CHECK_FALSE(predict(m, row, d.fingerprint()).positive);
  }
  SUBCASE("selected subset never scores below the empty subset") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto d = noisy_numeric(seed, 120, 5);
      const auto m = train_decision_table(d);
      const auto& t = std::get<TableModel>(m.body);
      const auto counts = d.class_counts();
      // Empty-subset LOO: majority of the other n-1 rows, ties positive.
      std::size_t correct = 0;
      for (std::size_t r = 0; r < d.num_rows(); ++r) {
        auto c = counts;
        c[d.label(r)] -= 1;
        correct += (c[1] >= c[0]) == d.label(r);
      }
      CHECK(t.loo_accuracy >= double(correct) / double(d.num_rows()));
    }
  }
}

TEST_CASE("forest test accuracy is not worse than a single tree on noisy data") {
  double forest_sum = 0, tree_sum = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto all = noisy_numeric(100 + seed, 900, 8);
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < all.num_rows(); ++r) (r % 3 == 0 ? test_rows : train_rows).push_back(r);
    const auto train_set = all.subset(train_rows), test_set = all.subset(test_rows);
    ForestParams fp;
    fp.seed = seed;
    const auto forest = train_random_forest(train_set, fp);
    const auto tree = train_decision_tree(train_set);
    std::size_t f = 0, t = 0;
    for (std::size_t r = 0; r < test_set.num_rows(); ++r) {
      f += predict(forest, test_set, r).positive == test_set.label(r);
      t += predict(tree, test_set, r).positive == test_set.label(r);
    }
    const double fa = 100.0 * double(f) / double(test_set.num_rows()), ta = 100.0 * double(t) / double(test_set.num_rows());
    CHECK_MESSAGE(fa >= ta - 1.0, "seed " << seed << ": forest " << fa << " tree " << ta);
    forest_sum += fa;
    tree_sum += ta;
  }
  MESSAGE("mean forest " << forest_sum / 10 << " vs tree " << tree_sum / 10);
}
