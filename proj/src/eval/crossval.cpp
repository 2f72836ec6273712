#include "spearsift/eval/crossval.hpp"

#include <algorithm>
#include <exception>

#include "spearsift/error.hpp"
#include "spearsift/rng.hpp"

namespace spearsift::eval {

std::vector<Fold> stratified_kfold(const learn::Dataset& data, int k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::TooFewRows, "k must be at least 2");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t r = 0; r < data.num_rows(); ++r) by_class[data.label(r) ? 1 : 0].push_back(r);
  for (int c = 0; c < 2; ++c)
    if (by_class[c].size() < static_cast<std::size_t>(k))
      throw Error(Errc::TooFewRows, std::string(c ? "positive" : "negative") + " class has " +
                                        std::to_string(by_class[c].size()) + " rows, fewer than k=" +
                                        std::to_string(k));
  Rng rng(seed);
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& rows : by_class) {
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
    for (auto r : rows) folds[next++ % folds.size()].push_back(r);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

namespace {

Confusion run_fold(const learn::Dataset& data, const learn::TrainConfig& config, const std::vector<Fold>& folds,
                   std::size_t f, std::uint64_t seed, Execution inner) {
  std::vector<std::size_t> train_rows;
  for (std::size_t g = 0; g < folds.size(); ++g)
    if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
  std::sort(train_rows.begin(), train_rows.end());
  const learn::Dataset train = data.subset(train_rows);
  learn::TrainConfig cfg = config;
  cfg.forest.seed = derive_seed(seed, f + 1);
  const auto model = learn::train(train, cfg, inner);
  Confusion c;
  for (auto r : folds[f]) c.add(data.label(r), learn::predict(model, data, r).positive);
  return c;
}

}  // namespace

EvaluationReport cross_validate(const learn::Dataset& data, const learn::TrainConfig& config, int k,
                                std::uint64_t seed, Execution exec) {
  const auto folds = stratified_kfold(data, k, derive_seed(seed, 0));
  EvaluationReport report;
  report.algorithm = std::string(learn::to_string(config.kind));
  report.seed = seed;
  report.k = k;
  for (const auto& a : data.attributes()) report.features.push_back(a.name);
  report.folds.resize(folds.size());

  if (exec == Execution::Parallel) {
    std::vector<std::exception_ptr> errors(folds.size());
#pragma omp parallel for schedule(dynamic)
    for (int f = 0; f < static_cast<int>(folds.size()); ++f) {
      try {
        report.folds[static_cast<std::size_t>(f)] =
            run_fold(data, config, folds, static_cast<std::size_t>(f), seed, Execution::Serial);
      } catch (...) {
        errors[static_cast<std::size_t>(f)] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t f = 0; f < folds.size(); ++f)
      report.folds[f] = run_fold(data, config, folds, f, seed, Execution::Serial);
  }

  for (const auto& c : report.folds) report.aggregate += c;
  report.accuracy = 100.0 * report.aggregate.accuracy();
  report.weighted_fp_rate = eval::weighted_fp_rate(report.aggregate);
  report.fp_rates = eval::fp_rates(report.aggregate);
  return report;
}

}  // namespace spearsift::eval
