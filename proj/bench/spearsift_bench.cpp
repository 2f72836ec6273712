#include <benchmark/benchmark.h>

#include "spearsift/charstats.hpp"
#include "spearsift/eval/crossval.hpp"
#include "spearsift/featureset.hpp"
#include "spearsift/learn/model.hpp"
#include "spearsift/synth.hpp"

using namespace spearsift;

namespace {

struct Fixture {
  synth::SynthCorpus corpus;
  corpus::LinkedDataset linked;
  learn::Dataset data;

  Fixture() {
    auto config = synth::default_config();
    config.n_spear = 1000;
    config.n_spam = 2000;
    config.n_benign = 0;
    config.seed = 3;
    corpus = synth::generate_corpus(config);
    linked = corpus::link_profiles(corpus.emails, corpus.profiles, {});
    const auto m = featureset::build_matrix(linked, {featureset::FeatureSet::EmailPlusSocial, featureset::Study::VsSpam});
    data = featureset::to_dataset(featureset::encode(m));
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_Forest(benchmark::State& state) {
  learn::ForestParams params;
  params.n_trees = 50;
  for (auto _ : state) benchmark::DoNotOptimize(learn::train_random_forest(fixture().data, params, mode(state)));
}
BENCHMARK(BM_Forest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CrossValidate(benchmark::State& state) {
  learn::TrainConfig config;
  config.kind = learn::ModelKind::DecisionTree;
  for (auto _ : state) benchmark::DoNotOptimize(eval::cross_validate(fixture().data, config, 10, 1, mode(state)));
}
BENCHMARK(BM_CrossValidate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BuildMatrix(benchmark::State& state) {
  const featureset::Selector sel{featureset::FeatureSet::EmailPlusSocial, featureset::Study::VsSpam};
  for (auto _ : state) benchmark::DoNotOptimize(featureset::build_matrix(fixture().linked, sel, mode(state)));
}
BENCHMARK(BM_BuildMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_WordFrequency(benchmark::State& state) {
  std::vector<std::string> texts;
  for (const auto& e : fixture().corpus.emails)
    if (e.body) texts.push_back(*e.body);
  for (auto _ : state) benchmark::DoNotOptimize(charstats::word_frequency(texts, 100, {}, mode(state)));
}
BENCHMARK(BM_WordFrequency)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
