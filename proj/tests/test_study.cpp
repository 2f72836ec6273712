#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "spearsift/error.hpp"
#include "spearsift/study.hpp"
#include "spearsift/synth.hpp"

using namespace spearsift;
namespace fs = std::filesystem;

TEST_CASE("study spec parsing") {
  const auto s = study::parse_spec(
      "# comment\nstudy = vs-spam\nfeatures = email, all\nalgos = nb,forest\nk = 5\nseed = 7\n"
      "emails = a.jsonl, b.jsonl\nprofiles = p.jsonl\nout = res\n",
      "/base");
  CHECK(s.study == featureset::Study::VsSpam);
  CHECK(s.feature_sets.size() == 2);
  CHECK(s.algorithms.size() == 2);
  CHECK(s.k == 5);
  CHECK(s.seed == 7);
  CHECK(s.emails == std::vector<std::string>{"/base/a.jsonl", "/base/b.jsonl"});
  CHECK(s.out_dir == "/base/res");
  auto code = [](const char* text) {
    try {
      study::parse_spec(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  CHECK(code("emails = a\n") == Errc::InvalidConfig);
  CHECK(code("study = vs-spam\n") == Errc::InvalidConfig);
  CHECK(code("study = vs-spam\nemails = a\nk = 1\n") == Errc::InvalidConfig);
  CHECK(code("study = vs-spam\nemails = a\ncolour = red\n") == Errc::InvalidConfig);
  CHECK(code("study = vs-spam\nemails = a\nfeatures = body\n") == Errc::InvalidSelector);
  CHECK(study::report_filename(featureset::Study::VsBenign, featureset::FeatureSet::EmailPlusSocial,
                               learn::ModelKind::RandomForest) == "vs-benign_all_forest.report");
}

TEST_CASE("study runs a grid and reports partial failure") {
  const auto dir = fs::temp_directory_path() / "spearsift_study_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto c = synth::default_config();
  c.n_spear = 60;
  c.n_spam = 60;
  c.n_benign = 0;
  const auto corpus = synth::generate_corpus(c);
  corpus::write_corpus((dir / "mail.jsonl").string(), corpus.emails);
  profiles::write_profiles((dir / "people.jsonl").string(), corpus.profiles);

  study::StudySpec spec;
  spec.study = featureset::Study::VsSpam;
  spec.feature_sets = {featureset::FeatureSet::EmailAll, featureset::FeatureSet::Social};
  spec.algorithms = {learn::ModelKind::NaiveBayes, learn::ModelKind::RandomForest};
  spec.trees = 10;
  spec.emails = {(dir / "mail.jsonl").string()};
  spec.profiles = (dir / "people.jsonl").string();
  spec.out_dir = (dir / "out").string();
  const auto r = study::run_study(spec);
  CHECK(r.exit_code == 0);
  CHECK(r.cells.size() == 4);
  for (const auto& cell : r.cells) {
    CHECK(cell.ok);
    CHECK(fs::exists(cell.file));
  }
  CHECK(fs::exists(dir / "out" / "vs-spam_email_nb.report"));
  CHECK(fs::exists(dir / "out" / "vs-spam_ranking.report"));
  CHECK(fs::exists(dir / "out" / "vs-spam_summary.report"));
  const auto serial = study::run_study(spec, Execution::Serial);
  for (std::size_t i = 0; i < r.cells.size(); ++i) CHECK(serial.cells[i].accuracy == r.cells[i].accuracy);

  // Too few rows for k folds: every cell fails, exit code 2.
  spec.k = 100;
  const auto bad = study::run_study(spec);
  CHECK(bad.exit_code == 2);
  CHECK_FALSE(bad.errors.empty());
  fs::remove_all(dir);
}
