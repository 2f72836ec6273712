#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spearsift/featureset.hpp"
#include "spearsift/learn/model.hpp"
#include "spearsift/parallel.hpp"

namespace spearsift::study {

struct StudySpec {
  featureset::Study study = featureset::Study::VsSpam;
  std::vector<featureset::FeatureSet> feature_sets;  // empty: the study's full grid
  std::vector<learn::ModelKind> algorithms;          // empty: all four
  int k = 10;
  std::uint64_t seed = 1;
  int trees = 100;
  std::vector<std::string> emails;  // labeled corpus files
  std::string profiles;             // optional
  std::optional<std::string> company;
  std::string out_dir = ".";
};

/// key = value lines; '#' starts a comment. Relative paths resolve against
/// `base_dir`. Throws InvalidConfig.
StudySpec parse_spec(std::string_view text, const std::string& base_dir = "");
StudySpec load_spec(const std::string& path);

struct CellResult {
  featureset::FeatureSet feature_set;
  learn::ModelKind algorithm;
  bool ok = false;
  double accuracy = 0.0;
  double weighted_fp_rate = 0.0;
  std::string file;   // report path on success
  std::string error;  // message on failure
};

struct StudyResult {
  int exit_code = 0;  // 0 all cells succeeded, 2 otherwise
  std::vector<CellResult> cells;
  std::vector<std::string> files;  // every file written, in order
  std::vector<std::string> errors;
};

std::string report_filename(featureset::Study study, featureset::FeatureSet set, learn::ModelKind algo);

StudyResult run_study(const StudySpec& spec, Execution exec = Execution::Parallel);

}  // namespace spearsift::study
