#include "spearsift/study.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spearsift/corpus.hpp"
#include "spearsift/error.hpp"
#include "spearsift/eval/crossval.hpp"
#include "spearsift/eval/report.hpp"
#include "spearsift/profiles.hpp"

namespace spearsift::study {

namespace fs = std::filesystem;
using featureset::FeatureSet;
using learn::ModelKind;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    const std::string item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

long parse_int(const std::string& key, const std::string& value, long lo) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used == value.size() && v >= lo) return v;
  } catch (const std::exception&) {
  }
  throw Error(Errc::InvalidConfig, key + " must be an integer >= " + std::to_string(lo) + ", got '" + value + "'");
}

std::string resolve(const std::string& base, const std::string& path) {
  if (base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << content;
  if (!out) throw Error(Errc::Io, "write failed: " + path);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

StudySpec parse_spec(std::string_view text, const std::string& base_dir) {
  StudySpec spec;
  bool have_study = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) throw Error(Errc::InvalidConfig, where + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "study") {
      const auto s = featureset::parse_study(value);
      if (!s) throw Error(Errc::InvalidConfig, where + ": unknown study '" + value + "'");
      spec.study = *s;
      have_study = true;
    } else if (key == "features" || key == "selectors") {
      spec.feature_sets.clear();
      for (const auto& item : split_list(value)) {
        const auto f = featureset::parse_feature_set(item);
        if (!f) throw Error(Errc::InvalidConfig, where + ": unknown feature set '" + item + "'");
        spec.feature_sets.push_back(*f);
      }
    } else if (key == "algorithms" || key == "algos") {
      spec.algorithms.clear();
      for (const auto& item : split_list(value)) {
        const auto a = learn::parse_model_kind(item);
        if (!a) throw Error(Errc::InvalidConfig, where + ": unknown algorithm '" + item + "'");
        spec.algorithms.push_back(*a);
      }
    } else if (key == "k") {
      spec.k = static_cast<int>(parse_int(key, value, 2));
    } else if (key == "seed") {
      try {
        std::size_t used = 0;
        spec.seed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw Error(Errc::InvalidConfig, where + ": bad seed '" + value + "'");
      }
    } else if (key == "trees") {
      spec.trees = static_cast<int>(parse_int(key, value, 1));
    } else if (key == "emails") {
      for (const auto& p : split_list(value)) spec.emails.push_back(resolve(base_dir, p));
    } else if (key == "profiles") {
      spec.profiles = resolve(base_dir, value);
    } else if (key == "company") {
      spec.company = value;
    } else if (key == "out") {
      spec.out_dir = resolve(base_dir, value);
    } else {
      throw Error(Errc::InvalidConfig, where + ": unknown key '" + key + "'");
    }
  }
  if (!have_study) throw Error(Errc::InvalidConfig, "missing 'study'");
  if (spec.emails.empty()) throw Error(Errc::InvalidConfig, "missing 'emails'");
  const auto grid = featureset::study_feature_sets(spec.study);
  for (auto f : spec.feature_sets)
    if (std::find(grid.begin(), grid.end(), f) == grid.end())
      throw Error(Errc::InvalidSelector, std::string(featureset::to_string(f)) + " is not part of " +
                                             std::string(featureset::to_string(spec.study)));
  return spec;
}

StudySpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spec(buf.str(), fs::path(path).parent_path().string());
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

std::string report_filename(featureset::Study study, FeatureSet set, ModelKind algo) {
  return std::string(featureset::to_string(study)) + "_" + std::string(featureset::to_string(set)) + "_" +
         std::string(learn::to_string(algo)) + ".report";
}

StudyResult run_study(const StudySpec& spec, Execution exec) {
  StudyResult result;
  const auto sets = spec.feature_sets.empty() ? featureset::study_feature_sets(spec.study) : spec.feature_sets;
  const auto algos = spec.algorithms.empty()
                         ? std::vector<ModelKind>{ModelKind::NaiveBayes, ModelKind::DecisionTree,
                                                  ModelKind::RandomForest, ModelKind::DecisionTable}
                         : spec.algorithms;
  fs::create_directories(spec.out_dir);
  const std::string study_name(featureset::to_string(spec.study));

  // Inputs; failures here fail every cell.
  corpus::LinkedDataset linked;
  std::string input_error;
  try {
    std::vector<corpus::EmailRecord> emails;
    for (const auto& path : spec.emails) {
      auto part = corpus::read_corpus(path, std::nullopt, exec);
      emails.insert(emails.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    emails = corpus::dedup(emails);
    std::vector<profiles::ProfileRecord> profile_list;
    if (!spec.profiles.empty()) profile_list = profiles::read_profiles(spec.profiles);
    if (profile_list.empty()) {
      for (auto& e : emails) linked.rows.push_back({std::move(e), std::nullopt});
    } else {
      corpus::LinkOptions options;
      options.company = spec.company;
      options.strict = false;
      linked = corpus::link_profiles(emails, profile_list, options);
    }
  } catch (const std::exception& e) {
    input_error = e.what();
  }

  struct Cell {
    FeatureSet set;
    ModelKind algo;
  };
  std::vector<Cell> cells;
  for (auto s : sets)
    for (auto a : algos) cells.push_back({s, a});

  // Matrices once per feature set.
  std::vector<learn::Dataset> datasets(sets.size());
  std::vector<std::string> matrix_errors(sets.size(), input_error);
  for (std::size_t i = 0; i < sets.size() && input_error.empty(); ++i) {
    try {
      const auto m = featureset::build_matrix(linked, {sets[i], spec.study}, exec);
      datasets[i] = featureset::to_dataset(featureset::encode(m));
    } catch (const std::exception& e) {
      matrix_errors[i] = e.what();
    }
  }

  std::vector<std::string> reports(cells.size()), errors(cells.size());
  std::vector<eval::EvaluationReport> evals(cells.size());
  auto run_cell = [&](std::size_t c) {
    const std::size_t si = static_cast<std::size_t>(std::find(sets.begin(), sets.end(), cells[c].set) - sets.begin());
    if (!matrix_errors[si].empty()) {
      errors[c] = matrix_errors[si];
      return;
    }
    try {
      learn::TrainConfig config;
      config.kind = cells[c].algo;
      config.forest.n_trees = spec.trees;
      auto report = eval::cross_validate(datasets[si], config, spec.k, spec.seed, Execution::Serial);
      report.feature_set = study_name + "/" + std::string(featureset::to_string(cells[c].set));
      reports[c] = eval::format_report(report);
      evals[c] = std::move(report);
    } catch (const std::exception& e) {
      errors[c] = e.what();
    }
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) run_cell(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult cell;
    cell.feature_set = cells[c].set;
    cell.algorithm = cells[c].algo;
    const std::string name = report_filename(spec.study, cells[c].set, cells[c].algo);
    if (errors[c].empty()) {
      cell.ok = true;
      cell.accuracy = evals[c].accuracy;
      cell.weighted_fp_rate = evals[c].weighted_fp_rate;
      cell.file = (fs::path(spec.out_dir) / name).string();
      write_file(cell.file, reports[c]);
      result.files.push_back(cell.file);
    } else {
      cell.error = errors[c];
      result.errors.push_back(name + ": " + errors[c]);
    }
    result.cells.push_back(std::move(cell));
  }

  // Ranking over the widest feature set of the study.
  const std::string ranking_file = (fs::path(spec.out_dir) / (study_name + "_ranking.report")).string();
  try {
    if (!input_error.empty()) throw Error(Errc::Io, input_error);
    const auto m = featureset::build_matrix(linked, {FeatureSet::EmailPlusSocial, spec.study}, exec);
    const auto ranking = eval::info_gain_ranking(featureset::to_dataset(featureset::encode(m)));
    write_file(ranking_file, eval::format_ranking(ranking, study_name + "/all", 10));
    result.files.push_back(ranking_file);
  } catch (const std::exception& e) {
    result.errors.push_back(study_name + "_ranking.report: " + e.what());
  }

  // Accuracy / weighted FP grid, one row per feature set.
  std::string summary = "[study] " + study_name + "\nseed: " + std::to_string(spec.seed) +
                        "\nfolds: " + std::to_string(spec.k) + "\n\nfeatures";
  for (auto a : algos) summary += "\t" + std::string(learn::to_string(a)) + "_acc\t" + std::string(learn::to_string(a)) + "_wfpr";
  summary += "\n";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    summary += std::string(featureset::to_string(sets[i])) + " (" +
               std::to_string(featureset::selected_slots({sets[i], spec.study}).size()) + ")";
    for (std::size_t j = 0; j < algos.size(); ++j) {
      const auto& cell = result.cells[i * algos.size() + j];
      summary += cell.ok ? "\t" + fixed(cell.accuracy, 2) + "\t" + fixed(cell.weighted_fp_rate, 4) : "\tfailed\tfailed";
    }
    summary += "\n";
  }
  if (!result.errors.empty()) {
    summary += "\n[failures]\n";
    for (const auto& e : result.errors) summary += e + "\n";
  }
  const std::string summary_file = (fs::path(spec.out_dir) / (study_name + "_summary.report")).string();
  write_file(summary_file, summary);
  result.files.push_back(summary_file);

  result.exit_code = result.errors.empty() ? 0 : 2;
  return result;
}

}  // namespace spearsift::study
