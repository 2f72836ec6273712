#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "spearsift/charstats.hpp"
#include "spearsift/corpus.hpp"
#include "spearsift/eml.hpp"
#include "spearsift/error.hpp"
#include "spearsift/eval/crossval.hpp"
#include "spearsift/eval/report.hpp"
#include "spearsift/featureset.hpp"
#include "spearsift/learn/model.hpp"
#include "spearsift/profiles.hpp"
#include "spearsift/study.hpp"
#include "spearsift/synth.hpp"

namespace fs = std::filesystem;
using namespace spearsift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << text;
}

std::optional<corpus::Label> label_option(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto l = corpus::parse_label(text);
  if (!l) throw UsageError("unknown label '" + text + "'");
  return l;
}

std::vector<corpus::EmailRecord> load_emails(const std::vector<std::string>& paths, std::optional<corpus::Label> label) {
  std::vector<corpus::EmailRecord> all;
  for (const auto& p : paths) {
    std::vector<corpus::EmailRecord> part;
    if (fs::is_directory(p)) {
      if (!label) throw UsageError(p + ": --label is required for .eml directories");
      part = eml::read_eml_directory(p, *label);
    } else {
      part = corpus::read_corpus(p, label);
    }
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

const std::map<std::string, learn::ModelKind> kAlgos = {{"nb", learn::ModelKind::NaiveBayes},
                                                        {"tree", learn::ModelKind::DecisionTree},
                                                        {"forest", learn::ModelKind::RandomForest},
                                                        {"table", learn::ModelKind::DecisionTable}};

struct TrainOptions {
  std::string algo = "forest";
  std::uint64_t seed = 1;
  int trees = 100;
  int min_leaf = 2;
  bool no_prune = false;

  learn::TrainConfig config() const {
    learn::TrainConfig c;
    c.kind = kAlgos.at(algo);
    c.forest.seed = seed;
    c.forest.n_trees = trees;
    c.tree.min_leaf = min_leaf;
    c.tree.prune = !no_prune;
    return c;
  }
};

void add_train_options(CLI::App* cmd, TrainOptions& o) {
  cmd->add_option("--algo", o.algo, "nb | tree | forest | table")->check(CLI::IsMember({"nb", "tree", "forest", "table"}));
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--trees", o.trees, "forest size")->check(CLI::PositiveNumber);
  cmd->add_option("--min-leaf", o.min_leaf, "minimum instances per tree leaf")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-prune", o.no_prune, "disable tree pruning");
}

learn::Dataset matrix_dataset(const std::string& path, const std::string& features) {
  auto m = featureset::read_matrix(path);
  if (!features.empty()) {
    const auto set = featureset::parse_feature_set(features);
    if (!set) throw UsageError("unknown feature set '" + features + "'");
    m = featureset::restrict_to(m, featureset::selected_slots({*set, m.selector.study}));
  }
  return featureset::to_dataset(featureset::encode(m));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spearsift: spear-phishing email feature extraction and classification"};
  app.require_subcommand(1);
  app.fallthrough();  // --serial may follow the subcommand
  bool serial = false;
  app.add_flag("--serial", serial, "run single-threaded");
  auto exec = [&] { return serial ? Execution::Serial : Execution::Parallel; };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "read, validate and deduplicate email corpora");
  std::vector<std::string> ingest_in;
  std::string ingest_label, ingest_out;
  bool do_dedup = false;
  ingest->add_option("--emails,--in", ingest_in, "JSON-lines corpus or .eml directory")->required();
  ingest->add_option("--label", ingest_label, "spear | spam | benign (default label)");
  ingest->add_option("--out", ingest_out, "output corpus")->required();
  ingest->add_flag("--dedup", do_dedup, "drop duplicates (first occurrence kept)");

  // profiles
  auto* prof = app.add_subcommand("profiles", "validate profiles and extract social features");
  std::string prof_in, prof_out, prof_features;
  prof->add_option("--in", prof_in, "profile file")->required();
  prof->add_option("--out", prof_out, "normalized profile file");
  prof->add_option("--features", prof_features, "social feature table (TSV)");

  // featurize
  auto* feat = app.add_subcommand("featurize", "build a design matrix");
  std::vector<std::string> feat_emails;
  std::string feat_profiles, feat_study = "vs-spam", feat_set = "all", feat_company, feat_out;
  bool feat_strict = false;
  feat->add_option("--emails", feat_emails, "labeled corpus files")->required();
  feat->add_option("--profiles", feat_profiles, "profile file");
  feat->add_option("--study", feat_study, "vs-spam | vs-benign | vs-mix")
      ->check(CLI::IsMember({"vs-spam", "vs-benign", "vs-mix"}));
  feat->add_option("--features", feat_set, "subject | attachment | body | email | social | all")
      ->check(CLI::IsMember({"subject", "attachment", "body", "email", "social", "all"}));
  feat->add_option("--company", feat_company, "company every recipient is matched against");
  feat->add_flag("--strict", feat_strict, "drop emails without a profile, fail on ambiguous matches");
  feat->add_option("--out", feat_out, "matrix path (TSV)")->required();

  // train
  auto* train = app.add_subcommand("train", "train a classifier");
  TrainOptions train_opts;
  std::string train_in, train_out;
  add_train_options(train, train_opts);
  train->add_option("--in", train_in, "matrix")->required();
  train->add_option("--out", train_out, "model file")->required();

  // predict
  auto* pred = app.add_subcommand("predict", "score a matrix with a trained model");
  std::string pred_model, pred_in, pred_out;
  pred->add_option("--model", pred_model, "model file")->required();
  pred->add_option("--in", pred_in, "matrix")->required();
  pred->add_option("--out", pred_out, "predictions (TSV), default stdout");

  // eval
  auto* ev = app.add_subcommand("eval", "stratified k-fold cross-validation");
  TrainOptions ev_opts;
  std::string ev_in, ev_features, ev_out;
  int ev_k = 10;
  add_train_options(ev, ev_opts);
  ev->add_option("--in", ev_in, "matrix")->required();
  ev->add_option("--features", ev_features, "restrict to a feature set");
  ev->add_option("--k", ev_k, "folds")->check(CLI::Range(2, 1000));
  ev->add_option("--out", ev_out, "report path, default stdout");

  // rank
  auto* rank = app.add_subcommand("rank", "information-gain feature ranking");
  std::string rank_in, rank_out;
  std::size_t rank_top = 10;
  rank->add_option("--in", rank_in, "matrix")->required();
  rank->add_option("--top", rank_top, "features to list (0 = all)");
  rank->add_option("--out", rank_out, "output path, default stdout");

  // stats
  auto* stats = app.add_subcommand("stats", "corpus characterization tables");
  std::vector<std::string> stats_emails;
  std::string stats_report, stats_label, stats_out, stats_stopwords, stats_source = "body";
  std::size_t stats_top = 20;
  stats->add_option("--emails", stats_emails, "corpus files")->required();
  stats->add_option("--report", stats_report, "attachments | types | subjects | timeline | words")
      ->required()
      ->check(CLI::IsMember({"attachments", "types", "subjects", "timeline", "words"}));
  stats->add_option("--label", stats_label, "only records with this label");
  stats->add_option("--top", stats_top, "entries")->check(CLI::PositiveNumber);
  stats->add_option("--source", stats_source, "words report: body | subject")->check(CLI::IsMember({"body", "subject"}));
  stats->add_option("--stopwords", stats_stopwords, "file with one stopword per line");
  stats->add_option("--out", stats_out, "output path, default stdout");

  // synth
  auto* syn = app.add_subcommand("synth", "generate a synthetic corpus and profiles");
  std::string syn_config, syn_emails, syn_profiles;
  std::optional<std::uint64_t> syn_seed;
  syn->add_option("--config", syn_config, "JSON config (defaults when omitted)");
  syn->add_option("--seed", syn_seed, "overrides the config seed");
  syn->add_option("--out-emails", syn_emails, "corpus output")->required();
  syn->add_option("--out-profiles", syn_profiles, "profile output")->required();

  // study
  auto* st = app.add_subcommand("study", "run a full study grid");
  std::string st_spec, st_out;
  st->add_option("--spec", st_spec, "study.conf")->required();
  st->add_option("--out", st_out, "output directory (overrides the spec)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) {
      auto emails = load_emails(ingest_in, label_option(ingest_label));
      const std::size_t read = emails.size();
      if (do_dedup) emails = corpus::dedup(emails);
      corpus::write_corpus(ingest_out, emails);
      std::cerr << "read " << read << " records, wrote " << emails.size() << "\n";
    } else if (*prof) {
      const auto list = profiles::read_profiles(prof_in);
      if (!prof_out.empty()) profiles::write_profiles(prof_out, list);
      if (!prof_features.empty()) {
        std::string text = "first\tlast\tcompany\tLocation\tnumConnections\tSummaryLength\tSummaryNumChars\t"
                           "SummaryUniqueWords\tSummaryNumWords\tSummaryRichness\tjobLevel\tjobType\n";
        for (const auto& p : list) {
          const auto f = profiles::social_features(p);
          char rich[32];
          std::snprintf(rich, sizeof rich, "%.6f", f.summary_richness);
          text += p.name.first + "\t" + p.name.last + "\t" + p.company + "\t" + f.location + "\t" +
                  std::to_string(f.num_connections) + "\t" + std::to_string(f.summary_length) + "\t" +
                  std::to_string(f.summary_num_chars) + "\t" + std::to_string(f.summary_unique_words) + "\t" +
                  std::to_string(f.summary_num_words) + "\t" + rich + "\t" + std::to_string(f.job_level) + "\t" +
                  std::to_string(f.job_type) + "\n";
        }
        write_text(prof_features, text);
      }
      std::cerr << "read " << list.size() << " profiles\n";
    } else if (*feat) {
      const auto emails = corpus::dedup(load_emails(feat_emails, std::nullopt));
      corpus::LinkedDataset linked;
      if (feat_profiles.empty()) {
        for (const auto& e : emails) linked.rows.push_back({e, std::nullopt});
      } else {
        corpus::LinkOptions options;
        if (!feat_company.empty()) options.company = feat_company;
        options.strict = feat_strict;
        linked = corpus::link_profiles(emails, profiles::read_profiles(feat_profiles), options);
      }
      const featureset::Selector selector{*featureset::parse_feature_set(feat_set), *featureset::parse_study(feat_study)};
      featureset::BuildStats build_stats;
      const auto matrix = featureset::build_matrix(linked, selector, exec(), &build_stats);
      featureset::write_matrix(feat_out, matrix);
      std::cerr << "rows: " << matrix.rows.size() << " (" << matrix.positives << " spear, " << matrix.negatives
                << " other), rejected " << build_stats.rejected << ", unlinked " << linked.dropped << ", ambiguous "
                << linked.ambiguous << "\n";
    } else if (*train) {
      const auto data = matrix_dataset(train_in, "");
      learn::save_model(train_out, learn::train(data, train_opts.config(), exec()));
    } else if (*pred) {
      const auto model = learn::load_model(pred_model);
      std::map<std::string, std::vector<std::string>> dictionaries;
      for (const auto& a : model.attributes) dictionaries[a.name] = a.values;
      const auto matrix = featureset::read_matrix(pred_in);
      const auto encoded = featureset::encode_with(matrix, dictionaries);
      const auto data = featureset::to_dataset(encoded);
      std::string text = "row_id\tpredicted\tscore\n";
      for (std::size_t r = 0; r < data.num_rows(); ++r) {
        const auto p = learn::predict(model, data, r);
        char score[32];
        std::snprintf(score, sizeof score, "%.6f", p.score);
        text += encoded.rows[r].row_id + "\t" + (p.positive ? "spear" : "other") + "\t" + score + "\n";
      }
      write_text(pred_out, text);
      if (const auto n = learn::fallback_substitutions())
        std::cerr << "warning: " << n << " unknown values replaced by training fallbacks\n";
    } else if (*ev) {
      const auto data = matrix_dataset(ev_in, ev_features);
      auto report = eval::cross_validate(data, ev_opts.config(), ev_k, ev_opts.seed, exec());
      const auto m = featureset::read_matrix(ev_in);
      report.feature_set = std::string(featureset::to_string(m.selector.study)) + "/" +
                           (ev_features.empty() ? std::string(featureset::to_string(m.selector.set)) : ev_features);
      write_text(ev_out, eval::format_report(report));
    } else if (*rank) {
      const auto data = matrix_dataset(rank_in, "");
      write_text(rank_out, eval::format_ranking(eval::info_gain_ranking(data), rank_in, rank_top));
    } else if (*stats) {
      auto emails = load_emails(stats_emails, std::nullopt);
      const auto label = label_option(stats_label);
      if (label && stats_report != "timeline")
        std::erase_if(emails, [&](const corpus::EmailRecord& e) { return e.label != *label; });
      std::string text;
      if (stats_report == "timeline") {
        text = charstats::format_timeline(charstats::timeline(emails, label));
      } else if (stats_report == "words") {
        std::set<std::string> stop;
        if (!stats_stopwords.empty()) {
          std::ifstream in(stats_stopwords);
          if (!in) throw Error(Errc::Io, "cannot read " + stats_stopwords);
          for (std::string w; in >> w;) stop.insert(w);
        }
        std::vector<std::string> texts;
        for (const auto& e : emails) {
          if (stats_source == "subject") texts.push_back(e.subject);
          else if (e.body) texts.push_back(*e.body);
        }
        text = charstats::format_table(charstats::word_frequency(texts, stats_top, stop, exec()));
      } else {
        const charstats::Field field = stats_report == "attachments" ? charstats::Field::AttachmentName
                                       : stats_report == "types"     ? charstats::Field::AttachmentType
                                                                     : charstats::Field::Subject;
        text = charstats::format_table(charstats::top_frequencies(emails, field, stats_top, exec()));
      }
      write_text(stats_out, text);
    } else if (*syn) {
      auto config = syn_config.empty() ? synth::default_config() : synth::load_config(syn_config);
      if (syn_seed) config.seed = *syn_seed;
      const auto corpus_out = synth::generate_corpus(config);
      corpus::write_corpus(syn_emails, corpus_out.emails);
      profiles::write_profiles(syn_profiles, corpus_out.profiles);
      std::cerr << "wrote " << corpus_out.emails.size() << " emails and " << corpus_out.profiles.size()
                << " profiles\n";
    } else if (*st) {
      auto spec = study::load_spec(st_spec);
      if (!st_out.empty()) spec.out_dir = st_out;
      const auto result = study::run_study(spec, exec());
      for (const auto& f : result.files) std::cout << f << "\n";
      for (const auto& e : result.errors) std::cerr << "failed: " << e << "\n";
      return result.exit_code;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::InvalidConfig || e.code() == Errc::InvalidSelector) return kExitUsage;
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
