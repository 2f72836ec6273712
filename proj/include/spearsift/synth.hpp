#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spearsift/corpus.hpp"
#include "spearsift/profiles.hpp"

namespace spearsift::synth {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

enum class SocialSignal { Noise, Informative };

struct LabelModel {
  // Extension -> weight; empty means the label carries no attachment.
  std::vector<std::pair<std::string, double>> attachment_types;
  std::vector<std::string> subjects;  // templates, see generate_corpus
  Moments name_length;                // characters, including the extension
  Moments size_kb;                    // 1 KB = 1024 bytes
  Moments connections;                // recipient profile, 0..500
  double senior_share = 0.2;          // headlines at manager level or above
  double summary_share = 0.7;         // profiles with a summary
  bool has_body = true;
};

struct SynthConfig {
  std::size_t n_spear = 1000;
  std::size_t n_spam = 1000;
  std::size_t n_benign = 1000;
  std::array<LabelModel, 3> labels;  // indexed by corpus::Label
  std::vector<std::string> companies;  // recipient domains, e.g. "acme.com"
  SocialSignal social_signal = SocialSignal::Noise;
  std::uint64_t seed = 1;

  LabelModel& model(corpus::Label l) { return labels[static_cast<std::size_t>(l)]; }
  const LabelModel& model(corpus::Label l) const { return labels[static_cast<std::size_t>(l)]; }
};

SynthConfig default_config();

/// Throws InvalidConfig when counts, weights or moments cannot be realized.
void validate(const SynthConfig& config);

/// JSON overrides applied on top of default_config(). Throws InvalidConfig.
SynthConfig parse_config(std::string_view json_text);
SynthConfig load_config(const std::string& path);

struct SynthCorpus {
  std::vector<corpus::EmailRecord> emails;  // SPEAR, then SPAM, then BENIGN
  std::vector<profiles::ProfileRecord> profiles;  // one per recipient
};

/// Deterministic in the config (including seed). Subject templates may use
/// {name} {company} {num} {month} {day} {project} {city}.
SynthCorpus generate_corpus(const SynthConfig& config);

// Samplers exposed for testing. Each returns the parameters of the
// underlying distribution matched to the requested moments.
struct TruncatedNormal {
  double mu = 0.0, sigma = 1.0, lower = 0.0;
};
TruncatedNormal fit_truncated_normal(Moments target, double lower);
double truncated_normal_mean(const TruncatedNormal& d);
double truncated_normal_sd(const TruncatedNormal& d);

struct LogNormal {
  double mu = 0.0, sigma = 1.0;
};
LogNormal fit_lognormal(Moments target);

struct ScaledBeta {
  double a = 1.0, b = 1.0, scale = 1.0;
};
ScaledBeta fit_scaled_beta(Moments target, double scale);

}  // namespace spearsift::synth
