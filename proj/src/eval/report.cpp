#include "spearsift/eval/report.hpp"

#include <cstdio>

namespace spearsift::eval {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string confusion_line(const Confusion& c) {
  return "tn=" + std::to_string(c.counts[0][0]) + " fp=" + std::to_string(c.counts[0][1]) +
         " fn=" + std::to_string(c.counts[1][0]) + " tp=" + std::to_string(c.counts[1][1]);
}

}  // namespace

std::string format_report(const EvaluationReport& r) {
  std::string out = "[evaluation]\n";
  out += "features: " + r.feature_set + "\n";
  out += "algorithm: " + r.algorithm + "\n";
  out += "seed: " + std::to_string(r.seed) + "\n";
  out += "folds: " + std::to_string(r.k) + "\n";
  out += "attributes: " + std::to_string(r.features.size()) + "\n";
  for (const auto& f : r.features) out += "  " + f + "\n";
  out += "rows: " + std::to_string(r.aggregate.total()) + "\n";
  out += "\n[confusion]  rows=truth cols=predicted, order: other spear\n";
  out += "other " + std::to_string(r.aggregate.counts[0][0]) + " " + std::to_string(r.aggregate.counts[0][1]) + "\n";
  out += "spear " + std::to_string(r.aggregate.counts[1][0]) + " " + std::to_string(r.aggregate.counts[1][1]) + "\n";
  out += "\n[folds]\n";
  for (std::size_t f = 0; f < r.folds.size(); ++f)
    out += "fold " + std::to_string(f + 1) + ": " + confusion_line(r.folds[f]) + "\n";
  out += "\n[metrics]\n";
  out += "accuracy_pct: " + fixed(r.accuracy, 4) + "\n";
  out += "weighted_fp_rate: " + fixed(r.weighted_fp_rate, 6) + "\n";
  out += "fp_rate_other: " + fixed(r.fp_rates[0], 6) + "\n";
  out += "fp_rate_spear: " + fixed(r.fp_rates[1], 6) + "\n";
  return out;
}

std::string format_ranking(const InfoGainRanking& ranking, const std::string& title, std::size_t top) {
  std::string out = "[ranking] " + title + "\n";
  out += "rank\tfeature\tinfo_gain\tmean_other\tmean_spear\tstd_other\tstd_spear\n";
  const std::size_t n = top == 0 ? ranking.size() : std::min(top, ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = ranking[i];
    out += std::to_string(i + 1) + "\t" + f.name + "\t" + fixed(f.info_gain, 6);
    if (f.numeric) {
      out += "\t" + fixed(f.mean[0], 4) + "\t" + fixed(f.mean[1], 4) + "\t" + fixed(f.stddev[0], 4) + "\t" +
             fixed(f.stddev[1], 4);
    } else {
      out += "\t-\t-\t-\t-";
    }
    out += "\n";
  }
  return out;
}

}  // namespace spearsift::eval
