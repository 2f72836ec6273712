#include "spearsift/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spearsift/error.hpp"
#include "spearsift/eval/discretize.hpp"

namespace spearsift::eval {

double Confusion::accuracy() const {
  if (total() == 0) throw Error(Errc::EmptyConfusion, "confusion matrix is empty");
  return static_cast<double>(correct()) / static_cast<double>(total());
}

Confusion& Confusion::operator+=(const Confusion& other) {
  for (int t = 0; t < 2; ++t)
    for (int p = 0; p < 2; ++p) counts[t][p] += other.counts[t][p];
  return *this;
}

std::array<double, 2> fp_rates(const Confusion& m) {
  std::array<double, 2> out{};
  for (int c = 0; c < 2; ++c) {
    const int other = 1 - c;
    const std::size_t denom = m.class_total(other);
    out[c] = denom ? static_cast<double>(m.counts[other][c]) / static_cast<double>(denom) : 0.0;
  }
  return out;
}

double weighted_fp_rate(const Confusion& m) {
  const std::size_t total = m.total();
  if (total == 0) throw Error(Errc::EmptyConfusion, "confusion matrix is empty");
  const auto rates = fp_rates(m);
  double sum = 0.0;
  for (int c = 0; c < 2; ++c) sum += static_cast<double>(m.class_total(c)) * rates[c];
  return sum / static_cast<double>(total);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(Errc::LengthMismatch, "pearson needs two equal-length series of at least 2 values");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error(Errc::ZeroVariance, "series has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::array<std::size_t, 11> bucket_connections(std::span<const int> values) {
  std::array<std::size_t, 11> out{};
  for (int v : values) {
    if (v < 0 || v > 500) throw Error(Errc::OutOfRange, "connection count " + std::to_string(v) + " outside [0,500]");
    ++out[static_cast<std::size_t>(v == 500 ? 10 : v / 50)];
  }
  return out;
}

namespace {

double entropy_counts(const std::vector<double>& counts, double total) {
  double h = 0.0;
  for (double c : counts)
    if (c > 0) h -= (c / total) * std::log2(c / total);
  return h;
}

}  // namespace

double information_gain(std::span<const int> feature, std::span<const int> labels) {
  if (feature.size() != labels.size()) throw Error(Errc::LengthMismatch, "feature and label lengths differ");
  if (feature.empty()) return 0.0;
  const int num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> class_counts(static_cast<std::size_t>(num_classes), 0.0);
  std::map<int, std::vector<double>> by_value;
  for (std::size_t i = 0; i < feature.size(); ++i) {
    class_counts[static_cast<std::size_t>(labels[i])] += 1;
    auto& c = by_value[feature[i]];
    if (c.empty()) c.assign(class_counts.size(), 0.0);
    c[static_cast<std::size_t>(labels[i])] += 1;
  }
  const double n = static_cast<double>(feature.size());
  double conditional = 0.0;
  for (const auto& [value, counts] : by_value) {
    double t = 0;
    for (double c : counts) t += c;
    conditional += t / n * entropy_counts(counts, t);
  }
  return std::max(0.0, entropy_counts(class_counts, n) - conditional);
}

InfoGainRanking info_gain_ranking(const learn::Dataset& data) {
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0) throw Error(Errc::SingleClassTraining, "ranking needs both classes");
  const std::size_t n = data.num_rows();
  std::vector<int> labels(n);
  for (std::size_t r = 0; r < n; ++r) labels[r] = data.label(r) ? 1 : 0;

  InfoGainRanking out;
  for (std::size_t a = 0; a < data.num_attributes(); ++a) {
    RankedFeature f;
    f.name = data.attribute(a).name;
    f.attribute = a;
    f.numeric = data.attribute(a).kind == learn::AttributeKind::Numeric;
    std::vector<double> column(n);
    for (std::size_t r = 0; r < n; ++r) column[r] = data.value(r, a);
    std::vector<int> codes(n);
    if (f.numeric) {
      const auto cuts = mdl_discretize(column, labels);
      if (!cuts.empty()) {
        for (std::size_t r = 0; r < n; ++r) codes[r] = interval_of(column[r], cuts);
        f.info_gain = information_gain(codes, labels);
      }
      std::array<double, 2> sum{}, sq{};
      for (std::size_t r = 0; r < n; ++r) sum[labels[r]] += column[r];
      for (int c = 0; c < 2; ++c) f.mean[c] = sum[c] / static_cast<double>(counts[c]);
      for (std::size_t r = 0; r < n; ++r) {
        const double d = column[r] - f.mean[labels[r]];
        sq[labels[r]] += d * d;
      }
      for (int c = 0; c < 2; ++c)
        f.stddev[c] = counts[c] > 1 ? std::sqrt(sq[c] / static_cast<double>(counts[c] - 1)) : 0.0;
    } else {
      for (std::size_t r = 0; r < n; ++r) codes[r] = std::isnan(column[r]) ? -1 : static_cast<int>(column[r]);
      f.info_gain = information_gain(codes, labels);
    }
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedFeature& x, const RankedFeature& y) { return x.info_gain > y.info_gain; });
  return out;
}

}  // namespace spearsift::eval
