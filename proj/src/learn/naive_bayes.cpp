#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "spearsift/error.hpp"

namespace spearsift::learn {

TrainedModel train_naive_bayes(const Dataset& data, const NaiveBayesParams& params) {
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0) throw Error(Errc::SingleClassTraining, "naive Bayes needs both classes");
  const double n = static_cast<double>(data.num_rows());

  NaiveBayesModel nb;
  nb.params = params;
  nb.prior = {static_cast<double>(counts[0]) / n, static_cast<double>(counts[1]) / n};
  nb.attributes.resize(data.num_attributes());
  for (std::size_t a = 0; a < data.num_attributes(); ++a) {
    const auto& attr = data.attribute(a);
    auto& stats = nb.attributes[a];
    if (attr.kind == AttributeKind::Numeric) {
      std::array<double, 2> sum{}, sq{};
      for (std::size_t r = 0; r < data.num_rows(); ++r) sum[data.label(r)] += data.value(r, a);
      for (int c = 0; c < 2; ++c) stats.mean[c] = sum[c] / static_cast<double>(counts[c]);
      for (std::size_t r = 0; r < data.num_rows(); ++r) {
        const double d = data.value(r, a) - stats.mean[data.label(r)];
        sq[data.label(r)] += d * d;
      }
      for (int c = 0; c < 2; ++c) {
        const double var = counts[c] > 1 ? sq[c] / static_cast<double>(counts[c] - 1) : 0.0;
        stats.variance[c] = std::max(var, params.min_variance);
      }
    } else {
      const std::size_t v = attr.cardinality();
      std::array<std::vector<double>, 2> freq{std::vector<double>(v, 0.0), std::vector<double>(v, 0.0)};
      for (std::size_t r = 0; r < data.num_rows(); ++r) {
        const double code = data.value(r, a);
        if (code >= 0 && code < static_cast<double>(v)) freq[data.label(r)][static_cast<std::size_t>(code)] += 1;
      }
      for (int c = 0; c < 2; ++c) {
        stats.log_prob[c].resize(v);
        for (std::size_t i = 0; i < v; ++i)
          stats.log_prob[c][i] = std::log((freq[c][i] + 1.0) / (static_cast<double>(counts[c]) + static_cast<double>(v)));
      }
    }
  }

  TrainedModel model;
  model.attributes = data.attributes();
  model.fingerprint = data.fingerprint();
  model.fallback = detail::compute_fallback(data);
  model.body = std::move(nb);
  return model;
}

std::array<double, 2> naive_bayes_posterior(const NaiveBayesModel& model, const std::vector<Attribute>& attributes,
                                            std::span<const double> row) {
  std::array<double, 2> log_post{std::log(model.prior[0]), std::log(model.prior[1])};
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    const auto& stats = model.attributes[a];
    const double x = row[a];
    for (int c = 0; c < 2; ++c) {
      if (attributes[a].kind == AttributeKind::Numeric) {
        const double var = stats.variance[c];
        const double d = x - stats.mean[c];
        log_post[c] += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
      } else if (!stats.log_prob[c].empty()) {
        const auto code = static_cast<std::size_t>(x);
        if (code < stats.log_prob[c].size()) log_post[c] += stats.log_prob[c][code];
      }
    }
  }
  const double m = std::max(log_post[0], log_post[1]);
  const double z = m + std::log(std::exp(log_post[0] - m) + std::exp(log_post[1] - m));
  return {std::exp(log_post[0] - z), std::exp(log_post[1] - z)};
}

}  // namespace spearsift::learn
