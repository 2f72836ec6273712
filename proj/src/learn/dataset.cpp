#include "spearsift/learn/dataset.hpp"

#include "spearsift/error.hpp"

namespace spearsift::learn {

std::uint64_t schema_fingerprint(const std::vector<Attribute>& attributes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& a : attributes) {
    for (char c : a.name) mix(static_cast<unsigned char>(c));
    mix(0);
    mix(a.kind == AttributeKind::Numeric ? 'N' : 'C');
  }
  return h;
}

Dataset::Dataset(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)), fingerprint_(schema_fingerprint(attributes_)) {}

void Dataset::add_row(std::span<const double> values, bool positive) {
  if (values.size() != attributes_.size())
    throw Error(Errc::LengthMismatch, "row has " + std::to_string(values.size()) + " values, schema has " +
                                          std::to_string(attributes_.size()));
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(positive ? 1 : 0);
}

std::array<std::size_t, 2> Dataset::class_counts() const {
  std::array<std::size_t, 2> counts{};
  for (auto y : labels_) ++counts[y];
  return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(attributes_);
  out.values_.reserve(rows.size() * attributes_.size());
  out.labels_.reserve(rows.size());
  for (auto r : rows) out.add_row(row(r), label(r));
  return out;
}

Dataset Dataset::project(std::span<const std::size_t> attrs) const {
  std::vector<Attribute> kept;
  for (auto a : attrs) kept.push_back(attributes_.at(a));
  Dataset out(std::move(kept));
  std::vector<double> buf(attrs.size());
  for (std::size_t r = 0; r < num_rows(); ++r) {
    for (std::size_t i = 0; i < attrs.size(); ++i) buf[i] = value(r, attrs[i]);
    out.add_row(buf, label(r));
  }
  return out;
}

}  // namespace spearsift::learn
