#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spearsift::learn {

enum class AttributeKind { Numeric, Nominal };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::Numeric;
  std::vector<std::string> values;  // nominal dictionary; code i <-> values[i]

  std::size_t cardinality() const { return values.size(); }
  bool operator==(const Attribute&) const = default;
};

// FNV-1a over attribute names and kinds. Dictionaries are not part of the
// fingerprint; rows from another matrix are re-encoded against the model's.
std::uint64_t schema_fingerprint(const std::vector<Attribute>& attributes);

// Row-major numeric matrix with a binary label (true = positive / SPEAR).
// Nominal values are stored as their dictionary code.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Attribute> attributes);

  void add_row(std::span<const double> values, bool positive);

  std::size_t num_rows() const { return labels_.size(); }
  std::size_t num_attributes() const { return attributes_.size(); }
  const std::vector<Attribute>& attributes() const { return attributes_; }
  const Attribute& attribute(std::size_t a) const { return attributes_[a]; }

  double value(std::size_t row, std::size_t attribute) const { return values_[row * attributes_.size() + attribute]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * attributes_.size(), attributes_.size()};
  }
  bool label(std::size_t row) const { return labels_[row] != 0; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }

  // [negatives, positives]
  std::array<std::size_t, 2> class_counts() const;
  std::uint64_t fingerprint() const { return fingerprint_; }

  Dataset subset(std::span<const std::size_t> rows) const;
  // Same rows, only the listed attributes.
  Dataset project(std::span<const std::size_t> attributes) const;

 private:
  std::vector<Attribute> attributes_;
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
  std::uint64_t fingerprint_ = 0;
};

}  // namespace spearsift::learn
