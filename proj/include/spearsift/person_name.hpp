#pragma once

#include <compare>
#include <string>

namespace spearsift {

// Lowercased first/last name, neither part empty nor containing whitespace.
struct PersonName {
  std::string first;
  std::string last;

  auto operator<=>(const PersonName&) const = default;
};

}  // namespace spearsift
