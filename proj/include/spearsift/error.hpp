#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spearsift {

enum class Errc {
  MalformedRecord,
  MissingField,
  BadTimestamp,
  NoNamePattern,
  NotAnAddress,
  AmbiguousMatch,
  NoProfilesLoaded,
  BadConnections,
  NegativeSize,
  UnavailableFeature,
  InvalidSelector,
  EmptyMatrix,
  SingleClassTraining,
  DegenerateMatrix,
  SchemaMismatch,
  TooFewRows,
  EmptyConfusion,
  LengthMismatch,
  ZeroVariance,
  OutOfRange,
  UnknownField,
  InvalidConfig,
  BadModel,
  Io,
};

std::string_view to_string(Errc code);

// All library failures are reported as Error; code() identifies the condition.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  // Same error with a location prefix such as "path:12".
  Error with_context(const std::string& context) const;

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace spearsift
