#include "spearsift/error.hpp"

namespace spearsift {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::MissingField: return "MissingField";
    case Errc::BadTimestamp: return "BadTimestamp";
    case Errc::NoNamePattern: return "NoNamePattern";
    case Errc::NotAnAddress: return "NotAnAddress";
    case Errc::AmbiguousMatch: return "AmbiguousMatch";
    case Errc::NoProfilesLoaded: return "NoProfilesLoaded";
    case Errc::BadConnections: return "BadConnections";
    case Errc::NegativeSize: return "NegativeSize";
    case Errc::UnavailableFeature: return "UnavailableFeature";
    case Errc::InvalidSelector: return "InvalidSelector";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::SingleClassTraining: return "SingleClassTraining";
    case Errc::DegenerateMatrix: return "DegenerateMatrix";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::EmptyConfusion: return "EmptyConfusion";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::UnknownField: return "UnknownField";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::BadModel: return "BadModel";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

Error Error::with_context(const std::string& context) const {
  return Error(code_, context + ": " + detail_);
}

}  // namespace spearsift
