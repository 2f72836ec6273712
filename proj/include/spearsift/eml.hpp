#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spearsift/corpus.hpp"

namespace spearsift::eml {

// Thin adapter for internet-message (.eml) files. Pulls From, To, Subject,
// Date, Message-ID, the first text part as body, and the name/size of the
// first attachment. Full MIME decoding is out of scope.
corpus::EmailRecord parse_eml(std::string_view message, corpus::Label label,
                              std::string_view fallback_id = "");

corpus::EmailRecord read_eml_file(const std::string& path, corpus::Label label);

// All *.eml files under a directory, sorted by path.
std::vector<corpus::EmailRecord> read_eml_directory(const std::string& dir, corpus::Label label);

}  // namespace spearsift::eml
