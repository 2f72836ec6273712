#include "spearsift/stylometry.hpp"

#include <algorithm>
#include <unordered_set>

#include "spearsift/error.hpp"

namespace spearsift::stylometry {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u >= 0x80;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool starts_with_any(std::string_view s, std::initializer_list<std::string_view> prefixes) {
  return std::any_of(prefixes.begin(), prefixes.end(),
                     [&](std::string_view p) { return s.starts_with(p); });
}

std::string normalized_token(std::string_view raw) { return to_lower(strip_punctuation(raw)); }

}  // namespace

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string_view strip_punctuation(std::string_view token) {
  while (!token.empty() && !is_word_char(token.front())) token.remove_prefix(1);
  while (!token.empty() && !is_word_char(token.back())) token.remove_suffix(1);
  return token;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::size_t char_count(std::string_view text) {
  return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

double richness(std::size_t words, std::size_t chars) {
  return chars == 0 ? 0.0 : static_cast<double>(words) / static_cast<double>(chars);
}

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> words = {
      "account", "access",   "bank",   "credit",   "click",    "identity",
      "inconvenience",       "information",        "limited",  "log",
      "minutes", "password", "recently", "risk",   "social",   "security",
      "service", "suspended"};
  return words;
}

SubjectFeatures subject_features(std::string_view subject) {
  SubjectFeatures f;
  const std::string lowered = to_lower(trim(subject));
  // A bare "re"/"fw"/"fwd" subject is also a reply/forward marker.
  f.is_reply = lowered == "re" || starts_with_any(lowered, {"re:", "re "});
  f.is_forwarded = lowered == "fw" || lowered == "fwd" ||
                   starts_with_any(lowered, {"fw:", "fwd:", "fw ", "fwd "});
  const auto tokens = tokenize(subject);
  for (auto tok : tokens) {
    const std::string t = normalized_token(tok);
    if (t == "bank") f.has_bank = true;
    if (t.starts_with("verify")) f.has_verify = true;
  }
  f.num_words = tokens.size();
  f.num_chars = char_count(subject);
  f.richness = richness(f.num_words, f.num_chars);
  return f;
}

AttachmentFeatures attachment_features(const std::optional<std::string>& name,
                                       std::optional<std::int64_t> size) {
  if (size && *size < 0) throw Error(Errc::NegativeSize, "attachment size " + std::to_string(*size));
  AttachmentFeatures f;
  if (name) {
    f.name_length = char_count(*name);
    f.name_available = true;
  }
  if (size) {
    f.size_bytes = static_cast<std::uint64_t>(*size);
    f.size_available = true;
  }
  return f;
}

BodyFeatures body_features(std::string_view body) {
  static const std::unordered_set<std::string> kFunctionWords(function_words().begin(),
                                                              function_words().end());
  BodyFeatures f;
  const auto tokens = tokenize(body);
  std::unordered_set<std::string> unique;
  for (auto tok : tokens) {
    std::string t = normalized_token(tok);
    if (t.empty()) continue;
    if (kFunctionWords.count(t)) ++f.num_function_words;
    if (t == "attached" || t == "attachment") f.has_attach = true;
    unique.insert(std::move(t));
  }
  const std::string lowered = to_lower(body);
  f.verify_your_account = lowered.find("verify your account") != std::string::npos;
  // "suspens" alone misses "suspended"; accept either stem.
  f.has_suspension = lowered.find("suspens") != std::string::npos ||
                     lowered.find("suspend") != std::string::npos;
  f.num_unique_words = unique.size();
  f.num_newlines = static_cast<std::size_t>(std::count(body.begin(), body.end(), '\n'));
  f.num_words = tokens.size();
  f.num_chars = char_count(body);
  f.richness = richness(f.num_words, f.num_chars);
  return f;
}

}  // namespace spearsift::stylometry
