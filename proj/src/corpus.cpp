#include "spearsift/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>

#include "json.hpp"
#include "spearsift/error.hpp"
#include "spearsift/stylometry.hpp"

namespace spearsift::corpus {

namespace {

using nlohmann::json;
using stylometry::to_lower;

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(Errc::MalformedRecord, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::string required_string(const json& j, const char* key, const char* field_name) {
  auto v = optional_string(j, key);
  if (!v || v->empty()) throw Error(Errc::MissingField, field_name);
  return *v;
}

Timestamp earliest_valid() {
  using namespace std::chrono;
  return sys_days{year{1990} / January / 1};
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

void append_key_part(std::string& key, std::string_view part) {
  key += std::to_string(part.size());
  key += ':';
  key += part;
}

}  // namespace

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Spear: return "spear";
    case Label::Spam: return "spam";
    case Label::Benign: return "benign";
  }
  return "benign";
}

std::optional<Label> parse_label(std::string_view text) {
  const std::string t = to_lower(text);
  if (t == "spear") return Label::Spear;
  if (t == "spam") return Label::Spam;
  if (t == "benign") return Label::Benign;
  return std::nullopt;
}

EmailRecord parse_email_record(std::string_view raw_line, std::optional<Label> label) {
  json j;
  try {
    j = json::parse(raw_line);
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedRecord, e.what());
  }
  if (!j.is_object()) throw Error(Errc::MalformedRecord, "record is not an object");

  EmailRecord r;
  r.to_addr = required_string(j, "to", "to_addr");
  r.message_id = required_string(j, "message_id", "message_id");
  r.from_addr = required_string(j, "from", "from_addr");
  r.subject = optional_string(j, "subject").value_or("");
  r.body = optional_string(j, "body");
  r.attachment_name = optional_string(j, "attachment_name");
  if (auto it = j.find("attachment_size"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw Error(Errc::MalformedRecord, "attachment_size is not an integer");
    const auto size = it->get<std::int64_t>();
    if (size < 0) throw Error(Errc::MalformedRecord, "negative attachment_size");
    if (!r.attachment_name) throw Error(Errc::MalformedRecord, "attachment_size without attachment_name");
    r.attachment_size = size;
  }

  const auto ts_text = optional_string(j, "timestamp");
  if (!ts_text) throw Error(Errc::MissingField, "timestamp");
  const auto ts = parse_iso8601(*ts_text);
  if (!ts) throw Error(Errc::BadTimestamp, "'" + *ts_text + "'");
  const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  if (*ts < earliest_valid() || *ts > now) throw Error(Errc::BadTimestamp, "out of range: " + *ts_text);
  r.timestamp = *ts;

  std::optional<Label> line_label;
  if (auto text = optional_string(j, "label")) {
    line_label = parse_label(*text);
    if (!line_label) throw Error(Errc::MalformedRecord, "unknown label '" + *text + "'");
  }
  if (line_label && label && *line_label != *label)
    throw Error(Errc::MalformedRecord, "label conflicts with the corpus label");
  if (!line_label && !label) throw Error(Errc::MissingField, "label");
  r.label = line_label ? *line_label : *label;
  return r;
}

std::string format_email_record(const EmailRecord& r) {
  json j = json::object();
  j["message_id"] = r.message_id;
  j["from"] = r.from_addr;
  j["to"] = r.to_addr;
  j["subject"] = r.subject;
  if (r.body) j["body"] = *r.body;
  if (r.attachment_name) j["attachment_name"] = *r.attachment_name;
  if (r.attachment_size) j["attachment_size"] = *r.attachment_size;
  j["timestamp"] = format_iso8601(r.timestamp);
  j["label"] = std::string(to_string(r.label));
  return j.dump();
}

std::vector<EmailRecord> read_corpus(const std::string& path, std::optional<Label> label, Execution exec) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::vector<std::string> lines;
  std::vector<std::size_t> linenos;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (is_blank(line)) continue;
    lines.push_back(std::move(line));
    linenos.push_back(n);
  }

  const auto count = static_cast<std::ptrdiff_t>(lines.size());
  std::vector<std::optional<EmailRecord>> parsed(lines.size());
  std::vector<std::optional<Error>> errors(lines.size());
  auto parse_one = [&](std::ptrdiff_t i) {
    try {
      parsed[i] = parse_email_record(lines[i], label);
    } catch (const Error& e) {
      errors[i] = e.with_context(path + ":" + std::to_string(linenos[i]));
    }
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) parse_one(i);
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) parse_one(i);
  }

  std::vector<EmailRecord> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (errors[i]) throw *errors[i];
    out.push_back(std::move(*parsed[i]));
  }
  return out;
}

void write_corpus(const std::string& path, const std::vector<EmailRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  for (const auto& r : records) out << format_email_record(r) << '\n';
}

PersonName extract_name(std::string_view address) {
  const auto at = address.find('@');
  if (at == std::string_view::npos || address.find('@', at + 1) != std::string_view::npos)
    throw Error(Errc::NotAnAddress, "'" + std::string(address) + "'");
  const std::string local = to_lower(address.substr(0, at));
  const auto sep = local.find_first_of("._");
  if (sep == std::string::npos) throw Error(Errc::NoNamePattern, "no separator in '" + local + "'");
  PersonName name{local.substr(0, sep), local.substr(sep + 1)};
  auto bad_part = [](const std::string& part) {
    return part.empty() || part.find_first_of("._ \t") != std::string::npos;
  };
  if (bad_part(name.first) || bad_part(name.last))
    throw Error(Errc::NoNamePattern, "'" + local + "' is not first.last or first_last");
  return name;
}

std::string format_address(const PersonName& name, std::string_view domain, char separator) {
  std::string out = name.first;
  out += separator;
  out += name.last;
  out += '@';
  out += domain;
  return out;
}

std::string company_from_address(std::string_view address) {
  const auto at = address.rfind('@');
  const std::string domain = to_lower(at == std::string_view::npos ? address : address.substr(at + 1));
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (start <= domain.size()) {
    const auto dot = domain.find('.', start);
    const auto end = dot == std::string::npos ? domain.size() : dot;
    if (end > start) labels.push_back(domain.substr(start, end - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (labels.empty()) return "";
  if (labels.size() == 1) return labels[0];
  static const std::unordered_set<std::string> kSecondLevel = {"co", "com", "org", "net", "ac", "gov", "edu"};
  if (labels.size() >= 3 && kSecondLevel.count(labels[labels.size() - 2]))
    return labels[labels.size() - 3];
  return labels[labels.size() - 2];
}

std::vector<EmailRecord> dedup(const std::vector<EmailRecord>& records) {
  std::unordered_set<std::string> seen;
  std::vector<EmailRecord> out;
  for (const auto& r : records) {
    std::string key;
    append_key_part(key, r.from_addr);
    append_key_part(key, r.to_addr);
    append_key_part(key, r.subject);
    append_key_part(key, r.body ? *r.body : std::string());
    key += std::to_string(r.timestamp.time_since_epoch().count());
    if (seen.insert(std::move(key)).second) out.push_back(r);
  }
  return out;
}

LinkedDataset link_profiles(const std::vector<EmailRecord>& emails,
                            const std::vector<profiles::ProfileRecord>& profile_list,
                            const LinkOptions& options) {
  if (profile_list.empty()) throw Error(Errc::NoProfilesLoaded, "profile set is empty");

  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < profile_list.size(); ++i) {
    const auto& p = profile_list[i];
    index[{p.name.first, p.name.last, to_lower(p.company)}].push_back(i);
  }

  LinkedDataset out;
  out.company = options.company.value_or("");
  const std::optional<std::string> fixed_company =
      options.company ? std::optional<std::string>(to_lower(*options.company)) : std::nullopt;

  for (const auto& email : emails) {
    const profiles::ProfileRecord* match = nullptr;
    try {
      const PersonName name = extract_name(email.to_addr);
      const std::string company = fixed_company ? *fixed_company : company_from_address(email.to_addr);
      auto it = index.find({name.first, name.last, company});
      if (it != index.end()) {
        if (it->second.size() > 1) {
          if (options.strict)
            throw Error(Errc::AmbiguousMatch, std::to_string(it->second.size()) + " profiles for " +
                                                  name.first + " " + name.last + " at " + company);
          ++out.ambiguous;
        }
        match = &profile_list[it->second.front()];
      }
    } catch (const Error& e) {
      if (e.code() == Errc::AmbiguousMatch) throw;
    }
    if (match) {
      out.rows.push_back({email, *match});
    } else if (options.strict) {
      ++out.dropped;
    } else {
      out.rows.push_back({email, std::nullopt});
    }
  }
  return out;
}

}  // namespace spearsift::corpus
