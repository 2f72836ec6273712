#include "spearsift/eml.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "spearsift/error.hpp"
#include "spearsift/stylometry.hpp"

namespace spearsift::eml {

namespace {

using stylometry::to_lower;

struct Part {
  std::map<std::string, std::string> headers;  // lowercased names
  std::string body;
};

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return std::string(s);
}

// Splits headers from body at the first blank line and unfolds continuations.
Part split_part(std::string_view text) {
  Part part;
  std::size_t pos = 0;
  std::string current_name;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) break;
    if ((line.front() == ' ' || line.front() == '\t') && !current_name.empty()) {
      part.headers[current_name] += " " + trim(line);
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    current_name = to_lower(trim(line.substr(0, colon)));
    // First occurrence wins.
    part.headers.emplace(current_name, trim(line.substr(colon + 1)));
  }
  if (pos < text.size()) part.body = std::string(text.substr(pos));
  return part;
}

std::string header(const Part& p, const std::string& name) {
  auto it = p.headers.find(name);
  return it == p.headers.end() ? std::string() : it->second;
}

// "Name <addr>" -> addr; bare addresses pass through.
std::string bare_address(const std::string& value) {
  const auto lt = value.find('<');
  const auto gt = value.find('>', lt == std::string::npos ? 0 : lt);
  if (lt != std::string::npos && gt != std::string::npos) return trim(value.substr(lt + 1, gt - lt - 1));
  const auto comma = value.find(',');
  return trim(comma == std::string::npos ? value : value.substr(0, comma));
}

// Parameter value from a structured header, e.g. boundary="abc" or filename=x.doc.
std::string header_param(const std::string& value, const std::string& name) {
  const std::string lowered = to_lower(value);
  std::size_t pos = 0;
  while ((pos = lowered.find(name, pos)) != std::string::npos) {
    const bool at_boundary = pos == 0 || lowered[pos - 1] == ';' || lowered[pos - 1] == ' ' || lowered[pos - 1] == '\t';
    std::size_t eq = pos + name.size();
    while (eq < value.size() && value[eq] == ' ') ++eq;
    if (!at_boundary || eq >= value.size() || value[eq] != '=') {
      pos += name.size();
      continue;
    }
    std::size_t start = eq + 1;
    while (start < value.size() && value[start] == ' ') ++start;
    if (start < value.size() && value[start] == '"') {
      const auto end = value.find('"', start + 1);
      return value.substr(start + 1, end == std::string::npos ? std::string::npos : end - start - 1);
    }
    const auto end = value.find(';', start);
    return trim(value.substr(start, end == std::string::npos ? std::string::npos : end - start));
  }
  return "";
}

std::int64_t decoded_size(const Part& part) {
  const std::string encoding = to_lower(header(part, "content-transfer-encoding"));
  if (encoding == "base64") {
    std::int64_t chars = 0, padding = 0;
    for (char c : part.body) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/') ++chars;
      else if (c == '=') ++padding;
    }
    return (chars + padding) / 4 * 3 - padding;
  }
  std::string body = part.body;
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
  return static_cast<std::int64_t>(body.size());
}

std::vector<Part> split_multipart(const std::string& body, const std::string& boundary) {
  std::vector<Part> parts;
  const std::string delimiter = "--" + boundary;
  std::size_t pos = body.find(delimiter);
  while (pos != std::string::npos) {
    std::size_t start = body.find('\n', pos);
    if (start == std::string::npos) break;
    if (body.compare(pos + delimiter.size(), 2, "--") == 0) break;
    ++start;
    const std::size_t next = body.find(delimiter, start);
    std::size_t end = next == std::string::npos ? body.size() : next;
    parts.push_back(split_part(std::string_view(body).substr(start, end - start)));
    pos = next;
  }
  return parts;
}

struct Extracted {
  std::optional<std::string> text;
  std::optional<std::string> attachment_name;
  std::optional<std::int64_t> attachment_size;
};

void walk(const Part& part, Extracted& out, int depth) {
  const std::string type = header(part, "content-type");
  const std::string lowered = to_lower(type);
  if (lowered.starts_with("multipart/") && depth < 8) {
    const std::string boundary = header_param(type, "boundary");
    if (!boundary.empty()) {
      for (const auto& child : split_multipart(part.body, boundary)) walk(child, out, depth + 1);
      return;
    }
  }
  const std::string disposition = header(part, "content-disposition");
  std::string filename = header_param(disposition, "filename");
  if (filename.empty()) filename = header_param(type, "name");
  const bool is_attachment = to_lower(disposition).starts_with("attachment") || !filename.empty();
  if (is_attachment) {
    if (!out.attachment_name) {
      out.attachment_name = filename.empty() ? std::string("unnamed") : filename;
      out.attachment_size = decoded_size(part);
    }
    return;
  }
  if (!out.text && (lowered.empty() || lowered.starts_with("text/plain"))) out.text = part.body;
}

}  // namespace

corpus::EmailRecord parse_eml(std::string_view message, corpus::Label label, std::string_view fallback_id) {
  const Part top = split_part(message);
  corpus::EmailRecord r;
  r.to_addr = bare_address(header(top, "to"));
  if (r.to_addr.empty()) throw Error(Errc::MissingField, "to_addr");
  r.from_addr = bare_address(header(top, "from"));
  r.subject = header(top, "subject");
  r.message_id = bare_address(header(top, "message-id"));
  if (r.message_id.empty()) r.message_id = std::string(fallback_id);
  const std::string date = header(top, "date");
  if (date.empty()) throw Error(Errc::MissingField, "timestamp");
  const auto ts = parse_rfc2822(date);
  if (!ts) throw Error(Errc::BadTimestamp, "'" + date + "'");
  r.timestamp = *ts;
  r.label = label;

  Extracted ex;
  walk(top, ex, 0);
  if (ex.text) {
    std::string body = *ex.text;
    body.erase(std::remove(body.begin(), body.end(), '\r'), body.end());
    while (!body.empty() && body.back() == '\n') body.pop_back();
    r.body = body;
  }
  r.attachment_name = ex.attachment_name;
  r.attachment_size = ex.attachment_size;
  return r;
}

corpus::EmailRecord read_eml_file(const std::string& path, corpus::Label label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_eml(ss.str(), label, std::filesystem::path(path).filename().string());
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

std::vector<corpus::EmailRecord> read_eml_directory(const std::string& dir, corpus::Label label) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && to_lower(entry.path().extension().string()) == ".eml")
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<corpus::EmailRecord> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(read_eml_file(p, label));
  return out;
}

}  // namespace spearsift::eml
