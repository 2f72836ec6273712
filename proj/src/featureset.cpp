#include "spearsift/featureset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "spearsift/error.hpp"
#include "spearsift/stylometry.hpp"

namespace spearsift::featureset {

namespace {

using nlohmann::json;

struct SlotInfo {
  Slot slot;
  std::string_view name;
  SlotKind kind;
  SlotGroup group;
};

constexpr std::array<SlotInfo, kSlotCount> kSlots = {{
    {Slot::SubjectIsReply, "Subject_IsReply", SlotKind::Boolean, SlotGroup::Subject},
    {Slot::SubjectHasBank, "Subject_hasBank", SlotKind::Boolean, SlotGroup::Subject},
    {Slot::SubjectNumWords, "Subject_numWords", SlotKind::Numeric, SlotGroup::Subject},
    {Slot::SubjectNumChars, "Subject_numChars", SlotKind::Numeric, SlotGroup::Subject},
    {Slot::SubjectRichness, "Subject_richness", SlotKind::Numeric, SlotGroup::Subject},
    {Slot::SubjectIsForwarded, "Subject_isForwarded", SlotKind::Boolean, SlotGroup::Subject},
    {Slot::SubjectHasVerify, "Subject_hasVerify", SlotKind::Boolean, SlotGroup::Subject},
    {Slot::AttachmentNameLength, "Attachment_nameLength", SlotKind::Numeric, SlotGroup::Attachment},
    {Slot::AttachmentSize, "Attachment_size", SlotKind::Numeric, SlotGroup::Attachment},
    {Slot::BodyNumUniqueWords, "Body_numUniqueWords", SlotKind::Numeric, SlotGroup::Body},
    {Slot::BodyNumNewlines, "Body_numNewlines", SlotKind::Numeric, SlotGroup::Body},
    {Slot::BodyNumWords, "Body_numWords", SlotKind::Numeric, SlotGroup::Body},
    {Slot::BodyNumChars, "Body_numChars", SlotKind::Numeric, SlotGroup::Body},
    {Slot::BodyRichness, "Body_richness", SlotKind::Numeric, SlotGroup::Body},
    {Slot::BodyHasAttach, "Body_hasAttach", SlotKind::Boolean, SlotGroup::Body},
    {Slot::BodyNumFunctionWords, "Body_numFunctionWords", SlotKind::Numeric, SlotGroup::Body},
    {Slot::BodyVerifyYourAccount, "Body_verifyYourAccount", SlotKind::Boolean, SlotGroup::Body},
    {Slot::BodyHasSuspension, "Body_hasSuspension", SlotKind::Boolean, SlotGroup::Body},
    {Slot::Location, "Location", SlotKind::Nominal, SlotGroup::Social},
    {Slot::NumConnections, "numConnections", SlotKind::Numeric, SlotGroup::Social},
    {Slot::SummaryLength, "SummaryLength", SlotKind::Numeric, SlotGroup::Social},
    {Slot::SummaryNumChars, "SummaryNumChars", SlotKind::Numeric, SlotGroup::Social},
    {Slot::SummaryUniqueWords, "SummaryUniqueWords", SlotKind::Numeric, SlotGroup::Social},
    {Slot::SummaryNumWords, "SummaryNumWords", SlotKind::Numeric, SlotGroup::Social},
    {Slot::SummaryRichness, "SummaryRichness", SlotKind::Numeric, SlotGroup::Social},
    {Slot::JobLevel, "jobLevel", SlotKind::Numeric, SlotGroup::Social},
    {Slot::JobType, "jobType", SlotKind::Numeric, SlotGroup::Social},
}};

const SlotInfo& info(Slot s) { return kSlots[static_cast<std::size_t>(s)]; }

std::vector<Slot> slots_in(std::initializer_list<SlotGroup> groups) {
  std::vector<Slot> out;
  for (const auto& si : kSlots)
    if (std::find(groups.begin(), groups.end(), si.group) != groups.end()) out.push_back(si.slot);
  return out;
}

double as_double(const FeatureValue& v) {
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  throw Error(Errc::MalformedRecord, "value is not numeric");
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string sanitize_cell(const std::string& s) {
  std::string out = s;
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

std::string_view kind_name(SlotKind k) {
  switch (k) {
    case SlotKind::Numeric: return "numeric";
    case SlotKind::Boolean: return "boolean";
    case SlotKind::Nominal: return "nominal";
  }
  return "numeric";
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cells;
}

double parse_number(const std::string& cell, const std::string& where) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw Error(Errc::MalformedRecord, where + ": not a number: '" + cell + "'");
  return v;
}

}  // namespace

std::string_view slot_name(Slot slot) { return info(slot).name; }

std::optional<Slot> slot_from_name(std::string_view name) {
  for (const auto& si : kSlots)
    if (si.name == name) return si.slot;
  return std::nullopt;
}

SlotKind slot_kind(Slot slot) { return info(slot).kind; }
SlotGroup slot_group(Slot slot) { return info(slot).group; }

std::string_view to_string(SlotGroup group) {
  switch (group) {
    case SlotGroup::Subject: return "subject";
    case SlotGroup::Attachment: return "attachment";
    case SlotGroup::Body: return "body";
    case SlotGroup::Social: return "social";
  }
  return "subject";
}

const std::array<Slot, kSlotCount>& all_slots() {
  static const std::array<Slot, kSlotCount> slots = [] {
    std::array<Slot, kSlotCount> s{};
    for (std::size_t i = 0; i < kSlotCount; ++i) s[i] = kSlots[i].slot;
    return s;
  }();
  return slots;
}

std::string_view to_string(Study study) {
  switch (study) {
    case Study::VsSpam: return "vs-spam";
    case Study::VsBenign: return "vs-benign";
    case Study::VsMix: return "vs-mix";
  }
  return "vs-spam";
}

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::Subject: return "subject";
    case FeatureSet::Attachment: return "attachment";
    case FeatureSet::Body: return "body";
    case FeatureSet::EmailAll: return "email";
    case FeatureSet::Social: return "social";
    case FeatureSet::EmailPlusSocial: return "all";
  }
  return "all";
}

std::optional<Study> parse_study(std::string_view text) {
  for (auto s : {Study::VsSpam, Study::VsBenign, Study::VsMix})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

std::optional<FeatureSet> parse_feature_set(std::string_view text) {
  for (auto f : {FeatureSet::Subject, FeatureSet::Attachment, FeatureSet::Body, FeatureSet::EmailAll,
                 FeatureSet::Social, FeatureSet::EmailPlusSocial})
    if (to_string(f) == text) return f;
  return std::nullopt;
}

std::vector<Slot> selected_slots(const Selector& selector) {
  // Email groups available in both classes of each study.
  std::vector<SlotGroup> email;
  switch (selector.study) {
    case Study::VsSpam: email = {SlotGroup::Subject, SlotGroup::Attachment}; break;
    case Study::VsBenign: email = {SlotGroup::Subject, SlotGroup::Body}; break;
    case Study::VsMix: email = {SlotGroup::Subject}; break;
  }
  auto require = [&](SlotGroup g) {
    if (std::find(email.begin(), email.end(), g) == email.end())
      throw Error(Errc::InvalidSelector, std::string(to_string(g)) + " features are not available in " +
                                             std::string(to_string(selector.study)));
  };
  switch (selector.set) {
    case FeatureSet::Subject: return slots_in({SlotGroup::Subject});
    case FeatureSet::Attachment: require(SlotGroup::Attachment); return slots_in({SlotGroup::Attachment});
    case FeatureSet::Body: require(SlotGroup::Body); return slots_in({SlotGroup::Body});
    case FeatureSet::Social: return slots_in({SlotGroup::Social});
    case FeatureSet::EmailAll:
    case FeatureSet::EmailPlusSocial: {
      std::vector<Slot> out;
      for (const auto& si : kSlots) {
        const bool in_email = std::find(email.begin(), email.end(), si.group) != email.end();
        const bool social = selector.set == FeatureSet::EmailPlusSocial && si.group == SlotGroup::Social;
        if (in_email || social) out.push_back(si.slot);
      }
      return out;
    }
  }
  return {};
}

std::vector<FeatureSet> study_feature_sets(Study study) {
  switch (study) {
    case Study::VsSpam:
      return {FeatureSet::Subject, FeatureSet::Attachment, FeatureSet::EmailAll, FeatureSet::Social,
              FeatureSet::EmailPlusSocial};
    case Study::VsBenign:
      return {FeatureSet::Subject, FeatureSet::Body, FeatureSet::EmailAll, FeatureSet::Social,
              FeatureSet::EmailPlusSocial};
    case Study::VsMix:
      return {FeatureSet::Subject, FeatureSet::Social, FeatureSet::EmailPlusSocial};
  }
  return {};
}

bool study_includes(Study study, corpus::Label label) {
  using corpus::Label;
  switch (study) {
    case Study::VsSpam: return label != Label::Benign;
    case Study::VsBenign: return label != Label::Spam;
    case Study::VsMix: return true;
  }
  return false;
}

FeatureVector extract_all(const corpus::LinkedRow& row) {
  FeatureVector v;
  const auto& email = row.email;
  v.positive = email.label == corpus::Label::Spear;
  v.row_id = email.message_id;

  const auto s = stylometry::subject_features(email.subject);
  v[Slot::SubjectIsReply] = s.is_reply;
  v[Slot::SubjectHasBank] = s.has_bank;
  v[Slot::SubjectNumWords] = static_cast<double>(s.num_words);
  v[Slot::SubjectNumChars] = static_cast<double>(s.num_chars);
  v[Slot::SubjectRichness] = s.richness;
  v[Slot::SubjectIsForwarded] = s.is_forwarded;
  v[Slot::SubjectHasVerify] = s.has_verify;

  const auto a = stylometry::attachment_features(email.attachment_name, email.attachment_size);
  if (a.name_available) v[Slot::AttachmentNameLength] = static_cast<double>(a.name_length);
  if (a.size_available) v[Slot::AttachmentSize] = static_cast<double>(a.size_bytes);

  if (email.body) {
    const auto b = stylometry::body_features(*email.body);
    v[Slot::BodyNumUniqueWords] = static_cast<double>(b.num_unique_words);
    v[Slot::BodyNumNewlines] = static_cast<double>(b.num_newlines);
    v[Slot::BodyNumWords] = static_cast<double>(b.num_words);
    v[Slot::BodyNumChars] = static_cast<double>(b.num_chars);
    v[Slot::BodyRichness] = b.richness;
    v[Slot::BodyHasAttach] = b.has_attach;
    v[Slot::BodyNumFunctionWords] = static_cast<double>(b.num_function_words);
    v[Slot::BodyVerifyYourAccount] = b.verify_your_account;
    v[Slot::BodyHasSuspension] = b.has_suspension;
  }

  if (row.profile) {
    const auto f = profiles::social_features(*row.profile);
    v[Slot::Location] = f.location;
    v[Slot::NumConnections] = static_cast<double>(f.num_connections);
    v[Slot::SummaryLength] = static_cast<double>(f.summary_length);
    v[Slot::SummaryNumChars] = static_cast<double>(f.summary_num_chars);
    v[Slot::SummaryUniqueWords] = static_cast<double>(f.summary_unique_words);
    v[Slot::SummaryNumWords] = static_cast<double>(f.summary_num_words);
    v[Slot::SummaryRichness] = f.summary_richness;
    v[Slot::JobLevel] = static_cast<double>(f.job_level);
    v[Slot::JobType] = static_cast<double>(f.job_type);
  }
  return v;
}

FeatureVector assemble(const corpus::LinkedRow& row, const Selector& selector) {
  const auto slots = selected_slots(selector);
  FeatureVector all = extract_all(row);
  FeatureVector out;
  out.positive = all.positive;
  out.row_id = all.row_id;
  for (Slot s : slots) {
    if (!is_available(all[s]))
      throw Error(Errc::UnavailableFeature, std::string(slot_name(s)) + " (" +
                                                std::string(to_string(slot_group(s))) + ")");
    out[s] = std::move(all[s]);
  }
  return out;
}

DesignMatrix build_matrix(const corpus::LinkedDataset& data, const Selector& selector, Execution exec,
                          BuildStats* stats) {
  const auto slots = selected_slots(selector);
  std::vector<const corpus::LinkedRow*> eligible;
  for (const auto& r : data.rows)
    if (study_includes(selector.study, r.email.label)) eligible.push_back(&r);

  const auto n = static_cast<std::ptrdiff_t>(eligible.size());
  std::vector<std::optional<FeatureVector>> assembled(eligible.size());
  std::vector<std::string> missing(eligible.size());
  auto one = [&](std::ptrdiff_t i) {
    FeatureVector all = extract_all(*eligible[i]);
    for (Slot s : slots) {
      if (!is_available(all[s])) {
        missing[i] = std::string(slot_name(s));
        return;
      }
    }
    FeatureVector v;
    v.positive = all.positive;
    v.row_id = std::move(all.row_id);
    for (Slot s : slots) v[s] = std::move(all[s]);
    assembled[i] = std::move(v);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  }

  DesignMatrix m;
  m.selector = selector;
  for (Slot s : slots) m.schema.push_back({s, slot_kind(s), {}});
  BuildStats local;
  local.considered = eligible.size();
  for (std::size_t i = 0; i < assembled.size(); ++i) {
    if (!assembled[i]) {
      ++local.rejected;
      ++local.rejected_by_slot[missing[i]];
      continue;
    }
    (assembled[i]->positive ? m.positives : m.negatives) += 1;
    m.rows.push_back(std::move(*assembled[i]));
  }
  if (stats) *stats = std::move(local);
  return m;
}

DesignMatrix encode(const DesignMatrix& matrix) {
  if (matrix.rows.empty()) throw Error(Errc::EmptyMatrix, "no rows to encode");
  DesignMatrix out = matrix;
  for (auto& col : out.schema) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < col.dictionary.size(); ++i) index.emplace(col.dictionary[i], i);
    for (auto& row : out.rows) {
      auto& v = row[col.slot];
      if (!is_available(v))
        throw Error(Errc::UnavailableFeature, std::string(slot_name(col.slot)) + " in row " + row.row_id);
      if (col.kind == SlotKind::Nominal) {
        if (auto s = std::get_if<std::string>(&v)) {
          auto [it, inserted] = index.emplace(*s, col.dictionary.size());
          if (inserted) col.dictionary.push_back(*s);
          v = static_cast<double>(it->second);
        }
      } else if (auto b = std::get_if<bool>(&v)) {
        v = *b ? 1.0 : 0.0;
      }
    }
  }
  out.encoded = true;
  return out;
}

DesignMatrix encode_with(const DesignMatrix& matrix,
                         const std::map<std::string, std::vector<std::string>>& dictionaries) {
  DesignMatrix raw = matrix;
  if (matrix.encoded) {
    // Decode nominal codes back to strings first.
    for (const auto& col : raw.schema) {
      if (col.kind != SlotKind::Nominal) continue;
      for (auto& row : raw.rows) {
        if (auto d = std::get_if<double>(&row[col.slot]))
          row[col.slot] = col.dictionary.at(static_cast<std::size_t>(*d));
      }
    }
  }
  for (auto& col : raw.schema) {
    if (col.kind != SlotKind::Nominal) continue;
    auto it = dictionaries.find(std::string(slot_name(col.slot)));
    col.dictionary = it == dictionaries.end() ? std::vector<std::string>{} : it->second;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < col.dictionary.size(); ++i) index.emplace(col.dictionary[i], i);
    for (auto& row : raw.rows) {
      if (auto s = std::get_if<std::string>(&row[col.slot])) {
        auto found = index.find(*s);
        row[col.slot] = found == index.end() ? std::nan("") : static_cast<double>(found->second);
      }
    }
  }
  // Remaining booleans.
  for (auto& row : raw.rows)
    for (auto& v : row.values)
      if (auto b = std::get_if<bool>(&v)) v = *b ? 1.0 : 0.0;
  raw.encoded = true;
  return raw;
}

DesignMatrix restrict_to(const DesignMatrix& matrix, const std::vector<Slot>& slots) {
  DesignMatrix out;
  out.selector = matrix.selector;
  out.encoded = matrix.encoded;
  out.positives = matrix.positives;
  out.negatives = matrix.negatives;
  for (Slot s : slots) {
    auto it = std::find_if(matrix.schema.begin(), matrix.schema.end(), [s](const SlotSchema& c) { return c.slot == s; });
    if (it == matrix.schema.end())
      throw Error(Errc::UnavailableFeature, std::string(slot_name(s)) + " is not in the matrix");
    out.schema.push_back(*it);
  }
  std::sort(out.schema.begin(), out.schema.end(),
            [](const SlotSchema& a, const SlotSchema& b) { return a.slot < b.slot; });
  out.rows.reserve(matrix.rows.size());
  for (const auto& row : matrix.rows) {
    FeatureVector v;
    v.positive = row.positive;
    v.row_id = row.row_id;
    for (const auto& col : out.schema) v[col.slot] = row[col.slot];
    out.rows.push_back(std::move(v));
  }
  return out;
}

learn::Dataset to_dataset(const DesignMatrix& encoded) {
  if (!encoded.encoded) throw Error(Errc::MalformedRecord, "matrix must be encoded first");
  std::vector<learn::Attribute> attrs;
  for (const auto& col : encoded.schema) {
    learn::Attribute a;
    a.name = std::string(slot_name(col.slot));
    switch (col.kind) {
      case SlotKind::Numeric: a.kind = learn::AttributeKind::Numeric; break;
      case SlotKind::Boolean:
        a.kind = learn::AttributeKind::Nominal;
        a.values = {"false", "true"};
        break;
      case SlotKind::Nominal:
        a.kind = learn::AttributeKind::Nominal;
        a.values = col.dictionary;
        break;
    }
    attrs.push_back(std::move(a));
  }
  learn::Dataset data(std::move(attrs));
  std::vector<double> buf(encoded.schema.size());
  for (const auto& row : encoded.rows) {
    for (std::size_t i = 0; i < encoded.schema.size(); ++i) buf[i] = as_double(row[encoded.schema[i].slot]);
    data.add_row(buf, row.positive);
  }
  return data;
}

std::string schema_path(const std::string& matrix_path) { return matrix_path + ".schema.json"; }

void write_matrix(const std::string& path, const DesignMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << "row_id\tis_spear";
  for (const auto& col : matrix.schema) out << '\t' << slot_name(col.slot);
  out << '\n';
  for (const auto& row : matrix.rows) {
    out << sanitize_cell(row.row_id) << '\t' << (row.positive ? 1 : 0);
    for (const auto& col : matrix.schema) {
      out << '\t';
      const auto& v = row[col.slot];
      if (col.kind == SlotKind::Nominal) {
        if (auto s = std::get_if<std::string>(&v)) out << sanitize_cell(*s);
        else if (auto d = std::get_if<double>(&v)) out << sanitize_cell(col.dictionary.at(static_cast<std::size_t>(*d)));
      } else if (col.kind == SlotKind::Boolean) {
        out << (as_double(v) != 0.0 ? 1 : 0);
      } else {
        out << format_number(as_double(v));
      }
    }
    out << '\n';
  }

  json schema = json::object();
  schema["format"] = "spearsift-matrix";
  schema["version"] = 1;
  schema["study"] = std::string(to_string(matrix.selector.study));
  schema["features"] = std::string(to_string(matrix.selector.set));
  schema["rows"] = matrix.rows.size();
  schema["positives"] = matrix.positives;
  schema["negatives"] = matrix.negatives;
  json cols = json::array();
  for (const auto& col : matrix.schema) {
    json c = {{"name", std::string(slot_name(col.slot))}, {"kind", std::string(kind_name(col.kind))}};
    cols.push_back(c);
  }
  schema["slots"] = cols;
  std::ofstream side(schema_path(path));
  if (!side) throw Error(Errc::Io, "cannot write " + schema_path(path));
  side << schema.dump(2) << '\n';
}

DesignMatrix read_matrix(const std::string& path) {
  std::ifstream side(schema_path(path));
  if (!side) throw Error(Errc::Io, "cannot open " + schema_path(path));
  json schema;
  try {
    side >> schema;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedRecord, schema_path(path) + ": " + e.what());
  }
  DesignMatrix m;
  auto study = parse_study(schema.value("study", ""));
  auto set = parse_feature_set(schema.value("features", ""));
  if (!study || !set) throw Error(Errc::MalformedRecord, schema_path(path) + ": bad study or feature set");
  m.selector = {*set, *study};
  for (const auto& c : schema.at("slots")) {
    auto slot = slot_from_name(c.at("name").get<std::string>());
    if (!slot) throw Error(Errc::MalformedRecord, "unknown slot " + c.at("name").get<std::string>());
    m.schema.push_back({*slot, slot_kind(*slot), {}});
  }

  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::MalformedRecord, path + ": missing header");
  const auto header = split_tabs(line);
  if (header.size() != m.schema.size() + 2) throw Error(Errc::MalformedRecord, path + ": header does not match schema");
  for (std::size_t i = 0; i < m.schema.size(); ++i)
    if (header[i + 2] != slot_name(m.schema[i].slot))
      throw Error(Errc::MalformedRecord, path + ": column " + header[i + 2] + " does not match schema");

  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto cells = split_tabs(line);
    if (cells.size() != header.size()) throw Error(Errc::MalformedRecord, where + ": wrong number of cells");
    FeatureVector v;
    v.row_id = cells[0];
    v.positive = cells[1] == "1";
    for (std::size_t i = 0; i < m.schema.size(); ++i) {
      const auto& cell = cells[i + 2];
      switch (m.schema[i].kind) {
        case SlotKind::Nominal: v[m.schema[i].slot] = cell; break;
        case SlotKind::Boolean: v[m.schema[i].slot] = parse_number(cell, where) != 0.0; break;
        case SlotKind::Numeric: v[m.schema[i].slot] = parse_number(cell, where); break;
      }
    }
    (v.positive ? m.positives : m.negatives) += 1;
    m.rows.push_back(std::move(v));
  }
  return m;
}

}  // namespace spearsift::featureset
