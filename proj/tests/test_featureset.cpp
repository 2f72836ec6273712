#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "spearsift/error.hpp"
#include "spearsift/featureset.hpp"

using namespace spearsift;
using namespace spearsift::featureset;
using corpus::Label;

namespace {

corpus::LinkedRow make_row(std::string id, Label label, bool attachment, bool body, std::string country) {
  corpus::LinkedRow row;
  auto& e = row.email;
  e.message_id = std::move(id);
  e.from_addr = "x@evil.example";
  e.to_addr = "john.doe@acme.com";
  e.subject = "RE: Issues with Phone for help";
  if (body) e.body = "Please verify your account.";
  if (attachment) {
    e.attachment_name = "invoice.zip";
    e.attachment_size = 2048;
  }
  e.timestamp = *parse_iso8601("2011-01-01T00:00:00Z");
  e.label = label;
  profiles::ProfileRecord p;
  p.name = {"john", "doe"};
  p.company = "acme";
  p.country = std::move(country);
  p.num_connections = 120;
  p.summary = "great engineer";
  p.headline = "Engineering Manager";
  row.profile = p;
  return row;
}

}  // namespace

TEST_CASE("selector cardinalities") {
  auto count = [](FeatureSet set, Study study) { return selected_slots({set, study}).size(); };
  CHECK(count(FeatureSet::Subject, Study::VsSpam) == 7);
  CHECK(count(FeatureSet::Attachment, Study::VsSpam) == 2);
  CHECK(count(FeatureSet::EmailAll, Study::VsSpam) == 9);
  CHECK(count(FeatureSet::Social, Study::VsSpam) == 9);
  CHECK(count(FeatureSet::EmailPlusSocial, Study::VsSpam) == 18);
  CHECK(count(FeatureSet::Subject, Study::VsBenign) == 7);
  CHECK(count(FeatureSet::Body, Study::VsBenign) == 9);
  CHECK(count(FeatureSet::EmailAll, Study::VsBenign) == 16);
  CHECK(count(FeatureSet::Social, Study::VsBenign) == 9);
  CHECK(count(FeatureSet::EmailPlusSocial, Study::VsBenign) == 25);
  CHECK(count(FeatureSet::Subject, Study::VsMix) == 7);
  CHECK(count(FeatureSet::Social, Study::VsMix) == 9);
  CHECK(count(FeatureSet::EmailPlusSocial, Study::VsMix) == 16);
  for (auto [set, study] : {std::pair{FeatureSet::Body, Study::VsSpam}, std::pair{FeatureSet::Attachment, Study::VsBenign},
                            std::pair{FeatureSet::Body, Study::VsMix}}) {
    try {
      selected_slots({set, study});
      FAIL("expected InvalidSelector");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvalidSelector);
    }
  }
}

TEST_CASE("slot names round-trip and slots are ordered") {
  for (Slot s : all_slots()) CHECK(slot_from_name(slot_name(s)) == s);
  CHECK_FALSE(slot_from_name("nope").has_value());
  const auto slots = selected_slots({FeatureSet::EmailPlusSocial, Study::VsBenign});
  CHECK(std::is_sorted(slots.begin(), slots.end()));
  for (auto study : {Study::VsSpam, Study::VsBenign, Study::VsMix}) {
    CHECK(parse_study(to_string(study)) == study);
    for (auto set : study_feature_sets(study)) {
      CHECK(parse_feature_set(to_string(set)) == set);
      CHECK_NOTHROW(selected_slots({set, study}));
    }
  }
}

TEST_CASE("study membership") {
  CHECK(study_includes(Study::VsSpam, Label::Spear));
  CHECK(study_includes(Study::VsSpam, Label::Spam));
  CHECK_FALSE(study_includes(Study::VsSpam, Label::Benign));
  CHECK_FALSE(study_includes(Study::VsBenign, Label::Spam));
  CHECK(study_includes(Study::VsMix, Label::Benign));
}

TEST_CASE("assemble populates exactly the selected slots") {
  const auto row = make_row("1", Label::Spear, true, false, "France");
  const Selector sel{FeatureSet::EmailPlusSocial, Study::VsSpam};
  const auto v = assemble(row, sel);
  const auto slots = selected_slots(sel);
  for (Slot s : all_slots()) {
    const bool selected = std::find(slots.begin(), slots.end(), s) != slots.end();
    CHECK(is_available(v[s]) == selected);
  }
  CHECK(std::get<double>(v[Slot::SubjectNumWords]) == 6.0);
  CHECK(std::get<bool>(v[Slot::SubjectIsReply]));
  CHECK(std::get<std::string>(v[Slot::Location]) == "France");
  CHECK(std::get<double>(v[Slot::JobLevel]) == 5.0);
  CHECK(std::get<double>(v[Slot::JobType]) == 1.0);
  CHECK(v.positive);

  auto no_profile = row;
  no_profile.profile.reset();
  try {
    assemble(no_profile, sel);
    FAIL("expected UnavailableFeature");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnavailableFeature);
    CHECK(std::string(e.what()).find("Location") != std::string::npos);
  }
  CHECK_NOTHROW(assemble(no_profile, {FeatureSet::EmailAll, Study::VsSpam}));
}

TEST_CASE("build_matrix filters by study and availability") {
  corpus::LinkedDataset data;
  data.rows = {make_row("1", Label::Spear, true, true, "France"), make_row("2", Label::Spam, true, false, "India"),
               make_row("3", Label::Benign, false, true, "France"), make_row("4", Label::Spam, false, false, "Peru")};
  BuildStats stats;
  const auto m = build_matrix(data, {FeatureSet::EmailAll, Study::VsSpam}, Execution::Parallel, &stats);
  CHECK(m.rows.size() == 2);
  CHECK(m.positives == 1);
  CHECK(m.negatives == 1);
  CHECK(stats.considered == 3);
  CHECK(stats.rejected == 1);
  CHECK(stats.rejected_by_slot.at("Attachment_nameLength") == 1);
  const auto serial = build_matrix(data, {FeatureSet::EmailAll, Study::VsSpam}, Execution::Serial);
  CHECK(serial.rows == m.rows);
}

TEST_CASE("encode: booleans, first-seen dictionaries, idempotence") {
  corpus::LinkedDataset data;
  data.rows = {make_row("1", Label::Spear, true, true, "France"), make_row("2", Label::Spam, true, false, "India"),
               make_row("3", Label::Spam, true, false, "France")};
  const auto m = build_matrix(data, {FeatureSet::EmailPlusSocial, Study::VsSpam});
  const auto e = encode(m);
  CHECK(e.encoded);
  const auto loc = std::find_if(e.schema.begin(), e.schema.end(), [](auto& c) { return c.slot == Slot::Location; });
  REQUIRE(loc != e.schema.end());
  CHECK(loc->dictionary == std::vector<std::string>{"France", "India"});
  CHECK(std::get<double>(e.rows[0][Slot::Location]) == 0.0);
  CHECK(std::get<double>(e.rows[1][Slot::Location]) == 1.0);
  CHECK(std::get<double>(e.rows[2][Slot::Location]) == 0.0);
  CHECK(std::get<double>(e.rows[0][Slot::SubjectIsReply]) == 1.0);
  const auto again = encode(e);
  CHECK(again.rows == e.rows);
  CHECK(again.schema == e.schema);

  const auto fixed = encode_with(m, {{"Location", {"India"}}});
  CHECK(std::isnan(std::get<double>(fixed.rows[0][Slot::Location])));
  CHECK(std::get<double>(fixed.rows[1][Slot::Location]) == 0.0);

  DesignMatrix empty;
  empty.selector = {FeatureSet::Subject, Study::VsSpam};
  try {
    encode(empty);
    FAIL("expected EmptyMatrix");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::EmptyMatrix);
  }

  const auto ds = to_dataset(e);
  CHECK(ds.num_attributes() == 18);
  CHECK(ds.num_rows() == 3);
  CHECK(ds.class_counts()[1] == 1);
}

TEST_CASE("matrix files round-trip") {
  corpus::LinkedDataset data;
  data.rows = {make_row("1", Label::Spear, true, true, "France"), make_row("2", Label::Benign, false, true, "India")};
  // Files hold raw values; encoding is redone on load.
  const auto m = build_matrix(data, {FeatureSet::EmailPlusSocial, Study::VsBenign});
  const auto path = (std::filesystem::temp_directory_path() / "spearsift_matrix.tsv").string();
  write_matrix(path, m);
  const auto back = read_matrix(path);
  CHECK(back.schema == m.schema);
  CHECK(back.rows == m.rows);
  CHECK(back.positives == m.positives);
  write_matrix(path, encode(m));
  CHECK(read_matrix(path).rows == m.rows);
  CHECK(encode(read_matrix(path)).rows == encode(m).rows);
  std::filesystem::remove(path);
  std::filesystem::remove(schema_path(path));
}
