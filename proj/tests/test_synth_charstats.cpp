#include <cmath>
#include <set>

#include "doctest.h"
#include "spearsift/charstats.hpp"
#include "spearsift/error.hpp"
#include "spearsift/eval/metrics.hpp"
#include "spearsift/featureset.hpp"
#include "spearsift/stylometry.hpp"
#include "spearsift/synth.hpp"

using namespace spearsift;
using corpus::Label;

namespace {

synth::Moments sample_moments(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / double(v.size() - 1))};
}

synth::SynthConfig small_config(std::uint64_t seed) {
  auto c = synth::default_config();
  c.n_spear = 300;
  c.n_spam = 300;
  c.n_benign = 300;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("distribution fitters reproduce the requested moments") {
  const auto tn = synth::fit_truncated_normal({25.48, 16.03}, 4.5);
  CHECK(synth::truncated_normal_mean(tn) == doctest::Approx(25.48).epsilon(1e-6));
  CHECK(synth::truncated_normal_sd(tn) == doctest::Approx(16.03).epsilon(1e-6));
  const auto ln = synth::fit_lognormal({285.0, 531.0});
  CHECK(std::exp(ln.mu + ln.sigma * ln.sigma / 2) == doctest::Approx(285.0).epsilon(1e-9));
  const auto bt = synth::fit_scaled_beta({158.68, 164.31}, 500.0);
  const double m = bt.a / (bt.a + bt.b);
  CHECK(m * 500 == doctest::Approx(158.68).epsilon(1e-9));
  CHECK(std::sqrt(bt.a * bt.b / ((bt.a + bt.b) * (bt.a + bt.b) * (bt.a + bt.b + 1))) * 500 ==
        doctest::Approx(164.31).epsilon(1e-9));
}

TEST_CASE("synthetic attachments follow the label models") {
  auto c = synth::default_config();
  c.n_spear = 10000;
  c.n_spam = 6000;
  c.n_benign = 0;
  c.seed = 99;
  const auto corpus = synth::generate_corpus(c);
  for (auto label : {Label::Spear, Label::Spam}) {
    std::vector<double> names, sizes;
    for (const auto& e : corpus.emails) {
      if (e.label != label) continue;
      REQUIRE(e.attachment_name.has_value());
      names.push_back(double(stylometry::char_count(*e.attachment_name)));
      sizes.push_back(double(*e.attachment_size) / 1024.0);
    }
    const auto& model = c.model(label);
    const auto nm = sample_moments(names), sz = sample_moments(sizes);
    CHECK(std::abs(nm.mean - model.name_length.mean) < 0.05 * model.name_length.mean);
    if (label == Label::Spear) CHECK(std::abs(nm.mean - 25.48) <= 1.0);
    CHECK(std::abs(nm.sd - model.name_length.sd) < 0.1 * model.name_length.sd);
    CHECK(std::abs(sz.mean - model.size_kb.mean) < 0.15 * model.size_kb.mean);
  }
}

TEST_CASE("synthetic corpus is deterministic, unique and well-formed") {
  const auto a = synth::generate_corpus(small_config(5));
  const auto b = synth::generate_corpus(small_config(5));
  CHECK(a.emails == b.emails);
  CHECK(a.profiles == b.profiles);
  CHECK(synth::generate_corpus(small_config(6)).emails != a.emails);
  CHECK(a.emails.size() == 900);
  std::set<std::string> recipients;
  for (const auto& e : a.emails) {
    recipients.insert(e.to_addr);
    CHECK_NOTHROW(corpus::extract_name(e.to_addr));
    CHECK(corpus::parse_email_record(corpus::format_email_record(e)) == e);
    CHECK(e.timestamp >= *parse_iso8601("2009-01-01T00:00:00Z"));
    CHECK(e.timestamp <= *parse_iso8601("2012-11-30T00:00:00Z"));
    CHECK(e.body.has_value() == (e.label != Label::Spam));
    CHECK(e.attachment_name.has_value() == (e.label != Label::Benign));
  }
  CHECK(recipients.size() == a.emails.size());
  const auto linked = corpus::link_profiles(a.emails, a.profiles);
  CHECK(linked.rows.size() == a.emails.size());
  CHECK(linked.dropped == 0);
}

TEST_CASE("noise-mode social features carry no signal") {
  auto c = synth::default_config();
  c.n_spear = 5000;
  c.n_spam = 5000;
  c.n_benign = 0;
  c.seed = 3;
  const auto corpus = synth::generate_corpus(c);
  const auto linked = corpus::link_profiles(corpus.emails, corpus.profiles);
  const auto m = featureset::build_matrix(linked, {featureset::FeatureSet::Social, featureset::Study::VsSpam});
  for (const auto& f : eval::info_gain_ranking(featureset::to_dataset(featureset::encode(m))))
    CHECK_MESSAGE(f.info_gain < 0.01, f.name);

  c.social_signal = synth::SocialSignal::Informative;
  const auto inf = synth::generate_corpus(c);
  const auto linked2 = corpus::link_profiles(inf.emails, inf.profiles);
  const auto m2 = featureset::build_matrix(linked2, {featureset::FeatureSet::Social, featureset::Study::VsSpam});
  const auto r2 = eval::info_gain_ranking(featureset::to_dataset(featureset::encode(m2)));
  CHECK(r2.front().info_gain > 0.01);
}

TEST_CASE("synth config overrides and validation") {
  const auto c = synth::parse_config(R"({"seed": 9, "n_spear": 10, "social_signal": "informative",
                                        "labels": {"spam": {"size_kb": {"mean": 100, "sd": 50}}}})");
  CHECK(c.seed == 9);
  CHECK(c.n_spear == 10);
  CHECK(c.social_signal == synth::SocialSignal::Informative);
  CHECK(c.model(Label::Spam).size_kb.mean == 100);
  for (const char* bad : {R"({"bogus": 1})", R"({"labels": {"ham": {}}})", R"({"social_signal": "loud"})", "[1]",
                          R"({"labels": {"spear": {"name_length": {"mean": -5, "sd": 1}}}})"}) {
    try {
      synth::validate(synth::parse_config(bad));
      FAIL(bad);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvalidConfig);
    }
  }
}

TEST_CASE("attachment_type") {
  CHECK(charstats::attachment_type("Report.PDF") == "pdf");
  CHECK(charstats::attachment_type("archive.tar.gz") == "gz");
  CHECK(charstats::attachment_type("README") == "(none)");
  CHECK(charstats::attachment_type("trailing.") == "(none)");
}

TEST_CASE("frequency tables") {
  std::vector<corpus::EmailRecord> recs(5);
  const char* names[] = {"a.zip", "b.zip", "a.zip", "c.pdf", nullptr};
  for (int i = 0; i < 5; ++i) {
    recs[i].subject = i < 3 ? "hello" : "bye";
    if (names[i]) recs[i].attachment_name = names[i];
    recs[i].body = "The cat. the dog";
  }
  const auto t = charstats::top_frequencies(recs, charstats::Field::AttachmentType, 10);
  CHECK(t.population == 4);
  REQUIRE(t.entries.size() == 2);
  CHECK(t.entries[0] == charstats::FrequencyEntry{"zip", 3, 75.0});
  CHECK(t.entries[1].value == "pdf");
  const auto n = charstats::top_frequencies(recs, "attachment_name", 1);
  REQUIRE(n.entries.size() == 1);
  CHECK(n.entries[0].value == "a.zip");
  const auto s = charstats::top_frequencies(recs, charstats::Field::Subject, 5, Execution::Serial);
  CHECK(s.entries[0].value == "hello");
  CHECK(s.entries[0].count == 3);
  const auto w = charstats::top_frequencies(recs, charstats::Field::BodyWord, 5);
  CHECK(w.population == 20);
  CHECK(w.entries[0] == charstats::FrequencyEntry{"the", 10, 50.0});
  CHECK(charstats::word_frequency({"The cat. the dog"}, 5, {"the"}).entries.size() == 2);
  for (auto f : {charstats::Field::AttachmentName, charstats::Field::AttachmentType, charstats::Field::Subject,
                 charstats::Field::BodyWord, charstats::Field::SubjectWord})
    CHECK(charstats::top_frequencies(recs, f, 3, Execution::Serial) ==
          charstats::top_frequencies(recs, f, 3, Execution::Parallel));
  try {
    charstats::top_frequencies(recs, charstats::Field::Subject, 0);
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OutOfRange);
  }
  try {
    charstats::top_frequencies(recs, "colour", 3);
    FAIL("expected UnknownField");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownField);
  }
}

TEST_CASE("timeline is zero-filled and conserves counts") {
  std::vector<corpus::EmailRecord> recs(3);
  recs[0].timestamp = *parse_iso8601("2011-01-15T00:00:00Z");
  recs[1].timestamp = *parse_iso8601("2011-04-02T00:00:00Z");
  recs[2].timestamp = *parse_iso8601("2011-04-20T00:00:00Z");
  recs[2].label = Label::Spear;
  const auto t = charstats::timeline(recs, std::nullopt);
  REQUIRE(t.buckets.size() == 4);
  CHECK(t.buckets[0].count == 1);
  CHECK(t.buckets[1].count == 0);
  CHECK(t.buckets[3].count == 2);
  CHECK(charstats::timeline(recs, Label::Spear).buckets.size() == 1);
  CHECK(charstats::format_timeline(t).find("2011-02\t0") != std::string::npos);
}
