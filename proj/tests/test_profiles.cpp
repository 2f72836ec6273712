#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "spearsift/error.hpp"
#include "spearsift/profiles.hpp"
#include "spearsift/rng.hpp"

using namespace spearsift;
using namespace spearsift::profiles;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

}  // namespace

TEST_CASE("parse_connections") {
  CHECK(parse_connections("500+") == 500);
  CHECK(parse_connections("137") == 137);
  CHECK(parse_connections("0") == 0);
  CHECK(parse_connections("500") == 500);
  CHECK(code_of([] { parse_connections("-5"); }) == Errc::BadConnections);
  CHECK(code_of([] { parse_connections("501"); }) == Errc::BadConnections);
  CHECK(code_of([] { parse_connections("lots"); }) == Errc::BadConnections);
  CHECK(code_of([] { parse_connections("600+"); }) == Errc::BadConnections);
}

TEST_CASE("job_level takes the maximum keyword") {
  CHECK(job_level(std::string("Customer Service Executive")) == 7);
  CHECK(job_level(std::string("Senior Director and Engineering Manager")) == 6);
  CHECK(job_level(std::nullopt) == 0);
  CHECK(job_level(std::string("Astronaut")) == 0);
  CHECK(job_level(std::string("Support intern")) == 2);
  CHECK(job_level(std::string("Temporary staff")) == 3);
  CHECK(job_level(std::string("IC engineer")) == 4);
  // IC is case-sensitive and token-level; "service" must not fire.
  CHECK(job_level(std::string("ic engineer")) == 0);
  CHECK(job_level(std::string("Service desk")) == 0);
}

TEST_CASE("job_type takes the minimum keyword found") {
  CHECK(job_type(std::string("QA Engineering Lead")) == 1);
  CHECK(job_type(std::string("Head of Legal")) == 7);
  CHECK(job_type(std::string("Astronaut")) == 0);
  CHECK(job_type(std::nullopt) == 0);
  CHECK(job_type(std::string("Research scientist")) == 2);
  CHECK(job_type(std::string("Information Technology specialist")) == 4);
  CHECK(job_type(std::string("IT admin")) == 4);
  CHECK(job_type(std::string("it admin")) == 0);
  CHECK(job_type(std::string("Operations")) == 5);
  CHECK(job_type(std::string("Human Resources partner")) == 6);
  CHECK(job_type(std::string("HR partner")) == 6);
  CHECK(job_type(std::string("Finance")) == 8);
  CHECK(job_type(std::string("Sales")) == 9);
  CHECK(job_type(std::string("Marketing lead")) == 9);
}

TEST_CASE("job level/type are max/min under concatenation") {
  const char* parts[] = {"Support", "Intern", "Temporary", "IC", "Manager", "Director", "Executive", "Engineering",
                         "Research", "QA", "IT", "Operations", "HR", "Legal", "Finance", "Sales", "Marketing",
                         "Astronaut", "Human Resources", "Information Technology"};
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const std::string a = parts[rng.below(20)], b = parts[rng.below(20)];
    const std::string ab = a + " / " + b;
    CHECK(job_level(ab) == std::max(job_level(a), job_level(b)));
    const int ta = job_type(a), tb = job_type(b);
    const int expected = ta == 0 ? tb : tb == 0 ? ta : std::min(ta, tb);
    CHECK(job_type(ab) == expected);
  }
}

TEST_CASE("social features of summaries") {
  ProfileRecord p;
  p.summary = "great engineer";
  const auto f = social_features(p);
  CHECK(f.summary_length == 14);
  CHECK(f.summary_num_chars == 13);
  CHECK(f.summary_num_words == 2);
  CHECK(f.summary_unique_words == 2);
  CHECK(f.summary_richness == doctest::Approx(2.0 / 14.0));

  ProfileRecord none;
  const auto g = social_features(none);
  CHECK(g.summary_length == 0);
  CHECK(g.summary_num_chars == 0);
  CHECK(g.summary_num_words == 0);
  CHECK(g.summary_unique_words == 0);
  CHECK(g.summary_richness == 0.0);
  CHECK(g.location == "Unknown");
}

TEST_CASE("country extraction") {
  CHECK(extract_country("Paris, France") == "France");
  CHECK(extract_country("San Francisco Bay Area, California, USA") == "United States");
  CHECK(extract_country("London, UK") == "United Kingdom");
  CHECK(extract_country("Atlantis") == "Atlantis");
  ProfileRecord p;
  p.location_raw = "Paris, France";
  p.country = extract_country(p.location_raw);
  CHECK(social_features(p).location == "France");
}

TEST_CASE("summary richness stays in (0,1]") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    std::string s;
    const auto n = 1 + rng.below(20);
    for (std::uint64_t w = 0; w < n; ++w) s += std::string(1 + rng.below(8), 'x') + (rng.bernoulli(0.5) ? " " : "  ");
    ProfileRecord p;
    p.summary = s;
    const auto f = social_features(p);
    CHECK(f.summary_richness > 0.0);
    CHECK(f.summary_richness <= 1.0);
    CHECK(f.summary_unique_words <= f.summary_num_words);
  }
}

TEST_CASE("profile records parse and round-trip") {
  const auto p = parse_profile_record(
      R"({"first":"John","last":"Doe","company":"Acme","location":"Paris, France","num_connections":"500+","summary":"great engineer","headline":"Engineering Manager"})");
  CHECK(p.name.first == "john");
  CHECK(p.name.last == "doe");
  CHECK(p.country == "France");
  CHECK(p.num_connections == 500);
  CHECK(parse_profile_record(format_profile_record(p)) == p);
  const auto q = parse_profile_record(R"({"first":"a","last":"b","company":"c","location":"","num_connections":12})");
  CHECK(q.num_connections == 12);
  CHECK_FALSE(q.summary.has_value());
  CHECK(code_of([] { parse_profile_record(R"({"first":"a","last":"b","company":"c","location":"","num_connections":-1})"); }) ==
        Errc::BadConnections);
  CHECK(code_of([] { parse_profile_record("not json"); }) == Errc::MalformedRecord);
}

TEST_CASE("profile file errors carry the line number") {
  const auto path = (std::filesystem::temp_directory_path() / "spearsift_profiles_bad.jsonl").string();
  {
    std::ofstream out(path);
    out << R"({"first":"a","last":"b","company":"c","location":"","num_connections":1})" << "\n";
    out << R"({"first":"a","last":"b","company":"c","location":"","num_connections":"x"})" << "\n";
  }
  try {
    read_profiles(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadConnections);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  std::filesystem::remove(path);
}
