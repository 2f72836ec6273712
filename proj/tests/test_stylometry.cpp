#include <string>

#include "doctest.h"
#include "spearsift/error.hpp"
#include "spearsift/rng.hpp"
#include "spearsift/stylometry.hpp"

using namespace spearsift;
using namespace spearsift::stylometry;

TEST_CASE("tokenize splits on whitespace runs") {
  CHECK(tokenize("Job Opportunity") == std::vector<std::string_view>{"Job", "Opportunity"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("RE: Issues  with") == std::vector<std::string_view>{"RE:", "Issues", "with"});
  CHECK(tokenize(" \t\n ").empty());
}

TEST_CASE("strip_punctuation trims non-alphanumerics at both ends") {
  CHECK(strip_punctuation("account.") == "account");
  CHECK(strip_punctuation("(re:)") == "re");
  CHECK(strip_punctuation("e-mail") == "e-mail");
  CHECK(strip_punctuation("...") == "");
}

TEST_CASE("subject features: Artifact 1 subject") {
  const auto f = subject_features("RE: Issues with Phone for help");
  CHECK(f.is_reply);
  CHECK_FALSE(f.is_forwarded);
  CHECK(f.num_words == 6);
  CHECK(f.num_chars == 30);
  CHECK(f.richness == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_FALSE(f.has_bank);
  CHECK_FALSE(f.has_verify);
}

TEST_CASE("subject features: blank and forwarded subjects") {
  const auto blank = subject_features("");
  CHECK(blank == SubjectFeatures{});
  CHECK(subject_features("FW:UK Non Paper on arrangements").is_forwarded);
  CHECK(subject_features("Fwd: plan").is_forwarded);
  CHECK(subject_features("fw plan").is_forwarded);
  CHECK_FALSE(subject_features("Fwiw plan").is_forwarded);
  CHECK(subject_features("  re: hello").is_reply);
  CHECK_FALSE(subject_features("Regarding hello").is_reply);
}

TEST_CASE("subject keyword flags") {
  CHECK(subject_features("Your Bank statement").has_bank);
  CHECK_FALSE(subject_features("Online banking").has_bank);
  CHECK(subject_features("Verifying your details").has_verify);
  CHECK(subject_features("please VERIFY now").has_verify);
}

TEST_CASE("attachment features and availability mask") {
  const auto f = attachment_features(std::string("work.doc"), 1024);
  CHECK(f.name_length == 8);
  CHECK(f.size_bytes == 1024);
  CHECK(f.name_available);
  CHECK(f.size_available);
  const auto none = attachment_features(std::nullopt, std::nullopt);
  CHECK_FALSE(none.name_available);
  CHECK_FALSE(none.size_available);
  const auto no_size = attachment_features(std::string("a.zip"), std::nullopt);
  CHECK(no_size.name_available);
  CHECK_FALSE(no_size.size_available);
  try {
    attachment_features(std::string("a.zip"), -1);
    FAIL("expected NegativeSize");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NegativeSize);
  }
}

TEST_CASE("attachment name length counts code points") {
  CHECK(attachment_features(std::string("r\xc3\xa9sum\xc3\xa9.pdf"), 1).name_length == 10);
}

TEST_CASE("body features: function words and phrases") {
  const auto f = body_features("Please verify your account. Your password was suspended.");
  CHECK(f.num_function_words == 3);
  CHECK(f.verify_your_account);
  CHECK(f.has_suspension);
  CHECK_FALSE(f.has_attach);
  CHECK(body_features("I collect all information including sim card details").num_function_words == 1);
  CHECK(body_features("") == BodyFeatures{});
}

TEST_CASE("body features: counts") {
  const auto f = body_features("See the attached file.\nThe file is attached.\n");
  CHECK(f.num_newlines == 2);
  CHECK(f.num_words == 8);
  CHECK(f.num_unique_words == 5);  // see the attached file is
  CHECK(f.num_chars == 45);
  CHECK(f.has_attach);
  CHECK(f.richness == doctest::Approx(8.0 / 45.0));
}

TEST_CASE("stylometry properties on random text") {
  Rng rng(17);
  const char* words[] = {"account", "Bank", "click!", "hello", "verify", "your", "suspension", "a", "\n", "attached"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string a, b;
    for (int i = 0; i < 12; ++i) {
      a += words[rng.below(10)];
      a += rng.bernoulli(0.3) ? "  " : " ";
      b += words[rng.below(10)];
      b += " ";
    }
    const auto fa = body_features(a), fb = body_features(b), fab = body_features(a + " " + b);
    CHECK(fab.num_function_words == fa.num_function_words + fb.num_function_words);
    CHECK(fa.num_unique_words <= fa.num_words);
    CHECK(fa.richness >= 0.0);
    CHECK(fa.richness <= 1.0);
    CHECK(std::abs(fa.richness * static_cast<double>(fa.num_chars) - static_cast<double>(fa.num_words)) < 1e-9);
    // Token features ignore surrounding whitespace.
    const auto padded = body_features("  " + a + " \t");
    CHECK(padded.num_words == fa.num_words);
    CHECK(padded.num_function_words == fa.num_function_words);
    CHECK(padded.num_unique_words == fa.num_unique_words);
    const auto s = subject_features(a);
    CHECK(s.num_words <= s.num_chars);
  }
}
