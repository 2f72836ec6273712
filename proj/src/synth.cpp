#include "spearsift/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>

#include "json.hpp"
#include "spearsift/error.hpp"
#include "spearsift/rng.hpp"

namespace spearsift::synth {

using corpus::Label;
using nlohmann::json;

namespace {

constexpr double kNameLowerBound = 4.5;  // shortest name is "x.ab" plus rounding
constexpr double kMaxConnections = 500.0;

const char* const kFirstA[] = {"al", "an", "ben", "car", "da", "el", "fa", "gi", "han", "is", "jo", "ka", "li",
                               "ma", "ne", "ol", "pa", "ra", "sa", "ta", "ul", "vi", "wen", "ya", "zo"};
const char* const kFirstB[] = {"na", "ra", "lo", "den", "ri", "son", "ly", "mi", "ko", "tan"};
const char* const kLastA[] = {"bar", "cor", "del", "fen", "gar", "hol", "kin", "lam", "mor", "nor",
                              "pet", "ros", "sal", "tor", "val", "wes", "bren", "cal", "dun", "har"};
const char* const kLastB[] = {"ton", "ley", "man", "sen", "ford", "wick", "well", "berg", "stein", "ova",
                              "ez", "ini", "son", "ham", "by", "lund", "mont", "quist", "ard", "ello"};

const char* const kProjects[] = {"Falcon", "Atlas", "Orion", "Phoenix", "Titan", "Nimbus", "Horizon", "Keystone"};
const char* const kCities[] = {"Washington", "London", "Singapore", "Geneva", "Seoul", "Dubai", "Berlin", "Tokyo"};
const char* const kMonths[] = {"January", "February", "March", "April", "May", "June",
                               "July", "August", "September", "October", "November", "December"};
const char* const kDays[] = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday"};

const char* const kNameWords[] = {"work", "report", "invoice", "document", "resume", "plan", "budget", "scan",
                                  "agenda", "contract", "photo", "letter", "notice", "update", "details", "form",
                                  "salary", "list", "minutes", "proposal", "order", "receipt", "card", "label"};

const std::vector<std::string> kSpearSentences = {
    "Please find the attached document for your review.",
    "I have attached the latest version of the report.",
    "Let me know your thoughts before the meeting on {day}.",
    "This information is limited to senior staff.",
    "The file contains the updated figures for {project}.",
    "Open the attachment to view the agenda.",
    "We recently updated the security policy for all staff.",
    "Please treat this as confidential and do not forward.",
    "Click the link in the document to access the shared folder.",
    "Your account access will be reviewed by the security team.",
    "The delegation from {city} arrives in {month}.",
    "Regards,\n{name}"};

const std::vector<std::string> kBenignSentences = {
    "Thanks for the update.",
    "See you at the meeting on {day}.",
    "Can you send me the numbers when you get a chance?",
    "The report looks good to me.",
    "Let's discuss this over lunch.",
    "I will be out of the office until {day}.",
    "Please book the conference room for {month}.",
    "Great work on the {project} review.",
    "The minutes from last week are on the shared drive.",
    "Happy to help with the {city} trip.",
    "Cheers,\n{name}"};

const std::vector<std::string> kSummaryWords = {
    "experienced", "professional", "with", "a", "background", "in", "enterprise", "software", "and", "team",
    "leadership", "focused", "on", "delivering", "results", "for", "global", "clients", "passionate", "about",
    "security", "operations", "strategy", "growth", "customer", "success", "cloud", "infrastructure"};

const char* const kLevelWords[] = {"Support Specialist", "Intern", "Temporary Assistant", "Analyst", "Engineer",
                                   "Consultant", "Manager", "Director", "Executive Vice President"};
constexpr int kJuniorLevels = 6;  // the first six entries are below manager

const char* const kTypeWords[] = {"Information Technology", "Human Resources", "Sales", "Marketing",
                                  "Finance", "Legal", "Engineering", "Operations", "Research"};

const std::pair<const char*, const char*> kLocations[] = {
    {"Mountain View, California", "United States"}, {"New York, New York", "United States"},
    {"London", "United Kingdom"}, {"Bangalore, Karnataka", "India"}, {"Toronto, Ontario", "Canada"},
    {"Munich, Bavaria", "Germany"}, {"Sydney, New South Wales", "Australia"}, {"Paris", "France"}};
const double kNoiseLocationWeights[] = {0.35, 0.15, 0.12, 0.1, 0.08, 0.08, 0.06, 0.06};
const double kSpearLocationWeights[] = {0.5, 0.2, 0.1, 0.05, 0.05, 0.04, 0.03, 0.03};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

template <typename T, std::size_t N>
const T& pick(Rng& rng, const T (&items)[N]) {
  return items[rng.below(N)];
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.below(items.size())];
}

std::size_t pick_weighted(Rng& rng, std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

std::string company_label(const std::string& domain) {
  return corpus::company_from_address("x@" + domain);
}

std::string random_first(Rng& rng) { return std::string(pick(rng, kFirstA)) + pick(rng, kFirstB); }

std::string fill_template(const std::string& text, Rng& rng, const std::string& company) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const auto close = text.find('}', i);
      if (close != std::string::npos) {
        const std::string key = text.substr(i + 1, close - i - 1);
        bool known = true;
        if (key == "name") out += capitalize(random_first(rng));
        else if (key == "company") out += capitalize(company);
        else if (key == "num") out += std::to_string(10000 + rng.below(990000));
        else if (key == "month") out += pick(rng, kMonths);
        else if (key == "day") out += pick(rng, kDays);
        else if (key == "project") out += pick(rng, kProjects);
        else if (key == "city") out += pick(rng, kCities);
        else known = false;
        if (known) {
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_upper(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Inverse Mills ratio and the standardized truncated variance factor.
double mills(double alpha) { return normal_pdf(alpha) / normal_upper(alpha); }
double variance_factor(double alpha) {
  const double l = mills(alpha);
  return 1.0 + alpha * l - l * l;
}

double sample_truncated(Rng& rng, const TruncatedNormal& d) {
  const double alpha = (d.lower - d.mu) / d.sigma;
  double z;
  if (alpha < 0.5) {
    do z = rng.normal(); while (z < alpha);
  } else {
    // Exponential proposal for the far tail.
    const double rate = (alpha + std::sqrt(alpha * alpha + 4.0)) / 2.0;
    for (;;) {
      double u;
      do u = rng.uniform(); while (u == 0.0);
      z = alpha - std::log(u) / rate;
      if (rng.uniform() <= std::exp(-0.5 * (z - rate) * (z - rate))) break;
    }
  }
  return d.mu + d.sigma * z;
}

void check_moments(const Moments& m, const std::string& what) {
  if (!(m.mean > 0) || !(m.sd > 0) || !std::isfinite(m.mean) || !std::isfinite(m.sd))
    throw Error(Errc::InvalidConfig, what + ": mean and sd must be positive");
}

struct Samplers {
  TruncatedNormal name_length;
  LogNormal size;
  ScaledBeta connections;
};

Samplers fit(const LabelModel& m, const LabelModel& social) {
  Samplers s;
  if (!m.attachment_types.empty()) {
    s.name_length = fit_truncated_normal(m.name_length, kNameLowerBound);
    s.size = fit_lognormal(m.size_kb);
  }
  s.connections = fit_scaled_beta(social.connections, kMaxConnections);
  return s;
}

std::string make_attachment_name(Rng& rng, const LabelModel& m, const Samplers& s) {
  std::vector<double> weights;
  for (const auto& [ext, w] : m.attachment_types) weights.push_back(w);
  const std::string& ext = m.attachment_types[pick_weighted(rng, weights)].first;
  const long total = std::lround(sample_truncated(rng, s.name_length));
  const long base_len = std::max<long>(1, total - 1 - static_cast<long>(ext.size()));
  std::string base;
  while (static_cast<long>(base.size()) < base_len) {
    if (!base.empty()) base += rng.bernoulli(0.5) ? '_' : '-';
    std::string w = pick(rng, kNameWords);
    if (rng.bernoulli(0.3)) w = capitalize(w);
    base += w;
    if (rng.bernoulli(0.2)) base += std::to_string(rng.below(100));
  }
  base.resize(static_cast<std::size_t>(base_len));
  return base + "." + ext;
}

std::string make_body(Rng& rng, const std::vector<std::string>& pool, const std::string& company) {
  const std::size_t n = 2 + rng.below(6);
  std::string body;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) body += rng.bernoulli(0.4) ? "\n" : " ";
    body += fill_template(pick(rng, pool), rng, company);
  }
  return body;
}

profiles::ProfileRecord make_profile(Rng& rng, const PersonName& name, const std::string& company,
                                     const LabelModel& social, const Samplers& s, bool informative_spear) {
  profiles::ProfileRecord p;
  p.name = name;
  p.company = company;
  const auto& weights = informative_spear ? kSpearLocationWeights : kNoiseLocationWeights;
  const auto& loc = kLocations[pick_weighted(rng, weights)];
  p.location_raw = std::string(loc.first) + ", " + loc.second;
  p.country = profiles::extract_country(p.location_raw);
  p.num_connections = static_cast<int>(std::lround(s.connections.scale * rng.beta(s.connections.a, s.connections.b)));
  p.num_connections = std::clamp(p.num_connections, 0, 500);
  if (rng.bernoulli(social.summary_share)) {
    const std::size_t words = 5 + rng.below(60);
    std::string summary;
    for (std::size_t i = 0; i < words; ++i) {
      if (i) summary += ' ';
      summary += pick(rng, kSummaryWords);
    }
    p.summary = summary;
  }
  const bool senior = rng.bernoulli(social.senior_share);
  const char* level = senior ? kLevelWords[kJuniorLevels + rng.below(std::size(kLevelWords) - kJuniorLevels)]
                             : kLevelWords[rng.below(kJuniorLevels)];
  p.headline = std::string(level) + ", " + pick(rng, kTypeWords);
  return p;
}

Moments moments_from_json(const json& j, const std::string& what) {
  if (!j.is_object()) throw Error(Errc::InvalidConfig, what + " must be an object with mean and sd");
  for (const auto& [k, v] : j.items())
    if (k != "mean" && k != "sd") throw Error(Errc::InvalidConfig, what + ": unknown key '" + k + "'");
  return {j.at("mean").get<double>(), j.at("sd").get<double>()};
}

void apply_label(LabelModel& m, const json& j, const std::string& label) {
  if (!j.is_object()) throw Error(Errc::InvalidConfig, "labels." + label + " must be an object");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "labels." + label + "." + key;
    if (key == "attachment_types") {
      m.attachment_types.clear();
      for (const auto& [ext, w] : v.items()) m.attachment_types.emplace_back(ext, w.get<double>());
    } else if (key == "subjects") {
      m.subjects = v.get<std::vector<std::string>>();
    } else if (key == "name_length") {
      m.name_length = moments_from_json(v, where);
    } else if (key == "size_kb") {
      m.size_kb = moments_from_json(v, where);
    } else if (key == "connections") {
      m.connections = moments_from_json(v, where);
    } else if (key == "senior_share") {
      m.senior_share = v.get<double>();
    } else if (key == "summary_share") {
      m.summary_share = v.get<double>();
    } else if (key == "has_body") {
      m.has_body = v.get<bool>();
    } else {
      throw Error(Errc::InvalidConfig, "unknown key " + where);
    }
  }
}

}  // namespace

TruncatedNormal fit_truncated_normal(Moments target, double lower) {
  check_moments(target, "truncated normal");
  const double ratio = (target.mean - lower) / target.sd;
  // (mean - lower) / sd decreases from +inf to 1 as the truncation point moves
  // right, so only ratios above 1 are reachable.
  auto r = [](double alpha) { return (mills(alpha) - alpha) / std::sqrt(variance_factor(alpha)); };
  const double lo_alpha = -30.0, hi_alpha = 20.0;
  if (!(ratio > r(hi_alpha)))
    throw Error(Errc::InvalidConfig, "mean " + std::to_string(target.mean) + " / sd " + std::to_string(target.sd) +
                                         " cannot be reached with lower bound " + std::to_string(lower));
  double lo = lo_alpha, hi = hi_alpha;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (r(mid) > ratio) lo = mid;
    else hi = mid;
  }
  const double alpha = 0.5 * (lo + hi);
  TruncatedNormal d;
  d.lower = lower;
  d.sigma = target.sd / std::sqrt(variance_factor(alpha));
  d.mu = lower - alpha * d.sigma;
  return d;
}

double truncated_normal_mean(const TruncatedNormal& d) {
  return d.mu + d.sigma * mills((d.lower - d.mu) / d.sigma);
}

double truncated_normal_sd(const TruncatedNormal& d) {
  return d.sigma * std::sqrt(variance_factor((d.lower - d.mu) / d.sigma));
}

LogNormal fit_lognormal(Moments target) {
  check_moments(target, "lognormal");
  LogNormal d;
  const double s2 = std::log(1.0 + (target.sd * target.sd) / (target.mean * target.mean));
  d.sigma = std::sqrt(s2);
  d.mu = std::log(target.mean) - s2 / 2.0;
  return d;
}

ScaledBeta fit_scaled_beta(Moments target, double scale) {
  check_moments(target, "scaled beta");
  const double p = target.mean / scale, v = (target.sd / scale) * (target.sd / scale);
  if (!(p < 1.0) || !(v < p * (1.0 - p)))
    throw Error(Errc::InvalidConfig, "mean/sd " + std::to_string(target.mean) + "/" + std::to_string(target.sd) +
                                         " impossible on [0, " + std::to_string(scale) + "]");
  const double common = p * (1.0 - p) / v - 1.0;
  return {p * common, (1.0 - p) * common, scale};
}

SynthConfig default_config() {
  SynthConfig c;
  auto& spear = c.model(Label::Spear);
  spear.attachment_types = {{"pdf", 0.35}, {"doc", 0.2}, {"zip", 0.14}, {"xls", 0.08}, {"rar", 0.07},
                            {"exe", 0.05}, {"docx", 0.04}, {"ppt", 0.04}, {"scr", 0.03}};
  spear.subjects = {"RE: {project} strategy update",
                    "FW: Job opportunity at {company}",
                    "Classified: {project} briefing for {month}",
                    "Updated org chart and salary review",
                    "RE: Meeting notes from the {city} conference",
                    "FW: Draft proposal for {project}",
                    "Confidential: {company} restructuring plan",
                    "Resume for the open engineering position",
                    "Agenda for the {month} board meeting",
                    "RE: Contract terms for {project}",
                    "Invitation to the {city} defense industry forum",
                    "FW: Security clearance paperwork",
                    "Your {company} benefits enrollment",
                    "RE: Follow-up on our conversation",
                    "Talking points for {name}"};
  spear.name_length = {25.48, 16.03};
  spear.size_kb = {285.0, 531.0};
  spear.connections = {158.68, 164.31};
  spear.senior_share = 0.45;
  spear.summary_share = 0.6;
  spear.has_body = true;

  auto& spam = c.model(Label::Spam);
  spam.attachment_types = {{"zip", 0.55}, {"exe", 0.12}, {"html", 0.1}, {"pdf", 0.08},
                           {"doc", 0.05}, {"rar", 0.05}, {"scr", 0.05}};
  spam.subjects = {"Delivery Status Notification (Failure)",
                   "Your parcel {num} could not be delivered to your address",
                   "You have received an e-card from {name}",
                   "Undelivered Mail Returned to Sender",
                   "Please verify your bank account information immediately",
                   "UPS Delivery Notification, tracking number {num}",
                   "Your online bank account has been suspended",
                   "Verify your online banking details now to avoid suspension",
                   "Payment receipt {num}",
                   "DHL Shipment Notification {num}",
                   "A greeting card is waiting for you",
                   "failure notice",
                   "Order confirmation {num}"};
  spam.name_length = {51.08, 23.29};
  spam.size_kb = {262.0, 1419.0};
  spam.connections = {183.82, 171.45};
  spam.senior_share = 0.25;
  spam.summary_share = 0.7;
  spam.has_body = false;

  auto& benign = c.model(Label::Benign);
  benign.subjects = {"Weekly status report",
                     "Meeting moved to {day}",
                     "RE: {project} report draft",
                     "Lunch on {day}?",
                     "Minutes from the {day} meeting",
                     "Quarterly report for {month}",
                     "FW: Team offsite planning",
                     "Timesheet reminder",
                     "RE: Conference room booking",
                     "Holiday schedule for {month}",
                     "Notes from {name}"};
  benign.name_length = {20.0, 8.0};
  benign.size_kb = {100.0, 100.0};
  benign.connections = {259.89, 167.14};
  benign.senior_share = 0.2;
  benign.summary_share = 0.75;
  benign.has_body = true;

  c.companies = {"northwind-defense.com", "contoso-energy.com", "fabrikam-labs.com", "tailspin-aero.com"};
  return c;
}

void validate(const SynthConfig& c) {
  if (c.companies.empty()) throw Error(Errc::InvalidConfig, "companies must not be empty");
  for (const auto& d : c.companies)
    if (d.find('.') == std::string::npos || d.find('@') != std::string::npos || company_label(d).empty())
      throw Error(Errc::InvalidConfig, "company '" + d + "' is not a domain");
  const std::size_t capacity = c.companies.size() * std::size(kFirstA) * std::size(kFirstB) * std::size(kLastA) *
                               std::size(kLastB);
  if (c.n_spear + c.n_spam + c.n_benign > capacity)
    throw Error(Errc::InvalidConfig, "at most " + std::to_string(capacity) + " records with this many companies");
  const std::size_t counts[] = {c.n_spear, c.n_spam, c.n_benign};
  for (std::size_t l = 0; l < 3; ++l) {
    const auto& m = c.labels[l];
    const std::string name(corpus::to_string(static_cast<Label>(l)));
    if (m.senior_share < 0 || m.senior_share > 1 || m.summary_share < 0 || m.summary_share > 1)
      throw Error(Errc::InvalidConfig, name + ": shares must lie in [0,1]");
    fit_scaled_beta(m.connections, kMaxConnections);
    if (counts[l] == 0) continue;
    if (m.subjects.empty()) throw Error(Errc::InvalidConfig, name + ": no subject templates");
    if (!m.attachment_types.empty()) {
      double total = 0;
      for (const auto& [ext, w] : m.attachment_types) {
        if (!(w >= 0) || ext.empty() || ext.find('.') != std::string::npos)
          throw Error(Errc::InvalidConfig, name + ": bad attachment type '" + ext + "'");
        total += w;
      }
      if (!(total > 0)) throw Error(Errc::InvalidConfig, name + ": attachment weights sum to zero");
      fit_truncated_normal(m.name_length, kNameLowerBound);
      fit_lognormal(m.size_kb);
    }
  }
}

SynthConfig parse_config(std::string_view text) {
  SynthConfig c = default_config();
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
      if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "n_spear") c.n_spear = v.get<std::size_t>();
      else if (key == "n_spam") c.n_spam = v.get<std::size_t>();
      else if (key == "n_benign") c.n_benign = v.get<std::size_t>();
      else if (key == "companies") c.companies = v.get<std::vector<std::string>>();
      else if (key == "social_signal") {
        const auto s = v.get<std::string>();
        if (s == "noise") c.social_signal = SocialSignal::Noise;
        else if (s == "informative") c.social_signal = SocialSignal::Informative;
        else throw Error(Errc::InvalidConfig, "social_signal must be noise or informative");
      } else if (key == "labels") {
        for (const auto& [label, body] : v.items()) {
          const auto l = corpus::parse_label(label);
          if (!l) throw Error(Errc::InvalidConfig, "unknown label '" + label + "'");
          apply_label(c.model(*l), body, label);
        }
      } else {
        throw Error(Errc::InvalidConfig, "unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  validate(c);
  return c;
}

SynthConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

SynthCorpus generate_corpus(const SynthConfig& config) {
  validate(config);
  using namespace std::chrono;
  const auto start = sys_days{year{2009} / January / 1};
  const auto span_seconds = (sys_days{year{2012} / November / 30} - start) / seconds{1};

  // Recipient i gets name-space slot (step * i + offset) mod capacity; step is
  // coprime with the capacity, so recipients never collide.
  const std::uint64_t nf = std::size(kFirstA) * std::size(kFirstB), nl = std::size(kLastA) * std::size(kLastB);
  const std::uint64_t capacity = config.companies.size() * nf * nl;
  std::uint64_t step = 7919;
  while (std::gcd(step, capacity) != 1) step += 2;
  const std::uint64_t offset = Rng(derive_seed(config.seed, 0)).below(capacity);

  SynthCorpus out;
  const std::size_t counts[] = {config.n_spear, config.n_spam, config.n_benign};
  std::uint64_t recipient = 0;
  for (std::size_t l = 0; l < 3; ++l) {
    const Label label = static_cast<Label>(l);
    const LabelModel& m = config.labels[l];
    const bool informative = config.social_signal == SocialSignal::Informative;
    const LabelModel& social = informative ? m : config.model(Label::Benign);
    const Samplers samplers = counts[l] ? fit(m, social) : Samplers{};
    Rng rng(derive_seed(config.seed, 1 + l));
    Rng social_rng(derive_seed(config.seed, 11 + l));
    const std::string tag(corpus::to_string(label));
    for (std::size_t i = 0; i < counts[l]; ++i, ++recipient) {
      const std::uint64_t slot = (step * recipient + offset) % capacity;
      const std::string& domain = config.companies[slot / (nf * nl)];
      const std::uint64_t f = (slot / nl) % nf, g = slot % nl;
      const PersonName name{std::string(kFirstA[f / std::size(kFirstB)]) + kFirstB[f % std::size(kFirstB)],
                            std::string(kLastA[g / std::size(kLastB)]) + kLastB[g % std::size(kLastB)]};
      const std::string company = company_label(domain);

      corpus::EmailRecord e;
      e.message_id = "<" + tag + "-" + std::to_string(i) + "@synth." + std::to_string(config.seed) + ">";
      e.to_addr = corpus::format_address(name, domain);
      const std::string sender_domain = label == Label::Benign ? domain : "mail" + std::to_string(rng.below(90) + 10) + ".net";
      e.from_addr = corpus::format_address({random_first(rng), std::string(pick(rng, kLastA)) + pick(rng, kLastB)},
                                           sender_domain);
      e.subject = fill_template(pick(rng, m.subjects), rng, company);
      if (m.has_body)
        e.body = make_body(rng, label == Label::Benign ? kBenignSentences : kSpearSentences, company);
      if (!m.attachment_types.empty()) {
        e.attachment_name = make_attachment_name(rng, m, samplers);
        const double kb = std::exp(samplers.size.mu + samplers.size.sigma * rng.normal());
        e.attachment_size = std::llround(kb * 1024.0);
      }
      e.timestamp = sys_seconds{start} + seconds{static_cast<long long>(rng.below(static_cast<std::uint64_t>(span_seconds)))};
      e.label = label;
      out.emails.push_back(std::move(e));
      out.profiles.push_back(
          make_profile(social_rng, name, company, social, samplers, informative && label == Label::Spear));
    }
  }
  return out;
}

}  // namespace spearsift::synth
