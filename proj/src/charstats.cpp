#include "spearsift/charstats.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include <omp.h>

#include "spearsift/error.hpp"
#include "spearsift/stylometry.hpp"
#include "spearsift/timeutil.hpp"

namespace spearsift::charstats {

namespace {

using Counter = std::unordered_map<std::string, std::size_t>;

// Values one record contributes to a field; empty when the field is absent.
// Returns false when the record lacks the field.
bool record_values(const corpus::EmailRecord& r, Field field, std::vector<std::string>& out) {
  out.clear();
  switch (field) {
    case Field::AttachmentName:
      if (!r.attachment_name) return false;
      out.push_back(*r.attachment_name);
      return true;
    case Field::AttachmentType:
      if (!r.attachment_name) return false;
      out.push_back(attachment_type(*r.attachment_name));
      return true;
    case Field::Subject:
      out.push_back(r.subject);
      return true;
    case Field::SubjectWord:
    case Field::BodyWord: {
      const std::string* text = field == Field::SubjectWord ? &r.subject : (r.body ? &*r.body : nullptr);
      if (!text) return false;
      for (auto tok : stylometry::tokenize(*text)) {
        const auto word = stylometry::strip_punctuation(tok);
        if (!word.empty()) out.push_back(stylometry::to_lower(word));
      }
      return true;
    }
  }
  return false;
}

bool is_word_field(Field f) { return f == Field::BodyWord || f == Field::SubjectWord; }

// Map-reduce: per-thread counters merged in thread order.
template <typename Emit>
Counter count_parallel(std::size_t n, Execution exec, std::size_t& population, Emit emit) {
  Counter total;
  population = 0;
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) emit(i, total, population);
    return total;
  }
  const int threads = omp_get_max_threads();
  std::vector<Counter> partial(static_cast<std::size_t>(threads));
  std::vector<std::size_t> pops(static_cast<std::size_t>(threads), 0);
#pragma omp parallel num_threads(threads)
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) emit(static_cast<std::size_t>(i), partial[t], pops[t]);
  }
  for (std::size_t t = 0; t < partial.size(); ++t) {
    population += pops[t];
    for (auto& [k, v] : partial[t]) total[k] += v;
  }
  return total;
}

FrequencyTable finish(Field field, const Counter& counts, std::size_t population, std::size_t n) {
  FrequencyTable table;
  table.field = field;
  table.population = population;
  table.entries.reserve(counts.size());
  for (const auto& [value, count] : counts) table.entries.push_back({value, count, 0.0});
  auto order = [](const FrequencyEntry& a, const FrequencyEntry& b) {
    return a.count != b.count ? a.count > b.count : a.value < b.value;
  };
  if (table.entries.size() > n) {
    std::partial_sort(table.entries.begin(), table.entries.begin() + static_cast<std::ptrdiff_t>(n),
                      table.entries.end(), order);
    table.entries.resize(n);
  } else {
    std::sort(table.entries.begin(), table.entries.end(), order);
  }
  for (auto& e : table.entries)
    e.percentage = population ? 100.0 * static_cast<double>(e.count) / static_cast<double>(population) : 0.0;
  return table;
}

}  // namespace

std::string_view to_string(Field field) {
  switch (field) {
    case Field::AttachmentName: return "attachment_name";
    case Field::AttachmentType: return "attachment_type";
    case Field::Subject: return "subject";
    case Field::BodyWord: return "body_word";
    case Field::SubjectWord: return "subject_word";
  }
  return "?";
}

std::optional<Field> parse_field(std::string_view text) {
  for (auto f : {Field::AttachmentName, Field::AttachmentType, Field::Subject, Field::BodyWord, Field::SubjectWord})
    if (to_string(f) == text) return f;
  return std::nullopt;
}

std::string attachment_type(std::string_view name) {
  const auto dot = name.rfind('.');
  if (dot == std::string_view::npos || dot + 1 == name.size()) return "(none)";
  return stylometry::to_lower(name.substr(dot + 1));
}

FrequencyTable top_frequencies(const std::vector<corpus::EmailRecord>& records, Field field, std::size_t n,
                               Execution exec) {
  if (n == 0) throw Error(Errc::OutOfRange, "n must be at least 1");
  std::size_t population = 0;
  const bool words = is_word_field(field);
  const Counter counts = count_parallel(records.size(), exec, population,
                                        [&](std::size_t i, Counter& c, std::size_t& pop) {
                                          thread_local std::vector<std::string> values;
                                          if (!record_values(records[i], field, values)) return;
                                          pop += words ? values.size() : 1;
                                          for (auto& v : values) ++c[v];
                                        });
  return finish(field, counts, population, n);
}

FrequencyTable top_frequencies(const std::vector<corpus::EmailRecord>& records, std::string_view field,
                               std::size_t n, Execution exec) {
  const auto f = parse_field(field);
  if (!f) throw Error(Errc::UnknownField, "unknown field '" + std::string(field) + "'");
  return top_frequencies(records, *f, n, exec);
}

FrequencyTable word_frequency(const std::vector<std::string>& texts, std::size_t top_n,
                              const std::set<std::string>& stopwords, Execution exec) {
  std::size_t population = 0;
  Counter counts;
  if (top_n > 0) {
    counts = count_parallel(texts.size(), exec, population, [&](std::size_t i, Counter& c, std::size_t& pop) {
      for (auto tok : stylometry::tokenize(texts[i])) {
        const auto word = stylometry::strip_punctuation(tok);
        if (word.empty()) continue;
        std::string w = stylometry::to_lower(word);
        if (stopwords.count(w)) continue;
        ++pop;
        ++c[std::move(w)];
      }
    });
  }
  return finish(Field::BodyWord, counts, population, top_n);
}

Timeline timeline(const std::vector<corpus::EmailRecord>& records, std::optional<corpus::Label> label) {
  using namespace std::chrono;
  Timeline out;
  out.label = label;
  std::vector<year_month> months;
  for (const auto& r : records) {
    if (label && r.label != *label) continue;
    const year_month_day ymd{floor<days>(r.timestamp)};
    months.push_back(ymd.year() / ymd.month());
  }
  if (months.empty()) return out;
  const auto [lo, hi] = std::minmax_element(months.begin(), months.end());
  const year_month first = *lo, last = *hi;
  for (year_month m = first; m <= last; m += std::chrono::months{1}) out.buckets.push_back({m, 0});
  for (const auto& m : months) {
    const auto idx = (m.year() - first.year()).count() * 12 +
                     (static_cast<int>(static_cast<unsigned>(m.month())) -
                      static_cast<int>(static_cast<unsigned>(first.month())));
    ++out.buckets[static_cast<std::size_t>(idx)].count;
  }
  return out;
}

std::string format_table(const FrequencyTable& table) {
  std::string out = "value\tcount\tpercentage\n";
  char buf[32];
  for (const auto& e : table.entries) {
    std::snprintf(buf, sizeof buf, "%.2f", e.percentage);
    std::string value = e.value;
    std::replace(value.begin(), value.end(), '\t', ' ');
    std::replace(value.begin(), value.end(), '\n', ' ');
    out += value + "\t" + std::to_string(e.count) + "\t" + buf + "\n";
  }
  return out;
}

std::string format_timeline(const Timeline& timeline) {
  std::string out = "month\tcount\n";
  for (const auto& b : timeline.buckets) out += format_month(b.month) + "\t" + std::to_string(b.count) + "\n";
  return out;
}

}  // namespace spearsift::charstats
