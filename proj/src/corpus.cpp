#include "drugsent/corpus.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "drugsent/log.hpp"

namespace drugsent {
namespace {

constexpr std::size_t kColumns = 7;

// Splits one logical record into fields. Fields that open with a double quote
// run to the matching close quote and may span tabs and newlines; "" inside a
// quoted field is a literal quote. Returns false at end of input.
bool next_record(std::string_view data, std::size_t& pos,
                 std::vector<std::string>& fields, std::size_t& line_no) {
  fields.clear();
  if (pos >= data.size()) return false;
  std::string field;
  bool at_field_start = true;
  bool quoted = false;
  while (pos < data.size()) {
    char c = data[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < data.size() && data[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          continue;
        }
        quoted = false;
        ++pos;
        continue;
      }
      if (c == '\n') ++line_no;
      field.push_back(c);
      ++pos;
      continue;
    }
    if (c == '"' && at_field_start) {
      quoted = true;
      at_field_start = false;
      ++pos;
      continue;
    }
    at_field_start = false;
    if (c == '\t') {
      fields.push_back(std::move(field));
      field.clear();
      at_field_start = true;
      ++pos;
      continue;
    }
    if (c == '\n' || c == '\r') {
      ++pos;
      if (c == '\r' && pos < data.size() && data[pos] == '\n') ++pos;
      ++line_no;
      fields.push_back(std::move(field));
      return true;
    }
    field.push_back(c);
    ++pos;
  }
  fields.push_back(std::move(field));
  ++line_no;
  return true;
}

template <typename T>
std::optional<T> parse_integer(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// "9.0" -> 9; "9.5" and anything non-numeric -> nullopt.
std::optional<int> parse_rating(std::string_view s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  double truncated = std::trunc(value);
  if (truncated != value) return std::nullopt;
  if (truncated < 1.0 || truncated > 10.0) return std::nullopt;
  return static_cast<int>(truncated);
}

constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

// Accepts "May 20, 2012" (the dataset's form) and ISO "2012-05-20".
std::optional<std::chrono::year_month_day> parse_date(std::string_view s) {
  using namespace std::chrono;
  int y = 0;
  unsigned m = 0, d = 0;
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    auto yy = parse_integer<int>(s.substr(0, 4));
    auto mm = parse_integer<unsigned>(s.substr(5, 2));
    auto dd = parse_integer<unsigned>(s.substr(8, 2));
    if (!yy || !mm || !dd) return std::nullopt;
    y = *yy, m = *mm, d = *dd;
  } else {
    auto space = s.find(' ');
    auto comma = s.find(", ");
    if (space == std::string_view::npos || comma == std::string_view::npos ||
        comma < space) {
      return std::nullopt;
    }
    auto month_name = s.substr(0, space);
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
      if (kMonths[i] == month_name) m = static_cast<unsigned>(i + 1);
    }
    auto dd = parse_integer<unsigned>(s.substr(space + 1, comma - space - 1));
    auto yy = parse_integer<int>(s.substr(comma + 2));
    if (m == 0 || !dd || !yy) return std::nullopt;
    y = *yy, d = *dd;
  }
  year_month_day date{year{y}, month{m}, day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::optional<ReviewRecord> parse_row(std::vector<std::string>& fields,
                                      std::string& why) {
  if (fields.size() != kColumns) {
    why = "expected 7 columns, found " + std::to_string(fields.size());
    return std::nullopt;
  }
  ReviewRecord r;
  auto id = parse_integer<std::int64_t>(fields[0]);
  if (!id) {
    why = "bad row id '" + fields[0] + "'";
    return std::nullopt;
  }
  r.row_id = *id;
  r.drug_name = std::move(fields[1]);
  r.condition = std::move(fields[2]);
  r.review_text = std::move(fields[3]);
  if (r.review_text.empty()) {
    why = "empty review";
    return std::nullopt;
  }
  auto rating = parse_rating(fields[4]);
  if (!rating) {
    why = "rating '" + fields[4] + "' is not an integer in [1,10]";
    return std::nullopt;
  }
  r.rating = *rating;
  auto date = parse_date(fields[5]);
  if (!date) {
    why = "bad date '" + fields[5] + "'";
    return std::nullopt;
  }
  r.review_date = *date;
  auto useful = parse_integer<std::int64_t>(fields[6]);
  if (!useful || *useful < 0) {
    why = "bad useful count '" + fields[6] + "'";
    return std::nullopt;
  }
  r.useful_count = *useful;
  return r;
}

}  // namespace

std::string_view split_name(SplitTag tag) noexcept {
  return tag == SplitTag::Train ? "train" : "test";
}

std::vector<Sentiment> LabeledCorpus::labels() const {
  std::vector<Sentiment> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(d.label);
  return out;
}

LoadResult parse_tsv(std::string_view contents, std::string_view source,
                     const LoadOptions& options) {
  LoadResult result;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  if (!next_record(contents, pos, fields, line_no)) return result;  // no header

  std::string why;
  while (true) {
    std::size_t first_line = line_no + 1;
    if (!next_record(contents, pos, fields, line_no)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    auto record = parse_row(fields, why);
    if (!record) {
      ++result.skipped_rows;
      if (options.warn_each_row) {
        log::warn(std::string(source) + ":" + std::to_string(first_line) +
                  ": skipped row: " + why);
      }
      continue;
    }
    result.records.push_back(std::move(*record));
  }

  std::size_t total = result.records.size() + result.skipped_rows;
  if (result.skipped_rows > 0) {
    log::warn(std::string(source) + ": skipped " +
              std::to_string(result.skipped_rows) + " malformed row(s) of " +
              std::to_string(total));
    double fraction = static_cast<double>(result.skipped_rows) /
                      static_cast<double>(total);
    if (fraction > options.max_skip_fraction) {
      std::ostringstream msg;
      msg << source << ": " << result.skipped_rows << " of " << total
          << " rows are malformed (more than " << options.max_skip_fraction * 100
          << "%); is this a drugsCom TSV file?";
      throw std::runtime_error(msg.str());
    }
  }
  return result;
}

LoadResult load_tsv(const std::filesystem::path& path, SplitTag split,
                    const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + std::string(split_name(split)) +
                             " file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading '" + path.string() + "'");
  return parse_tsv(buf.str(), path.string(), options);
}

Sentiment bucket_rating(int rating) {
  if (rating < 1 || rating > 10) {
    throw std::out_of_range("rating " + std::to_string(rating) +
                            " outside [1,10]");
  }
  if (rating <= 4) return Sentiment::Negative;
  if (rating <= 6) return Sentiment::Neutral;
  return Sentiment::Positive;
}

LabeledCorpus filter_condition(std::span<const ReviewRecord> records,
                               const std::string& condition_name,
                               SplitTag split) {
  if (condition_name.empty()) {
    throw std::invalid_argument("condition name must be nonempty");
  }
  LabeledCorpus corpus{condition_name, split, {}};
  for (const auto& r : records) {
    if (r.condition != condition_name) continue;
    corpus.documents.push_back({r.row_id, r.review_text, bucket_rating(r.rating)});
  }
  return corpus;
}

namespace {
template <typename Range, typename LabelOf>
ClassDistribution distribution_of(const Range& items, LabelOf label_of) {
  if (items.empty()) {
    throw std::invalid_argument("class distribution of an empty collection");
  }
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& item : items) ++counts[class_index(label_of(item))];
  ClassDistribution out{};
  auto n = static_cast<double>(items.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out[c] = static_cast<double>(counts[c]) / n;
  }
  return out;
}
}  // namespace

ClassDistribution class_distribution(const LabeledCorpus& corpus) {
  return distribution_of(corpus.documents,
                         [](const LabeledDocument& d) { return d.label; });
}

ClassDistribution class_distribution(std::span<const ReviewRecord> records) {
  return distribution_of(records, [](const ReviewRecord& r) {
    return bucket_rating(r.rating);
  });
}

std::map<std::string, std::size_t> condition_counts(
    std::span<const ReviewRecord> records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[r.condition];
  return counts;
}

}  // namespace drugsent
