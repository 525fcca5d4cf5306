#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "drugsent/types.hpp"

namespace drugsent {

enum class SplitTag { Train, Test };

std::string_view split_name(SplitTag tag) noexcept;

/// One data row of the drugsCom TSV files.
struct ReviewRecord {
  std::int64_t row_id = 0;
  std::string drug_name;
  std::string condition;    // may be empty or garbled in the source data
  std::string review_text;  // raw, still HTML-escaped
  int rating = 0;           // 1..10
  std::chrono::year_month_day review_date{};
  std::int64_t useful_count = 0;

  bool operator==(const ReviewRecord&) const = default;
};

struct LabeledDocument {
  std::int64_t row_id = 0;
  std::string raw_text;
  Sentiment label = Sentiment::Neutral;
};

struct LabeledCorpus {
  std::string condition_name;
  SplitTag split = SplitTag::Train;
  std::vector<LabeledDocument> documents;

  std::size_t size() const noexcept { return documents.size(); }
  bool empty() const noexcept { return documents.empty(); }
  std::vector<Sentiment> labels() const;
};

struct LoadOptions {
  /// Loading fails when skipped / (kept + skipped) exceeds this.
  double max_skip_fraction = 0.01;
  /// Emit one warning per skipped row (a summary line is always emitted).
  bool warn_each_row = false;
};

struct LoadResult {
  std::vector<ReviewRecord> records;
  std::size_t skipped_rows = 0;
};

/// Parses a drugsCom TSV file. Throws std::runtime_error when the file is
/// missing or when too many rows are malformed.
LoadResult load_tsv(const std::filesystem::path& path, SplitTag split,
                    const LoadOptions& options = {});

/// Same parser over an in-memory buffer; `source` names it in diagnostics.
LoadResult parse_tsv(std::string_view contents, std::string_view source,
                     const LoadOptions& options = {});

/// {1..4} -> Negative, {5,6} -> Neutral, {7..10} -> Positive.
/// Throws std::out_of_range outside [1,10].
Sentiment bucket_rating(int rating);

LabeledCorpus filter_condition(std::span<const ReviewRecord> records,
                               const std::string& condition_name,
                               SplitTag split);

using ClassDistribution = std::array<double, kNumClasses>;

/// Proportion of each sentiment. Throws std::invalid_argument when empty.
ClassDistribution class_distribution(const LabeledCorpus& corpus);
ClassDistribution class_distribution(std::span<const ReviewRecord> records);

/// Record count per condition string, ordered by condition.
std::map<std::string, std::size_t> condition_counts(
    std::span<const ReviewRecord> records);

}  // namespace drugsent
