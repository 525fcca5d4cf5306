#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "drugsent/textprep.hpp"

namespace drugsent {

enum class Encoding { Count, TfIdf };

std::string_view encoding_name(Encoding e) noexcept;
/// Accepts "count"/"cv"/"countvectorizer" and "tfidf"; throws ConfigError.
Encoding parse_encoding(std::string_view name);

/// Term -> column map fitted on a training corpus. Columns follow the
/// lexicographic order of the terms.
class Vocabulary {
 public:
  /// Throws std::invalid_argument when the corpus has no tokens at all.
  static Vocabulary fit(std::span<const CleanDocument> corpus);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t n_docs() const noexcept { return n_docs_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::string& term(std::size_t column) const { return terms_.at(column); }

  /// Column of `term`, or -1 when unseen.
  std::int64_t column_of(std::string_view term) const;
  /// Document frequency by column.
  std::size_t df(std::size_t column) const { return df_.at(column); }
  /// Throws std::out_of_range for unseen terms.
  std::size_t df(std::string_view term) const;

  /// FNV-1a over the ordered terms; used to tie saved models to a vocabulary.
  std::uint64_t fingerprint() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::size_t n_docs_ = 0;
};

/// Read-only view of one sparse row.
struct SparseRow {
  std::span<const std::uint32_t> columns;
  std::span<const double> values;

  std::size_t nnz() const noexcept { return columns.size(); }
  double sum() const noexcept;
  double dot(std::span<const double> dense) const noexcept;
};

/// Row-compressed sparse matrix. Only nonzeros are stored, columns sorted
/// within each row.
class DocTermMatrix {
 public:
  DocTermMatrix() = default;
  DocTermMatrix(std::size_t n_cols, Encoding scheme);

  /// Appends a row; entries must have strictly increasing columns < n_cols.
  /// Zero values are dropped.
  void append_row(std::span<const std::uint32_t> columns,
                  std::span<const double> values);

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  Encoding scheme() const noexcept { return scheme_; }

  SparseRow row(std::size_t i) const;
  /// Value at (i, j); zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  DocTermMatrix select_rows(std::span<const std::size_t> indices) const;
  std::vector<double> to_dense() const;  // row-major rows() x cols()

  /// "rows cols nnz scheme" header then "row col value" lines in (row, col)
  /// order; values printed with 17 significant digits.
  void dump(std::ostream& out) const;

  bool operator==(const DocTermMatrix&) const = default;

 private:
  std::size_t n_cols_ = 0;
  Encoding scheme_ = Encoding::Count;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

/// Count matrix a_ij = occurrences of term j in document i.
/// Tokens outside the vocabulary are ignored.
DocTermMatrix count_vectorize(std::span<const CleanDocument> corpus,
                              const Vocabulary& vocab);

/// Divides every value by the row sum; an empty row stays empty.
std::vector<double> term_frequency(SparseRow count_row);

/// idf(t) = ln(N / df(t)) per column.
std::vector<double> inverse_document_frequency(const Vocabulary& vocab);
/// Throws std::out_of_range for unseen terms.
double inverse_document_frequency(const Vocabulary& vocab, std::string_view term);

/// w(t,d) = tf(t,d) * idf(t) with tf over in-vocabulary tokens.
DocTermMatrix tfidf_vectorize(std::span<const CleanDocument> corpus,
                              const Vocabulary& vocab);

DocTermMatrix transform(std::span<const CleanDocument> corpus,
                        const Vocabulary& vocab, Encoding scheme);

}  // namespace drugsent
