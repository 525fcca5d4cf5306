#include "drugsent/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "drugsent/types.hpp"

namespace drugsent {

std::string_view encoding_name(Encoding e) noexcept {
  return e == Encoding::Count ? "count" : "tfidf";
}

Encoding parse_encoding(std::string_view name) {
  if (name == "count" || name == "cv" || name == "countvectorizer") {
    return Encoding::Count;
  }
  if (name == "tfidf") return Encoding::TfIdf;
  throw ConfigError("unknown encoding '" + std::string(name) +
                    "' (expected count or tfidf)");
}

Vocabulary Vocabulary::fit(std::span<const CleanDocument> corpus) {
  if (corpus.empty()) throw std::invalid_argument("cannot fit a vocabulary on an empty corpus");
  std::map<std::string_view, std::size_t> df;
  std::vector<std::string_view> seen;
  for (const auto& doc : corpus) {
    seen.assign(doc.begin(), doc.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto t : seen) ++df[t];
  }
  if (df.empty()) throw std::invalid_argument("corpus contains no terms");

  Vocabulary v;
  v.n_docs_ = corpus.size();
  v.terms_.reserve(df.size());
  v.df_.reserve(df.size());
  for (const auto& [term, count] : df) {
    v.index_.emplace(std::string(term), v.terms_.size());
    v.terms_.emplace_back(term);
    v.df_.push_back(count);
  }
  return v;
}

std::int64_t Vocabulary::column_of(std::string_view term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t Vocabulary::df(std::string_view term) const {
  auto col = column_of(term);
  if (col < 0) throw std::out_of_range("term '" + std::string(term) + "' not in vocabulary");
  return df_[static_cast<std::size_t>(col)];
}

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (const auto& t : terms_) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

double SparseRow::sum() const noexcept {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double SparseRow::dot(std::span<const double> dense) const noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < columns.size(); ++k) s += values[k] * dense[columns[k]];
  return s;
}

DocTermMatrix::DocTermMatrix(std::size_t n_cols, Encoding scheme)
    : n_cols_(n_cols), scheme_(scheme) {}

void DocTermMatrix::append_row(std::span<const std::uint32_t> columns,
                               std::span<const double> values) {
  if (columns.size() != values.size()) {
    throw std::invalid_argument("column/value length mismatch");
  }
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= n_cols_ || (k > 0 && columns[k] <= columns[k - 1])) {
      throw std::invalid_argument("row columns must be increasing and < n_cols");
    }
    if (values[k] == 0.0) continue;
    cols_.push_back(columns[k]);
    values_.push_back(values[k]);
  }
  row_ptr_.push_back(values_.size());
}

SparseRow DocTermMatrix::row(std::size_t i) const {
  if (i >= rows()) throw std::out_of_range("row index out of range");
  auto begin = row_ptr_[i];
  auto len = row_ptr_[i + 1] - begin;
  return {std::span(cols_).subspan(begin, len), std::span(values_).subspan(begin, len)};
}

double DocTermMatrix::at(std::size_t i, std::size_t j) const {
  auto r = row(i);
  auto it = std::lower_bound(r.columns.begin(), r.columns.end(), j);
  if (it == r.columns.end() || *it != j) return 0.0;
  return r.values[static_cast<std::size_t>(it - r.columns.begin())];
}

DocTermMatrix DocTermMatrix::select_rows(std::span<const std::size_t> indices) const {
  DocTermMatrix out(n_cols_, scheme_);
  for (auto i : indices) {
    auto r = row(i);
    out.cols_.insert(out.cols_.end(), r.columns.begin(), r.columns.end());
    out.values_.insert(out.values_.end(), r.values.begin(), r.values.end());
    out.row_ptr_.push_back(out.values_.size());
  }
  return out;
}

std::vector<double> DocTermMatrix::to_dense() const {
  std::vector<double> dense(rows() * n_cols_, 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    auto r = row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) dense[i * n_cols_ + r.columns[k]] = r.values[k];
  }
  return dense;
}

void DocTermMatrix::dump(std::ostream& out) const {
  out << rows() << ' ' << n_cols_ << ' ' << nnz() << ' ' << encoding_name(scheme_) << '\n';
  char buf[64];
  for (std::size_t i = 0; i < rows(); ++i) {
    auto r = row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", r.values[k]);
      out << i << ' ' << r.columns[k] << ' ' << buf << '\n';
    }
  }
}

namespace {

// Sorted (column, count) pairs of the in-vocabulary tokens of one document.
void count_row(const CleanDocument& doc, const Vocabulary& vocab,
               std::vector<std::uint32_t>& columns, std::vector<double>& counts) {
  columns.clear();
  counts.clear();
  for (const auto& tok : doc) {
    auto col = vocab.column_of(tok);
    if (col >= 0) columns.push_back(static_cast<std::uint32_t>(col));
  }
  std::sort(columns.begin(), columns.end());
  std::size_t out = 0;
  for (std::size_t k = 0; k < columns.size();) {
    std::size_t run = k;
    while (run < columns.size() && columns[run] == columns[k]) ++run;
    columns[out] = columns[k];
    counts.push_back(static_cast<double>(run - k));
    ++out;
    k = run;
  }
  columns.resize(out);
}

}  // namespace

DocTermMatrix count_vectorize(std::span<const CleanDocument> corpus,
                              const Vocabulary& vocab) {
  DocTermMatrix m(vocab.size(), Encoding::Count);
  std::vector<std::uint32_t> columns;
  std::vector<double> counts;
  for (const auto& doc : corpus) {
    count_row(doc, vocab, columns, counts);
    m.append_row(columns, counts);
  }
  return m;
}

std::vector<double> term_frequency(SparseRow count_row) {
  std::vector<double> tf(count_row.values.begin(), count_row.values.end());
  double total = count_row.sum();
  if (total == 0.0) return tf;
  for (double& v : tf) v /= total;
  return tf;
}

std::vector<double> inverse_document_frequency(const Vocabulary& vocab) {
  std::vector<double> idf(vocab.size());
  auto n = static_cast<double>(vocab.n_docs());
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    idf[j] = std::log(n / static_cast<double>(vocab.df(j)));
  }
  return idf;
}

double inverse_document_frequency(const Vocabulary& vocab, std::string_view term) {
  return std::log(static_cast<double>(vocab.n_docs()) /
                  static_cast<double>(vocab.df(term)));
}

DocTermMatrix tfidf_vectorize(std::span<const CleanDocument> corpus,
                              const Vocabulary& vocab) {
  const auto idf = inverse_document_frequency(vocab);
  DocTermMatrix m(vocab.size(), Encoding::TfIdf);
  std::vector<std::uint32_t> columns;
  std::vector<double> counts;
  for (const auto& doc : corpus) {
    count_row(doc, vocab, columns, counts);
    auto tf = term_frequency({columns, counts});
    for (std::size_t k = 0; k < columns.size(); ++k) tf[k] *= idf[columns[k]];
    m.append_row(columns, tf);
  }
  return m;
}

DocTermMatrix transform(std::span<const CleanDocument> corpus,
                        const Vocabulary& vocab, Encoding scheme) {
  return scheme == Encoding::Count ? count_vectorize(corpus, vocab)
                                   : tfidf_vectorize(corpus, vocab);
}

}  // namespace drugsent
