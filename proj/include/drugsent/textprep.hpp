#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace drugsent {

/// Set of lowercase [a-z]+ tokens removed during cleaning.
class Stopwords {
 public:
  Stopwords() = default;
  /// Throws std::invalid_argument for entries that are not [a-z]+.
  explicit Stopwords(std::initializer_list<std::string_view> words);

  /// The shipped English list (data/stopwords_en.txt, compiled in).
  static const Stopwords& english();
  /// One token per line, '#' comments, blank lines ignored. Entries are
  /// lowercased; anything still outside [a-z]+ is an error.
  static Stopwords from_file(const std::filesystem::path& path);
  static Stopwords parse(std::string_view text, std::string_view source);

  void insert(std::string_view word);
  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  /// Sorted copy of the entries.
  std::vector<std::string> sorted() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> words_;
};

using CleanDocument = std::vector<std::string>;

inline constexpr std::size_t kMinTokenLength = 2;

/// Replaces named (&amp; &lt; &gt; &quot; &apos; &nbsp;) and numeric
/// (&#39; &#x27;) entities in a single left-to-right pass. Unknown or
/// malformed entities are copied verbatim.
std::string unescape_html(std::string_view text);

/// Lowercases, splits on every non-[A-Za-z] byte, drops tokens shorter than
/// kMinTokenLength and stopwords. Token order is preserved.
CleanDocument clean_and_tokenize(std::string_view text, const Stopwords& stopwords);

/// unescape_html followed by clean_and_tokenize.
CleanDocument prepare_review(std::string_view raw, const Stopwords& stopwords);

}  // namespace drugsent
