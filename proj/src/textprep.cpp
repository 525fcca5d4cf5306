#include "drugsent/textprep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace drugsent {

// Generated from data/stopwords_en.txt at configure time.
extern const char* const kEnglishStopwordsText;

namespace {

constexpr bool is_lower_alpha(char c) noexcept { return c >= 'a' && c <= 'z'; }
constexpr bool is_upper_alpha(char c) noexcept { return c >= 'A' && c <= 'Z'; }
constexpr char to_lower(char c) noexcept {
  return is_upper_alpha(c) ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_token(std::string_view w) noexcept {
  return !w.empty() && std::all_of(w.begin(), w.end(), is_lower_alpha);
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

constexpr std::array<std::pair<std::string_view, std::string_view>, 6>
    kNamedEntities = {{{"amp", "&"},
                       {"lt", "<"},
                       {"gt", ">"},
                       {"quot", "\""},
                       {"apos", "'"},
                       {"nbsp", "\xC2\xA0"}}};

// Decodes the entity body between '&' and ';'. Returns false if unknown.
bool decode_entity(std::string_view body, std::string& out) {
  if (body.size() >= 2 && body[0] == '#') {
    std::string_view digits = body.substr(1);
    int base = 10;
    if (digits[0] == 'x' || digits[0] == 'X') {
      base = 16;
      digits.remove_prefix(1);
    }
    if (digits.empty()) return false;
    std::uint32_t cp = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), cp, base);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return false;
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    append_utf8(out, static_cast<char32_t>(cp));
    return true;
  }
  for (const auto& [name, text] : kNamedEntities) {
    if (body == name) {
      out.append(text);
      return true;
    }
  }
  return false;
}

}  // namespace

Stopwords::Stopwords(std::initializer_list<std::string_view> words) {
  for (auto w : words) insert(w);
}

void Stopwords::insert(std::string_view word) {
  if (!is_token(word)) {
    throw std::invalid_argument("stopword '" + std::string(word) +
                                "' is not a lowercase [a-z]+ token");
  }
  words_.emplace(word);
}

bool Stopwords::contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

std::vector<std::string> Stopwords::sorted() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

Stopwords Stopwords::parse(std::string_view text, std::string_view source) {
  Stopwords sw;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    std::string word(line);
    std::transform(word.begin(), word.end(), word.begin(), to_lower);
    if (!is_token(word)) {
      throw std::invalid_argument(std::string(source) + ":" +
                                  std::to_string(line_no) + ": '" + word +
                                  "' is not an [a-z]+ token");
    }
    sw.words_.insert(std::move(word));
  }
  return sw;
}

Stopwords Stopwords::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stopword file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const Stopwords& Stopwords::english() {
  static const Stopwords instance = parse(kEnglishStopwordsText, "<builtin>");
  return instance;
}

std::string unescape_html(std::string_view text) {
  // Longest entity body we recognize: "#x10FFFF" / "#1114111".
  constexpr std::size_t kMaxEntityBody = 8;
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '&') {
      auto semi = text.find(';', i + 1);
      if (semi != std::string_view::npos && semi - i - 1 <= kMaxEntityBody &&
          semi > i + 1 &&
          decode_entity(text.substr(i + 1, semi - i - 1), out)) {
        i = semi + 1;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

CleanDocument clean_and_tokenize(std::string_view text, const Stopwords& stopwords) {
  CleanDocument tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= kMinTokenLength && !stopwords.contains(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (char c : text) {
    if (is_lower_alpha(c) || is_upper_alpha(c)) {
      current.push_back(to_lower(c));
    } else if (!current.empty()) {
      flush();
    }
  }
  if (!current.empty()) flush();
  return tokens;
}

CleanDocument prepare_review(std::string_view raw, const Stopwords& stopwords) {
  return clean_and_tokenize(unescape_html(raw), stopwords);
}

}  // namespace drugsent
