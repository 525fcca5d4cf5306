#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace drugsent {

// Ordered: Negative < Neutral < Positive.
enum class Sentiment : std::uint8_t { Negative = 0, Neutral = 1, Positive = 2 };

inline constexpr std::size_t kNumClasses = 3;

inline constexpr std::array<Sentiment, kNumClasses> kAllSentiments = {
    Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive};

constexpr std::size_t class_index(Sentiment s) noexcept {
  return static_cast<std::size_t>(s);
}

constexpr Sentiment sentiment_from_index(std::size_t i) {
  if (i >= kNumClasses) throw std::out_of_range("sentiment index out of range");
  return static_cast<Sentiment>(i);
}

constexpr std::string_view sentiment_name(Sentiment s) noexcept {
  switch (s) {
    case Sentiment::Negative: return "negative";
    case Sentiment::Neutral: return "neutral";
    case Sentiment::Positive: return "positive";
  }
  return "?";
}

/// Raised for invalid user-supplied configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace drugsent
