#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "drugsent/types.hpp"
#include "drugsent/vectorize.hpp"

namespace drugsent::detail {

// Logit magnitude used by constant predictors: sigmoid(10) ~ 0.99995.
inline constexpr double kConstantLogit = 10.0;

inline void check_training_input(const DocTermMatrix& X, std::span<const Sentiment> labels) {
  if (X.rows() != labels.size()) {
    throw std::invalid_argument("training matrix has " + std::to_string(X.rows()) +
                                " rows but " + std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw std::invalid_argument("cannot train on zero samples");
}

inline void check_prediction_input(std::size_t n_features, const DocTermMatrix& X) {
  if (X.cols() != n_features) {
    throw std::invalid_argument("model expects " + std::to_string(n_features) +
                                " features, matrix has " + std::to_string(X.cols()));
  }
}

// The class, when every label is the same.
inline std::optional<Sentiment> single_class(std::span<const Sentiment> labels) {
  for (auto l : labels) {
    if (l != labels.front()) return std::nullopt;
  }
  return labels.front();
}

}  // namespace drugsent::detail
