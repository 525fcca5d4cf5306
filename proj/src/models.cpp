#include "drugsent/models.hpp"

namespace drugsent {

std::vector<double> ScoreMatrix::column(std::size_t c) const {
  std::vector<double> out(rows);
  for (std::size_t i = 0; i < rows; ++i) out[i] = at(i, c);
  return out;
}

TrainedModel train_model(const ModelSpec& spec, const DocTermMatrix& X,
                         std::span<const Sentiment> labels) {
  return std::visit(
      [&](const auto& p) -> TrainedModel {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogRegParams>) return train_logistic_regression(X, labels, p);
        else if constexpr (std::is_same_v<P, SvmParams>) return train_linear_svm(X, labels, p);
        else if constexpr (std::is_same_v<P, ForestParams>) return train_random_forest(X, labels, p);
        else return train_mlp(X, labels, p);
      },
      spec);
}

ScoreMatrix predict_scores(const TrainedModel& model, const DocTermMatrix& X) {
  return std::visit([&X](const auto& m) { return predict_scores(m, X); }, model);
}

Sentiment argmax_label(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return sentiment_from_index(best);
}

std::vector<Sentiment> predict_labels(const ScoreMatrix& scores) {
  std::vector<Sentiment> out;
  out.reserve(scores.rows);
  for (std::size_t i = 0; i < scores.rows; ++i) out.push_back(argmax_label(scores.row(i)));
  return out;
}

std::vector<Sentiment> predict_labels(const TrainedModel& model, const DocTermMatrix& X) {
  return predict_labels(predict_scores(model, X));
}

std::size_t model_n_features(const TrainedModel& model) noexcept {
  return std::visit([](const auto& m) { return m.n_features; }, model);
}

}  // namespace drugsent
