#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "drugsent/log.hpp"
#include "drugsent/models.hpp"
#include "drugsent/random.hpp"
#include "model_common.hpp"

namespace drugsent {
namespace {

enum class LinearLoss { Logistic, Hinge };

// w = scale * v, so the per-step L2 shrink is O(1) instead of O(n_features).
class ScaledVector {
 public:
  explicit ScaledVector(std::size_t n) : v_(n, 0.0) {}

  double dot(const SparseRow& row) const { return scale_ * row.dot(v_); }

  void shrink(double factor) {
    scale_ *= factor;
    if (scale_ < 1e-9) {
      for (double& x : v_) x *= scale_;
      scale_ = 1.0;
    }
  }

  void add_row(const SparseRow& row, double coef) {
    const double c = coef / scale_;
    for (std::size_t k = 0; k < row.nnz(); ++k) v_[row.columns[k]] += c * row.values[k];
  }

  double squared_norm() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return s * scale_ * scale_;
  }

  std::vector<double> materialize() const {
    std::vector<double> w(v_);
    for (double& x : w) x *= scale_;
    return w;
  }

 private:
  std::vector<double> v_;
  double scale_ = 1.0;
};

// Stable log(1 + exp(z)).
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Loss for one sample and d loss / d score.
std::pair<double, double> sample_loss(LinearLoss loss, double score, double target) {
  if (loss == LinearLoss::Logistic) {
    return {softplus(score) - target * score, sigmoid(score) - target};
  }
  const double margin = target * score;
  if (margin < 1.0) return {1.0 - margin, -target};
  return {0.0, 0.0};
}

struct BinaryFit {
  std::vector<double> w;
  double b = 0.0;
};

// Minimizes (1/n) sum_i loss_i + (lambda/2) ||w||^2 with lambda = 1/(C n) by
// mini-batch (sub)gradient descent, step lr / (1 + lr * lambda * t).
BinaryFit fit_binary(LinearLoss loss, const DocTermMatrix& X, std::span<const double> targets,
                     double C, double lr0, int max_epochs, double tol, int batch_size,
                     std::uint64_t seed) {
  const std::size_t n = X.rows();
  const double lambda = 1.0 / (C * static_cast<double>(n));
  ScaledVector w(X.cols());
  double b = 0.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);

  std::vector<double> dscore;
  double previous = std::numeric_limits<double>::infinity();
  std::uint64_t step = 0;
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(batch_size));
      const auto m = static_cast<double>(stop - start);
      dscore.clear();
      double bias_grad = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const auto i = order[k];
        const double g = sample_loss(loss, w.dot(X.row(i)) + b, targets[i]).second;
        dscore.push_back(g);
        bias_grad += g;
      }
      ++step;
      const double lr = lr0 / (1.0 + lr0 * lambda * static_cast<double>(step));
      w.shrink(1.0 - lr * lambda);
      for (std::size_t k = start; k < stop; ++k) {
        const double g = dscore[k - start];
        if (g != 0.0) w.add_row(X.row(order[k]), -lr * g / m);
      }
      b -= lr * bias_grad / m;
    }

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      objective += sample_loss(loss, w.dot(X.row(i)) + b, targets[i]).first;
    }
    objective = objective / static_cast<double>(n) + 0.5 * lambda * w.squared_norm();
    if (!std::isfinite(objective)) {
      throw std::runtime_error("linear model objective diverged at epoch " +
                               std::to_string(epoch));
    }
    if (std::abs(previous - objective) <= tol * std::max(1.0, std::abs(objective))) break;
    previous = objective;
  }
  return {w.materialize(), b};
}

LinearModel train_ovr(Algorithm algorithm, LinearLoss loss, const DocTermMatrix& X,
                      std::span<const Sentiment> labels, double C, double lr, int max_epochs,
                      double tol, int batch_size, std::uint64_t seed) {
  detail::check_training_input(X, labels);
  LinearModel model;
  model.algorithm = algorithm;
  model.n_features = X.cols();
  if (auto only = detail::single_class(labels)) {
    log::warn("training data has a single class (" + std::string(sentiment_name(*only)) +
              "); fitting a constant predictor");
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      model.weights[c].assign(X.cols(), 0.0);
      model.bias[c] = c == class_index(*only) ? detail::kConstantLogit : -detail::kConstantLogit;
    }
    return model;
  }
  std::vector<double> targets(labels.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const bool positive = class_index(labels[i]) == c;
      targets[i] = loss == LinearLoss::Logistic ? (positive ? 1.0 : 0.0)
                                                : (positive ? 1.0 : -1.0);
    }
    auto fit = fit_binary(loss, X, targets, C, lr, max_epochs, tol, batch_size,
                          derive_seed(seed, c));
    model.weights[c] = std::move(fit.w);
    model.bias[c] = fit.b;
  }
  return model;
}

BinaryObjective binary_objective(LinearLoss loss, const DocTermMatrix& X,
                                 std::span<const double> targets, std::span<const double> w,
                                 double b, double C) {
  if (targets.size() != X.rows() || w.size() != X.cols()) {
    throw std::invalid_argument("objective: dimension mismatch");
  }
  BinaryObjective out;
  out.grad_w.assign(w.size(), 0.0);
  // Logistic: sum loss + ||w||^2/(2C). Hinge: ||w||^2/2 + C sum loss.
  const double data_weight = loss == LinearLoss::Logistic ? 1.0 : C;
  const double reg_weight = loss == LinearLoss::Logistic ? 1.0 / C : 1.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto row = X.row(i);
    auto [l, g] = sample_loss(loss, row.dot(w) + b, targets[i]);
    out.value += data_weight * l;
    out.grad_b += data_weight * g;
    for (std::size_t k = 0; k < row.nnz(); ++k) {
      out.grad_w[row.columns[k]] += data_weight * g * row.values[k];
    }
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    sq += w[j] * w[j];
    out.grad_w[j] += reg_weight * w[j];
  }
  out.value += 0.5 * reg_weight * sq;
  return out;
}

}  // namespace

LinearModel train_logistic_regression(const DocTermMatrix& X, std::span<const Sentiment> labels,
                                      const LogRegParams& p) {
  validate(ModelSpec{p});
  return train_ovr(Algorithm::LogReg, LinearLoss::Logistic, X, labels, p.C, p.learning_rate,
                   p.max_epochs, p.tol, p.batch_size, p.seed);
}

LinearModel train_linear_svm(const DocTermMatrix& X, std::span<const Sentiment> labels,
                             const SvmParams& p) {
  validate(ModelSpec{p});
  return train_ovr(Algorithm::Svm, LinearLoss::Hinge, X, labels, p.C, p.learning_rate,
                   p.max_epochs, p.tol, p.batch_size, p.seed);
}

ScoreMatrix predict_scores(const LinearModel& model, const DocTermMatrix& X) {
  detail::check_prediction_input(model.n_features, X);
  ScoreMatrix out{X.rows(), std::vector<double>(X.rows() * kNumClasses)};
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto row = X.row(i);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      out.values[i * kNumClasses + c] = sigmoid(row.dot(model.weights[c]) + model.bias[c]);
    }
  }
  return out;
}

BinaryObjective logistic_objective(const DocTermMatrix& X, std::span<const double> targets,
                                   std::span<const double> w, double b, double C) {
  return binary_objective(LinearLoss::Logistic, X, targets, w, b, C);
}

BinaryObjective hinge_objective(const DocTermMatrix& X, std::span<const double> targets,
                                std::span<const double> w, double b, double C) {
  return binary_objective(LinearLoss::Hinge, X, targets, w, b, C);
}

}  // namespace drugsent
