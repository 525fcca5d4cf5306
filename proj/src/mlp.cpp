#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "drugsent/log.hpp"
#include "drugsent/models.hpp"
#include "drugsent/optimizer.hpp"
#include "drugsent/random.hpp"
#include "model_common.hpp"

namespace drugsent {
namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Linear: return z;
    case Activation::Softsign: return z / (1.0 + std::abs(z));
    case Activation::Tanh: return std::tanh(z);
  }
  return z;
}

double activation_derivative(Activation a, double z) {
  switch (a) {
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Linear: return 1.0;
    case Activation::Softsign: {
      const double d = 1.0 + std::abs(z);
      return 1.0 / (d * d);
    }
    case Activation::Tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LayerGrad {
  std::vector<double> weights;
  std::vector<double> bias;
};

// Forward/backward buffers for one batch.
class Workspace {
 public:
  explicit Workspace(const MlpModel& model) {
    grads_.resize(model.layers.size());
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      grads_[l].weights.assign(model.layers[l].weights.size(), 0.0);
      grads_[l].bias.assign(model.layers[l].bias.size(), 0.0);
    }
    pre_.resize(model.layers.size());
    post_.resize(model.layers.size());
  }

  // Pre-activations per layer for the given rows; the last layer holds logits.
  void forward(const MlpModel& model, const DocTermMatrix& X, std::span<const std::size_t> rows) {
    const std::size_t B = rows.size();
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      const auto& layer = model.layers[l];
      auto& z = pre_[l];
      z.assign(B * layer.out, 0.0);
      for (std::size_t b = 0; b < B; ++b) {
        double* zb = z.data() + b * layer.out;
        std::copy(layer.bias.begin(), layer.bias.end(), zb);
        if (l == 0) {
          const auto row = X.row(rows[b]);
          for (std::size_t k = 0; k < row.nnz(); ++k) {
            const double x = row.values[k];
            const double* w = layer.weights.data() + row.columns[k] * layer.out;
            for (std::size_t o = 0; o < layer.out; ++o) zb[o] += x * w[o];
          }
        } else {
          const double* a = post_[l - 1].data() + b * layer.in;
          for (std::size_t i = 0; i < layer.in; ++i) {
            const double x = a[i];
            if (x == 0.0) continue;
            const double* w = layer.weights.data() + i * layer.out;
            for (std::size_t o = 0; o < layer.out; ++o) zb[o] += x * w[o];
          }
        }
      }
      if (l + 1 < model.layers.size()) {
        auto& a = post_[l];
        a.resize(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) a[k] = activate(model.activation, z[k]);
      }
    }
  }

  // Mean BCE over the batch; fills grads_.
  double backward(const MlpModel& model, const DocTermMatrix& X,
                  std::span<const std::size_t> rows, std::span<const Sentiment> labels) {
    const std::size_t B = rows.size();
    const std::size_t L = model.layers.size();
    const double inv_b = 1.0 / static_cast<double>(B);
    double loss = 0.0;

    std::vector<double> delta(B * kNumClasses);
    const auto& logits = pre_[L - 1];
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        const double z = logits[b * kNumClasses + c];
        const double y = class_index(labels[rows[b]]) == c ? 1.0 : 0.0;
        loss += softplus(z) - y * z;
        delta[b * kNumClasses + c] = (sigmoid(z) - y) * inv_b;
      }
    }

    for (std::size_t l = L; l-- > 0;) {
      const auto& layer = model.layers[l];
      auto& g = grads_[l];
      std::fill(g.weights.begin(), g.weights.end(), 0.0);
      std::fill(g.bias.begin(), g.bias.end(), 0.0);
      for (std::size_t b = 0; b < B; ++b) {
        const double* d = delta.data() + b * layer.out;
        for (std::size_t o = 0; o < layer.out; ++o) g.bias[o] += d[o];
        if (l == 0) {
          const auto row = X.row(rows[b]);
          for (std::size_t k = 0; k < row.nnz(); ++k) {
            const double x = row.values[k];
            double* gw = g.weights.data() + row.columns[k] * layer.out;
            for (std::size_t o = 0; o < layer.out; ++o) gw[o] += x * d[o];
          }
        } else {
          const double* a = post_[l - 1].data() + b * layer.in;
          for (std::size_t i = 0; i < layer.in; ++i) {
            const double x = a[i];
            if (x == 0.0) continue;
            double* gw = g.weights.data() + i * layer.out;
            for (std::size_t o = 0; o < layer.out; ++o) gw[o] += x * d[o];
          }
        }
      }
      if (l == 0) break;
      std::vector<double> prev(B * layer.in, 0.0);
      const auto& z_prev = pre_[l - 1];
      for (std::size_t b = 0; b < B; ++b) {
        const double* d = delta.data() + b * layer.out;
        for (std::size_t i = 0; i < layer.in; ++i) {
          const double* w = layer.weights.data() + i * layer.out;
          double s = 0.0;
          for (std::size_t o = 0; o < layer.out; ++o) s += w[o] * d[o];
          prev[b * layer.in + i] =
              s * activation_derivative(model.activation, z_prev[b * layer.in + i]);
        }
      }
      delta = std::move(prev);
    }
    return loss * inv_b;
  }

  const std::vector<double>& logits(const MlpModel& model) const {
    return pre_[model.layers.size() - 1];
  }
  std::vector<LayerGrad>& grads() { return grads_; }

 private:
  std::vector<std::vector<double>> pre_;
  std::vector<std::vector<double>> post_;
  std::vector<LayerGrad> grads_;
};

void check_model(const MlpModel& model) {
  if (model.layers.empty() || model.layers.back().out != kNumClasses ||
      model.layers.front().in != model.n_features) {
    throw std::invalid_argument("malformed MLP layer stack");
  }
  for (std::size_t l = 1; l < model.layers.size(); ++l) {
    if (model.layers[l].in != model.layers[l - 1].out) {
      throw std::invalid_argument("MLP layer dimensions do not chain");
    }
  }
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

MlpModel init_mlp(std::size_t n_features, const MlpParams& params) {
  validate(ModelSpec{params});
  MlpModel model;
  model.n_features = n_features;
  model.activation = params.activation;
  Rng rng(params.seed);
  std::size_t in = n_features;
  for (int l = 0; l <= params.hidden_layers; ++l) {
    const std::size_t out =
        l == params.hidden_layers ? kNumClasses : static_cast<std::size_t>(params.hidden_neurons);
    DenseLayer layer{in, out, std::vector<double>(in * out), std::vector<double>(out, 0.0)};
    const double limit = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(in, 1)));
    for (double& w : layer.weights) w = rng.uniform(-limit, limit);
    model.layers.push_back(std::move(layer));
    in = out;
  }
  return model;
}

MlpModel train_mlp(const DocTermMatrix& X, std::span<const Sentiment> labels,
                   const MlpParams& params) {
  detail::check_training_input(X, labels);
  MlpModel model = init_mlp(X.cols(), params);
  if (auto only = detail::single_class(labels)) {
    log::warn("training data has a single class (" + std::string(sentiment_name(*only)) +
              "); fitting a constant predictor");
    auto& out = model.layers.back();
    std::fill(out.weights.begin(), out.weights.end(), 0.0);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      out.bias[c] = c == class_index(*only) ? detail::kConstantLogit : -detail::kConstantLogit;
    }
    return model;
  }

  OptimizerConfig cfg;
  cfg.kind = params.optimizer;
  cfg.learning_rate = params.learning_rate;
  std::vector<OptimizerState> weight_state, bias_state;
  for (const auto& layer : model.layers) {
    weight_state.emplace_back(layer.weights.size());
    bias_state.emplace_back(layer.bias.size());
  }

  Workspace ws(model);
  const std::size_t n = X.rows();
  const auto batch = static_cast<std::size_t>(params.batch_size);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(params.seed, 1));
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const auto rows = std::span(order).subspan(start, std::min(batch, n - start));
      ws.forward(model, X, rows);
      const double loss = ws.backward(model, X, rows, labels);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("MLP loss became non-finite at epoch " + std::to_string(epoch) +
                                 ", batch starting at " + std::to_string(start) +
                                 "; try a smaller learning rate");
      }
      auto& grads = ws.grads();
      try {
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
          optimizer_step(cfg, weight_state[l], model.layers[l].weights, grads[l].weights);
          optimizer_step(cfg, bias_state[l], model.layers[l].bias, grads[l].bias);
        }
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error("MLP training diverged at epoch " + std::to_string(epoch) +
                                 ": " + e.what());
      }
    }
  }
  return model;
}

ScoreMatrix predict_scores(const MlpModel& model, const DocTermMatrix& X) {
  check_model(model);
  detail::check_prediction_input(model.n_features, X);
  ScoreMatrix out{X.rows(), std::vector<double>(X.rows() * kNumClasses)};
  Workspace ws(model);
  constexpr std::size_t kChunk = 256;
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < X.rows(); start += kChunk) {
    const std::size_t stop = std::min(X.rows(), start + kChunk);
    rows.resize(stop - start);
    std::iota(rows.begin(), rows.end(), start);
    ws.forward(model, X, rows);
    const auto& z = ws.logits(model);
    for (std::size_t k = 0; k < z.size(); ++k) out.values[start * kNumClasses + k] = sigmoid(z[k]);
  }
  return out;
}

std::vector<double> mlp_parameters(const MlpModel& model) {
  std::vector<double> out;
  out.reserve(model.parameter_count());
  for (const auto& l : model.layers) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

void set_mlp_parameters(MlpModel& model, std::span<const double> params) {
  if (params.size() != model.parameter_count()) {
    throw std::invalid_argument("MLP parameter vector has the wrong length");
  }
  std::size_t k = 0;
  for (auto& l : model.layers) {
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(k), l.weights.size(), l.weights.begin());
    k += l.weights.size();
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(k), l.bias.size(), l.bias.begin());
    k += l.bias.size();
  }
}

double mlp_loss_and_gradient(const MlpModel& model, const DocTermMatrix& X,
                             std::span<const Sentiment> labels, std::vector<double>& grad) {
  check_model(model);
  detail::check_training_input(X, labels);
  detail::check_prediction_input(model.n_features, X);
  std::vector<std::size_t> rows(X.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Workspace ws(model);
  ws.forward(model, X, rows);
  const double loss = ws.backward(model, X, rows, labels);
  grad.clear();
  grad.reserve(model.parameter_count());
  for (const auto& g : ws.grads()) {
    grad.insert(grad.end(), g.weights.begin(), g.weights.end());
    grad.insert(grad.end(), g.bias.begin(), g.bias.end());
  }
  return loss;
}

}  // namespace drugsent
