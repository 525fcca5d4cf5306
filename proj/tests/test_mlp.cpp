#include <doctest.h>

#include <stdexcept>

#include "drugsent/log.hpp"
#include "drugsent/models.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace drugsent;
using namespace drugsent::testing;

namespace {

void xor_data(DocTermMatrix& X, std::vector<Sentiment>& y) {
  X = dense_matrix({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  y = {Sentiment::Negative, Sentiment::Negative, Sentiment::Positive, Sentiment::Positive};
}

MlpParams small(Activation a, int layers, int neurons, std::uint64_t seed) {
  MlpParams p;
  p.activation = a;
  p.hidden_layers = layers;
  p.hidden_neurons = neurons;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("one hidden layer learns xor") {
  DocTermMatrix X(0, Encoding::TfIdf);
  std::vector<Sentiment> y;
  xor_data(X, y);
  auto p = small(Activation::Tanh, 1, 8, 3);
  p.epochs = 2000;
  p.batch_size = 4;
  p.learning_rate = 0.01;
  const auto m = train_mlp(X, y, p);
  CHECK(predict_labels(m, X) == y);
}

TEST_CASE("every optimizer reduces the training loss") {
  DocTermMatrix X(0, Encoding::TfIdf);
  std::vector<Sentiment> y;
  xor_data(X, y);
  for (auto opt : {OptimizerKind::Sgd, OptimizerKind::RmsProp, OptimizerKind::Adam,
                   OptimizerKind::Nadam}) {
    auto p = small(Activation::Relu, 2, 6, 1);
    p.optimizer = opt;
    p.batch_size = 4;
    p.epochs = 200;
    p.learning_rate = opt == OptimizerKind::Sgd ? 0.1 : 0.01;
    std::vector<double> g;
    const double before = mlp_loss_and_gradient(init_mlp(2, p), X, y, g);
    const double after = mlp_loss_and_gradient(train_mlp(X, y, p), X, y, g);
    CHECK(after < before);
  }
}

TEST_CASE("zero epochs returns the initial network") {
  DocTermMatrix X(0, Encoding::TfIdf);
  std::vector<Sentiment> y;
  xor_data(X, y);
  auto p = small(Activation::Relu, 2, 5, 7);
  p.epochs = 0;
  CHECK(train_mlp(X, y, p) == init_mlp(2, p));
}

TEST_CASE("initialization shapes and bounds") {
  const auto m = init_mlp(10, small(Activation::Relu, 2, 4, 0));
  REQUIRE(m.layers.size() == 3);
  CHECK(m.layers[0].in == 10);
  CHECK(m.layers[0].out == 4);
  CHECK(m.layers[2].out == kNumClasses);
  CHECK(m.parameter_count() == 10 * 4 + 4 + 4 * 4 + 4 + 4 * 3 + 3);
  for (double w : m.layers[0].weights) CHECK(std::abs(w) <= 1.0 / std::sqrt(10.0));
  for (double b : m.layers[1].bias) CHECK(b == 0.0);
}

TEST_CASE("backpropagation matches finite differences for every activation") {
  Rng rng(17);
  for (auto act : {Activation::Relu, Activation::Linear, Activation::Softsign,
                   Activation::Tanh}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto rows = 3 + rng.below(8);
      const auto cols = 2 + rng.below(6);
      const auto X = random_matrix(rng, rows, cols, 0.6);
      std::vector<Sentiment> y(rows);
      for (auto& l : y) l = sentiment_from_index(rng.below(3));
      auto model = init_mlp(cols, small(act, 1 + static_cast<int>(rng.below(2)), 4, rng.next()));
      for (auto& layer : model.layers) {
        for (auto& b : layer.bias) b = rng.uniform(-0.5, 0.5);
      }
      std::vector<double> grad;
      mlp_loss_and_gradient(model, X, y, grad);
      auto f = [&](const std::vector<double>& p) {
        auto copy = model;
        set_mlp_parameters(copy, p);
        std::vector<double> unused;
        return mlp_loss_and_gradient(copy, X, y, unused);
      };
      const auto numeric = oracle::numeric_gradient(f, mlp_parameters(model), 1e-6);
      CHECK(oracle::relative_error(grad, numeric) <= 1e-4);
    }
  }
}

TEST_CASE("non-finite loss aborts training") {
  DocTermMatrix X(0, Encoding::TfIdf);
  std::vector<Sentiment> y;
  xor_data(X, y);
  auto p = small(Activation::Linear, 2, 4, 2);
  p.optimizer = OptimizerKind::Sgd;
  p.learning_rate = 1e300;
  p.epochs = 50;
  p.batch_size = 4;
  CHECK_THROWS_AS(train_mlp(X, y, p), std::runtime_error);
}

TEST_CASE("mlp training is deterministic and validates input") {
  Rng rng(5);
  const auto X = random_matrix(rng, 40, 12, 0.3);
  std::vector<Sentiment> y(40);
  for (auto& l : y) l = sentiment_from_index(rng.below(3));
  auto p = small(Activation::Relu, 2, 6, 9);
  p.epochs = 5;
  p.batch_size = 8;
  const auto a = train_mlp(X, y, p);
  CHECK(a == train_mlp(X, y, p));
  CHECK(predict_scores(a, X).values == predict_scores(a, X).values);
  DocTermMatrix wrong(3, Encoding::TfIdf);
  CHECK_THROWS_AS(predict_scores(a, wrong), std::invalid_argument);
  std::vector<Sentiment> single(40, Sentiment::Negative);
  log::set_quiet(true);
  const auto c = train_mlp(X, single, p);
  log::set_quiet(false);
  for (auto l : predict_labels(c, X)) CHECK(l == Sentiment::Negative);
  std::vector<double> bad_params(3);
  auto copy = a;
  CHECK_THROWS_AS(set_mlp_parameters(copy, bad_params), std::invalid_argument);
}
