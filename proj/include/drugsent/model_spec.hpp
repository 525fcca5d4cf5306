#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "drugsent/optimizer.hpp"

namespace drugsent {

enum class Algorithm { LogReg, Svm, RandomForest, Mlp };

std::string_view algorithm_name(Algorithm a) noexcept;
/// Accepts logreg|lr, svm, rf|forest, mlp|ann. Throws ConfigError.
Algorithm parse_algorithm(std::string_view name);

enum class MaxFeatures {
  Sqrt,  // ceil(sqrt(n_features)) candidates per node
  Auto,  // same as Sqrt for classification
  All,   // every feature, no sampling
};

enum class Activation { Relu, Linear, Softsign, Tanh };

std::string_view activation_name(Activation a) noexcept;
Activation parse_activation(std::string_view name);

// The only penalty / kernel / loss the models support; kept as named
// settings so configs can state them explicitly.
enum class Penalty { L2 };
enum class Kernel { Linear };
enum class Loss { Bce };

struct LogRegParams {
  double C = 1.0;
  Penalty penalty = Penalty::L2;
  int max_epochs = 100;
  double tol = 1e-4;
  double learning_rate = 0.5;
  int batch_size = 8;
  std::uint64_t seed = 0;
};

struct SvmParams {
  double C = 1.0;
  Kernel kernel = Kernel::Linear;
  int max_epochs = 100;
  double tol = 1e-4;
  double learning_rate = 0.1;
  int batch_size = 8;
  std::uint64_t seed = 0;
};

struct ForestParams {
  int num_trees = 200;
  int max_depth = 9;
  MaxFeatures max_features = MaxFeatures::Sqrt;
  int min_samples_leaf = 1;
  int min_samples_split = 2;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct MlpParams {
  int hidden_layers = 2;
  int hidden_neurons = 400;
  Activation activation = Activation::Relu;
  OptimizerKind optimizer = OptimizerKind::Adam;
  Loss loss = Loss::Bce;
  int epochs = 50;
  int batch_size = 128;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
};

using ModelSpec = std::variant<LogRegParams, SvmParams, ForestParams, MlpParams>;

Algorithm algorithm_of(const ModelSpec& spec) noexcept;
ModelSpec default_spec(Algorithm a);

/// Throws ConfigError when a count is non-positive, C <= 0, etc.
void validate(const ModelSpec& spec);

std::uint64_t spec_seed(const ModelSpec& spec) noexcept;
void set_seed(ModelSpec& spec, std::uint64_t seed) noexcept;

/// Sets one named hyperparameter (names as in to_json). Throws ConfigError
/// for names the algorithm does not have or values of the wrong type.
void apply_param(ModelSpec& spec, const std::string& name, const nlohmann::json& value);

/// {"algorithm": "...", <every hyperparameter>}; keys sorted.
nlohmann::json to_json(const ModelSpec& spec);
/// Starts from the algorithm defaults, then applies every other key.
ModelSpec spec_from_json(const nlohmann::json& j);

/// Compact "name=value" list of the hyperparameters, for tables and logs.
std::string describe(const ModelSpec& spec);

}  // namespace drugsent
