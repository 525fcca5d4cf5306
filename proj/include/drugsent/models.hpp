#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "drugsent/model_spec.hpp"
#include "drugsent/types.hpp"
#include "drugsent/vectorize.hpp"

namespace drugsent {

/// One-vs-rest linear scorer: class c scores sigmoid(w_c . x + b_c).
struct LinearModel {
  Algorithm algorithm = Algorithm::LogReg;  // LogReg or Svm
  std::size_t n_features = 0;
  std::array<std::vector<double>, kNumClasses> weights;
  std::array<double, kNumClasses> bias{};

  bool operator==(const LinearModel&) const = default;
};

/// Binary decision tree node. Internal nodes send x[feature] <= threshold
/// left; leaves (feature < 0) predict from class_counts.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t depth = 0;
  /// Bootstrap-weighted training samples reaching this node, per class.
  std::array<double, kNumClasses> class_counts{};

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int depth() const;
  bool operator==(const DecisionTree&) const = default;
};

struct ForestModel {
  std::size_t n_features = 0;
  std::vector<DecisionTree> trees;

  bool operator==(const ForestModel&) const = default;
};

/// Fully connected layer; weights stored input-major: weights[i * out + o].
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  bool operator==(const DenseLayer&) const = default;
};

/// Hidden layers share one activation; the last layer has kNumClasses
/// sigmoid outputs.
struct MlpModel {
  std::size_t n_features = 0;
  Activation activation = Activation::Relu;
  std::vector<DenseLayer> layers;

  std::size_t parameter_count() const;
  bool operator==(const MlpModel&) const = default;
};

using TrainedModel = std::variant<LinearModel, ForestModel, MlpModel>;

/// Row-major n x kNumClasses matrix of per-class scores in [0, 1].
struct ScoreMatrix {
  std::size_t rows = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t c) const { return values[i * kNumClasses + c]; }
  std::span<const double> row(std::size_t i) const {
    return std::span(values).subspan(i * kNumClasses, kNumClasses);
  }
  /// Scores of one class across all rows.
  std::vector<double> column(std::size_t c) const;
};

// -- training -------------------------------------------------------------
//
// All trainers require X.rows() == labels.size() (std::invalid_argument
// otherwise) and are deterministic given the spec seed. When fewer than two
// classes are present they warn and return a model that always predicts the
// single observed class.

LinearModel train_logistic_regression(const DocTermMatrix& X,
                                      std::span<const Sentiment> labels,
                                      const LogRegParams& params);
LinearModel train_linear_svm(const DocTermMatrix& X, std::span<const Sentiment> labels,
                             const SvmParams& params);
ForestModel train_random_forest(const DocTermMatrix& X, std::span<const Sentiment> labels,
                                const ForestParams& params);
/// Throws std::runtime_error if the training loss becomes non-finite.
MlpModel train_mlp(const DocTermMatrix& X, std::span<const Sentiment> labels,
                   const MlpParams& params);

TrainedModel train_model(const ModelSpec& spec, const DocTermMatrix& X,
                         std::span<const Sentiment> labels);

// -- prediction -----------------------------------------------------------

/// Throws std::invalid_argument when X.cols() differs from the model's.
ScoreMatrix predict_scores(const TrainedModel& model, const DocTermMatrix& X);
ScoreMatrix predict_scores(const LinearModel& model, const DocTermMatrix& X);
ScoreMatrix predict_scores(const ForestModel& model, const DocTermMatrix& X);
ScoreMatrix predict_scores(const MlpModel& model, const DocTermMatrix& X);

/// Argmax per row; ties go to the lowest class index.
Sentiment argmax_label(std::span<const double> scores);
std::vector<Sentiment> predict_labels(const ScoreMatrix& scores);
std::vector<Sentiment> predict_labels(const TrainedModel& model, const DocTermMatrix& X);

std::size_t model_n_features(const TrainedModel& model) noexcept;

// -- objectives exposed for verification ----------------------------------

struct BinaryObjective {
  double value = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

/// sum_i BCE(sigmoid(w.x_i + b), t_i) + ||w||^2 / (2C), t_i in {0,1}.
BinaryObjective logistic_objective(const DocTermMatrix& X, std::span<const double> targets,
                                   std::span<const double> w, double b, double C);

/// ||w||^2 / 2 + C sum_i max(0, 1 - t_i (w.x_i + b)), t_i in {-1,+1}.
/// The gradient is a subgradient (zero contribution at the hinge kink).
BinaryObjective hinge_objective(const DocTermMatrix& X, std::span<const double> targets,
                                std::span<const double> w, double b, double C);

/// Flat parameter vector: for each layer, weights then bias.
std::vector<double> mlp_parameters(const MlpModel& model);
void set_mlp_parameters(MlpModel& model, std::span<const double> params);

/// Mean over rows of sum_c BCE(sigmoid(z_c), onehot(y)_c); gradient written
/// into `grad` in mlp_parameters order.
double mlp_loss_and_gradient(const MlpModel& model, const DocTermMatrix& X,
                             std::span<const Sentiment> labels, std::vector<double>& grad);

/// Randomly initialized network (uniform in +-1/sqrt(fan_in), zero bias).
MlpModel init_mlp(std::size_t n_features, const MlpParams& params);

}  // namespace drugsent
