#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace drugsent {

enum class OptimizerKind { Sgd, RmsProp, Adam, Nadam };

std::string_view optimizer_name(OptimizerKind k) noexcept;
OptimizerKind parse_optimizer(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double rho = 0.9;  // RMSProp decay
  double epsilon = 1e-8;
};

/// Accumulators for one flat parameter vector.
struct OptimizerState {
  std::vector<double> first_moment;   // Adam/Nadam
  std::vector<double> second_moment;  // Adam/Nadam: v; RMSProp: mean square
  std::uint64_t step = 0;

  explicit OptimizerState(std::size_t n_params = 0)
      : first_moment(n_params, 0.0), second_moment(n_params, 0.0) {}
};

/// Applies one update in place and advances state.step.
///
///   SGD      theta -= lr * g
///   RMSProp  v = rho v + (1-rho) g^2;  theta -= lr g / (sqrt(v) + eps)
///   Adam     m = b1 m + (1-b1) g;  v = b2 v + (1-b2) g^2
///            theta -= lr mhat / (sqrt(vhat) + eps), bias-corrected at step t
///   Nadam    as Adam with the Nesterov look-ahead first moment
///            b1 mhat + (1-b1) g / (1 - b1^t)
///
/// Throws std::invalid_argument on shape mismatch, non-positive learning
/// rate, or a non-finite gradient (state is left untouched in that case).
void optimizer_step(const OptimizerConfig& cfg, OptimizerState& state,
                    std::span<double> params, std::span<const double> grads);

}  // namespace drugsent
