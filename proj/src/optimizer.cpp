#include "drugsent/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "drugsent/types.hpp"

namespace drugsent {

std::string_view optimizer_name(OptimizerKind k) noexcept {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::RmsProp: return "rmsprop";
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::Nadam: return "nadam";
  }
  return "?";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "rmsprop") return OptimizerKind::RmsProp;
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "nadam") return OptimizerKind::Nadam;
  throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

void optimizer_step(const OptimizerConfig& cfg, OptimizerState& state,
                    std::span<double> params, std::span<const double> grads) {
  const std::size_t n = params.size();
  if (grads.size() != n) throw std::invalid_argument("gradient/parameter shape mismatch");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  for (double g : grads) {
    if (!std::isfinite(g)) throw std::invalid_argument("non-finite gradient");
  }
  if (cfg.kind != OptimizerKind::Sgd &&
      (state.second_moment.size() != n ||
       (cfg.kind != OptimizerKind::RmsProp && state.first_moment.size() != n))) {
    throw std::invalid_argument("optimizer state shape mismatch");
  }

  const double lr = cfg.learning_rate;
  const double eps = cfg.epsilon;
  ++state.step;
  const auto t = static_cast<double>(state.step);

  switch (cfg.kind) {
    case OptimizerKind::Sgd:
      for (std::size_t i = 0; i < n; ++i) params[i] -= lr * grads[i];
      break;
    case OptimizerKind::RmsProp: {
      auto& v = state.second_moment;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = cfg.rho * v[i] + (1.0 - cfg.rho) * grads[i] * grads[i];
        params[i] -= lr * grads[i] / (std::sqrt(v[i]) + eps);
      }
      break;
    }
    case OptimizerKind::Adam:
    case OptimizerKind::Nadam: {
      auto& m = state.first_moment;
      auto& v = state.second_moment;
      const double b1 = cfg.beta1, b2 = cfg.beta2;
      const double c1 = 1.0 - std::pow(b1, t);
      const double c1_next = 1.0 - std::pow(b1, t + 1.0);
      const double c2 = 1.0 - std::pow(b2, t);
      const bool nesterov = cfg.kind == OptimizerKind::Nadam;
      for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        m[i] = b1 * m[i] + (1.0 - b1) * g;
        v[i] = b2 * v[i] + (1.0 - b2) * g * g;
        const double v_hat = v[i] / c2;
        const double m_hat = nesterov ? b1 * m[i] / c1_next + (1.0 - b1) * g / c1
                                      : m[i] / c1;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
      }
      break;
    }
  }
}

}  // namespace drugsent
