#pragma once

#include <array>
#include <span>
#include <vector>

#include "drugsent/types.hpp"

namespace drugsent {

/// confusion[truth][predicted]
using ConfusionMatrix = std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;

// All three throw std::invalid_argument on length mismatch or empty input.
double accuracy(std::span<const Sentiment> predicted, std::span<const Sentiment> truth);
ConfusionMatrix confusion_matrix(std::span<const Sentiment> predicted,
                                 std::span<const Sentiment> truth);
/// 2PR/(P+R) for one class; 0 when P+R = 0.
double f1_score(std::span<const Sentiment> predicted, std::span<const Sentiment> truth,
                Sentiment cls);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  /// Score cut-off: positive iff score >= threshold. +inf for the anchor
  /// point that predicts nothing positive.
  double threshold = 0.0;
};

struct Curve {
  std::vector<CurvePoint> points;
  /// ROC: trapezoidal AUC. PR: average precision sum (R_k - R_{k-1}) P_k.
  double area = 0.0;
};

/// (FPR, TPR) at every distinct score, highest first, from (0,0) to (1,1).
/// Tied scores move the curve in a single diagonal step. Throws
/// std::invalid_argument unless both classes are present.
Curve roc_curve(std::span<const double> scores, std::span<const bool> truth);

/// (recall, precision) at every distinct score, highest first. The first
/// point sits at recall 0 with the precision of the highest threshold.
Curve pr_curve(std::span<const double> scores, std::span<const bool> truth);

}  // namespace drugsent
