#include "drugsent/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace drugsent {
namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("prediction and truth lengths differ");
  if (a == 0) throw std::invalid_argument("metrics need at least one sample");
}

// Cumulative (fp, tp) after each distinct score, highest score first.
struct Sweep {
  std::vector<double> thresholds;
  std::vector<double> fp;
  std::vector<double> tp;
  double positives = 0;
  double negatives = 0;
};

Sweep sweep(std::span<const double> scores, std::span<const bool> truth) {
  if (scores.size() != truth.size()) {
    throw std::invalid_argument("score and truth lengths differ");
  }
  Sweep s;
  for (bool t : truth) (t ? s.positives : s.negatives) += 1.0;
  if (s.positives == 0 || s.negatives == 0) {
    throw std::invalid_argument("curve needs both positive and negative samples");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double fp = 0, tp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double v = scores[order[k]];
    while (k < order.size() && scores[order[k]] == v) {
      (truth[order[k]] ? tp : fp) += 1.0;
      ++k;
    }
    s.thresholds.push_back(v);
    s.fp.push_back(fp);
    s.tp.push_back(tp);
  }
  return s;
}

}  // namespace

double accuracy(std::span<const Sentiment> predicted, std::span<const Sentiment> truth) {
  check_lengths(predicted.size(), truth.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

ConfusionMatrix confusion_matrix(std::span<const Sentiment> predicted,
                                 std::span<const Sentiment> truth) {
  check_lengths(predicted.size(), truth.size());
  ConfusionMatrix m{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m[class_index(truth[i])][class_index(predicted[i])];
  }
  return m;
}

double f1_score(std::span<const Sentiment> predicted, std::span<const Sentiment> truth,
                Sentiment cls) {
  check_lengths(predicted.size(), truth.size());
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == cls, t = truth[i] == cls;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
  }
  const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Curve roc_curve(std::span<const double> scores, std::span<const bool> truth) {
  const auto s = sweep(scores, truth);
  Curve c;
  c.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  for (std::size_t k = 0; k < s.thresholds.size(); ++k) {
    c.points.push_back({s.fp[k] / s.negatives, s.tp[k] / s.positives, s.thresholds[k]});
  }
  for (std::size_t k = 1; k < c.points.size(); ++k) {
    const auto& a = c.points[k - 1];
    const auto& b = c.points[k];
    c.area += (b.x - a.x) * (a.y + b.y) / 2.0;
  }
  return c;
}

Curve pr_curve(std::span<const double> scores, std::span<const bool> truth) {
  const auto s = sweep(scores, truth);
  Curve c;
  const double first_precision = s.tp[0] / (s.tp[0] + s.fp[0]);
  c.points.push_back({0.0, first_precision, std::numeric_limits<double>::infinity()});
  double previous_recall = 0.0;
  for (std::size_t k = 0; k < s.thresholds.size(); ++k) {
    const double recall = s.tp[k] / s.positives;
    const double precision = s.tp[k] / (s.tp[k] + s.fp[k]);
    c.points.push_back({recall, precision, s.thresholds[k]});
    c.area += (recall - previous_recall) * precision;
    previous_recall = recall;
  }
  return c;
}

}  // namespace drugsent
