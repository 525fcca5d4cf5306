#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "drugsent/model_spec.hpp"
#include "drugsent/types.hpp"
#include "drugsent/vectorize.hpp"

namespace drugsent {

/// k disjoint folds covering 0..n-1, each sorted ascending.
struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;

  /// Every index not in fold `f`, ascending.
  std::vector<std::size_t> complement(std::size_t f) const;
  std::size_t n() const;
};

/// Each class is shuffled with `seed` and dealt round-robin over the folds,
/// the deal continuing where the previous class stopped, so per-class and
/// total fold sizes both differ by at most one. Throws std::invalid_argument
/// when k < 2, n < k, or a present class has fewer than k members.
FoldPlan stratified_k_fold(std::span<const Sentiment> labels, std::size_t k, std::uint64_t seed);

struct CvResult {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

/// Trains on each fold's complement and scores accuracy on the fold.
/// Training errors are rethrown as std::runtime_error naming the fold.
CvResult cross_validate(const ModelSpec& spec, const DocTermMatrix& X,
                        std::span<const Sentiment> labels, const FoldPlan& plan,
                        unsigned threads = 1);

/// Named hyperparameter axes; the Cartesian product is enumerated with the
/// last axis varying fastest.
struct GridSpec {
  Algorithm algorithm = Algorithm::LogReg;
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;

  /// {"algorithm": "svm", "C": [0.1, 1], ...}. Every axis must be a nonempty
  /// array of values accepted by apply_param. Throws ConfigError.
  static GridSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t size() const;
  /// Specs in enumeration order, each starting from `base`.
  std::vector<ModelSpec> expand(const ModelSpec& base) const;
};

struct GridCell {
  ModelSpec spec;
  std::optional<CvResult> result;  // empty when training failed
  std::string error;
};

struct GridResult {
  std::vector<GridCell> cells;      // enumeration order
  std::vector<std::size_t> ranking; // successful cells, best first
  std::size_t best() const { return ranking.front(); }
  const ModelSpec& best_spec() const { return cells[best()].spec; }
};

/// Cross-validates every grid cell on one shared stratified plan. Cells are
/// ranked by mean accuracy, ties going to the earlier cell. Failed cells are
/// kept (with their error) but not ranked; throws std::runtime_error if
/// every cell fails.
GridResult grid_search(const GridSpec& grid, const ModelSpec& base, const DocTermMatrix& X,
                       std::span<const Sentiment> labels, std::size_t k, std::uint64_t seed,
                       unsigned threads = 1);

/// rank,mean_accuracy,fold accuracies...,params,error; rows in rank order,
/// failed cells last.
void write_grid_csv(std::ostream& out, const GridResult& result);

}  // namespace drugsent
