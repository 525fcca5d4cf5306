#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "drugsent/metrics.hpp"
#include "drugsent/model_spec.hpp"
#include "drugsent/models.hpp"
#include "drugsent/validation.hpp"

namespace drugsent {

inline constexpr int kMetricsSchemaVersion = 1;

struct EvalReport {
  ModelSpec spec;
  std::string condition;
  Encoding encoding = Encoding::TfIdf;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t n_features = 0;

  CvResult cv;
  double test_accuracy = 0.0;
  ConfusionMatrix confusion{};
  std::array<double, kNumClasses> f1{};
  double macro_f1 = 0.0;

  // One-vs-rest curves; empty for a class missing from (or filling) the
  // test set, where the curve is undefined.
  std::array<std::optional<Curve>, kNumClasses> roc;
  std::array<std::optional<Curve>, kNumClasses> pr;
  /// Means over the classes that have curves.
  std::optional<double> macro_roc_auc;
  std::optional<double> macro_average_precision;
};

/// Fills the test-set metrics of `report` from true labels and model scores.
void evaluate_test_set(EvalReport& report, std::span<const Sentiment> truth,
                       const ScoreMatrix& scores);

nlohmann::json report_to_json(const EvalReport& report);

/// Writes metrics.json, curves.csv and roc_<class>.svg / pr_<class>.svg into
/// out_dir (created if needed). Output bytes depend only on the report.
/// Throws std::runtime_error when the directory is unwritable or a curve is
/// empty or every curve is missing.
void write_report(const EvalReport& report, const std::filesystem::path& out_dir);

}  // namespace drugsent
