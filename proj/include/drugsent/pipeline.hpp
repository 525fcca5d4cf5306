#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "drugsent/model_spec.hpp"
#include "drugsent/report.hpp"
#include "drugsent/validation.hpp"
#include "drugsent/vectorize.hpp"

namespace drugsent {

/// Everything one command needs. Built from a JSON config file and then
/// overridden field by field from command-line flags.
struct RunConfig {
  std::filesystem::path train_file;
  std::filesystem::path test_file;
  std::string condition;
  Encoding encoding = Encoding::TfIdf;
  std::optional<Algorithm> algorithm;
  nlohmann::json params = nlohmann::json::object();  // hyperparameters for train
  nlohmann::json grid = nlohmann::json::object();    // axes for gridsearch
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> stopwords_file;

  /// Reads the keys train_file, test_file, condition, encoding, algorithm,
  /// params, grid, k, seed, out, threads, stopwords. Unknown keys are errors.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::filesystem::path& path);

  /// Throws ConfigError unless the fields required by `command` are set.
  void validate_for(std::string_view command) const;

  /// Model spec from algorithm + params, with the run seed applied.
  ModelSpec model_spec() const;
  GridSpec grid_spec() const;

  /// out_dir/<condition>/<encoding>/<algorithm>
  std::filesystem::path result_dir() const;
};

struct RunOutputs {
  std::filesystem::path dir;
  EvalReport report;
};

/// Record counts, class mix, per-condition counts and the vocabulary size of
/// the chosen condition. Prints a summary to `out`, writes <out_dir>/stats.json
/// and returns the same document.
nlohmann::json cmd_stats(const RunConfig& config, std::ostream& out);

/// Fits on the condition's training slice, cross-validates, evaluates on
/// the test slice and writes model.json plus the report files. The result
/// directory is replaced atomically; on failure nothing is left behind.
RunOutputs cmd_train(const RunConfig& config, std::ostream& out);

/// Grid search over the configured axes, then cmd_train's outputs for the
/// best cell plus grid.csv with the full ranked table.
RunOutputs cmd_gridsearch(const RunConfig& config, std::ostream& out);

/// Directory-safe form of a condition name ("Birth Control" -> "Birth_Control").
std::string path_component(std::string_view name);

}  // namespace drugsent
