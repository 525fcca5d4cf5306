#pragma once

#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "drugsent/models.hpp"

namespace drugsent {

inline constexpr int kModelFormatVersion = 1;

struct SavedModel {
  ModelSpec spec;
  TrainedModel model;
  std::uint64_t vocabulary_fingerprint = 0;
};

/// Versioned document: {"format", "format_version", "spec", "seed",
/// "vocabulary_fingerprint", "model"}. Doubles are written in shortest
/// round-trip decimal form, so loading reproduces every parameter exactly.
nlohmann::json model_to_json(const SavedModel& saved);
/// Throws std::runtime_error for unknown formats or inconsistent shapes.
SavedModel model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const SavedModel& saved);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace drugsent
