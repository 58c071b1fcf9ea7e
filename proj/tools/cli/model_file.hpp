#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oneclass/evaluation.hpp"
#include "oneclass/pipeline.hpp"

namespace oneclass::cli {

inline constexpr int kModelFormatVersion = 1;

struct Provenance {
  std::uint64_t seed = 0;
  std::string dataset_fingerprint;  // fnv1a64 of the training file bytes, hex
  std::optional<GridCell> grid_cell;
};

// Everything needed to score new rows: the frozen preprocessing, the dual
// OCKELM solution and the training rows it is expressed against.
struct ModelFile {
  int format_version = kModelFormatVersion;
  Detector detector;
  std::optional<IcaConfig> ica_config;
  std::vector<std::string> feature_names;
  Provenance provenance;
};

nlohmann::json to_json(const ModelFile& model);
ModelFile model_from_json(const nlohmann::json& doc);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

nlohmann::json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);
nlohmann::json ica_config_to_json(const IcaConfig& config);
IcaConfig ica_config_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const EvalReport& report);

// Writes via a sibling temporary file and a rename so readers never see a
// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string fingerprint_file(const std::filesystem::path& path);

}  // namespace oneclass::cli
