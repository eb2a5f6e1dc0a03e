#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace mlcal::cli {

/// What one stage read, wrote and measured.
struct StageRecord {
  std::string name;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  nlohmann::json metrics = nlohmann::json::object();
};

/// Ordered record of a pipeline run. Files are listed by base name with
/// their SHA-256, so manifests from two output directories compare equal
/// when the runs produced the same bytes.
class Manifest {
 public:
  explicit Manifest(nlohmann::json run_config);

  /// Digests the stage's files as they are now and appends the stage.
  void add(const StageRecord& stage);

  const nlohmann::json& json() const { return doc_; }
  /// Pretty-printed with sorted keys and a trailing newline.
  std::string dump() const;

 private:
  nlohmann::json doc_;
};

/// Hash of a JSON value's compact serialization.
std::string config_hash(const nlohmann::json& config);

}  // namespace mlcal::cli
