#include "manifest.hpp"

#include "digest.hpp"

namespace mlcal::cli {

namespace {

nlohmann::json file_list(const std::vector<std::filesystem::path>& files) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : files) {
    out.push_back({{"file", f.filename().string()}, {"sha256", sha256_file(f)}});
  }
  return out;
}

}  // namespace

std::string config_hash(const nlohmann::json& config) { return sha256_hex(config.dump()); }

Manifest::Manifest(nlohmann::json run_config) {
  doc_["format"] = "mlcal-manifest-1";
  doc_["config_hash"] = config_hash(run_config);
  doc_["config"] = std::move(run_config);
  doc_["stages"] = nlohmann::json::array();
}

void Manifest::add(const StageRecord& stage) {
  doc_["stages"].push_back({{"stage", stage.name},
                            {"config", stage.config},
                            {"config_hash", config_hash(stage.config)},
                            {"reads", file_list(stage.inputs)},
                            {"writes", file_list(stage.outputs)},
                            {"metrics", stage.metrics}});
}

std::string Manifest::dump() const { return doc_.dump(2) + "\n"; }

}  // namespace mlcal::cli
