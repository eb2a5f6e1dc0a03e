#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mlcal/calibration.hpp"
#include "mlcal/corpus.hpp"
#include "mlcal/features.hpp"
#include "mlcal/linear_model.hpp"

namespace CLI {
class App;
class Option;
}  // namespace CLI

namespace mlcal::cli {

/// Bad flag combination or value; maps to the usage exit status.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SchemaOptions {
  std::string preset;
  std::string labels;

  void add_to(CLI::App& app);
  bool given() const { return !preset.empty() || !labels.empty(); }
  LabelSchema resolve() const;
};

struct PreprocessOptions {
  bool no_demojize = false;
  bool keep_urls = false;
  bool keep_mentions = false;
  bool keep_hashtag_symbol = false;
  bool no_lowercase = false;
  std::string emoji_table;
  std::size_t max_tokens = 128;

  void add_to(CLI::App& app);
  PreprocessConfig config() const;
};

struct ModelOptions {
  TrainConfig train;
  std::size_t hash_dim = FeaturizerConfig{}.hash_dim;
  std::string ngrams = "1,2";
  std::string tf = "binary";
  bool l2_normalize = FeaturizerConfig{}.l2_normalize;
  std::string weighting = "balanced";
  std::string binary_mode = "two-class-macro";
  std::size_t warmup_steps = 0;
  double label_smoothing = 0.0;

  void add_to(CLI::App& app);
  /// Applies the string-valued and optional flags; call after parsing.
  void finalize();
  FeaturizerConfig featurizer() const;
  WeightingMode weighting_mode() const { return parse_weighting_mode(weighting); }

 private:
  CLI::Option* warmup_steps_opt_ = nullptr;
  CLI::Option* smoothing_opt_ = nullptr;
};

struct TuneFlags {
  std::string binary_mode = "two-class-macro";
  std::size_t refine_passes = 1;
  std::string refine_reference = "sequential";

  void add_to(CLI::App& app, bool with_binary_mode);
  TuneOptions options() const;
};

BinaryAveraging parse_binary_mode(const std::string& s);

// Canonical JSON views used for config hashes in the manifest.
nlohmann::json to_json(const PreprocessConfig& c);
nlohmann::json to_json(const FeaturizerConfig& c);
nlohmann::json to_json(const TrainConfig& c);
nlohmann::json to_json(const TuneOptions& o);

}  // namespace mlcal::cli
