#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include "manifest.hpp"
#include "mlcal/calibration.hpp"
#include "mlcal/corpus.hpp"
#include "mlcal/linear_model.hpp"
#include "mlcal/splitter.hpp"
#include "mlcal/synthetic.hpp"

namespace mlcal::cli {

namespace fs = std::filesystem;

/// stratified_split for single-label schemas, iterative_stratified_split otherwise.
SplitResult split_dataset(const Dataset& ds, double val_fraction, std::uint64_t seed);

struct StatsArgs {
  fs::path data;
  LabelSchema schema;
  PreprocessConfig preprocess;
  bool machine = false;
};
void cmd_stats(const StatsArgs& a, std::ostream& out);

struct SplitArgs {
  fs::path data;
  fs::path train_out;
  fs::path val_out;
  LabelSchema schema;
  PreprocessConfig preprocess;
  double val_fraction = 0.2;
  std::uint64_t seed = 42;
};
StageRecord cmd_split(const SplitArgs& a, std::ostream& out);

struct MergeArgs {
  fs::path primary;
  fs::path donor;
  fs::path out;
  LabelSchema schema;
  PreprocessConfig preprocess;
  std::uint64_t seed = 42;
};
StageRecord cmd_merge(const MergeArgs& a, std::ostream& out);

struct TrainArgs {
  fs::path train;
  fs::path val;
  fs::path model_out;
  std::optional<fs::path> history_out;
  LabelSchema schema;
  PreprocessConfig preprocess;
  TrainConfig train_config;
  FeaturizerConfig featurizer;
  WeightingMode weighting = WeightingMode::Balanced;
};
StageRecord cmd_train(const TrainArgs& a, std::ostream& out);

struct PredictArgs {
  fs::path model;
  fs::path data;
  fs::path out;
};
StageRecord cmd_predict(const PredictArgs& a, std::ostream& out);

struct TuneArgs {
  fs::path probs;
  fs::path gold;
  fs::path out;
  LabelSchema schema;
  TuneOptions options;
};
StageRecord cmd_tune(const TuneArgs& a, std::ostream& out);

struct EvalArgs {
  fs::path probs;
  fs::path gold;
  std::optional<fs::path> thresholds;
  std::optional<fs::path> report_out;
  LabelSchema schema;
  BinaryAveraging averaging = BinaryAveraging::TwoClassMacro;
  bool machine = false;
  bool allow_tuning_data = false;
};
StageRecord cmd_eval(const EvalArgs& a, std::ostream& out);

struct GenerateArgs {
  fs::path out;
  SyntheticSpec spec;
};
void cmd_generate(const GenerateArgs& a, std::ostream& out);

struct PipelineArgs {
  fs::path data;
  fs::path out_dir;
  LabelSchema schema;
  PreprocessConfig preprocess;
  TrainConfig train_config;
  FeaturizerConfig featurizer;
  WeightingMode weighting = WeightingMode::Balanced;
  TuneOptions tune;
  double val_fraction = 0.2;
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
};
/// split -> train -> predict(val) -> tune(val) -> predict(test) -> eval(test).
/// Writes every artifact and manifest.json into out_dir.
void cmd_pipeline(const PipelineArgs& a, std::ostream& out);

}  // namespace mlcal::cli
