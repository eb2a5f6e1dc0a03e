#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mlcal/corpus.hpp"
#include "mlcal/features.hpp"
#include "mlcal/metrics.hpp"
#include "mlcal/probabilities.hpp"
#include "mlcal/weighting.hpp"

namespace mlcal {

/// Multi-label logistic model over hashed features. Weights are stored
/// row-major by feature: weights[f * labels + j].
struct LinearModel {
  LabelSchema schema;
  FeaturizerConfig featurizer;
  PreprocessConfig preprocess;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static LinearModel zeros(const LabelSchema& schema, const FeaturizerConfig& fcfg,
                           const PreprocessConfig& pcfg = {});
  /// Zero model of explicit shape; the featurizer config is left at defaults.
  static LinearModel zeros(std::size_t dim, const LabelSchema& schema);

  std::size_t labels() const { return schema.size(); }
  double& w(std::size_t feature, std::size_t label) { return weights[feature * labels() + label]; }
  double w(std::size_t feature, std::size_t label) const {
    return weights[feature * labels() + label];
  }
  double logit(const SparseVector& x, std::size_t label) const;
  bool all_finite() const;
};

/// Multipliers applied inside the BCE objective.
///   loss = c_y * [ pw * t * softplus(-z) + (1 - t) * softplus(z) ]
/// with t the smoothed target, pw the positive weight and c_y the class
/// weight of the gold value y.
struct LossWeights {
  std::vector<double> pos_weight;
  std::vector<double> neg_class_weight;
  std::vector<double> pos_class_weight;

  static LossWeights uniform(std::size_t labels);
  static LossWeights from(const PosWeights& pw);
  /// Binary class weights [w_0, w_1] applied to a single label.
  static LossWeights from(const ClassWeights& cw);
};

struct Gradient {
  std::vector<double> weights;  // same layout as LinearModel::weights
  std::vector<double> bias;
};

struct LossAndGrad {
  double loss = 0.0;
  Gradient grad;
};

/// Smoothed target y(1 - eps) + eps/2.
double smoothed_target(std::uint8_t y, double smoothing);

/// Mean weighted BCE over batch x labels plus weight_decay/2 * ||W||^2, and
/// its exact gradient. `targets` has one row per entry of `batch`. Throws
/// std::domain_error on non-finite logits or feature values.
LossAndGrad loss_and_grad(const LinearModel& model, std::span<const SparseVector> batch,
                          const BitMatrix& targets, const LossWeights& weights,
                          double smoothing, double weight_decay = 0.0);

double sigmoid(double z);

ProbabilityMatrix predict_proba(const LinearModel& model, const Dataset& ds);
ProbabilityMatrix predict_proba(const LinearModel& model, std::span<const SparseVector> rows,
                                std::vector<std::string> ids);

// ---------------------------------------------------------------------------
// Training

enum class WeightingMode { None, Balanced };

std::string_view to_string(WeightingMode m);
WeightingMode parse_weighting_mode(std::string_view s);

struct TrainConfig {
  double learning_rate = 5.0;
  double weight_decay = 1e-3;
  std::size_t max_epochs = 10;
  std::size_t batch_size = 32;
  std::size_t accumulation_steps = 2;
  /// Explicit warmup length in optimizer steps; overrides warmup_ratio.
  std::optional<std::size_t> warmup_steps;
  double warmup_ratio = 0.1;
  double max_grad_norm = 1.0;
  /// Defaults to 0.1 for single-label schemas and 0 for multi-label ones.
  std::optional<double> label_smoothing;
  std::size_t patience = 3;
  std::uint64_t seed = 42;
  double pos_weight_cap = kDefaultPosWeightCap;
  /// Averaging used for validation macro-F1 on single-label schemas.
  BinaryAveraging binary_averaging = BinaryAveraging::TwoClassMacro;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  double smoothing_for(const LabelSchema& schema) const;
};

struct TrainReport {
  std::vector<double> train_loss;
  std::vector<double> val_macro_f1;
  std::vector<double> epoch_end_lr;
  /// 1-based; 0 when no epoch ran.
  std::size_t best_epoch = 0;
  bool stopped_early = false;
  std::size_t total_steps = 0;
  std::size_t warmup_steps = 0;
  std::variant<std::monostate, ClassWeights, PosWeights> weights_used;
};

struct TrainResult {
  LinearModel model;
  TrainReport report;
};

/// Linear warmup to `base` over `warmup` steps, then cosine decay to zero at
/// `total`. Steps are 1-based.
double scheduled_lr(double base, std::size_t step, std::size_t warmup, std::size_t total);

/// Scales `g` in place so its global L2 norm is at most `max_norm`; returns
/// the norm before clipping.
double clip_global_norm(Gradient& g, double max_norm);

/// Minibatch SGD with gradient accumulation, warmup + cosine learning rate,
/// global-norm clipping and decoupled weight decay. Validation macro-F1 at
/// threshold 0.5 is measured after every epoch; the best epoch's parameters
/// are returned and training stops after `patience` epochs without
/// improvement.
TrainResult train(const Dataset& train_ds, const Dataset& val_ds, const TrainConfig& tcfg,
                  const FeaturizerConfig& fcfg, WeightingMode weighting,
                  const PreprocessConfig& pcfg = {});

std::string format_history(const TrainReport& r);

// ---------------------------------------------------------------------------
// Model files

std::string format_model(const LinearModel& m);
LinearModel parse_model(std::string_view text);
void save_model(const std::filesystem::path& path, const LinearModel& m);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace mlcal
