#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gradient_buffer.hpp"
#include "mlcal/errors.hpp"
#include "mlcal/linear_model.hpp"
#include "mlcal/random.hpp"

namespace mlcal {

std::string_view to_string(WeightingMode m) {
  return m == WeightingMode::Balanced ? "balanced" : "none";
}

WeightingMode parse_weighting_mode(std::string_view s) {
  if (s == "none") return WeightingMode::None;
  if (s == "balanced") return WeightingMode::Balanced;
  throw std::invalid_argument("unknown weighting mode '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight_decay must be >= 0");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (accumulation_steps == 0) throw std::invalid_argument("accumulation_steps must be >= 1");
  if (!(warmup_ratio >= 0.0 && warmup_ratio < 1.0)) {
    throw std::invalid_argument("warmup_ratio must lie in [0, 1)");
  }
  if (!(max_grad_norm > 0.0)) throw std::invalid_argument("max_grad_norm must be positive");
  if (label_smoothing && !(*label_smoothing >= 0.0 && *label_smoothing < 1.0)) {
    throw std::invalid_argument("label_smoothing must lie in [0, 1)");
  }
  if (patience == 0) throw std::invalid_argument("patience must be >= 1");
  if (!(pos_weight_cap > 0.0)) throw std::invalid_argument("pos_weight_cap must be positive");
}

double TrainConfig::smoothing_for(const LabelSchema& schema) const {
  if (label_smoothing) return *label_smoothing;
  return schema.is_binary() ? 0.1 : 0.0;
}

TrainResult train(const Dataset& train_ds, const Dataset& val_ds, const TrainConfig& tcfg,
                  const FeaturizerConfig& fcfg, WeightingMode weighting,
                  const PreprocessConfig& pcfg) {
  tcfg.validate();
  fcfg.validate();
  if (train_ds.schema != val_ds.schema) throw DataError("train and validation schemas differ");
  if (train_ds.empty()) throw DataError("training set is empty");
  if (val_ds.empty()) throw DataError("validation set is empty");

  const LabelSchema& schema = train_ds.schema;
  const std::size_t n = train_ds.size();
  const double smoothing = tcfg.smoothing_for(schema);
  const BitMatrix targets = label_matrix(train_ds);

  TrainResult result{LinearModel::zeros(schema, fcfg, pcfg), TrainReport{}};
  TrainReport& report = result.report;

  LossWeights loss_weights = LossWeights::uniform(schema.size());
  if (weighting == WeightingMode::Balanced) {
    if (schema.is_binary()) {
      std::vector<std::size_t> counts(2, 0);
      for (const auto& inst : train_ds.instances) ++counts[inst.labels[0]];
      if (counts[0] == 0 || counts[1] == 0) {
        throw DataError("balanced class weights need both classes in the training set");
      }
      const ClassWeights cw = class_weights(counts);
      loss_weights = LossWeights::from(cw);
      report.weights_used = cw;
    } else {
      const PosWeights pw = pos_weights(targets, tcfg.pos_weight_cap);
      loss_weights = LossWeights::from(pw);
      report.weights_used = pw;
    }
  }
  if (tcfg.max_epochs == 0) return result;

  std::vector<SparseVector> train_x;
  train_x.reserve(n);
  for (const auto& inst : train_ds.instances) train_x.push_back(featurize(inst.text, fcfg));
  std::vector<SparseVector> val_x;
  std::vector<std::string> val_ids;
  for (const auto& inst : val_ds.instances) {
    val_x.push_back(featurize(inst.text, fcfg));
    val_ids.push_back(inst.id);
  }
  const BitMatrix val_gold = label_matrix(val_ds);
  const ThresholdVector half = ThresholdVector::uniform(schema.size(), 0.5);
  const BinaryAveraging averaging = tcfg.binary_averaging;

  const std::size_t micro_per_epoch = (n + tcfg.batch_size - 1) / tcfg.batch_size;
  const std::size_t steps_per_epoch =
      (micro_per_epoch + tcfg.accumulation_steps - 1) / tcfg.accumulation_steps;
  report.total_steps = steps_per_epoch * tcfg.max_epochs;
  report.warmup_steps = tcfg.warmup_steps
                            ? std::min(*tcfg.warmup_steps, report.total_steps)
                            : static_cast<std::size_t>(std::ceil(
                                  tcfg.warmup_ratio * static_cast<double>(report.total_steps)));

  LinearModel& model = result.model;
  LinearModel best = model;
  double best_f1 = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  std::size_t step = 0;
  double lr = 0.0;

  Rng rng(tcfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  detail::GradientBuffer grad(model.dim, schema.size());
  const std::size_t L = schema.size();

  for (std::size_t epoch = 1; epoch <= tcfg.max_epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double loss_sum = 0.0;

    for (std::size_t window = 0; window < micro_per_epoch; window += tcfg.accumulation_steps) {
      const std::size_t window_len = std::min(tcfg.accumulation_steps, micro_per_epoch - window);
      grad.clear();
      for (std::size_t mb = window; mb < window + window_len; ++mb) {
        const std::size_t begin = mb * tcfg.batch_size;
        const std::size_t end = std::min(n, begin + tcfg.batch_size);
        const std::span<const std::size_t> rows(order.data() + begin, end - begin);
        loss_sum += detail::accumulate_loss_and_grad(model, train_x, rows, targets, loss_weights,
                                                     smoothing,
                                                     1.0 / static_cast<double>(window_len), grad);
      }
      const double norm = std::sqrt(grad.norm_sq());
      if (norm > tcfg.max_grad_norm) grad.scale(tcfg.max_grad_norm / norm);

      ++step;
      lr = scheduled_lr(tcfg.learning_rate, step, report.warmup_steps, report.total_steps);
      if (tcfg.weight_decay != 0.0) {
        const double keep = 1.0 - lr * tcfg.weight_decay;
        for (double& w : model.weights) w *= keep;
      }
      for (std::uint32_t f : grad.touched()) {
        const double* g = grad.row(f);
        double* w = &model.weights[static_cast<std::size_t>(f) * L];
        for (std::size_t j = 0; j < L; ++j) w[j] -= lr * g[j];
      }
      for (std::size_t j = 0; j < L; ++j) model.bias[j] -= lr * grad.bias()[j];
    }

    const ProbabilityMatrix probs = predict_proba(model, val_x, val_ids);
    const double f1 = macro_f1(confusion(apply_thresholds(probs, half), val_gold), averaging);
    report.train_loss.push_back(loss_sum / static_cast<double>(micro_per_epoch));
    report.val_macro_f1.push_back(f1);
    report.epoch_end_lr.push_back(lr);

    if (f1 > best_f1) {
      best_f1 = f1;
      best = model;
      report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= tcfg.patience) {
      report.stopped_early = epoch < tcfg.max_epochs;
      break;
    }
  }
  result.model = std::move(best);
  return result;
}

std::string format_history(const TrainReport& r) {
  std::string out = "epoch\ttrain_loss\tval_macro_f1\tlr\tbest\n";
  char buf[128];
  for (std::size_t e = 0; e < r.train_loss.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%zu\t%.9g\t%.9g\t%.9g\t%d\n", e + 1, r.train_loss[e],
                  r.val_macro_f1[e], r.epoch_end_lr[e], e + 1 == r.best_epoch ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace mlcal
