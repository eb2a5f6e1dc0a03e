#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "gradient_buffer.hpp"
#include "mlcal/linear_model.hpp"

namespace mlcal {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double smoothed_target(std::uint8_t y, double smoothing) {
  return static_cast<double>(y) * (1.0 - smoothing) + smoothing / 2.0;
}

LinearModel LinearModel::zeros(const LabelSchema& schema, const FeaturizerConfig& fcfg,
                               const PreprocessConfig& pcfg) {
  fcfg.validate();
  LinearModel m = zeros(fcfg.hash_dim, schema);
  m.featurizer = fcfg;
  m.preprocess = pcfg;
  return m;
}

LinearModel LinearModel::zeros(std::size_t dim, const LabelSchema& schema) {
  LinearModel m;
  m.schema = schema;
  m.dim = dim;
  m.weights.assign(dim * schema.size(), 0.0);
  m.bias.assign(schema.size(), 0.0);
  return m;
}

double LinearModel::logit(const SparseVector& x, std::size_t label) const {
  double z = bias[label];
  for (std::size_t k = 0; k < x.nnz(); ++k) z += x.values[k] * w(x.indices[k], label);
  return z;
}

bool LinearModel::all_finite() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(weights.begin(), weights.end(), finite) &&
         std::all_of(bias.begin(), bias.end(), finite);
}

LossWeights LossWeights::uniform(std::size_t labels) {
  return LossWeights{std::vector<double>(labels, 1.0), std::vector<double>(labels, 1.0),
                     std::vector<double>(labels, 1.0)};
}

LossWeights LossWeights::from(const PosWeights& pw) {
  LossWeights lw = uniform(pw.pw.size());
  lw.pos_weight = pw.pw;
  return lw;
}

LossWeights LossWeights::from(const ClassWeights& cw) {
  if (cw.w.size() != 2) throw std::invalid_argument("binary class weights need two classes");
  LossWeights lw = uniform(1);
  lw.neg_class_weight[0] = cw.w[0];
  lw.pos_class_weight[0] = cw.w[1];
  return lw;
}

// ---------------------------------------------------------------------------

namespace detail {

void GradientBuffer::clear() {
  for (std::uint32_t f : touched_) {
    std::fill_n(&weights_[static_cast<std::size_t>(f) * labels_], labels_, 0.0);
    marked_[f] = 0;
  }
  touched_.clear();
  std::fill(bias_.begin(), bias_.end(), 0.0);
}

double GradientBuffer::norm_sq() const {
  double s = 0.0;
  for (std::uint32_t f : touched_) {
    const double* g = row(f);
    for (std::size_t j = 0; j < labels_; ++j) s += g[j] * g[j];
  }
  for (double b : bias_) s += b * b;
  return s;
}

void GradientBuffer::scale(double s) {
  for (std::uint32_t f : touched_) {
    double* g = &weights_[static_cast<std::size_t>(f) * labels_];
    for (std::size_t j = 0; j < labels_; ++j) g[j] *= s;
  }
  for (double& b : bias_) b *= s;
}

double accumulate_loss_and_grad(const LinearModel& model, std::span<const SparseVector> xs,
                                std::span<const std::size_t> rows, const BitMatrix& targets,
                                const LossWeights& weights, double smoothing, double scale,
                                GradientBuffer& out) {
  const std::size_t L = model.labels();
  if (rows.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  if (targets.cols != L) throw std::invalid_argument("loss_and_grad: target width mismatch");
  const double denom = static_cast<double>(rows.size() * L);

  std::vector<double> z(L);
  std::vector<double> dz(L);
  double loss = 0.0;
  for (std::size_t r : rows) {
    const SparseVector& x = xs[r];
    for (std::size_t j = 0; j < L; ++j) z[j] = model.bias[j];
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      const double v = x.values[k];
      if (!std::isfinite(v)) throw std::domain_error("loss_and_grad: non-finite feature value");
      if (x.indices[k] >= model.dim) throw std::invalid_argument("feature index out of range");
      const double* wrow = &model.weights[static_cast<std::size_t>(x.indices[k]) * L];
      for (std::size_t j = 0; j < L; ++j) z[j] += v * wrow[j];
    }
    for (std::size_t j = 0; j < L; ++j) {
      if (!std::isfinite(z[j])) throw std::domain_error("loss_and_grad: non-finite logit");
      const std::uint8_t y = targets.at(r, j);
      const double t = smoothed_target(y, smoothing);
      const double c = y ? weights.pos_class_weight[j] : weights.neg_class_weight[j];
      const double pw = weights.pos_weight[j];
      loss += c * (pw * t * softplus(-z[j]) + (1.0 - t) * softplus(z[j]));
      dz[j] = scale * c * (sigmoid(z[j]) * (pw * t + 1.0 - t) - pw * t) / denom;
      out.bias()[j] += dz[j];
    }
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      double* g = out.row(x.indices[k]);
      const double v = x.values[k];
      for (std::size_t j = 0; j < L; ++j) g[j] += v * dz[j];
    }
  }
  return loss / denom;
}

}  // namespace detail

LossAndGrad loss_and_grad(const LinearModel& model, std::span<const SparseVector> batch,
                          const BitMatrix& targets, const LossWeights& weights,
                          double smoothing, double weight_decay) {
  if (targets.rows != batch.size()) {
    throw std::invalid_argument("loss_and_grad: one target row per batch entry required");
  }
  if (!std::isfinite(weight_decay)) throw std::domain_error("loss_and_grad: non-finite decay");
  detail::GradientBuffer buf(model.dim, model.labels());
  std::vector<std::size_t> rows(batch.size());
  std::iota(rows.begin(), rows.end(), 0);
  LossAndGrad out;
  out.loss = detail::accumulate_loss_and_grad(model, batch, rows, targets, weights, smoothing,
                                              1.0, buf);
  out.grad = buf.to_dense();
  if (weight_decay != 0.0) {
    double sq = 0.0;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      sq += model.weights[i] * model.weights[i];
      out.grad.weights[i] += weight_decay * model.weights[i];
    }
    out.loss += 0.5 * weight_decay * sq;
  }
  return out;
}

double clip_global_norm(Gradient& g, double max_norm) {
  double sq = 0.0;
  for (double v : g.weights) sq += v * v;
  for (double v : g.bias) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (double& v : g.weights) v *= s;
    for (double& v : g.bias) v *= s;
  }
  return norm;
}

double scheduled_lr(double base, std::size_t step, std::size_t warmup, std::size_t total) {
  if (warmup > 0 && step <= warmup) {
    return base * static_cast<double>(step) / static_cast<double>(warmup);
  }
  if (total <= warmup) return base;
  const double progress = std::min(
      1.0, static_cast<double>(step - warmup) / static_cast<double>(total - warmup));
  return base * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

ProbabilityMatrix predict_proba(const LinearModel& model, std::span<const SparseVector> rows,
                                std::vector<std::string> ids) {
  if (ids.size() != rows.size()) throw std::invalid_argument("predict_proba: id count mismatch");
  ProbabilityMatrix pm;
  pm.schema = model.schema;
  pm.ids = std::move(ids);
  pm.probs.resize(rows.size() * model.labels());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < model.labels(); ++j) pm.at(r, j) = sigmoid(model.logit(rows[r], j));
  }
  return pm;
}

ProbabilityMatrix predict_proba(const LinearModel& model, const Dataset& ds) {
  if (ds.schema != model.schema) throw std::invalid_argument("predict_proba: schema mismatch");
  std::vector<SparseVector> rows;
  std::vector<std::string> ids;
  rows.reserve(ds.size());
  for (const auto& inst : ds.instances) {
    rows.push_back(featurize(inst.text, model.featurizer));
    ids.push_back(inst.id);
  }
  return predict_proba(model, rows, std::move(ids));
}

}  // namespace mlcal
