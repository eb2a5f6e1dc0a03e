#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mlcal/linear_model.hpp"
#include "mlcal/random.hpp"
#include "test_support.hpp"

namespace mlcal::testing {

/// One random (model, batch, weights, smoothing) tuple.
struct GradientCase {
  LinearModel model;
  std::vector<SparseVector> batch;
  BitMatrix targets;
  LossWeights weights;
  double smoothing = 0.0;
  double weight_decay = 0.0;
};

inline GradientCase random_gradient_case(std::uint64_t seed, std::size_t dim = 16,
                                         std::size_t labels = 3, std::size_t batch = 4) {
  Rng rng(seed);
  const auto sym = [&](double scale) { return scale * (2.0 * rng.unit() - 1.0); };
  GradientCase c;
  c.model = LinearModel::zeros(dim, numbered_schema(labels));
  for (double& w : c.model.weights) w = sym(1.0);
  for (double& b : c.model.bias) b = sym(0.5);
  c.targets = BitMatrix(batch, labels);
  for (std::size_t r = 0; r < batch; ++r) {
    SparseVector x;
    for (std::uint32_t f = 0; f < dim; ++f) {
      if (rng.bernoulli(0.4)) {
        x.indices.push_back(f);
        x.values.push_back(sym(1.0));
      }
    }
    c.batch.push_back(std::move(x));
    for (std::size_t j = 0; j < labels; ++j) c.targets.at(r, j) = rng.bernoulli(0.4) ? 1 : 0;
  }
  c.weights = LossWeights::uniform(labels);
  for (std::size_t j = 0; j < labels; ++j) {
    c.weights.pos_weight[j] = 0.2 + 9.8 * rng.unit();
    c.weights.neg_class_weight[j] = 0.3 + 2.0 * rng.unit();
    c.weights.pos_class_weight[j] = 0.3 + 2.0 * rng.unit();
  }
  c.smoothing = 0.3 * rng.unit();
  c.weight_decay = rng.bernoulli(0.5) ? 0.1 * rng.unit() : 0.0;
  return c;
}

inline double case_loss(const GradientCase& c, const LinearModel& m) {
  return loss_and_grad(m, c.batch, c.targets, c.weights, c.smoothing, c.weight_decay).loss;
}

/// Largest per-coordinate relative error between the analytic gradient and
/// central differences with step h. Coordinates whose gradient is below
/// `floor` in magnitude are compared against `floor` instead, since their
/// relative error is dominated by rounding.
inline double max_relative_gradient_error(const GradientCase& c, double h = 1e-5,
                                          double floor = 1e-6) {
  const auto analytic =
      loss_and_grad(c.model, c.batch, c.targets, c.weights, c.smoothing, c.weight_decay).grad;
  double worst = 0.0;
  const auto check = [&](double a, double n) {
    const double denom = std::max({std::abs(a), std::abs(n), floor});
    worst = std::max(worst, std::abs(a - n) / denom);
  };
  LinearModel m = c.model;
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    const double saved = m.weights[i];
    m.weights[i] = saved + h;
    const double up = case_loss(c, m);
    m.weights[i] = saved - h;
    const double down = case_loss(c, m);
    m.weights[i] = saved;
    check(analytic.weights[i], (up - down) / (2.0 * h));
  }
  for (std::size_t j = 0; j < m.bias.size(); ++j) {
    const double saved = m.bias[j];
    m.bias[j] = saved + h;
    const double up = case_loss(c, m);
    m.bias[j] = saved - h;
    const double down = case_loss(c, m);
    m.bias[j] = saved;
    check(analytic.bias[j], (up - down) / (2.0 * h));
  }
  return worst;
}

}  // namespace mlcal::testing
