#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlcal/linear_model.hpp"

namespace mlcal::detail {

/// Dense gradient storage that remembers which feature rows were written,
/// so clearing, norms and updates only visit those rows.
class GradientBuffer {
 public:
  GradientBuffer(std::size_t dim, std::size_t labels)
      : labels_(labels), weights_(dim * labels, 0.0), bias_(labels, 0.0), marked_(dim, 0) {}

  double* row(std::uint32_t feature) {
    if (!marked_[feature]) {
      marked_[feature] = 1;
      touched_.push_back(feature);
    }
    return &weights_[static_cast<std::size_t>(feature) * labels_];
  }
  const double* row(std::uint32_t feature) const {
    return &weights_[static_cast<std::size_t>(feature) * labels_];
  }
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }
  const std::vector<std::uint32_t>& touched() const { return touched_; }
  std::size_t labels() const { return labels_; }

  void clear();
  double norm_sq() const;
  void scale(double s);
  Gradient to_dense() const { return Gradient{weights_, bias_}; }

 private:
  std::size_t labels_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  std::vector<std::uint8_t> marked_;
  std::vector<std::uint32_t> touched_;
};

/// Adds `scale` times the gradient of the mean data loss over the selected
/// rows to `out`, and returns that mean loss (unscaled, no weight decay).
double accumulate_loss_and_grad(const LinearModel& model, std::span<const SparseVector> xs,
                                std::span<const std::size_t> rows, const BitMatrix& targets,
                                const LossWeights& weights, double smoothing, double scale,
                                GradientBuffer& out);

}  // namespace mlcal::detail
