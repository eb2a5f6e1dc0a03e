#pragma once

#include <cstddef>
#include <vector>

#include "mlcal/corpus.hpp"

namespace mlcal {

/// Per-class loss multipliers, "balanced" heuristic:
/// w_c = n_samples / (n_classes * n_c).
struct ClassWeights {
  std::vector<double> w;
};

/// Per-label multipliers for the positive BCE term, n_neg / n_pos capped.
struct PosWeights {
  std::vector<double> pw;
  std::vector<bool> capped;
};

inline constexpr double kDefaultPosWeightCap = 100.0;

/// Throws std::invalid_argument when a count is zero or `counts` is empty.
ClassWeights class_weights(const std::vector<std::size_t>& class_counts);

/// pw_i = min(n_neg_i / n_pos_i, cap). A label with no positives gets `cap`
/// and is flagged. Throws std::invalid_argument for N = 0 or cap <= 0.
PosWeights pos_weights(const BitMatrix& labels, double cap = kDefaultPosWeightCap);

}  // namespace mlcal
