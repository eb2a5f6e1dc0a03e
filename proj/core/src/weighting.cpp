#include <algorithm>
#include <stdexcept>

#include "mlcal/weighting.hpp"

namespace mlcal {

ClassWeights class_weights(const std::vector<std::size_t>& class_counts) {
  if (class_counts.empty()) throw std::invalid_argument("class_weights: no classes");
  std::size_t total = 0;
  for (std::size_t c : class_counts) {
    if (c == 0) throw std::invalid_argument("class_weights: a class has zero samples");
    total += c;
  }
  const double n_classes = static_cast<double>(class_counts.size());
  ClassWeights out;
  for (std::size_t c : class_counts) {
    out.w.push_back(static_cast<double>(total) / (n_classes * static_cast<double>(c)));
  }
  return out;
}

PosWeights pos_weights(const BitMatrix& labels, double cap) {
  if (labels.rows == 0) throw std::invalid_argument("pos_weights: no rows");
  if (!(cap > 0.0)) throw std::invalid_argument("pos_weights: cap must be positive");
  PosWeights out;
  for (std::size_t j = 0; j < labels.cols; ++j) {
    std::size_t pos = 0;
    for (std::size_t r = 0; r < labels.rows; ++r) pos += labels.at(r, j);
    const std::size_t neg = labels.rows - pos;
    if (pos == 0) {
      out.pw.push_back(cap);
      out.capped.push_back(true);
      continue;
    }
    if (neg == 0) {
      // No negatives to balance against; the positive term keeps unit weight.
      out.pw.push_back(1.0);
      out.capped.push_back(false);
      continue;
    }
    const double ratio = static_cast<double>(neg) / static_cast<double>(pos);
    out.pw.push_back(std::min(ratio, cap));
    out.capped.push_back(ratio > cap);
  }
  return out;
}

}  // namespace mlcal
