#pragma once

#include <cstddef>
#include <vector>

#include "mlcal/corpus.hpp"
#include "mlcal/metrics.hpp"
#include "mlcal/probabilities.hpp"

namespace mlcal {

/// Threshold grids. Values are kept in integer hundredths so every candidate
/// is an exact k/100 and sweeps never accumulate rounding error.
struct GridSpec {
  int coarse_lo = 20;     // 0.20
  int coarse_step = 5;    // 0.05
  int coarse_points = 13; // 0.20 .. 0.80
  int fine_step = 1;      // 0.01
  int window_halfwidth = 15;
  int clamp_lo = 10;
  int clamp_hi = 90;

  std::vector<double> coarse_grid() const;
  /// Candidates for per-label refinement around `base`: every multiple of the
  /// fine step in [max(clamp_lo, base - halfwidth), min(clamp_hi, base + halfwidth)].
  std::vector<double> window(double base) const;
};

enum class RefineReference {
  Sequential,  // each sweep sees the labels refined before it
  Base,        // each sweep holds the other labels at the coarse value
};

struct TuneOptions {
  GridSpec grid;
  BinaryAveraging averaging = BinaryAveraging::PositiveF1;
  std::size_t refine_passes = 1;
  RefineReference reference = RefineReference::Sequential;
};

/// Macro-F1 of `pm` binarized at `theta` against `gold`.
double macro_f1_at(const ProbabilityMatrix& pm, const BitMatrix& gold,
                   const std::vector<double>& theta, BinaryAveraging averaging);

/// Stage one: the coarse-grid value maximizing macro-F1 with every label at
/// that value. Ties go to the smallest value.
double coarse_search(const ProbabilityMatrix& pm, const BitMatrix& gold, const GridSpec& grid = {},
                     BinaryAveraging averaging = BinaryAveraging::PositiveF1);

/// Stage two: one coordinate sweep per label (schema order) over the window
/// around `base`, keeping the value that maximizes full macro-F1. Ties go to
/// the smallest value.
ThresholdVector refine_per_label(const ProbabilityMatrix& pm, const BitMatrix& gold, double base,
                                 const TuneOptions& options = {});

/// coarse_search followed by refine_per_label.
ThresholdVector tune(const ProbabilityMatrix& pm, const BitMatrix& gold,
                     const TuneOptions& options = {});

struct OracleResult {
  ThresholdVector thresholds;
  double macro_f1 = 0.0;
};

inline constexpr std::size_t kOracleMaxRows = 200;
inline constexpr std::size_t kOracleMaxLabels = 4;

/// Exhaustive reference optimum. Candidate thresholds per label are 0, the
/// midpoints between consecutive distinct probabilities, and 1; labels are
/// optimized independently since macro-F1 separates over labels. Throws
/// std::invalid_argument beyond kOracleMaxRows x kOracleMaxLabels.
OracleResult oracle_best_thresholds(const ProbabilityMatrix& pm, const BitMatrix& gold,
                                    BinaryAveraging averaging = BinaryAveraging::PositiveF1);

}  // namespace mlcal
