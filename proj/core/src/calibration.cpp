#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlcal/calibration.hpp"

namespace mlcal {

namespace {

void check_shapes(const ProbabilityMatrix& pm, const BitMatrix& gold) {
  if (gold.rows != pm.rows() || gold.cols != pm.cols()) {
    throw std::invalid_argument("threshold tuning: probability and gold shapes differ");
  }
  if (pm.rows() == 0) throw std::invalid_argument("threshold tuning: no rows");
}

LabelConfusion column_confusion(const ProbabilityMatrix& pm, const BitMatrix& gold,
                                std::size_t col, double theta) {
  LabelConfusion c;
  for (std::size_t r = 0; r < pm.rows(); ++r) {
    const bool p = pm.at(r, col) >= theta;
    const bool g = gold.at(r, col) != 0;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace

std::vector<double> GridSpec::coarse_grid() const {
  std::vector<double> out;
  for (int k = 0; k < coarse_points; ++k) out.push_back((coarse_lo + k * coarse_step) / 100.0);
  return out;
}

std::vector<double> GridSpec::window(double base) const {
  constexpr double kEps = 1e-9;
  const double centre = base * 100.0;
  const double lo = std::max(static_cast<double>(clamp_lo), centre - window_halfwidth);
  const double hi = std::min(static_cast<double>(clamp_hi), centre + window_halfwidth);
  int k = static_cast<int>(std::ceil(lo / fine_step - kEps));
  const int k_hi = static_cast<int>(std::floor(hi / fine_step + kEps));
  std::vector<double> out;
  for (; k <= k_hi; ++k) out.push_back((k * fine_step) / 100.0);
  return out;
}

double macro_f1_at(const ProbabilityMatrix& pm, const BitMatrix& gold,
                   const std::vector<double>& theta, BinaryAveraging averaging) {
  ConfusionCounts cc;
  cc.n = pm.rows();
  for (std::size_t c = 0; c < pm.cols(); ++c) {
    cc.labels.push_back(column_confusion(pm, gold, c, theta[c]));
  }
  return macro_f1(cc, averaging);
}

double coarse_search(const ProbabilityMatrix& pm, const BitMatrix& gold, const GridSpec& grid,
                     BinaryAveraging averaging) {
  check_shapes(pm, gold);
  double best_theta = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double theta : grid.coarse_grid()) {
    const double score = macro_f1_at(pm, gold, std::vector<double>(pm.cols(), theta), averaging);
    if (score > best) {
      best = score;
      best_theta = theta;
    }
  }
  return best_theta;
}

ThresholdVector refine_per_label(const ProbabilityMatrix& pm, const BitMatrix& gold, double base,
                                 const TuneOptions& options) {
  check_shapes(pm, gold);
  if (!(base >= 0.0 && base <= 1.0)) throw std::invalid_argument("base threshold outside [0, 1]");
  const std::vector<double> candidates = options.grid.window(base);

  ThresholdVector tv = ThresholdVector::uniform(pm.cols(), base);
  tv.provenance = ThresholdProvenance::Tuned;
  for (std::size_t pass = 0; pass < std::max<std::size_t>(1, options.refine_passes); ++pass) {
    const std::vector<double> snapshot = tv.theta;
    for (std::size_t i = 0; i < pm.cols(); ++i) {
      std::vector<double> probe = options.reference == RefineReference::Sequential
                                      ? tv.theta
                                      : std::vector<double>(pm.cols(), base);
      if (options.reference == RefineReference::Base && pass > 0) probe = snapshot;
      double best = -std::numeric_limits<double>::infinity();
      double best_theta = tv.theta[i];
      for (double theta : candidates) {
        probe[i] = theta;
        const double score = macro_f1_at(pm, gold, probe, options.averaging);
        if (score > best) {
          best = score;
          best_theta = theta;
        }
      }
      tv.theta[i] = best_theta;
    }
  }
  return tv;
}

ThresholdVector tune(const ProbabilityMatrix& pm, const BitMatrix& gold,
                     const TuneOptions& options) {
  const double base = coarse_search(pm, gold, options.grid, options.averaging);
  return refine_per_label(pm, gold, base, options);
}

OracleResult oracle_best_thresholds(const ProbabilityMatrix& pm, const BitMatrix& gold,
                                    BinaryAveraging averaging) {
  check_shapes(pm, gold);
  if (pm.rows() > kOracleMaxRows || pm.cols() > kOracleMaxLabels) {
    throw std::invalid_argument("oracle_best_thresholds: input exceeds " +
                                std::to_string(kOracleMaxRows) + " rows x " +
                                std::to_string(kOracleMaxLabels) + " labels");
  }
  OracleResult out;
  out.thresholds = ThresholdVector::uniform(pm.cols(), 0.0);
  double sum = 0.0;
  for (std::size_t c = 0; c < pm.cols(); ++c) {
    std::vector<double> values;
    for (std::size_t r = 0; r < pm.rows(); ++r) values.push_back(pm.at(r, c));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<double> candidates{0.0};
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      candidates.push_back(0.5 * (values[k] + values[k + 1]));
    }
    candidates.push_back(1.0);

    double best = -std::numeric_limits<double>::infinity();
    for (double theta : candidates) {
      ConfusionCounts cc;
      cc.n = pm.rows();
      cc.labels = {column_confusion(pm, gold, c, theta)};
      const double score = pm.cols() == 1 ? macro_f1(cc, averaging) : f1_score(cc.labels[0]);
      if (score > best) {
        best = score;
        out.thresholds.theta[c] = theta;
      }
    }
    sum += best;
  }
  out.macro_f1 = sum / static_cast<double>(pm.cols());
  out.thresholds.base_theta = out.thresholds.theta.front();
  out.thresholds.provenance = ThresholdProvenance::Tuned;
  return out;
}

}  // namespace mlcal
