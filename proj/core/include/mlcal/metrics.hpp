#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mlcal/corpus.hpp"
#include "mlcal/probabilities.hpp"

namespace mlcal {

struct LabelConfusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  bool operator==(const LabelConfusion&) const = default;
};

struct ConfusionCounts {
  std::vector<LabelConfusion> labels;
  std::size_t n = 0;
};

/// How a single-label (binary) task is averaged. Multi-label schemas always
/// average the per-label positive-class F1.
enum class BinaryAveraging {
  PositiveF1,     // F1 of the positive class only
  TwoClassMacro,  // mean of positive-class and negative-class F1
};

std::string_view to_string(BinaryAveraging mode);
BinaryAveraging parse_binary_averaging(std::string_view s);

/// Throws std::invalid_argument if the shapes differ.
ConfusionCounts confusion(const BitMatrix& pred, const BitMatrix& gold);

// Zero-division convention: every ratio with a zero denominator is 0.
double precision(const LabelConfusion& c);
double recall(const LabelConfusion& c);
double f1_score(const LabelConfusion& c);

/// For a single-label confusion under TwoClassMacro, returns the negative and
/// positive class rows; otherwise returns the input unchanged.
ConfusionCounts averaging_rows(const ConfusionCounts& cc, BinaryAveraging mode);

/// Unweighted mean of per-row F1 over averaging_rows(cc, mode).
double macro_f1(const ConfusionCounts& cc, BinaryAveraging mode = BinaryAveraging::PositiveF1);
/// F1 of tp/fp/fn pooled over averaging_rows(cc, mode).
double micro_f1(const ConfusionCounts& cc, BinaryAveraging mode = BinaryAveraging::PositiveF1);

struct MetricsReport {
  std::vector<std::string> names;
  std::vector<double> per_label_f1;
  std::vector<double> per_label_precision;
  std::vector<double> per_label_recall;
  std::vector<std::size_t> support;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  /// Thresholds per schema label, in schema order.
  std::vector<std::string> threshold_labels;
  std::vector<double> thresholds;
  BinaryAveraging averaging = BinaryAveraging::PositiveF1;
};

MetricsReport make_report(const ConfusionCounts& cc, const LabelSchema& schema,
                          std::vector<double> thresholds, BinaryAveraging mode);

/// Joins probabilities to gold labels by id, binarizes and scores. Throws
/// DataError naming the first id that is missing on either side.
MetricsReport evaluate(const ProbabilityMatrix& pm, const Dataset& gold,
                       const ThresholdVector& tv,
                       BinaryAveraging mode = BinaryAveraging::PositiveF1);

/// Gold label rows of `gold` reordered to the row order of `pm`.
BitMatrix aligned_gold(const ProbabilityMatrix& pm, const Dataset& gold);

/// Tab-separated per-label table followed by aggregate rows (4 decimals).
std::string format_report_table(const MetricsReport& r);
/// One `key<TAB>value` line per metric, full precision.
std::string format_report_machine(const MetricsReport& r);

}  // namespace mlcal
