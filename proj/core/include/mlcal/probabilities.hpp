#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlcal/corpus.hpp"

namespace mlcal {

/// N x L positive-class probabilities, row-major, with one id per row.
struct ProbabilityMatrix {
  std::vector<std::string> ids;
  std::vector<double> probs;
  LabelSchema schema;

  std::size_t rows() const { return ids.size(); }
  std::size_t cols() const { return schema.size(); }
  double at(std::size_t r, std::size_t c) const { return probs[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return probs[r * cols() + c]; }
};

enum class ThresholdProvenance { Default, CoarseOnly, Tuned };

std::string_view to_string(ThresholdProvenance p);
ThresholdProvenance parse_provenance(std::string_view s);

struct ThresholdVector {
  std::vector<double> theta;
  double base_theta = 0.5;
  ThresholdProvenance provenance = ThresholdProvenance::Default;
  /// Digest of the gold file the thresholds were tuned on, when known.
  std::optional<std::string> tuned_on;

  static ThresholdVector uniform(std::size_t labels, double value = 0.5);
  bool operator==(const ThresholdVector&) const = default;
};

/// 1 iff prob >= theta for that label. Throws std::invalid_argument on a
/// width mismatch.
BitMatrix apply_thresholds(const ProbabilityMatrix& pm, const ThresholdVector& tv);

// Probability file: one `id<TAB>p_1<TAB>...<TAB>p_L` line per instance,
// printed with 17 significant digits so values reload bit-exactly.
std::string format_probabilities(const ProbabilityMatrix& pm);
void write_probabilities(const std::filesystem::path& path, const ProbabilityMatrix& pm);
/// Every row must have schema.size() values in [0, 1]; violations throw
/// DataError naming the line.
ProbabilityMatrix parse_probabilities(std::string_view text, const LabelSchema& schema);
ProbabilityMatrix read_probabilities(const std::filesystem::path& path,
                                     const LabelSchema& schema);
/// Number of probability columns on the first data line.
std::size_t probability_columns(const std::filesystem::path& path);

// Thresholds file: `name<TAB>value` lines with 6 decimals, plus `__base__`,
// `__provenance__` and optionally `__tuned_on__`.
std::string format_thresholds(const ThresholdVector& tv, const LabelSchema& schema);
void write_thresholds(const std::filesystem::path& path, const ThresholdVector& tv,
                      const LabelSchema& schema);
ThresholdVector parse_thresholds(std::string_view text, const LabelSchema& schema);
ThresholdVector read_thresholds(const std::filesystem::path& path, const LabelSchema& schema);

}  // namespace mlcal
