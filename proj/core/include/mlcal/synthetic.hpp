#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mlcal/corpus.hpp"

namespace mlcal {

/// Recipe for a labelled toy corpus. Each label owns a small token
/// vocabulary; a text carries tokens from the vocabularies of its signalled
/// labels on top of shared background words.
struct SyntheticSpec {
  LabelSchema schema;
  std::size_t instances = 1000;
  std::vector<double> rates;  // per-label positive rate, each in (0, 1)
  double noise = 0.0;         // label-flip rate, in [0, 0.5)
  std::uint64_t seed = 42;

  std::size_t background_vocab = 500;
  std::size_t signal_vocab = 12;  // tokens per label
  std::size_t min_words = 8;
  std::size_t max_words = 24;
  std::size_t signal_words = 2;  // signal tokens per signalled label

  /// Throws std::invalid_argument when the recipe cannot be generated.
  void validate() const;
};

/// Gold labels are drawn per label with the given rates. The text is written
/// from a noisy copy of the gold labels: a positive loses its signal with
/// probability `noise`, and a negative gains one with probability
/// noise * r / (1 - r), so signal tokens appear at the same rate as the label.
/// Some texts get a leading @mention, a trailing URL, a hashtag or capitals.
Dataset generate_synthetic(const SyntheticSpec& spec, const PreprocessConfig& pcfg = {});

}  // namespace mlcal
