#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace mlcal {

enum class TermFrequency { Binary, Count };

struct FeaturizerConfig {
  std::uint32_t hash_dim = 1u << 18;
  bool unigrams = true;
  bool bigrams = true;
  TermFrequency tf = TermFrequency::Binary;
  bool l2_normalize = false;

  /// Throws std::invalid_argument unless hash_dim is a power of two >= 2^10
  /// and at least one n-gram order is enabled.
  void validate() const;
  bool operator==(const FeaturizerConfig&) const = default;
};

struct SparseVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/// 64-bit FNV-1a over the bytes of `key`.
std::uint64_t fnv1a64(std::string_view key);

/// Hashed index of an n-gram key. Unigram keys are the token itself; bigram
/// keys are the two tokens joined by one space.
std::uint32_t feature_index(std::string_view key, std::uint32_t hash_dim);

/// Hashed bag of n-grams over whitespace tokens of preprocessed text.
SparseVector featurize(std::string_view text, const FeaturizerConfig& cfg);

}  // namespace mlcal
