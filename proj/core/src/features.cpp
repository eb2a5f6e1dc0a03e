#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlcal/corpus.hpp"
#include "mlcal/features.hpp"

namespace mlcal {

void FeaturizerConfig::validate() const {
  if (hash_dim < (1u << 10) || (hash_dim & (hash_dim - 1)) != 0) {
    throw std::invalid_argument("hash_dim must be a power of two >= 1024");
  }
  if (!unigrams && !bigrams) throw std::invalid_argument("no n-gram order enabled");
}

std::uint64_t fnv1a64(std::string_view key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : key) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint32_t feature_index(std::string_view key, std::uint32_t hash_dim) {
  return static_cast<std::uint32_t>(fnv1a64(key) & (hash_dim - 1));
}

SparseVector featurize(std::string_view text, const FeaturizerConfig& cfg) {
  const auto tokens = split_tokens(text);
  std::vector<std::uint32_t> hits;
  hits.reserve(tokens.size() * 2);
  if (cfg.unigrams) {
    for (auto tok : tokens) hits.push_back(feature_index(tok, cfg.hash_dim));
  }
  if (cfg.bigrams && tokens.size() >= 2) {
    std::string key;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      key.assign(tokens[i]);
      key.push_back(' ');
      key.append(tokens[i + 1]);
      hits.push_back(feature_index(key, cfg.hash_dim));
    }
  }
  std::sort(hits.begin(), hits.end());

  SparseVector v;
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    v.indices.push_back(hits[i]);
    v.values.push_back(cfg.tf == TermFrequency::Binary ? 1.0 : static_cast<double>(j - i));
    i = j;
  }
  if (cfg.l2_normalize && !v.empty()) {
    double sq = 0.0;
    for (double x : v.values) sq += x * x;
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v.values) x *= inv;
  }
  return v;
}

}  // namespace mlcal
