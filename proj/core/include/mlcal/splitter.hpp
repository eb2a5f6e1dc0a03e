#pragma once

#include <cstdint>
#include <vector>

#include "mlcal/corpus.hpp"

namespace mlcal {

struct SplitConfig {
  double val_fraction = 0.2;
  std::uint64_t seed = 42;
};

struct SplitResult {
  Dataset train;
  Dataset val;
  std::vector<double> per_label_train_pct;
  std::vector<double> per_label_val_pct;
};

/// Two-class stratified split for binary schemas. Per-class validation quotas
/// come from largest-remainder apportionment of round(N * val_fraction);
/// members of each class are drawn by seeded shuffle. Both outputs keep the
/// input order.
SplitResult stratified_split(const Dataset& ds, const SplitConfig& cfg);

/// Iterative stratification for multi-label data: the label with the fewest
/// unassigned positives is processed first and each of its examples goes to
/// the subset with the largest remaining demand for that label (then largest
/// remaining capacity, then a seeded coin). A subset is only eligible while it
/// has capacity left, so subset sizes are exact. All-zero rows are assigned
/// last by seeded shuffle.
SplitResult iterative_stratified_split(const Dataset& ds, const SplitConfig& cfg);

/// Balances a binary corpus by sampling, without replacement, donor rows of
/// the opposite class for every primary row: count(primary, 1) donor rows
/// labelled 0 and count(primary, 0) donor rows labelled 1. The result is the
/// primary corpus followed by the sampled donor rows in donor order.
Dataset balanced_merge(const Dataset& primary, const Dataset& donor, std::uint64_t seed);

/// Fraction of positives per label; zeros for an empty dataset.
std::vector<double> positive_rates(const Dataset& ds);

}  // namespace mlcal
