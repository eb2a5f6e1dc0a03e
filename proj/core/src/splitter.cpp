#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "mlcal/errors.hpp"
#include "mlcal/random.hpp"
#include "mlcal/splitter.hpp"

namespace mlcal {

namespace {

constexpr std::size_t kVal = 0;
constexpr std::size_t kTrain = 1;

void check_config(const SplitConfig& cfg) {
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0)) {
    throw std::invalid_argument("val_fraction must lie strictly between 0 and 1");
  }
}

/// Largest-remainder apportionment of `total` seats over `shares`.
/// Remainder ties go to the lower index.
std::vector<std::size_t> apportion(const std::vector<double>& shares, std::size_t total) {
  constexpr double kEps = 1e-9;
  std::vector<std::size_t> seats(shares.size());
  std::vector<double> rem(shares.size());
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < shares.size(); ++k) {
    const double fl = std::floor(shares[k] + kEps);
    seats[k] = static_cast<std::size_t>(fl);
    rem[k] = std::max(0.0, shares[k] - fl);
    assigned += seats[k];
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b] + kEps; });
  for (std::size_t k = 0; assigned < total && k < order.size(); ++k, ++assigned) {
    ++seats[order[k]];
  }
  return seats;
}

std::vector<std::size_t> subset_sizes(std::size_t n, double f) {
  const double nd = static_cast<double>(n);
  return apportion({nd * f, nd * (1.0 - f)}, n);
}

SplitResult assemble(const Dataset& ds, const std::vector<std::size_t>& subset_of) {
  SplitResult out;
  out.train.schema = ds.schema;
  out.val.schema = ds.schema;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    (subset_of[r] == kVal ? out.val : out.train).instances.push_back(ds.instances[r]);
  }
  out.per_label_train_pct = positive_rates(out.train);
  out.per_label_val_pct = positive_rates(out.val);
  return out;
}

}  // namespace

std::vector<double> positive_rates(const Dataset& ds) {
  std::vector<double> rates(ds.schema.size(), 0.0);
  if (ds.empty()) return rates;
  for (const auto& inst : ds.instances) {
    for (std::size_t j = 0; j < rates.size(); ++j) rates[j] += inst.labels[j];
  }
  for (auto& r : rates) r /= static_cast<double>(ds.size());
  return rates;
}

SplitResult stratified_split(const Dataset& ds, const SplitConfig& cfg) {
  check_config(cfg);
  if (ds.schema.size() != 1) {
    throw std::invalid_argument(
        "stratified_split needs a single-label schema; use iterative_stratified_split "
        "for multi-label data");
  }
  std::vector<std::vector<std::size_t>> members(2);
  for (std::size_t r = 0; r < ds.size(); ++r) members[ds.instances[r].labels[0]].push_back(r);
  for (std::size_t c = 0; c < 2; ++c) {
    if (members[c].size() < 2) {
      throw DataError("stratified_split: class " + std::to_string(c) + " has " +
                      std::to_string(members[c].size()) + " instance(s), need at least 2");
    }
  }

  const std::size_t val_total = subset_sizes(ds.size(), cfg.val_fraction)[kVal];
  const auto quotas = apportion({static_cast<double>(members[0].size()) * cfg.val_fraction,
                                 static_cast<double>(members[1].size()) * cfg.val_fraction},
                                val_total);

  Rng rng(cfg.seed);
  std::vector<std::size_t> subset_of(ds.size(), kTrain);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<std::size_t> pool = members[c];
    rng.shuffle(std::span(pool));
    for (std::size_t k = 0; k < quotas[c]; ++k) subset_of[pool[k]] = kVal;
  }
  return assemble(ds, subset_of);
}

SplitResult iterative_stratified_split(const Dataset& ds, const SplitConfig& cfg) {
  check_config(cfg);
  if (ds.empty()) throw std::invalid_argument("iterative_stratified_split: dataset is empty");
  const std::size_t n = ds.size();
  const std::size_t L = ds.schema.size();
  constexpr std::size_t kSubsets = 2;
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  std::vector<long> capacity(kSubsets);
  {
    const auto sizes = subset_sizes(n, cfg.val_fraction);
    for (std::size_t j = 0; j < kSubsets; ++j) capacity[j] = static_cast<long>(sizes[j]);
  }

  std::vector<std::size_t> remaining(L, 0);
  for (const auto& inst : ds.instances) {
    for (std::size_t i = 0; i < L; ++i) remaining[i] += inst.labels[i];
  }
  // demand[j][i]: positives of label i still wanted by subset j
  std::vector<std::vector<long>> demand(kSubsets, std::vector<long>(L));
  for (std::size_t i = 0; i < L; ++i) {
    const auto per_subset = subset_sizes(remaining[i], cfg.val_fraction);
    for (std::size_t j = 0; j < kSubsets; ++j) demand[j][i] = static_cast<long>(per_subset[j]);
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> subset_of(n, kUnassigned);

  const auto assign = [&](std::size_t r, std::size_t j) {
    subset_of[r] = j;
    --capacity[j];
    for (std::size_t k = 0; k < L; ++k) {
      if (ds.instances[r].labels[k]) {
        --demand[j][k];
        --remaining[k];
      }
    }
  };

  while (true) {
    std::size_t label = L;
    for (std::size_t i = 0; i < L; ++i) {
      if (remaining[i] > 0 && (label == L || remaining[i] < remaining[label])) label = i;
    }
    if (label == L) break;

    std::vector<std::size_t> pool;
    for (std::size_t r = 0; r < n; ++r) {
      if (subset_of[r] == kUnassigned && ds.instances[r].labels[label]) pool.push_back(r);
    }
    rng.shuffle(std::span(pool));

    for (std::size_t r : pool) {
      std::vector<std::size_t> best;
      for (std::size_t j = 0; j < kSubsets; ++j) {
        if (capacity[j] <= 0) continue;
        if (best.empty()) {
          best = {j};
          continue;
        }
        const std::size_t b = best.front();
        const bool better = demand[j][label] > demand[b][label] ||
                            (demand[j][label] == demand[b][label] && capacity[j] > capacity[b]);
        const bool tie = demand[j][label] == demand[b][label] && capacity[j] == capacity[b];
        if (better) {
          best = {j};
        } else if (tie) {
          best.push_back(j);
        }
      }
      const std::size_t chosen =
          best.size() == 1 ? best.front() : best[static_cast<std::size_t>(rng.below(best.size()))];
      assign(r, chosen);
    }
  }

  std::vector<std::size_t> unlabeled;
  for (std::size_t r = 0; r < n; ++r) {
    if (subset_of[r] == kUnassigned) unlabeled.push_back(r);
  }
  rng.shuffle(std::span(unlabeled));
  std::size_t next = 0;
  for (std::size_t j = 0; j < kSubsets; ++j) {
    for (; capacity[j] > 0 && next < unlabeled.size(); ++next) assign(unlabeled[next], j);
  }
  return assemble(ds, subset_of);
}

Dataset balanced_merge(const Dataset& primary, const Dataset& donor, std::uint64_t seed) {
  if (primary.schema.size() != 1 || donor.schema.size() != 1) {
    throw std::invalid_argument("balanced_merge needs single-label datasets");
  }
  std::vector<std::size_t> donor_by_class[2];
  for (std::size_t r = 0; r < donor.size(); ++r) {
    donor_by_class[donor.instances[r].labels[0]].push_back(r);
  }
  std::size_t primary_count[2] = {0, 0};
  for (const auto& inst : primary.instances) ++primary_count[inst.labels[0]];

  // Each primary class is mirrored by donor rows of the opposite class.
  const std::size_t quota[2] = {primary_count[1], primary_count[0]};
  for (std::size_t c = 0; c < 2; ++c) {
    if (donor_by_class[c].size() < quota[c]) {
      throw DataError("balanced_merge: donor lacks " +
                      std::to_string(quota[c] - donor_by_class[c].size()) + " label=" +
                      std::to_string(c) + " rows (needs " + std::to_string(quota[c]) +
                      ", has " + std::to_string(donor_by_class[c].size()) + ")");
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> picked;
  for (std::size_t c = 0; c < 2; ++c) {
    auto pool = donor_by_class[c];
    rng.shuffle(std::span(pool));
    picked.insert(picked.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(picked.begin(), picked.end());

  Dataset out;
  out.schema = primary.schema;
  out.instances = primary.instances;
  std::unordered_set<std::string> ids;
  for (const auto& inst : primary.instances) ids.insert(inst.id);
  for (std::size_t r : picked) {
    const auto& inst = donor.instances[r];
    if (!ids.insert(inst.id).second) {
      throw DataError("balanced_merge: donor id '" + inst.id + "' already present in primary");
    }
    out.instances.push_back(inst);
  }
  return out;
}

}  // namespace mlcal
