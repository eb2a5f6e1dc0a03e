#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mlcal/calibration.hpp"
#include "test_support.hpp"

namespace mlcal {
namespace {

using testing::make_bits;
using testing::make_pm;
using testing::random_case;
using testing::reference_macro_f1;

const LabelSchema kOne({"y"});

std::vector<double> hundredths(int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k / 100.0);
  return out;
}

// Smallest argmax of `score` over `candidates`.
template <typename F>
double argmax_low(const std::vector<double>& candidates, F score) {
  double best = -1.0, arg = std::numeric_limits<double>::quiet_NaN();
  for (double c : candidates) {
    const double s = score(c);
    if (s > best) {
      best = s;
      arg = c;
    }
  }
  return arg;
}

TEST(GridSpec, CoarseGrid) {
  const auto g = GridSpec{}.coarse_grid();
  ASSERT_EQ(g.size(), 13u);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g[k], (20 + 5 * static_cast<int>(k)) / 100.0);
}

TEST(GridSpec, WindowsClampToBounds) {
  EXPECT_EQ(GridSpec{}.window(0.20), hundredths(10, 35));
  EXPECT_EQ(GridSpec{}.window(0.80), hundredths(65, 90));
  EXPECT_EQ(GridSpec{}.window(0.50), hundredths(35, 65));
}

TEST(CoarseSearch, TwoPointExample) {
  const auto pm = make_pm(kOne, {{0.3}, {0.6}});
  const auto gold = make_bits({{0}, {1}});
  const auto grid = GridSpec{}.coarse_grid();
  const double expected =
      argmax_low(grid, [&](double t) { return reference_macro_f1(pm, gold, {t}); });
  EXPECT_EQ(expected, 0.35);
  EXPECT_EQ(coarse_search(pm, gold), 0.35);
  for (double t : grid) {
    EXPECT_EQ(reference_macro_f1(pm, gold, {t}), (t > 0.3 && t <= 0.6) ? 1.0 : (t <= 0.3 ? 2.0 / 3.0 : 0.0));
  }
}

TEST(CoarseSearch, AllNegativeGoldPicksLowestPoint) {
  const auto pm = make_pm(LabelSchema({"a", "b"}), {{0.1, 0.9}, {0.7, 0.4}, {0.3, 0.3}});
  EXPECT_EQ(coarse_search(pm, BitMatrix(3, 2)), 0.20);
}

TEST(CoarseSearch, PerfectProbabilitiesPickLowestPoint) {
  const auto gold = make_bits({{1, 0}, {0, 1}, {1, 1}, {0, 0}});
  ProbabilityMatrix pm;
  pm.schema = LabelSchema({"a", "b"});
  pm.ids = {"0", "1", "2", "3"};
  for (auto b : gold.data) pm.probs.push_back(b);
  EXPECT_EQ(coarse_search(pm, gold), 0.20);
}

TEST(Refine, SingleLabelMatchesExhaustiveWindowSearch) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto c = random_case(seed, 60, 1, 12);
    const double base = coarse_search(c.pm, c.gold);
    const auto tv = refine_per_label(c.pm, c.gold, base);
    const double expected = argmax_low(GridSpec{}.window(base), [&](double t) {
      return reference_macro_f1(c.pm, c.gold, {t});
    });
    EXPECT_EQ(tv.theta[0], expected) << "seed " << seed;
    EXPECT_EQ(tv.base_theta, base);
    EXPECT_EQ(tv.provenance, ThresholdProvenance::Tuned);
  }
}

// Label j only varies on its own block of rows, so every label has its own
// single-label optimum.
TEST(Refine, BlockDiagonalLabelsMatchIndependentOptima) {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t L = 3, block = 20;
    ProbabilityMatrix pm;
    pm.schema = testing::numbered_schema(L);
    BitMatrix gold(L * block, L);
    for (std::size_t r = 0; r < L * block; ++r) {
      pm.ids.push_back(std::to_string(r));
      for (std::size_t j = 0; j < L; ++j) {
        const bool mine = r / block == j;
        const bool g = mine && rng.bernoulli(0.4);
        gold.at(r, j) = g;
        pm.probs.push_back(mine ? static_cast<double>(10 + rng.below(81)) / 100.0 : 0.0);
      }
    }
    const auto tv = tune(pm, gold);
    for (std::size_t j = 0; j < L; ++j) {
      ProbabilityMatrix one;
      one.schema = kOne;
      BitMatrix g1(block, 1);
      for (std::size_t r = j * block; r < (j + 1) * block; ++r) {
        one.ids.push_back(pm.ids[r]);
        one.probs.push_back(pm.at(r, j));
        g1.at(r - j * block, 0) = gold.at(r, j);
      }
      const double expected = argmax_low(GridSpec{}.window(tv.base_theta), [&](double t) {
        return reference_macro_f1(one, g1, {t});
      });
      EXPECT_EQ(tv.theta[j], expected) << "trial " << trial << " label " << j;
    }
  }
}

// Brute force over every combination of window values for all labels.
double cartesian_best(const ProbabilityMatrix& pm, const BitMatrix& gold, double base) {
  const auto window = GridSpec{}.window(base);
  const std::size_t L = pm.cols();
  std::vector<std::size_t> idx(L, 0);
  double best = -1.0;
  while (true) {
    std::vector<double> theta(L);
    for (std::size_t j = 0; j < L; ++j) theta[j] = window[idx[j]];
    best = std::max(best, reference_macro_f1(pm, gold, theta));
    std::size_t j = 0;
    while (j < L && ++idx[j] == window.size()) idx[j++] = 0;
    if (j == L) break;
  }
  return best;
}

TEST(Tune, MatchesCartesianSearchOverReachableGrid) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t L = 1 + seed % 3;
    const auto c = random_case(seed, 40, L, 12);
    const auto tv = tune(c.pm, c.gold);
    const double tuned = reference_macro_f1(c.pm, c.gold, tv.theta);
    EXPECT_NEAR(tuned, cartesian_best(c.pm, c.gold, tv.base_theta), 1e-12) << "seed " << seed;
  }
}

TEST(Tune, NeverWorseThanCoarseValueAndStaysInWindow) {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const auto c = random_case(seed, 80, 1 + seed % 5, 1 + seed % 20);
    const auto tv = tune(c.pm, c.gold);
    const std::vector<double> flat(c.pm.cols(), tv.base_theta);
    EXPECT_GE(macro_f1_at(c.pm, c.gold, tv.theta, BinaryAveraging::PositiveF1),
              macro_f1_at(c.pm, c.gold, flat, BinaryAveraging::PositiveF1));
    for (double t : tv.theta) {
      EXPECT_GE(t, std::max(0.1, tv.base_theta - 0.15) - 1e-12);
      EXPECT_LE(t, std::min(0.9, tv.base_theta + 0.15) + 1e-12);
    }
  }
}

TEST(Tune, RefinementTiesGoLow) {
  // Every window value scores the same, so the lowest window value wins.
  const auto pm = make_pm(kOne, {{0.95}, {0.02}});
  const auto gold = make_bits({{1}, {0}});
  const auto tv = tune(pm, gold);
  EXPECT_EQ(tv.base_theta, 0.20);
  EXPECT_EQ(tv.theta[0], 0.10);
}

TEST(Tune, BaseReferenceAgreesWithSequentialOnSeparableScore) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = random_case(seed, 50, 3, 12);
    TuneOptions base;
    base.reference = RefineReference::Base;
    base.refine_passes = 2;
    EXPECT_EQ(tune(c.pm, c.gold, base).theta, tune(c.pm, c.gold).theta);
  }
}

TEST(Tune, RejectsMismatchedShapes) {
  const auto pm = make_pm(kOne, {{0.3}, {0.6}});
  EXPECT_THROW(tune(pm, BitMatrix(3, 1)), std::invalid_argument);
  EXPECT_THROW(tune(pm, BitMatrix(2, 2)), std::invalid_argument);
  EXPECT_THROW(refine_per_label(pm, make_bits({{0}, {1}}), 1.5), std::invalid_argument);
}

TEST(Oracle, SeparableExample) {
  const auto r = oracle_best_thresholds(make_pm(kOne, {{0.2}, {0.8}}), make_bits({{0}, {1}}));
  EXPECT_EQ(r.macro_f1, 1.0);
  EXPECT_GT(r.thresholds.theta[0], 0.2);
  EXPECT_LE(r.thresholds.theta[0], 0.8);
}

TEST(Oracle, AllPositiveGold) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<double>> rows;
    double lo = 1.0;
    for (int r = 0; r < 15; ++r) {
      rows.push_back({rng.unit()});
      lo = std::min(lo, rows.back()[0]);
    }
    BitMatrix gold(15, 1);
    for (auto& b : gold.data) b = 1;
    const auto r = oracle_best_thresholds(make_pm(kOne, rows), gold);
    EXPECT_EQ(r.macro_f1, 1.0);
    EXPECT_LE(r.thresholds.theta[0], lo);
  }
}

TEST(Oracle, DominatesTunedAndUsuallyTies) {
  std::size_t equal = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = random_case(seed, 50, 3, 12);
    const double oracle = oracle_best_thresholds(c.pm, c.gold).macro_f1;
    const double tuned = reference_macro_f1(c.pm, c.gold, tune(c.pm, c.gold).theta);
    EXPECT_GE(oracle, tuned - 1e-12) << "seed " << seed;
    equal += std::abs(oracle - tuned) <= 1e-12;
  }
  EXPECT_GE(equal, 16u);
}

TEST(Oracle, TwoClassMacroMatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = random_case(seed, 30, 1, 8);
    double best = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      best = std::max(best, macro_f1_at(c.pm, c.gold, {k / 1000.0}, BinaryAveraging::TwoClassMacro));
    }
    EXPECT_NEAR(oracle_best_thresholds(c.pm, c.gold, BinaryAveraging::TwoClassMacro).macro_f1, best,
                1e-12);
  }
}

TEST(Oracle, Guard) {
  const auto big = random_case(1, 201, 1, 5);
  EXPECT_THROW(oracle_best_thresholds(big.pm, big.gold), std::invalid_argument);
  const auto wide = random_case(1, 10, 5, 5);
  EXPECT_THROW(oracle_best_thresholds(wide.pm, wide.gold), std::invalid_argument);
}

}  // namespace
}  // namespace mlcal
