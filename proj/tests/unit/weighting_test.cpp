#include <gtest/gtest.h>

#include "mlcal/weighting.hpp"
#include "test_support.hpp"

namespace mlcal {
namespace {

BitMatrix column(std::size_t neg, std::size_t pos) {
  BitMatrix m(neg + pos, 1);
  for (std::size_t r = neg; r < neg + pos; ++r) m.at(r, 0) = 1;
  return m;
}

TEST(ClassWeights, DocumentedExamples) {
  EXPECT_EQ(class_weights({80, 20}).w, (std::vector<double>{0.625, 2.5}));
  EXPECT_EQ(class_weights({50, 50}).w, (std::vector<double>{1.0, 1.0}));
}

TEST(ClassWeights, OfficialSizedCorpus) {
  // 64% / 36% of 3,222 rounds to 2062 / 1160.
  const auto cw = class_weights({2062, 1160});
  EXPECT_NEAR(cw.w[0], 3222.0 / (2.0 * 2062.0), 1e-15);
  EXPECT_NEAR(cw.w[0], 0.78, 0.005);
  EXPECT_NEAR(cw.w[1], 1.39, 0.005);
}

TEST(ClassWeights, WeightedCountsSumToTotal) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> counts(2 + rng.below(5));
    std::size_t total = 0;
    for (auto& c : counts) total += (c = 1 + rng.below(1000));
    const auto cw = class_weights(counts);
    double sum = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      EXPECT_GT(cw.w[i], 0.0);
      sum += static_cast<double>(counts[i]) * cw.w[i];
    }
    EXPECT_NEAR(sum, static_cast<double>(total), 1e-9 * static_cast<double>(total));
  }
}

TEST(ClassWeights, Errors) {
  EXPECT_THROW(class_weights({}), std::invalid_argument);
  EXPECT_THROW(class_weights({10, 0}), std::invalid_argument);
}

TEST(PosWeights, DocumentedExamples) {
  auto pw = pos_weights(column(90, 10), 100.0);
  EXPECT_EQ(pw.pw, (std::vector<double>{9.0}));
  EXPECT_EQ(pos_weights(column(50, 50)).pw, (std::vector<double>{1.0}));
  pw = pos_weights(column(100, 0), 100.0);
  EXPECT_EQ(pw.pw, (std::vector<double>{100.0}));
  EXPECT_EQ(pw.capped, (std::vector<bool>{true}));
}

TEST(PosWeights, CapAndBounds) {
  const auto pw = pos_weights(column(999, 1), 50.0);
  EXPECT_EQ(pw.pw[0], 50.0);
  EXPECT_TRUE(pw.capped[0]);
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto m = column(rng.below(500), 1 + rng.below(500));
    const double cap = 1.0 + 99.0 * rng.unit();
    const auto w = pos_weights(m, cap);
    EXPECT_GT(w.pw[0], 0.0);
    EXPECT_LE(w.pw[0], cap);
  }
  EXPECT_THROW(pos_weights(BitMatrix(0, 1)), std::invalid_argument);
  EXPECT_THROW(pos_weights(column(1, 1), 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace mlcal
