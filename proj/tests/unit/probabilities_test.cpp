#include <gtest/gtest.h>

#include <cmath>

#include "mlcal/errors.hpp"
#include "mlcal/probabilities.hpp"
#include "test_support.hpp"

namespace mlcal {
namespace {

using testing::make_pm;

const LabelSchema kTwo({"a", "b"});

TEST(ApplyThresholds, BoundaryAndDegenerateThresholds) {
  const auto pm = make_pm(kTwo, {{0.5, 0.0}, {0.49, 0.99}, {0.51, 0.3}});
  ThresholdVector tv;
  tv.theta = {0.5, 0.0};
  const auto bits = apply_thresholds(pm, tv);
  EXPECT_EQ(bits.at(0, 0), 1);  // p == theta counts as positive
  EXPECT_EQ(bits.at(1, 0), 0);
  EXPECT_EQ(bits.at(2, 0), 1);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(bits.at(r, 1), 1);
  tv.theta = {1.0, 1.0};
  for (auto b : apply_thresholds(pm, tv).data) EXPECT_EQ(b, 0);
  EXPECT_THROW(apply_thresholds(pm, ThresholdVector::uniform(3)), std::invalid_argument);
}

TEST(ProbabilityFile, RoundTripIsBitExact) {
  Rng rng(17);
  ProbabilityMatrix pm;
  pm.schema = kTwo;
  for (int r = 0; r < 200; ++r) {
    pm.ids.push_back("id-" + std::to_string(r));
    pm.probs.push_back(rng.unit());
    pm.probs.push_back(r % 7 == 0 ? 0.0 : std::nextafter(1.0, 0.0));
  }
  testing::TempDir dir;
  write_probabilities(dir / "p.tsv", pm);
  const auto back = read_probabilities(dir / "p.tsv", kTwo);
  EXPECT_EQ(back.ids, pm.ids);
  EXPECT_EQ(back.probs, pm.probs);
  EXPECT_EQ(probability_columns(dir / "p.tsv"), 2u);
}

TEST(ProbabilityFile, ErrorsNameTheLine) {
  const auto error_of = [](std::string_view text) -> std::string {
    try {
      parse_probabilities(text, kTwo);
    } catch (const DataError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(error_of("a\t0.1\t0.2\nb\t0.3\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("a\t0.1\t1.5\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("a\t0.1\tnan\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("a\t0.1\tx\n").find("line 1"), std::string::npos);
}

TEST(ThresholdFile, RoundTrip) {
  ThresholdVector tv;
  tv.theta = {0.35, 0.1};
  tv.base_theta = 0.25;
  tv.provenance = ThresholdProvenance::Tuned;
  tv.tuned_on = "abc123";
  const auto text = format_thresholds(tv, kTwo);
  EXPECT_EQ(parse_thresholds(text, kTwo), tv);
  tv.tuned_on.reset();
  tv.provenance = ThresholdProvenance::CoarseOnly;
  EXPECT_EQ(parse_thresholds(format_thresholds(tv, kTwo), kTwo), tv);
}

TEST(ThresholdFile, Errors) {
  EXPECT_THROW(parse_thresholds("__base__\t0.5\na\t0.5\n", kTwo), DataError);
  EXPECT_THROW(parse_thresholds("__base__\t0.5\na\t0.5\nb\t1.5\n", kTwo), DataError);
  EXPECT_THROW(parse_thresholds("__base__\t0.5\na\t0.5\nb\t0.5\nc\t0.5\n", kTwo), DataError);
  EXPECT_THROW(parse_thresholds("__base__\t0.5\na\t0.5\na\t0.5\n", kTwo), DataError);
  EXPECT_THROW(parse_thresholds("a\t0.5\nb\t0.5\n", kTwo), DataError);
  EXPECT_THROW(parse_thresholds("__provenance__\tguess\n", kTwo), DataError);
  EXPECT_THROW(format_thresholds(ThresholdVector::uniform(3), kTwo), std::invalid_argument);
}

}  // namespace
}  // namespace mlcal
