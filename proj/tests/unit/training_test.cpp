#include <gtest/gtest.h>

#include <algorithm>

#include "mlcal/errors.hpp"
#include "mlcal/linear_model.hpp"
#include "mlcal/splitter.hpp"
#include "mlcal/synthetic.hpp"
#include "test_support.hpp"

namespace mlcal {
namespace {

FeaturizerConfig small_features() {
  FeaturizerConfig f;
  f.hash_dim = 1u << 12;
  return f;
}

// 2*half instances: class 0 uses words a0..a9, class 1 uses b0..b9.
Dataset two_vocabularies(std::size_t half, std::uint64_t seed, const std::string& prefix) {
  Rng rng(seed);
  Dataset ds;
  ds.schema = LabelSchema({"polarized"});
  for (std::size_t i = 0; i < 2 * half; ++i) {
    const std::uint8_t y = i % 2;
    std::string text;
    for (int k = 0; k < 5; ++k) {
      if (k) text += ' ';
      text += (y ? "b" : "a") + std::to_string(rng.below(10));
    }
    ds.instances.push_back({prefix + std::to_string(i), text, text, {y}});
  }
  return ds;
}

// Rosenblatt perceptron on the hashed features; converging to zero mistakes
// proves linear separability.
bool perceptron_separates(const Dataset& ds, const FeaturizerConfig& f) {
  std::vector<double> w(f.hash_dim, 0.0);
  double b = 0.0;
  for (int epoch = 0; epoch < 100; ++epoch) {
    std::size_t mistakes = 0;
    for (const auto& inst : ds.instances) {
      const auto x = featurize(inst.text, f);
      double z = b;
      for (std::size_t k = 0; k < x.nnz(); ++k) z += w[x.indices[k]] * x.values[k];
      const double y = inst.labels[0] ? 1.0 : -1.0;
      if (y * z <= 0.0) {
        ++mistakes;
        for (std::size_t k = 0; k < x.nnz(); ++k) w[x.indices[k]] += y * x.values[k];
        b += y;
      }
    }
    if (mistakes == 0) return true;
  }
  return false;
}

TEST(Train, ZeroEpochsReturnsZeroModel) {
  TrainConfig t;
  t.max_epochs = 0;
  const auto train_ds = two_vocabularies(10, 1, "t");
  const auto r = train(train_ds, two_vocabularies(5, 2, "v"), t, small_features(),
                       WeightingMode::None);
  EXPECT_TRUE(r.report.train_loss.empty());
  EXPECT_TRUE(r.report.val_macro_f1.empty());
  EXPECT_EQ(r.report.best_epoch, 0u);
  for (double w : r.model.weights) EXPECT_EQ(w, 0.0);
  for (double b : r.model.bias) EXPECT_EQ(b, 0.0);
}

TEST(Train, SeparableToyReachesPerfectF1) {
  const auto f = small_features();
  const auto train_ds = two_vocabularies(50, 3, "t");
  const auto val_ds = two_vocabularies(20, 4, "v");
  Dataset both = train_ds;
  both.instances.insert(both.instances.end(), val_ds.instances.begin(), val_ds.instances.end());
  ASSERT_TRUE(perceptron_separates(both, f));

  TrainConfig t;
  t.max_epochs = 10;
  const auto r = train(train_ds, val_ds, t, f, WeightingMode::None);
  ASSERT_GE(r.report.best_epoch, 1u);
  EXPECT_LE(r.report.best_epoch, 10u);
  EXPECT_EQ(r.report.val_macro_f1[r.report.best_epoch - 1], 1.0);
}

TEST(Train, BestEpochHoldsTheMaximum) {
  SyntheticSpec spec;
  spec.schema = LabelSchema({"a", "b", "c"});
  spec.instances = 400;
  spec.rates = {0.3, 0.1, 0.05};
  spec.noise = 0.1;
  const auto ds = generate_synthetic(spec);
  const auto s = iterative_stratified_split(ds, {0.25, 7});
  TrainConfig t;
  t.max_epochs = 8;
  t.patience = 2;
  const auto r = train(s.train, s.val, t, small_features(), WeightingMode::Balanced);
  const auto& h = r.report.val_macro_f1;
  ASSERT_FALSE(h.empty());
  EXPECT_EQ(h.size(), r.report.train_loss.size());
  EXPECT_EQ(h[r.report.best_epoch - 1], *std::max_element(h.begin(), h.end()));
  if (r.report.stopped_early) {
    EXPECT_EQ(h.size(), r.report.best_epoch + t.patience);
  }
  EXPECT_TRUE(r.model.all_finite());
  EXPECT_TRUE(std::holds_alternative<PosWeights>(r.report.weights_used));
}

TEST(Train, DeterministicGivenSeed) {
  const auto train_ds = two_vocabularies(30, 5, "t");
  const auto val_ds = two_vocabularies(10, 6, "v");
  TrainConfig t;
  t.max_epochs = 3;
  const auto a = train(train_ds, val_ds, t, small_features(), WeightingMode::Balanced);
  const auto b = train(train_ds, val_ds, t, small_features(), WeightingMode::Balanced);
  EXPECT_EQ(a.model.weights, b.model.weights);
  EXPECT_EQ(a.model.bias, b.model.bias);
  EXPECT_EQ(format_history(a.report), format_history(b.report));
}

double minority_recall(const LinearModel& m, const Dataset& ds) {
  const auto pm = predict_proba(m, ds);
  std::size_t tp = 0, pos = 0;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (!ds.instances[r].labels[0]) continue;
    ++pos;
    tp += pm.at(r, 0) >= 0.5;
  }
  return pos ? static_cast<double>(tp) / static_cast<double>(pos) : 0.0;
}

TEST(Train, BalancedWeightingRaisesMinorityRecall) {
  SyntheticSpec spec;
  spec.schema = LabelSchema({"polarized"});
  spec.instances = 2000;
  spec.rates = {0.05};
  spec.noise = 0.05;
  const auto ds = generate_synthetic(spec);
  const auto s = stratified_split(ds, {0.2, 42});
  TrainConfig t;
  const auto none = train(s.train, s.val, t, FeaturizerConfig{}, WeightingMode::None);
  const auto bal = train(s.train, s.val, t, FeaturizerConfig{}, WeightingMode::Balanced);
  EXPECT_TRUE(std::holds_alternative<ClassWeights>(bal.report.weights_used));
  EXPECT_GT(minority_recall(bal.model, s.val), minority_recall(none.model, s.val));
}

TEST(Train, Errors) {
  const auto good = two_vocabularies(5, 1, "t");
  TrainConfig t;
  Dataset other = good;
  other.schema = LabelSchema({"x"});
  EXPECT_THROW(train(good, other, t, small_features(), WeightingMode::None), DataError);
  EXPECT_THROW(train(good, Dataset{good.schema, {}}, t, small_features(), WeightingMode::None),
               DataError);
  t.patience = 0;
  EXPECT_THROW(train(good, good, t, small_features(), WeightingMode::None), std::invalid_argument);
  t = TrainConfig{};
  t.max_grad_norm = 0.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  t = TrainConfig{};
  t.label_smoothing = 1.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

TEST(Train, SmoothingDefaultsDependOnSchemaWidth) {
  const TrainConfig t;
  EXPECT_DOUBLE_EQ(t.smoothing_for(LabelSchema({"a"})), 0.1);
  EXPECT_DOUBLE_EQ(t.smoothing_for(LabelSchema({"a", "b"})), 0.0);
}

TEST(WeightingMode, Parse) {
  EXPECT_EQ(parse_weighting_mode("none"), WeightingMode::None);
  EXPECT_EQ(parse_weighting_mode("balanced"), WeightingMode::Balanced);
  EXPECT_EQ(to_string(WeightingMode::Balanced), "balanced");
  EXPECT_THROW(parse_weighting_mode("heavy"), std::invalid_argument);
}

}  // namespace
}  // namespace mlcal
