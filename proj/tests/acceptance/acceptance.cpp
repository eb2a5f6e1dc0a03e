// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "gradient_check.hpp"
#include "mlcal/calibration.hpp"
#include "mlcal/linear_model.hpp"
#include "mlcal/metrics.hpp"
#include "mlcal/splitter.hpp"
#include "mlcal/synthetic.hpp"
#include "test_support.hpp"

namespace mlcal {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome threshold_oracle_equivalence() {
  const auto t0 = Clock::now();
  std::size_t equal = 0;
  double worst_ratio = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = testing::random_case(seed, 50, 3, 12);
    const double oracle = oracle_best_thresholds(c.pm, c.gold).macro_f1;
    const double tuned = testing::reference_macro_f1(c.pm, c.gold, tune(c.pm, c.gold).theta);
    worst_ratio = std::min(worst_ratio, oracle > 0 ? tuned / oracle : 1.0);
    equal += std::abs(oracle - tuned) <= 1e-12;
  }
  const double secs = seconds_since(t0);
  return {worst_ratio >= 0.95 && equal >= 16 && secs < 5.0,
          fmt("worst tuned/oracle %.4f, equal %zu/20, %.2fs", worst_ratio, equal, secs)};
}

struct Splits {
  Dataset train, val, test;
};

// Same layout as the pipeline: held-out test first, then train/val.
Splits three_way(const Dataset& ds, std::uint64_t seed) {
  const auto split = [](const Dataset& d, double f, std::uint64_t s) {
    return d.schema.is_binary() ? stratified_split(d, {f, s}) : iterative_stratified_split(d, {f, s});
  };
  auto outer = split(ds, 0.2, seed);
  auto inner = split(outer.train, 0.2, derive_seed(seed, 1));
  return {std::move(inner.train), std::move(inner.val), std::move(outer.val)};
}

double test_macro_f1(const LinearModel& m, const Dataset& test, const std::vector<double>& theta,
                     BinaryAveraging mode) {
  ThresholdVector tv;
  tv.theta = theta;
  return evaluate(predict_proba(m, test), test, tv, mode).macro_f1;
}

Outcome tuned_thresholds_ablation() {
  const auto t0 = Clock::now();
  SyntheticSpec spec;
  spec.schema = LabelSchema::preset("subtask2");
  spec.instances = 3000;
  spec.rates = {0.357, 0.10, 0.05, 0.022, 0.08};
  spec.noise = 0.1;
  spec.seed = 42;
  const auto s = three_way(generate_synthetic(spec), 42);
  const auto L = spec.schema.size();

  const auto arm = [&](WeightingMode mode, double& at_half, double& tuned) {
    const auto model = train(s.train, s.val, TrainConfig{}, FeaturizerConfig{}, mode).model;
    const auto tv = tune(predict_proba(model, s.val), label_matrix(s.val));
    at_half = test_macro_f1(model, s.test, std::vector<double>(L, 0.5), BinaryAveraging::PositiveF1);
    tuned = test_macro_f1(model, s.test, tv.theta, BinaryAveraging::PositiveF1);
  };
  double none_half = 0, none_tuned = 0, bal_half = 0, bal_tuned = 0;
  arm(WeightingMode::None, none_half, none_tuned);
  arm(WeightingMode::Balanced, bal_half, bal_tuned);
  const double secs = seconds_since(t0);
  const double gain = 100.0 * (none_tuned - none_half);
  return {gain >= 15.0 && secs < 120.0,
          fmt("weighting=none: %.4f -> %.4f (+%.1f pts); balanced arm: %.4f -> %.4f (%+.1f); %.1fs",
              none_half, none_tuned, gain, bal_half, bal_tuned, 100.0 * (bal_tuned - bal_half),
              secs)};
}

Outcome class_weight_ablation() {
  const auto t0 = Clock::now();
  SyntheticSpec spec;
  spec.schema = LabelSchema::preset("subtask1");
  spec.instances = 2000;
  spec.rates = {0.05};
  spec.noise = 0.05;
  spec.seed = 42;
  const auto s = three_way(generate_synthetic(spec), 42);
  const auto score = [&](WeightingMode mode) {
    const auto model = train(s.train, s.val, TrainConfig{}, FeaturizerConfig{}, mode).model;
    return test_macro_f1(model, s.test, {0.5}, BinaryAveraging::TwoClassMacro);
  };
  const double none = score(WeightingMode::None);
  const double balanced = score(WeightingMode::Balanced);
  const double secs = seconds_since(t0);
  const double gain = 100.0 * (balanced - none);
  return {gain >= 5.0 && secs < 60.0,
          fmt("none %.4f, balanced %.4f (+%.1f pts), %.1fs", none, balanced, gain, secs)};
}

Outcome gradient_check() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    worst = std::max(worst,
                     testing::max_relative_gradient_error(testing::random_gradient_case(5000 + seed)));
  }
  return {worst < 1e-4, fmt("max relative error %.3g over 100 tuples", worst)};
}

Outcome stratification_quality() {
  double worst = 0.0;
  bool invariants = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticSpec spec;
    spec.schema = LabelSchema({"common", "rare", "very_rare"});
    spec.instances = 200;
    spec.rates = {0.5, 0.1, 0.02};
    spec.seed = seed;
    const auto ds = generate_synthetic(spec);
    const auto global = positive_rates(ds);
    const auto a = iterative_stratified_split(ds, {0.2, seed});
    const auto b = iterative_stratified_split(ds, {0.2, seed});
    for (std::size_t j = 0; j < 3; ++j) {
      worst = std::max(worst, std::abs(a.per_label_val_pct[j] - global[j]));
    }
    std::set<std::string> ids;
    for (const auto* part : {&a.train, &a.val}) {
      for (const auto& inst : part->instances) invariants &= ids.insert(inst.id).second;
    }
    invariants &= ids.size() == ds.size();
    invariants &= a.val.size() == 40;
    invariants &= format_dataset(a.val) == format_dataset(b.val) &&
                  format_dataset(a.train) == format_dataset(b.train);
  }
  return {worst <= 0.02 + 1e-12 && invariants,
          fmt("max |val rate - global| %.2f pts, partition/determinism %s", 100.0 * worst,
              invariants ? "hold" : "VIOLATED")};
}

Outcome metric_golden_values() {
  const auto pred = testing::make_bits({{1, 0}, {0, 0}, {1, 1}, {0, 1}});
  const auto gold = testing::make_bits({{1, 0}, {0, 1}, {1, 1}, {0, 0}});
  const auto cc = confusion(pred, gold);
  const BitMatrix zeros(4, 2);
  const bool ok = macro_f1(cc) == 0.75 && micro_f1(cc) == 0.75 &&
                  macro_f1(confusion(gold, gold)) == 1.0 && micro_f1(confusion(gold, gold)) == 1.0 &&
                  macro_f1(confusion(zeros, zeros)) == 0.0 &&
                  micro_f1(confusion(zeros, zeros)) == 0.0 && f1_score(LabelConfusion{}) == 0.0;
  return {ok, fmt("macro %.2f, micro %.2f, perfect %.1f, zero-division %.1f", macro_f1(cc),
                  micro_f1(cc), macro_f1(confusion(gold, gold)), macro_f1(confusion(zeros, zeros)))};
}

Outcome balanced_merge_size() {
  auto primary = testing::binary_dataset(2062, 1160);
  auto donor = testing::binary_dataset(2500, 2500);
  for (auto& inst : donor.instances) inst.id = "donor-" + inst.id;
  const auto merged = balanced_merge(primary, donor, 42);
  std::size_t pos = 0;
  for (const auto& inst : merged.instances) pos += inst.labels[0];
  return {merged.size() == 6444 && pos == 3222,
          fmt("%zu instances, %zu positive / %zu negative", merged.size(), pos,
              merged.size() - pos)};
}

Outcome pipeline_determinism() {
  testing::TempDir dir("mlcal-acceptance");
  SyntheticSpec spec;
  spec.schema = LabelSchema::preset("subtask2");
  spec.instances = 1000;
  spec.rates = {0.357, 0.10, 0.05, 0.022, 0.08};
  spec.noise = 0.1;
  write_dataset(dir / "toy.jsonl", generate_synthetic(spec));
  for (const char* run : {"run1", "run2"}) {
    std::ostringstream out, err;
    const int status = cli::run({"pipeline", "--data", (dir / "toy.jsonl").string(), "--schema",
                                 "subtask2", "--seed", "42", "--out-dir", (dir / run).string()},
                                out, err);
    if (status != 0) return {false, std::string(run) + " failed: " + err.str()};
  }
  const std::vector<std::string> files{"manifest.json",      "model.txt",        "thresholds.txt",
                                       "report_default.tsv", "report_tuned.tsv", "val.probs",
                                       "test.probs"};
  for (const auto& f : files) {
    if (testing::read_text(dir.path() / "run1" / f) != testing::read_text(dir.path() / "run2" / f)) {
      return {false, f + " differs between runs"};
    }
  }
  return {true, fmt("%zu artifacts byte-identical across two runs", files.size())};
}

Outcome preprocessing_conformance() {
  std::ifstream in(std::string(MLCAL_TEST_DATA_DIR) + "/preprocess_golden.jsonl");
  std::string line;
  std::size_t cases = 0, golden_failures = 0;
  const PreprocessConfig cfg;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line);
    ++cases;
    golden_failures += preprocess(rec.at("input").get<std::string>(), cfg) !=
                       rec.at("expected").get<std::string>();
  }
  Rng rng(90210);
  std::size_t idempotence_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto once = preprocess(testing::fuzz_text(rng), cfg);
    idempotence_failures += preprocess(once, cfg) != once;
  }
  return {cases == 30 && golden_failures == 0 && idempotence_failures == 0,
          fmt("golden %zu/%zu exact, idempotence failures %zu/1000", cases - golden_failures,
              cases, idempotence_failures)};
}

}  // namespace
}  // namespace mlcal

int main() {
  using mlcal::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"threshold tuning vs exhaustive oracle", mlcal::threshold_oracle_equivalence},
      {"tuned thresholds beat 0.5 by >= 15 points", mlcal::tuned_thresholds_ablation},
      {"balanced weighting beats none by >= 5 points", mlcal::class_weight_ablation},
      {"loss gradient vs finite differences", mlcal::gradient_check},
      {"iterative stratification within 2 points", mlcal::stratification_quality},
      {"metric golden values", mlcal::metric_golden_values},
      {"balanced merge 3,222 -> 6,444", mlcal::balanced_merge_size},
      {"pipeline determinism", mlcal::pipeline_determinism},
      {"preprocessing golden file and idempotence", mlcal::preprocessing_conformance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
