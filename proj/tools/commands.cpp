#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "digest.hpp"
#include "mlcal/errors.hpp"
#include "mlcal/metrics.hpp"
#include "mlcal/probabilities.hpp"
#include "mlcal/random.hpp"
#include "options.hpp"

namespace mlcal::cli {

namespace {

std::string fixed(double v, int digits = 4) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw DataError("cannot write " + path.string());
}

Dataset load(const fs::path& path, const LabelSchema& schema, const PreprocessConfig& pre) {
  Dataset ds = load_dataset(path, schema, pre);
  if (ds.empty()) throw DataError(path.string() + ": no records");
  return ds;
}

nlohmann::json rates_json(const LabelSchema& schema, const std::vector<double>& rates) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < schema.size(); ++i) j[schema.name(i)] = rates[i];
  return j;
}

nlohmann::json thresholds_json(const LabelSchema& schema, const ThresholdVector& tv) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < schema.size(); ++i) j[schema.name(i)] = tv.theta[i];
  return j;
}

nlohmann::json report_json(const MetricsReport& r) {
  nlohmann::json per_label = nlohmann::json::object();
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    per_label[r.names[i]] = {{"f1", r.per_label_f1[i]},
                             {"precision", r.per_label_precision[i]},
                             {"recall", r.per_label_recall[i]},
                             {"support", r.support[i]}};
  }
  return {{"macro_f1", r.macro_f1}, {"micro_f1", r.micro_f1}, {"per_label", per_label}};
}

void print_split(const LabelSchema& schema, const SplitResult& s, std::ostream& out) {
  out << "subset\tsize";
  for (const auto& n : schema.names()) out << '\t' << n;
  out << "\ntrain\t" << s.train.size();
  for (double p : s.per_label_train_pct) out << '\t' << fixed(p);
  out << "\nval\t" << s.val.size();
  for (double p : s.per_label_val_pct) out << '\t' << fixed(p);
  out << '\n';
}

}  // namespace

SplitResult split_dataset(const Dataset& ds, double val_fraction, std::uint64_t seed) {
  const SplitConfig cfg{val_fraction, seed};
  return ds.schema.is_binary() ? stratified_split(ds, cfg) : iterative_stratified_split(ds, cfg);
}

void cmd_stats(const StatsArgs& a, std::ostream& out) {
  const Dataset ds = load(a.data, a.schema, a.preprocess);
  const CorpusStats s = summarize(ds);
  if (a.machine) {
    out << "n_instances\t" << s.n_instances << '\n';
    out << "all_zero_rows\t" << s.all_zero_rows << '\n';
    for (std::size_t i = 0; i < a.schema.size(); ++i) {
      const std::string& n = a.schema.name(i);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", s.per_label_positive_pct[i]);
      out << "positive." << n << '\t' << s.per_label_positive[i] << '\n';
      out << "positive_pct." << n << '\t' << buf << '\n';
      std::snprintf(buf, sizeof buf, "%.17g", s.imbalance_ratio_per_label[i]);
      out << "imbalance_ratio." << n << '\t' << buf << '\n';
    }
    for (const auto& [k, v] : s.label_cardinality_histogram) {
      out << "cardinality." << k << '\t' << v << '\n';
    }
    return;
  }
  out << "instances\t" << s.n_instances << '\n';
  out << "all_zero_rows\t" << s.all_zero_rows << '\n';
  out << "label\tpositives\tpositive_pct\tneg_per_pos\n";
  for (std::size_t i = 0; i < a.schema.size(); ++i) {
    out << a.schema.name(i) << '\t' << s.per_label_positive[i] << '\t'
        << fixed(100.0 * s.per_label_positive_pct[i], 2) << '\t'
        << fixed(s.imbalance_ratio_per_label[i], 2) << '\n';
  }
  out << "active_labels\tinstances\n";
  for (const auto& [k, v] : s.label_cardinality_histogram) out << k << '\t' << v << '\n';
}

StageRecord cmd_split(const SplitArgs& a, std::ostream& out) {
  const Dataset ds = load(a.data, a.schema, a.preprocess);
  const SplitResult s = split_dataset(ds, a.val_fraction, a.seed);
  write_dataset(a.train_out, s.train);
  write_dataset(a.val_out, s.val);
  print_split(a.schema, s, out);

  StageRecord r;
  r.name = "split";
  r.config = {{"val_fraction", a.val_fraction},
              {"seed", a.seed},
              {"method", a.schema.is_binary() ? "stratified" : "iterative"}};
  r.inputs = {a.data};
  r.outputs = {a.train_out, a.val_out};
  r.metrics = {{"train_size", s.train.size()},
               {"val_size", s.val.size()},
               {"train_positive_rate", rates_json(a.schema, s.per_label_train_pct)},
               {"val_positive_rate", rates_json(a.schema, s.per_label_val_pct)}};
  return r;
}

StageRecord cmd_merge(const MergeArgs& a, std::ostream& out) {
  if (!a.schema.is_binary()) throw UsageError("merge needs a single-label schema");
  const Dataset primary = load(a.primary, a.schema, a.preprocess);
  const Dataset donor = load(a.donor, a.schema, a.preprocess);
  const Dataset merged = balanced_merge(primary, donor, a.seed);
  write_dataset(a.out, merged);
  std::size_t pos = 0;
  for (const auto& inst : merged.instances) pos += inst.labels[0];
  out << "primary\t" << primary.size() << "\nmerged\t" << merged.size() << "\npositives\t" << pos
      << "\nnegatives\t" << merged.size() - pos << '\n';

  StageRecord r;
  r.name = "merge";
  r.config = {{"seed", a.seed}};
  r.inputs = {a.primary, a.donor};
  r.outputs = {a.out};
  r.metrics = {{"merged_size", merged.size()}, {"positives", pos}};
  return r;
}

StageRecord cmd_train(const TrainArgs& a, std::ostream& out) {
  const Dataset train_ds = load(a.train, a.schema, a.preprocess);
  const Dataset val_ds = load(a.val, a.schema, a.preprocess);
  const TrainResult res =
      train(train_ds, val_ds, a.train_config, a.featurizer, a.weighting, a.preprocess);
  save_model(a.model_out, res.model);
  const std::string history = format_history(res.report);
  if (a.history_out) write_text(*a.history_out, history);

  const TrainReport& rep = res.report;
  out << history;
  out << "best_epoch\t" << rep.best_epoch << "\nstopped_early\t" << (rep.stopped_early ? 1 : 0)
      << '\n';
  nlohmann::json weights = nullptr;
  if (const auto* cw = std::get_if<ClassWeights>(&rep.weights_used)) {
    out << "class_weights\t" << fixed(cw->w[0]) << '\t' << fixed(cw->w[1]) << '\n';
    weights = {{"class_weights", cw->w}};
  } else if (const auto* pw = std::get_if<PosWeights>(&rep.weights_used)) {
    out << "pos_weights";
    for (std::size_t i = 0; i < pw->pw.size(); ++i) {
      out << '\t' << a.schema.name(i) << '=' << fixed(pw->pw[i]) << (pw->capped[i] ? "(capped)" : "");
    }
    out << '\n';
    weights = {{"pos_weights", pw->pw}};
  }

  StageRecord r;
  r.name = "train";
  r.config = {{"train", to_json(a.train_config)},
              {"featurizer", to_json(a.featurizer)},
              {"preprocess", to_json(a.preprocess)},
              {"weighting", std::string(to_string(a.weighting))}};
  r.inputs = {a.train, a.val};
  r.outputs = {a.model_out};
  if (a.history_out) r.outputs.push_back(*a.history_out);
  r.metrics = {{"best_epoch", rep.best_epoch},
               {"epochs_run", rep.train_loss.size()},
               {"stopped_early", rep.stopped_early},
               {"train_loss", rep.train_loss},
               {"val_macro_f1", rep.val_macro_f1},
               {"weights", weights}};
  return r;
}

StageRecord cmd_predict(const PredictArgs& a, std::ostream& out) {
  const LinearModel model = load_model(a.model);
  const Dataset ds = load(a.data, model.schema, model.preprocess);
  const ProbabilityMatrix pm = predict_proba(model, ds);
  write_probabilities(a.out, pm);
  out << "predicted\t" << pm.rows() << " rows x " << pm.cols() << " labels\n";

  StageRecord r;
  r.name = "predict";
  r.inputs = {a.model, a.data};
  r.outputs = {a.out};
  r.metrics = {{"rows", pm.rows()}};
  return r;
}

StageRecord cmd_tune(const TuneArgs& a, std::ostream& out) {
  const ProbabilityMatrix pm = read_probabilities(a.probs, a.schema);
  const Dataset gold = load(a.gold, a.schema, PreprocessConfig{});
  const BitMatrix g = aligned_gold(pm, gold);
  const std::size_t L = a.schema.size();

  const double base = coarse_search(pm, g, a.options.grid, a.options.averaging);
  ThresholdVector tv = refine_per_label(pm, g, base, a.options);
  tv.tuned_on = sha256_file(a.gold);
  write_thresholds(a.out, tv, a.schema);

  const double at_default = macro_f1_at(pm, g, std::vector<double>(L, 0.5), a.options.averaging);
  const double at_base = macro_f1_at(pm, g, std::vector<double>(L, base), a.options.averaging);
  const double at_tuned = macro_f1_at(pm, g, tv.theta, a.options.averaging);
  out << "macro_f1@0.5\t" << fixed(at_default) << "\nbase_theta\t" << fixed(base, 2)
      << "\nmacro_f1@base\t" << fixed(at_base) << "\nmacro_f1@tuned\t" << fixed(at_tuned)
      << "\nlabel\ttheta\n";
  for (std::size_t i = 0; i < L; ++i) out << a.schema.name(i) << '\t' << fixed(tv.theta[i], 2) << '\n';

  StageRecord r;
  r.name = "tune";
  r.config = to_json(a.options);
  r.inputs = {a.probs, a.gold};
  r.outputs = {a.out};
  r.metrics = {{"macro_f1_default", at_default},
               {"base_theta", base},
               {"macro_f1_base", at_base},
               {"macro_f1_tuned", at_tuned},
               {"thresholds", thresholds_json(a.schema, tv)}};
  return r;
}

StageRecord cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ProbabilityMatrix pm = read_probabilities(a.probs, a.schema);
  ThresholdVector tv = ThresholdVector::uniform(a.schema.size());
  if (a.thresholds) {
    tv = read_thresholds(*a.thresholds, a.schema);
    if (tv.tuned_on && !a.allow_tuning_data && *tv.tuned_on == sha256_file(a.gold)) {
      throw DataError("thresholds in " + a.thresholds->string() + " were tuned on " +
                      a.gold.string() +
                      "; score a held-out file or pass --allow-tuning-data");
    }
  }
  const Dataset gold = load(a.gold, a.schema, PreprocessConfig{});
  const MetricsReport rep = evaluate(pm, gold, tv, a.averaging);
  const std::string text = a.machine ? format_report_machine(rep) : format_report_table(rep);
  out << text;
  if (a.report_out) write_text(*a.report_out, text);

  StageRecord r;
  r.name = "eval";
  r.config = {{"averaging", std::string(to_string(a.averaging))},
              {"thresholds", std::string(to_string(tv.provenance))}};
  r.inputs = {a.probs, a.gold};
  if (a.thresholds) r.inputs.push_back(*a.thresholds);
  if (a.report_out) r.outputs = {*a.report_out};
  r.metrics = report_json(rep);
  return r;
}

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const Dataset ds = generate_synthetic(a.spec);
  write_dataset(a.out, ds);
  out << "generated\t" << ds.size() << '\n';
  const auto rates = positive_rates(ds);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    out << ds.schema.name(i) << '\t' << fixed(rates[i]) << '\n';
  }
}

void cmd_pipeline(const PipelineArgs& a, std::ostream& out) {
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw DataError("cannot create " + a.out_dir.string() + ": " + ec.message());
  const fs::path train_path = a.out_dir / "train.jsonl";
  const fs::path val_path = a.out_dir / "val.jsonl";
  const fs::path test_path = a.out_dir / "test.jsonl";
  const fs::path model_path = a.out_dir / "model.txt";
  const fs::path history_path = a.out_dir / "history.tsv";
  const fs::path val_probs = a.out_dir / "val.probs";
  const fs::path thresholds_path = a.out_dir / "thresholds.txt";
  const fs::path test_probs = a.out_dir / "test.probs";

  TrainConfig tcfg = a.train_config;
  tcfg.seed = a.seed;
  nlohmann::json run_config = {{"data", a.data.filename().string()},
                               {"labels", a.schema.names()},
                               {"seed", a.seed},
                               {"test_fraction", a.test_fraction},
                               {"val_fraction", a.val_fraction},
                               {"preprocess", to_json(a.preprocess)},
                               {"featurizer", to_json(a.featurizer)},
                               {"train", to_json(tcfg)},
                               {"weighting", std::string(to_string(a.weighting))},
                               {"tune", to_json(a.tune)}};
  Manifest manifest(run_config);

  // Held-out test rows first, then train/validation from the remainder.
  {
    out << "== split\n";
    const Dataset ds = load(a.data, a.schema, a.preprocess);
    const SplitResult outer = split_dataset(ds, a.test_fraction, a.seed);
    const SplitResult inner = split_dataset(outer.train, a.val_fraction, derive_seed(a.seed, 1));
    write_dataset(train_path, inner.train);
    write_dataset(val_path, inner.val);
    write_dataset(test_path, outer.val);
    print_split(a.schema, inner, out);
    out << "test\t" << outer.val.size();
    for (double p : outer.per_label_val_pct) out << '\t' << fixed(p);
    out << '\n';

    StageRecord r;
    r.name = "split";
    r.config = {{"test_fraction", a.test_fraction},
                {"val_fraction", a.val_fraction},
                {"seed", a.seed},
                {"method", a.schema.is_binary() ? "stratified" : "iterative"}};
    r.inputs = {a.data};
    r.outputs = {train_path, val_path, test_path};
    r.metrics = {{"train_size", inner.train.size()},
                 {"val_size", inner.val.size()},
                 {"test_size", outer.val.size()},
                 {"test_positive_rate", rates_json(a.schema, outer.per_label_val_pct)}};
    manifest.add(r);
  }

  out << "== train\n";
  manifest.add(cmd_train({train_path, val_path, model_path, history_path, a.schema, a.preprocess,
                          tcfg, a.featurizer, a.weighting},
                         out));
  out << "== predict val\n";
  manifest.add(cmd_predict({model_path, val_path, val_probs}, out));
  out << "== tune\n";
  manifest.add(cmd_tune({val_probs, val_path, thresholds_path, a.schema, a.tune}, out));
  out << "== predict test\n";
  manifest.add(cmd_predict({model_path, test_path, test_probs}, out));

  out << "== eval test (thresholds 0.5)\n";
  StageRecord def = cmd_eval({test_probs, test_path, std::nullopt, a.out_dir / "report_default.tsv",
                              a.schema, a.tune.averaging, false, false},
                             out);
  def.name = "eval_default";
  manifest.add(def);
  out << "== eval test (tuned thresholds)\n";
  StageRecord tuned = cmd_eval({test_probs, test_path, thresholds_path,
                                a.out_dir / "report_tuned.tsv", a.schema, a.tune.averaging, false,
                                false},
                               out);
  tuned.name = "eval_tuned";
  manifest.add(tuned);

  write_text(a.out_dir / "manifest.json", manifest.dump());
  out << "manifest\t" << (a.out_dir / "manifest.json").string() << '\n';
}

}  // namespace mlcal::cli
