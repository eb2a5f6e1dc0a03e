#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>

#include "commands.hpp"
#include "mlcal/errors.hpp"
#include "mlcal/probabilities.hpp"
#include "options.hpp"

namespace mlcal::cli {

namespace {

constexpr const char* kDefaultSchema = "subtask1";

CLI::App* subcommand(CLI::App& app, const std::string& name, const std::string& help) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", "Read flags from a key=value file; explicit flags win");
  return sub;
}

/// CLI11 only reads config files for the top-level app, so a subcommand's
/// `--config FILE` is expanded here: each `key = value` entry becomes
/// `--key=value` placed before the explicit flags, and every option keeps
/// its last value.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::vector<CLI::ConfigItem> items;
    try {
      items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::FileError& e) {
      throw UsageError(std::string("--config: ") + e.what());
    }
    for (const auto& item : items) {
      if (!item.parents.empty() || item.name == "++" || item.name == "--") {
        throw UsageError("--config " + path + ": sections are not supported ('" +
                         item.fullname() + "')");
      }
      std::string value;
      for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
      from_file.push_back("--" + item.name + "=" + value);
    }
  }
  if (from_file.empty() || out.empty()) return out;
  out.insert(out.begin() + 1, from_file.begin(), from_file.end());
  return out;
}

/// Schema for probability-file commands: explicit flags win, otherwise the
/// preset whose width matches the file.
LabelSchema schema_for_probs(const SchemaOptions& opts, const fs::path& probs) {
  const std::size_t cols = probability_columns(probs);
  if (opts.given()) {
    LabelSchema s = opts.resolve();
    if (s.size() != cols) {
      throw DataError(probs.string() + " has " + std::to_string(cols) +
                      " probability columns but the schema has " + std::to_string(s.size()) +
                      " labels");
    }
    return s;
  }
  for (const auto& name : LabelSchema::preset_names()) {
    LabelSchema s = LabelSchema::preset(name);
    if (s.size() == cols) return s;
  }
  throw UsageError("cannot infer a schema for " + std::to_string(cols) +
                   " probability columns; pass --schema or --labels");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-label text classification with per-label threshold calibration", "mlcal"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // stats
  StatsArgs stats;
  SchemaOptions stats_schema{kDefaultSchema, ""};
  PreprocessOptions stats_pre;
  std::string stats_format = "table";
  CLI::App* stats_cmd = subcommand(app, "stats", "Corpus summary statistics");
  stats_cmd->add_option("data", stats.data, "Dataset (JSONL)")->required();
  stats_schema.add_to(*stats_cmd);
  stats_pre.add_to(*stats_cmd);
  stats_cmd->add_option("--format", stats_format, "table or machine")
      ->check(CLI::IsMember({"table", "machine"}));

  // split
  SplitArgs split;
  SchemaOptions split_schema{kDefaultSchema, ""};
  PreprocessOptions split_pre;
  CLI::App* split_cmd = subcommand(app, "split", "Stratified train/validation split");
  split_cmd->add_option("--data", split.data, "Dataset to split")->required();
  split_cmd->add_option("--train-out", split.train_out, "Training subset output")->required();
  split_cmd->add_option("--val-out", split.val_out, "Validation subset output")->required();
  split_cmd->add_option("--val-fraction", split.val_fraction, "Validation fraction")
      ->check(CLI::Range(0.0, 1.0));
  split_cmd->add_option("--seed", split.seed, "Random seed");
  split_schema.add_to(*split_cmd);
  split_pre.add_to(*split_cmd);

  // merge
  MergeArgs merge;
  SchemaOptions merge_schema{kDefaultSchema, ""};
  PreprocessOptions merge_pre;
  CLI::App* merge_cmd =
      subcommand(app, "merge", "Balance a binary corpus with opposite-class donor rows");
  merge_cmd->add_option("--primary", merge.primary, "Primary corpus")->required();
  merge_cmd->add_option("--donor", merge.donor, "Donor corpus")->required();
  merge_cmd->add_option("--out", merge.out, "Merged output")->required();
  merge_cmd->add_option("--seed", merge.seed, "Random seed");
  merge_schema.add_to(*merge_cmd);
  merge_pre.add_to(*merge_cmd);

  // train
  TrainArgs trn;
  std::string history_out;
  SchemaOptions train_schema{kDefaultSchema, ""};
  PreprocessOptions train_pre;
  ModelOptions train_model;
  CLI::App* train_cmd = subcommand(app, "train", "Train the linear classifier");
  train_cmd->add_option("--train", trn.train, "Training set")->required();
  train_cmd->add_option("--val", trn.val, "Validation set (early stopping)")->required();
  train_cmd->add_option("--model-out", trn.model_out, "Model output")->required();
  train_cmd->add_option("--history-out", history_out, "Per-epoch history (TSV)");
  train_cmd->add_option("--seed", train_model.train.seed, "Random seed");
  train_schema.add_to(*train_cmd);
  train_pre.add_to(*train_cmd);
  train_model.add_to(*train_cmd);

  // predict
  PredictArgs pred;
  CLI::App* predict_cmd = subcommand(app, "predict", "Write per-label probabilities");
  predict_cmd->add_option("--model", pred.model, "Model file")->required();
  predict_cmd->add_option("--data", pred.data, "Dataset to score")->required();
  predict_cmd->add_option("--out", pred.out, "Probability file output")->required();

  // tune
  TuneArgs tun;
  SchemaOptions tune_schema;
  TuneFlags tune_flags;
  CLI::App* tune_cmd = subcommand(app, "tune", "Two-stage threshold search on validation data");
  tune_cmd->add_option("--probs", tun.probs, "Validation probabilities")->required();
  tune_cmd->add_option("--gold", tun.gold, "Validation gold labels")->required();
  tune_cmd->add_option("--out", tun.out, "Thresholds output")->required();
  tune_schema.add_to(*tune_cmd);
  tune_flags.add_to(*tune_cmd, true);

  // eval
  EvalArgs ev;
  std::string eval_thresholds;
  std::string eval_out;
  std::string eval_format = "table";
  std::string eval_mode = "two-class-macro";
  SchemaOptions eval_schema;
  CLI::App* eval_cmd = subcommand(app, "eval", "Score probabilities against gold labels");
  eval_cmd->add_option("--probs", ev.probs, "Probabilities")->required();
  eval_cmd->add_option("--gold", ev.gold, "Gold labels")->required();
  eval_cmd->add_option("--thresholds", eval_thresholds, "Thresholds file (default 0.5)");
  eval_cmd->add_option("--out", eval_out, "Also write the report here");
  eval_cmd->add_option("--format", eval_format, "table or machine")
      ->check(CLI::IsMember({"table", "machine"}));
  eval_cmd->add_option("--binary-mode", eval_mode, "two-class-macro or positive-f1")
      ->check(CLI::IsMember({"two-class-macro", "positive-f1"}));
  eval_cmd->add_flag("--allow-tuning-data", ev.allow_tuning_data,
                     "Score the file the thresholds were tuned on");
  eval_schema.add_to(*eval_cmd);

  // generate
  GenerateArgs gen;
  SchemaOptions gen_schema{kDefaultSchema, ""};
  std::string gen_rates_text;
  CLI::App* gen_cmd = subcommand(app, "generate", "Write a synthetic labelled corpus");
  gen_cmd->add_option("--out", gen.out, "Output dataset")->required();
  gen_cmd->add_option("--n", gen.spec.instances, "Number of instances");
  gen_cmd->add_option("--rates", gen_rates_text, "Per-label positive rates (comma-separated)")
      ->required();
  gen_cmd->add_option("--noise", gen.spec.noise, "Label-flip noise in [0, 0.5)");
  gen_cmd->add_option("--seed", gen.spec.seed, "Random seed");
  gen_schema.add_to(*gen_cmd);

  // pipeline
  PipelineArgs pipe;
  SchemaOptions pipe_schema{kDefaultSchema, ""};
  PreprocessOptions pipe_pre;
  ModelOptions pipe_model;
  TuneFlags pipe_tune;
  pipe.out_dir = "mlcal_run";
  CLI::App* pipe_cmd = subcommand(
      app, "pipeline", "split, train, predict, tune on validation, evaluate on held-out test");
  pipe_cmd->add_option("--data", pipe.data, "Labelled dataset")->required();
  pipe_cmd->add_option("--out-dir", pipe.out_dir, "Directory for all artifacts");
  pipe_cmd->add_option("--seed", pipe.seed, "Random seed for splits and training");
  pipe_cmd->add_option("--val-fraction", pipe.val_fraction, "Validation share of the non-test rows")
      ->check(CLI::Range(0.0, 1.0));
  pipe_cmd->add_option("--test-fraction", pipe.test_fraction, "Held-out test share")
      ->check(CLI::Range(0.0, 1.0));
  pipe_schema.add_to(*pipe_cmd);
  pipe_pre.add_to(*pipe_cmd);
  pipe_model.add_to(*pipe_cmd);
  pipe_tune.add_to(*pipe_cmd, false);

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (stats_cmd->parsed()) {
      stats.schema = stats_schema.resolve();
      stats.preprocess = stats_pre.config();
      stats.machine = stats_format == "machine";
      cmd_stats(stats, out);
    } else if (split_cmd->parsed()) {
      split.schema = split_schema.resolve();
      split.preprocess = split_pre.config();
      cmd_split(split, out);
    } else if (merge_cmd->parsed()) {
      merge.schema = merge_schema.resolve();
      merge.preprocess = merge_pre.config();
      cmd_merge(merge, out);
    } else if (train_cmd->parsed()) {
      train_model.finalize();
      trn.schema = train_schema.resolve();
      trn.preprocess = train_pre.config();
      trn.train_config = train_model.train;
      trn.featurizer = train_model.featurizer();
      trn.weighting = train_model.weighting_mode();
      if (!history_out.empty()) trn.history_out = history_out;
      cmd_train(trn, out);
    } else if (predict_cmd->parsed()) {
      cmd_predict(pred, out);
    } else if (tune_cmd->parsed()) {
      tun.schema = schema_for_probs(tune_schema, tun.probs);
      tun.options = tune_flags.options();
      cmd_tune(tun, out);
    } else if (eval_cmd->parsed()) {
      ev.schema = schema_for_probs(eval_schema, ev.probs);
      ev.averaging = parse_binary_mode(eval_mode);
      ev.machine = eval_format == "machine";
      if (!eval_thresholds.empty()) ev.thresholds = eval_thresholds;
      if (!eval_out.empty()) ev.report_out = eval_out;
      cmd_eval(ev, out);
    } else if (gen_cmd->parsed()) {
      gen.spec.schema = gen_schema.resolve();
      std::vector<double> gen_rates;
      for (const auto& field : CLI::detail::split(gen_rates_text, ',')) {
        try {
          std::size_t used = 0;
          gen_rates.push_back(std::stod(field, &used));
          if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
          throw UsageError("--rates: bad number '" + field + "'");
        }
      }
      if (gen_rates.size() == 1) gen_rates.assign(gen.spec.schema.size(), gen_rates[0]);
      gen.spec.rates = gen_rates;
      try {
        gen.spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      cmd_generate(gen, out);
    } else if (pipe_cmd->parsed()) {
      pipe_model.finalize();
      pipe.schema = pipe_schema.resolve();
      pipe.preprocess = pipe_pre.config();
      pipe.train_config = pipe_model.train;
      pipe.featurizer = pipe_model.featurizer();
      pipe.weighting = pipe_model.weighting_mode();
      pipe.tune = pipe_tune.options();
      pipe.tune.averaging = pipe_model.train.binary_averaging;
      cmd_pipeline(pipe, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace mlcal::cli
