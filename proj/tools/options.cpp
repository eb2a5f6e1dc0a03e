#include "options.hpp"

#include <CLI11.hpp>

namespace mlcal::cli {

void SchemaOptions::add_to(CLI::App& app) {
  auto* p = app.add_option("--schema", preset, "Label schema preset: subtask1, subtask2, subtask3");
  auto* l = app.add_option("--labels", labels, "Comma-separated label names (custom schema)");
  p->excludes(l);
}

LabelSchema SchemaOptions::resolve() const {
  if (!labels.empty()) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = labels.find(',', start);
      names.push_back(labels.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    try {
      return LabelSchema(std::move(names));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--labels: ") + e.what());
    }
  }
  if (preset.empty()) throw UsageError("a label schema is required (--schema or --labels)");
  try {
    return LabelSchema::preset(preset);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--schema: ") + e.what());
  }
}

void PreprocessOptions::add_to(CLI::App& app) {
  app.add_flag("--no-demojize", no_demojize, "Delete emojis instead of naming them");
  app.add_option("--emoji-table", emoji_table, "Emoji name table replacing the built-in one");
  app.add_flag("--keep-urls", keep_urls, "Keep URL tokens");
  app.add_flag("--keep-mentions", keep_mentions, "Keep @mention tokens");
  app.add_flag("--keep-hashtag-symbol", keep_hashtag_symbol, "Keep '#' characters");
  app.add_flag("--no-lowercase", no_lowercase, "Preserve letter case");
  app.add_option("--max-tokens", max_tokens, "Whitespace tokens kept per text")
      ->check(CLI::PositiveNumber);
}

PreprocessConfig PreprocessOptions::config() const {
  PreprocessConfig c;
  c.demojize = !no_demojize;
  if (!emoji_table.empty()) c.emoji_table_path = emoji_table;
  c.strip_urls = !keep_urls;
  c.strip_mentions = !keep_mentions;
  c.strip_hashtag_symbol = !keep_hashtag_symbol;
  c.lowercase = !no_lowercase;
  c.max_tokens = max_tokens;
  return c;
}

void ModelOptions::add_to(CLI::App& app) {
  app.add_option("--lr", train.learning_rate, "Peak learning rate");
  app.add_option("--weight-decay", train.weight_decay, "Decoupled weight decay");
  app.add_option("--epochs", train.max_epochs, "Maximum epochs");
  app.add_option("--batch-size", train.batch_size, "Micro-batch size");
  app.add_option("--accumulation-steps", train.accumulation_steps,
                 "Micro-batches per optimizer step");
  warmup_steps_opt_ =
      app.add_option("--warmup-steps", warmup_steps, "Warmup steps (overrides --warmup-ratio)");
  app.add_option("--warmup-ratio", train.warmup_ratio, "Warmup as a fraction of all steps");
  app.add_option("--max-grad-norm", train.max_grad_norm, "Global gradient-norm clip");
  smoothing_opt_ = app.add_option("--label-smoothing", label_smoothing,
                                  "Label smoothing (default 0.1 binary, 0 multi-label)");
  app.add_option("--patience", train.patience, "Early-stopping patience in epochs");
  app.add_option("--pos-weight-cap", train.pos_weight_cap, "Cap on per-label positive weights");
  app.add_option("--weighting", weighting, "Loss weighting: none or balanced")
      ->check(CLI::IsMember({"none", "balanced"}));
  app.add_option("--hash-dim", hash_dim, "Hashed feature dimension (power of two)");
  app.add_option("--ngrams", ngrams, "N-gram orders: 1, 2 or 1,2")
      ->check(CLI::IsMember({"1", "2", "1,2"}));
  app.add_option("--tf", tf, "Term frequency: binary or count")
      ->check(CLI::IsMember({"binary", "count"}));
  app.add_flag("--l2-normalize,!--no-l2-normalize", l2_normalize, "L2-normalize feature vectors");
  app.add_option("--binary-mode", binary_mode,
                 "Single-label averaging: two-class-macro or positive-f1")
      ->check(CLI::IsMember({"two-class-macro", "positive-f1"}));
}

void ModelOptions::finalize() {
  if (warmup_steps_opt_ && warmup_steps_opt_->count() > 0) train.warmup_steps = warmup_steps;
  if (smoothing_opt_ && smoothing_opt_->count() > 0) train.label_smoothing = label_smoothing;
  train.binary_averaging = parse_binary_mode(binary_mode);
  try {
    train.validate();
    featurizer().validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

FeaturizerConfig ModelOptions::featurizer() const {
  FeaturizerConfig c;
  if (hash_dim > 0xffffffffu) throw UsageError("--hash-dim is too large");
  c.hash_dim = static_cast<std::uint32_t>(hash_dim);
  c.unigrams = ngrams != "2";
  c.bigrams = ngrams != "1";
  c.tf = tf == "count" ? TermFrequency::Count : TermFrequency::Binary;
  c.l2_normalize = l2_normalize;
  return c;
}

void TuneFlags::add_to(CLI::App& app, bool with_binary_mode) {
  if (with_binary_mode) {
    app.add_option("--binary-mode", binary_mode,
                   "Single-label averaging: two-class-macro or positive-f1")
        ->check(CLI::IsMember({"two-class-macro", "positive-f1"}));
  }
  app.add_option("--refine-passes", refine_passes, "Per-label refinement passes")
      ->check(CLI::PositiveNumber);
  app.add_option("--refine-reference", refine_reference,
                 "Other labels during a sweep: sequential or base")
      ->check(CLI::IsMember({"sequential", "base"}));
}

TuneOptions TuneFlags::options() const {
  TuneOptions o;
  o.averaging = parse_binary_mode(binary_mode);
  o.refine_passes = refine_passes;
  o.reference = refine_reference == "base" ? RefineReference::Base : RefineReference::Sequential;
  return o;
}

BinaryAveraging parse_binary_mode(const std::string& s) {
  try {
    return parse_binary_averaging(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

nlohmann::json to_json(const PreprocessConfig& c) {
  return {{"demojize", c.demojize},
          {"emoji_table", c.emoji_table_path ? c.emoji_table_path->filename().string() : ""},
          {"strip_urls", c.strip_urls},
          {"strip_mentions", c.strip_mentions},
          {"strip_hashtag_symbol", c.strip_hashtag_symbol},
          {"lowercase", c.lowercase},
          {"max_tokens", c.max_tokens}};
}

nlohmann::json to_json(const FeaturizerConfig& c) {
  return {{"hash_dim", c.hash_dim},
          {"unigrams", c.unigrams},
          {"bigrams", c.bigrams},
          {"tf", c.tf == TermFrequency::Count ? "count" : "binary"},
          {"l2_normalize", c.l2_normalize}};
}

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j = {{"learning_rate", c.learning_rate},
                      {"weight_decay", c.weight_decay},
                      {"max_epochs", c.max_epochs},
                      {"batch_size", c.batch_size},
                      {"accumulation_steps", c.accumulation_steps},
                      {"warmup_ratio", c.warmup_ratio},
                      {"max_grad_norm", c.max_grad_norm},
                      {"patience", c.patience},
                      {"seed", c.seed},
                      {"pos_weight_cap", c.pos_weight_cap},
                      {"binary_averaging", std::string(to_string(c.binary_averaging))}};
  j["warmup_steps"] = c.warmup_steps ? nlohmann::json(*c.warmup_steps) : nlohmann::json();
  j["label_smoothing"] = c.label_smoothing ? nlohmann::json(*c.label_smoothing) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const TuneOptions& o) {
  return {{"coarse_lo", o.grid.coarse_lo},
          {"coarse_step", o.grid.coarse_step},
          {"coarse_points", o.grid.coarse_points},
          {"fine_step", o.grid.fine_step},
          {"window_halfwidth", o.grid.window_halfwidth},
          {"clamp_lo", o.grid.clamp_lo},
          {"clamp_hi", o.grid.clamp_hi},
          {"averaging", std::string(to_string(o.averaging))},
          {"refine_passes", o.refine_passes},
          {"reference", o.reference == RefineReference::Base ? "base" : "sequential"}};
}

}  // namespace mlcal::cli
