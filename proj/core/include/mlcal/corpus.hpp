#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlcal {

/// Ordered label names. Width 1 is the binary task; wider schemas are
/// multi-label with independent labels.
class LabelSchema {
 public:
  LabelSchema() = default;
  /// Throws std::invalid_argument on empty, duplicate or tab/newline names.
  explicit LabelSchema(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool is_binary() const { return names_.size() == 1; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const LabelSchema&) const = default;

  /// Named presets: "subtask1" (binary), "subtask2" (target types),
  /// "subtask3" (manifestations).
  static LabelSchema preset(std::string_view name);
  static std::vector<std::string> preset_names();

 private:
  std::vector<std::string> names_;
};

struct Instance {
  std::string id;
  std::string raw_text;
  std::string text;
  std::vector<std::uint8_t> labels;
};

struct Dataset {
  LabelSchema schema;
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

/// Row-major N x L matrix of 0/1 values.
struct BitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;

  BitMatrix() = default;
  BitMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool operator==(const BitMatrix&) const = default;
};

BitMatrix label_matrix(const Dataset& ds);

// ---------------------------------------------------------------------------
// Preprocessing

/// Emoji code-point sequences and their textual names, matched longest-first.
class EmojiTable {
 public:
  /// Parses `U+1F60A<TAB>name` lines; '#' lines and blank lines are skipped.
  /// Throws DataError naming the offending line.
  static EmojiTable parse(std::string_view text);
  static EmojiTable load(const std::filesystem::path& path);
  /// The table compiled into the library.
  static const EmojiTable& builtin();

  std::size_t size() const { return entries_.size(); }

  /// Longest entry matching `cps` at `pos`: (length in code points, name).
  std::optional<std::pair<std::size_t, std::string_view>> match(
      std::span<const char32_t> cps, std::size_t pos) const;

 private:
  std::map<std::u32string, std::string> entries_;
  std::size_t max_len_ = 0;
};

struct PreprocessConfig {
  bool demojize = true;
  std::optional<std::filesystem::path> emoji_table_path;
  bool strip_urls = true;
  bool strip_mentions = true;
  bool strip_hashtag_symbol = true;
  bool lowercase = true;
  std::size_t max_tokens = 128;
};

/// Social-media normalization: demojize, drop URL and @mention tokens, drop
/// '#' characters, lowercase, collapse whitespace, trim. Idempotent.
std::string preprocess(std::string_view raw, const PreprocessConfig& cfg);
std::string preprocess(std::string_view raw, const PreprocessConfig& cfg,
                       const EmojiTable& emojis);

/// Keeps the first `max_tokens` whitespace-delimited tokens.
std::string truncate(std::string_view text, std::size_t max_tokens);

std::vector<std::string_view> split_tokens(std::string_view text);

/// True for code points that are treated as emoji when absent from the table.
bool is_emoji_code_point(char32_t cp);

// ---------------------------------------------------------------------------
// Dataset files (JSONL)

/// Reads one JSON record per line. Each record has `id`, `text`, and either
/// `label` (0/1, binary schemas only) or `labels` (names or a 0/1 vector).
/// `text` of each instance is filled with preprocess + truncate.
Dataset load_dataset(const std::filesystem::path& path, const LabelSchema& schema,
                     const PreprocessConfig& cfg = {});
Dataset parse_dataset(std::string_view jsonl, const LabelSchema& schema,
                      const PreprocessConfig& cfg = {});

/// Writes records that load_dataset reads back to the same ids, raw texts
/// and labels. Binary schemas use `label`, others a 0/1 `labels` vector.
void write_dataset(const std::filesystem::path& path, const Dataset& ds);
std::string format_dataset(const Dataset& ds);

// ---------------------------------------------------------------------------
// Summary statistics

struct CorpusStats {
  std::size_t n_instances = 0;
  std::vector<std::size_t> per_label_positive;
  std::vector<double> per_label_positive_pct;
  /// n_neg / n_pos; +infinity when a label has no positives.
  std::vector<double> imbalance_ratio_per_label;
  std::size_t all_zero_rows = 0;
  /// number of active labels -> instance count
  std::map<std::size_t, std::size_t> label_cardinality_histogram;
};

/// Throws std::invalid_argument on an empty dataset.
CorpusStats summarize(const Dataset& ds);

}  // namespace mlcal
