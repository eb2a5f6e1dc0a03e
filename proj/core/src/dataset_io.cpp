#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "mlcal/corpus.hpp"
#include "mlcal/errors.hpp"

namespace mlcal {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError(what + " at line " + std::to_string(line));
}

std::uint8_t parse_bit(const json& v, std::size_t line, const char* field) {
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  if (v.is_number_integer() || v.is_number_unsigned()) {
    const auto x = v.get<std::int64_t>();
    if (x == 0 || x == 1) return static_cast<std::uint8_t>(x);
  }
  fail(line, std::string("field '") + field + "' must be 0 or 1");
}

std::vector<std::uint8_t> parse_labels(const json& rec, const LabelSchema& schema,
                                       std::size_t line) {
  const std::size_t L = schema.size();
  const bool has_label = rec.contains("label");
  const bool has_labels = rec.contains("labels");
  if (has_label && has_labels) fail(line, "record has both 'label' and 'labels'");
  if (!has_label && !has_labels) fail(line, "record has neither 'label' nor 'labels'");

  std::vector<std::uint8_t> bits(L, 0);
  if (has_label) {
    if (L != 1) fail(line, "'label' is only valid for single-label schemas");
    bits[0] = parse_bit(rec["label"], line, "label");
    return bits;
  }
  const json& labels = rec["labels"];
  if (!labels.is_array()) fail(line, "'labels' must be an array");
  const bool by_name = std::any_of(labels.begin(), labels.end(),
                                   [](const json& v) { return v.is_string(); });
  if (by_name) {
    for (const json& v : labels) {
      if (!v.is_string()) fail(line, "'labels' mixes names and numbers");
      const auto name = v.get<std::string>();
      const auto idx = schema.index_of(name);
      if (!idx) fail(line, "unknown label '" + name + "'");
      bits[*idx] = 1;
    }
    return bits;
  }
  if (labels.empty()) return bits;
  if (labels.size() != L) {
    fail(line, "'labels' vector has " + std::to_string(labels.size()) +
                   " entries, schema has " + std::to_string(L));
  }
  for (std::size_t j = 0; j < L; ++j) bits[j] = parse_bit(labels[j], line, "labels");
  return bits;
}

}  // namespace

Dataset parse_dataset(std::string_view jsonl, const LabelSchema& schema,
                      const PreprocessConfig& cfg) {
  if (cfg.max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
  std::optional<EmojiTable> custom;
  if (cfg.demojize && cfg.emoji_table_path) custom = EmojiTable::load(*cfg.emoji_table_path);
  const EmojiTable& emojis = custom ? *custom : EmojiTable::builtin();

  Dataset ds;
  ds.schema = schema;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(line_no, std::string("malformed JSON record (") + e.what() + ")");
    }
    if (!rec.is_object()) fail(line_no, "record is not a JSON object");
    if (!rec.contains("id") || !rec["id"].is_string()) fail(line_no, "missing string field 'id'");
    if (!rec.contains("text") || !rec["text"].is_string()) {
      fail(line_no, "missing string field 'text'");
    }

    Instance inst;
    inst.id = rec["id"].get<std::string>();
    if (!ids.insert(inst.id).second) fail(line_no, "duplicate id '" + inst.id + "'");
    inst.raw_text = rec["text"].get<std::string>();
    inst.labels = parse_labels(rec, schema, line_no);
    inst.text = truncate(preprocess(inst.raw_text, cfg, emojis), cfg.max_tokens);
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const LabelSchema& schema,
                     const PreprocessConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset(buf.str(), schema, cfg);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_dataset(const Dataset& ds) {
  std::string out;
  for (const auto& inst : ds.instances) {
    json rec = json::object();
    rec["id"] = inst.id;
    rec["text"] = inst.raw_text;
    if (ds.schema.is_binary()) {
      rec["label"] = static_cast<int>(inst.labels.at(0));
    } else {
      json bits = json::array();
      for (auto b : inst.labels) bits.push_back(static_cast<int>(b));
      rec["labels"] = std::move(bits);
    }
    // Key order is fixed by nlohmann's sorted object map.
    out += rec.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file " + path.string());
  out << format_dataset(ds);
}

}  // namespace mlcal
