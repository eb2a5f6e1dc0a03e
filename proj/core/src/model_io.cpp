#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "file_util.hpp"
#include "mlcal/errors.hpp"
#include "mlcal/linear_model.hpp"

// Model file layout (text, one record per line, fields separated by TAB):
//
//   mlcal-linear-model  1
//   label               <name>            (one line per label, schema order)
//   hash_dim            <D>
//   ngrams              1 | 2 | 1,2
//   tf                  binary | count
//   l2_normalize        0 | 1
//   preprocess          <demojize> <urls> <mentions> <hashtags> <lowercase> <max_tokens>
//   emoji_table         <path>            (optional)
//   bias                <b_1> ... <b_L>
//   row                 <feature> <w_1> ... <w_L>   (only rows with a nonzero weight)
//   end
//
// Reals are C99 hex floats, so a save/load round trip is bit-exact.

namespace mlcal {

namespace {

constexpr std::string_view kMagic = "mlcal-linear-model";

std::string hexfloat(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw DataError("model file line " + std::to_string(line) + ": " + what);
}

double real(std::string_view s, std::size_t line) {
  const auto v = detail::parse_double(s);
  if (!v || !std::isfinite(*v)) bad(line, "bad number '" + std::string(s) + "'");
  return *v;
}

std::size_t count(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) bad(line, "bad integer '" + std::string(s) + "'");
  return v;
}

bool flag(std::string_view s, std::size_t line) {
  if (s == "1") return true;
  if (s == "0") return false;
  bad(line, "expected 0 or 1, got '" + std::string(s) + "'");
}

}  // namespace

std::string format_model(const LinearModel& m) {
  const std::size_t L = m.labels();
  std::string out = std::string(kMagic) + "\t1\n";
  for (const auto& name : m.schema.names()) out += "label\t" + name + "\n";
  out += "hash_dim\t" + std::to_string(m.dim) + "\n";
  out += "ngrams\t";
  out += m.featurizer.unigrams && m.featurizer.bigrams ? "1,2" : (m.featurizer.unigrams ? "1" : "2");
  out += "\ntf\t";
  out += m.featurizer.tf == TermFrequency::Binary ? "binary" : "count";
  out += "\nl2_normalize\t" + std::to_string(m.featurizer.l2_normalize ? 1 : 0) + "\n";
  const auto& p = m.preprocess;
  out += "preprocess\t" + std::to_string(p.demojize) + "\t" + std::to_string(p.strip_urls) + "\t" +
         std::to_string(p.strip_mentions) + "\t" + std::to_string(p.strip_hashtag_symbol) + "\t" +
         std::to_string(p.lowercase) + "\t" + std::to_string(p.max_tokens) + "\n";
  if (p.emoji_table_path) out += "emoji_table\t" + p.emoji_table_path->string() + "\n";
  out += "bias";
  for (double b : m.bias) out += "\t" + hexfloat(b);
  out += "\n";
  for (std::size_t f = 0; f < m.dim; ++f) {
    bool nonzero = false;
    for (std::size_t j = 0; j < L && !nonzero; ++j) nonzero = m.w(f, j) != 0.0;
    if (!nonzero) continue;
    out += "row\t" + std::to_string(f);
    for (std::size_t j = 0; j < L; ++j) out += "\t" + hexfloat(m.w(f, j));
    out += "\n";
  }
  out += "end\n";
  return out;
}

LinearModel parse_model(std::string_view text) {
  const auto all = detail::lines(text);
  if (all.empty() || detail::split(all[0], '\t').at(0) != kMagic) {
    throw DataError("not an mlcal model file");
  }
  if (detail::split(all[0], '\t').size() != 2 || detail::split(all[0], '\t')[1] != "1") {
    throw DataError("unsupported model file version");
  }

  std::vector<std::string> names;
  FeaturizerConfig fcfg;
  PreprocessConfig pcfg;
  std::optional<std::size_t> dim;
  std::vector<double> bias;
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  bool ended = false;

  for (std::size_t i = 1; i < all.size(); ++i) {
    const std::size_t line = i + 1;
    const auto f = detail::split(all[i], '\t');
    const std::string_view key = f[0];
    if (ended) bad(line, "content after 'end'");
    if (key == "label" && f.size() == 2) {
      names.emplace_back(f[1]);
    } else if (key == "hash_dim" && f.size() == 2) {
      dim = count(f[1], line);
      fcfg.hash_dim = static_cast<std::uint32_t>(*dim);
    } else if (key == "ngrams" && f.size() == 2) {
      fcfg.unigrams = f[1] == "1" || f[1] == "1,2";
      fcfg.bigrams = f[1] == "2" || f[1] == "1,2";
      if (!fcfg.unigrams && !fcfg.bigrams) bad(line, "bad ngrams value");
    } else if (key == "tf" && f.size() == 2) {
      if (f[1] == "binary") fcfg.tf = TermFrequency::Binary;
      else if (f[1] == "count") fcfg.tf = TermFrequency::Count;
      else bad(line, "bad tf value");
    } else if (key == "l2_normalize" && f.size() == 2) {
      fcfg.l2_normalize = flag(f[1], line);
    } else if (key == "preprocess" && f.size() == 7) {
      pcfg.demojize = flag(f[1], line);
      pcfg.strip_urls = flag(f[2], line);
      pcfg.strip_mentions = flag(f[3], line);
      pcfg.strip_hashtag_symbol = flag(f[4], line);
      pcfg.lowercase = flag(f[5], line);
      pcfg.max_tokens = count(f[6], line);
    } else if (key == "emoji_table" && f.size() == 2) {
      pcfg.emoji_table_path = std::filesystem::path(std::string(f[1]));
    } else if (key == "bias") {
      for (std::size_t k = 1; k < f.size(); ++k) bias.push_back(real(f[k], line));
    } else if (key == "row" && f.size() >= 2) {
      std::vector<double> values;
      for (std::size_t k = 2; k < f.size(); ++k) values.push_back(real(f[k], line));
      rows.emplace_back(count(f[1], line), std::move(values));
    } else if (key == "end" && f.size() == 1) {
      ended = true;
    } else {
      bad(line, "unrecognized record '" + std::string(key) + "'");
    }
  }
  if (!ended) throw DataError("model file is truncated (no 'end' record)");
  if (!dim) throw DataError("model file has no hash_dim");

  LinearModel m;
  try {
    m = LinearModel::zeros(*dim, LabelSchema(std::move(names)));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  m.featurizer = fcfg;
  m.preprocess = pcfg;
  if (bias.size() != m.labels()) throw DataError("model file: bias width does not match labels");
  m.bias = std::move(bias);
  for (auto& [feature, values] : rows) {
    if (feature >= m.dim || values.size() != m.labels()) {
      throw DataError("model file: malformed row for feature " + std::to_string(feature));
    }
    for (std::size_t j = 0; j < values.size(); ++j) m.w(feature, j) = values[j];
  }
  return m;
}

void save_model(const std::filesystem::path& path, const LinearModel& m) {
  detail::write_file(path, format_model(m), "model file");
}

LinearModel load_model(const std::filesystem::path& path) {
  try {
    return parse_model(detail::read_file(path, "model file"));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace mlcal
