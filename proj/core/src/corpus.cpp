#include <limits>
#include <set>
#include <stdexcept>

#include "mlcal/corpus.hpp"

namespace mlcal {

LabelSchema::LabelSchema(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw std::invalid_argument("label schema needs at least one label");
  std::set<std::string_view> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw std::invalid_argument("label names must be non-empty");
    if (n.find_first_of("\t\n\r") != std::string::npos) {
      throw std::invalid_argument("label name '" + n + "' contains tab or newline");
    }
    if (!seen.insert(n).second) {
      throw std::invalid_argument("duplicate label name '" + n + "'");
    }
  }
}

std::optional<std::size_t> LabelSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

LabelSchema LabelSchema::preset(std::string_view name) {
  if (name == "subtask1") return LabelSchema({"polarized"});
  if (name == "subtask2") {
    return LabelSchema({"political", "racial/ethnic", "religious", "gender/sexual", "other"});
  }
  if (name == "subtask3") {
    return LabelSchema({"stereotype", "vilification", "dehumanization", "extreme_language",
                        "lack_of_empathy", "invalidation"});
  }
  throw std::invalid_argument("unknown schema preset '" + std::string(name) + "'");
}

std::vector<std::string> LabelSchema::preset_names() {
  return {"subtask1", "subtask2", "subtask3"};
}

BitMatrix label_matrix(const Dataset& ds) {
  BitMatrix m(ds.size(), ds.schema.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = ds.instances[r].labels[c];
  }
  return m;
}

CorpusStats summarize(const Dataset& ds) {
  if (ds.empty()) throw std::invalid_argument("summarize: dataset is empty");
  const std::size_t L = ds.schema.size();
  CorpusStats s;
  s.n_instances = ds.size();
  s.per_label_positive.assign(L, 0);
  for (const auto& inst : ds.instances) {
    std::size_t active = 0;
    for (std::size_t j = 0; j < L; ++j) {
      if (inst.labels[j]) {
        ++s.per_label_positive[j];
        ++active;
      }
    }
    if (active == 0) ++s.all_zero_rows;
    ++s.label_cardinality_histogram[active];
  }
  const double n = static_cast<double>(s.n_instances);
  for (std::size_t j = 0; j < L; ++j) {
    const double pos = static_cast<double>(s.per_label_positive[j]);
    s.per_label_positive_pct.push_back(pos / n);
    s.imbalance_ratio_per_label.push_back(
        pos == 0.0 ? std::numeric_limits<double>::infinity() : (n - pos) / pos);
  }
  return s;
}

}  // namespace mlcal
