#include <cstdio>
#include <stdexcept>

#include "file_util.hpp"
#include "mlcal/probabilities.hpp"

namespace mlcal {

std::string_view to_string(ThresholdProvenance p) {
  switch (p) {
    case ThresholdProvenance::Default: return "default";
    case ThresholdProvenance::CoarseOnly: return "coarse_only";
    case ThresholdProvenance::Tuned: return "tuned";
  }
  return "default";
}

ThresholdProvenance parse_provenance(std::string_view s) {
  if (s == "default") return ThresholdProvenance::Default;
  if (s == "coarse_only") return ThresholdProvenance::CoarseOnly;
  if (s == "tuned") return ThresholdProvenance::Tuned;
  throw DataError("unknown threshold provenance '" + std::string(s) + "'");
}

ThresholdVector ThresholdVector::uniform(std::size_t labels, double value) {
  ThresholdVector tv;
  tv.theta.assign(labels, value);
  tv.base_theta = value;
  return tv;
}

BitMatrix apply_thresholds(const ProbabilityMatrix& pm, const ThresholdVector& tv) {
  if (tv.theta.size() != pm.cols()) {
    throw std::invalid_argument("apply_thresholds: " + std::to_string(tv.theta.size()) +
                                " thresholds for " + std::to_string(pm.cols()) + " labels");
  }
  BitMatrix out(pm.rows(), pm.cols());
  for (std::size_t r = 0; r < pm.rows(); ++r) {
    for (std::size_t c = 0; c < pm.cols(); ++c) out.at(r, c) = pm.at(r, c) >= tv.theta[c];
  }
  return out;
}

std::string format_probabilities(const ProbabilityMatrix& pm) {
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < pm.rows(); ++r) {
    out += pm.ids[r];
    for (std::size_t c = 0; c < pm.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "\t%.17g", pm.at(r, c));
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

void write_probabilities(const std::filesystem::path& path, const ProbabilityMatrix& pm) {
  detail::write_file(path, format_probabilities(pm), "probability file");
}

ProbabilityMatrix parse_probabilities(std::string_view text, const LabelSchema& schema) {
  ProbabilityMatrix pm;
  pm.schema = schema;
  std::size_t line_no = 0;
  for (std::string_view line : detail::lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != schema.size() + 1) {
      throw DataError("probability file line " + std::to_string(line_no) + ": expected " +
                      std::to_string(schema.size() + 1) + " tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    pm.ids.emplace_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const auto v = detail::parse_double(fields[c]);
      if (!v || !(*v >= 0.0 && *v <= 1.0)) {
        throw DataError("probability file line " + std::to_string(line_no) +
                        ": value '" + std::string(fields[c]) + "' is not a probability");
      }
      pm.probs.push_back(*v);
    }
  }
  return pm;
}

ProbabilityMatrix read_probabilities(const std::filesystem::path& path,
                                     const LabelSchema& schema) {
  try {
    return parse_probabilities(detail::read_file(path, "probability file"), schema);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::size_t probability_columns(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path, "probability file");
  for (std::string_view line : detail::lines(text)) {
    if (!line.empty()) return detail::split(line, '\t').size() - 1;
  }
  throw DataError(path.string() + ": probability file is empty");
}

std::string format_thresholds(const ThresholdVector& tv, const LabelSchema& schema) {
  if (tv.theta.size() != schema.size()) {
    throw std::invalid_argument("format_thresholds: threshold count does not match schema");
  }
  std::string out = "# mlcal thresholds v1\n";
  char buf[64];
  out += "__provenance__\t";
  out += to_string(tv.provenance);
  out.push_back('\n');
  std::snprintf(buf, sizeof buf, "__base__\t%.6f\n", tv.base_theta);
  out += buf;
  if (tv.tuned_on) out += "__tuned_on__\t" + *tv.tuned_on + "\n";
  for (std::size_t i = 0; i < schema.size(); ++i) {
    std::snprintf(buf, sizeof buf, "\t%.6f\n", tv.theta[i]);
    out += schema.name(i);
    out += buf;
  }
  return out;
}

void write_thresholds(const std::filesystem::path& path, const ThresholdVector& tv,
                      const LabelSchema& schema) {
  detail::write_file(path, format_thresholds(tv, schema), "thresholds file");
}

ThresholdVector parse_thresholds(std::string_view text, const LabelSchema& schema) {
  ThresholdVector tv;
  tv.theta.assign(schema.size(), 0.0);
  std::vector<bool> seen(schema.size(), false);
  bool have_base = false;
  std::size_t line_no = 0;
  const auto bad = [&](const std::string& what) {
    return DataError("thresholds file line " + std::to_string(line_no) + ": " + what);
  };
  for (std::string_view line : detail::lines(text)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw bad("expected <name><TAB><value>");
    const std::string_view key = line.substr(0, tab);
    const std::string_view value = line.substr(tab + 1);
    if (key == "__provenance__") {
      tv.provenance = parse_provenance(value);
      continue;
    }
    if (key == "__tuned_on__") {
      tv.tuned_on = std::string(value);
      continue;
    }
    const auto v = detail::parse_double(value);
    if (!v || !(*v >= 0.0 && *v <= 1.0)) throw bad("threshold must be a number in [0, 1]");
    if (key == "__base__") {
      tv.base_theta = *v;
      have_base = true;
      continue;
    }
    const auto idx = schema.index_of(key);
    if (!idx) throw bad("unknown label '" + std::string(key) + "'");
    if (seen[*idx]) throw bad("duplicate label '" + std::string(key) + "'");
    seen[*idx] = true;
    tv.theta[*idx] = *v;
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (!seen[i]) throw DataError("thresholds file has no entry for label '" + schema.name(i) + "'");
  }
  if (!have_base) throw DataError("thresholds file has no __base__ entry");
  return tv;
}

ThresholdVector read_thresholds(const std::filesystem::path& path, const LabelSchema& schema) {
  return parse_thresholds(detail::read_file(path, "thresholds file"), schema);
}

}  // namespace mlcal
