#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "mlcal/errors.hpp"
#include "mlcal/metrics.hpp"

namespace mlcal {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(BinaryAveraging mode) {
  return mode == BinaryAveraging::TwoClassMacro ? "two-class-macro" : "positive-f1";
}

BinaryAveraging parse_binary_averaging(std::string_view s) {
  if (s == "two-class-macro") return BinaryAveraging::TwoClassMacro;
  if (s == "positive-f1") return BinaryAveraging::PositiveF1;
  throw std::invalid_argument("unknown binary averaging '" + std::string(s) + "'");
}

ConfusionCounts confusion(const BitMatrix& pred, const BitMatrix& gold) {
  if (pred.rows != gold.rows || pred.cols != gold.cols) {
    throw std::invalid_argument("confusion: prediction shape " + std::to_string(pred.rows) + "x" +
                                std::to_string(pred.cols) + " vs gold " +
                                std::to_string(gold.rows) + "x" + std::to_string(gold.cols));
  }
  ConfusionCounts cc;
  cc.n = gold.rows;
  cc.labels.resize(gold.cols);
  for (std::size_t r = 0; r < gold.rows; ++r) {
    for (std::size_t c = 0; c < gold.cols; ++c) {
      auto& lc = cc.labels[c];
      const bool p = pred.at(r, c) != 0;
      const bool g = gold.at(r, c) != 0;
      if (p && g) ++lc.tp;
      else if (p) ++lc.fp;
      else if (g) ++lc.fn;
      else ++lc.tn;
    }
  }
  return cc;
}

double precision(const LabelConfusion& c) { return ratio(c.tp, c.tp + c.fp); }
double recall(const LabelConfusion& c) { return ratio(c.tp, c.tp + c.fn); }
double f1_score(const LabelConfusion& c) { return ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn); }

ConfusionCounts averaging_rows(const ConfusionCounts& cc, BinaryAveraging mode) {
  if (cc.labels.size() != 1 || mode != BinaryAveraging::TwoClassMacro) return cc;
  const LabelConfusion& pos = cc.labels[0];
  ConfusionCounts out;
  out.n = cc.n;
  out.labels = {LabelConfusion{pos.tn, pos.fn, pos.fp, pos.tp}, pos};
  return out;
}

double macro_f1(const ConfusionCounts& cc, BinaryAveraging mode) {
  const ConfusionCounts rows = averaging_rows(cc, mode);
  if (rows.labels.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& lc : rows.labels) sum += f1_score(lc);
  return sum / static_cast<double>(rows.labels.size());
}

double micro_f1(const ConfusionCounts& cc, BinaryAveraging mode) {
  LabelConfusion pooled;
  for (const auto& lc : averaging_rows(cc, mode).labels) {
    pooled.tp += lc.tp;
    pooled.fp += lc.fp;
    pooled.fn += lc.fn;
    pooled.tn += lc.tn;
  }
  return f1_score(pooled);
}

MetricsReport make_report(const ConfusionCounts& cc, const LabelSchema& schema,
                          std::vector<double> thresholds, BinaryAveraging mode) {
  MetricsReport r;
  r.averaging = mode;
  r.thresholds = std::move(thresholds);
  r.threshold_labels = schema.names();
  const ConfusionCounts rows = averaging_rows(cc, mode);
  if (rows.labels.size() == cc.labels.size()) {
    r.names = schema.names();
  } else {
    r.names = {schema.name(0) + "=0", schema.name(0) + "=1"};
  }
  double sum = 0.0;
  for (const auto& lc : rows.labels) {
    r.per_label_f1.push_back(f1_score(lc));
    r.per_label_precision.push_back(precision(lc));
    r.per_label_recall.push_back(recall(lc));
    r.support.push_back(lc.tp + lc.fn);
    sum += r.per_label_f1.back();
  }
  r.macro_f1 = rows.labels.empty() ? 0.0 : sum / static_cast<double>(rows.labels.size());
  r.micro_f1 = micro_f1(cc, mode);
  return r;
}

BitMatrix aligned_gold(const ProbabilityMatrix& pm, const Dataset& gold) {
  if (gold.schema.size() != pm.cols()) {
    throw DataError("gold schema has " + std::to_string(gold.schema.size()) +
                    " labels, probabilities have " + std::to_string(pm.cols()));
  }
  std::unordered_map<std::string_view, std::size_t> row_of;
  for (std::size_t r = 0; r < gold.size(); ++r) row_of.emplace(gold.instances[r].id, r);
  BitMatrix out(pm.rows(), pm.cols());
  std::vector<bool> used(gold.size(), false);
  for (std::size_t r = 0; r < pm.rows(); ++r) {
    const auto it = row_of.find(pm.ids[r]);
    if (it == row_of.end()) {
      throw DataError("id '" + pm.ids[r] + "' has probabilities but no gold labels");
    }
    if (used[it->second]) throw DataError("id '" + pm.ids[r] + "' appears twice in probabilities");
    used[it->second] = true;
    for (std::size_t c = 0; c < pm.cols(); ++c) out.at(r, c) = gold.instances[it->second].labels[c];
  }
  for (std::size_t r = 0; r < gold.size(); ++r) {
    if (!used[r]) {
      throw DataError("id '" + gold.instances[r].id + "' has gold labels but no probabilities");
    }
  }
  return out;
}

MetricsReport evaluate(const ProbabilityMatrix& pm, const Dataset& gold,
                       const ThresholdVector& tv, BinaryAveraging mode) {
  const BitMatrix g = aligned_gold(pm, gold);
  const BitMatrix pred = apply_thresholds(pm, tv);
  return make_report(confusion(pred, g), pm.schema, tv.theta, mode);
}

std::string format_report_table(const MetricsReport& r) {
  std::string out = "label\tprecision\trecall\tf1\tsupport\n";
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    out += r.names[i] + "\t" + fixed(r.per_label_precision[i], 4) + "\t" +
           fixed(r.per_label_recall[i], 4) + "\t" + fixed(r.per_label_f1[i], 4) + "\t" +
           std::to_string(r.support[i]) + "\n";
  }
  out += "macro_f1\t\t\t" + fixed(r.macro_f1, 4) + "\n";
  out += "micro_f1\t\t\t" + fixed(r.micro_f1, 4) + "\n";
  return out;
}

std::string format_report_machine(const MetricsReport& r) {
  std::string out;
  out += "averaging\t" + std::string(to_string(r.averaging)) + "\n";
  out += "macro_f1\t" + full(r.macro_f1) + "\n";
  out += "micro_f1\t" + full(r.micro_f1) + "\n";
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    out += "f1." + r.names[i] + "\t" + full(r.per_label_f1[i]) + "\n";
    out += "precision." + r.names[i] + "\t" + full(r.per_label_precision[i]) + "\n";
    out += "recall." + r.names[i] + "\t" + full(r.per_label_recall[i]) + "\n";
    out += "support." + r.names[i] + "\t" + std::to_string(r.support[i]) + "\n";
  }
  for (std::size_t i = 0; i < r.thresholds.size(); ++i) {
    out += "threshold." + r.threshold_labels[i] + "\t" + full(r.thresholds[i]) + "\n";
  }
  return out;
}

}  // namespace mlcal
