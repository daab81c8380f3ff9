#include "parc/metrics.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "parc/error.hpp"

namespace parc {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Percent value rounded half-up at two decimals, as integer hundredths.
long long percent_hundredths(double rate) {
  return static_cast<long long>(std::floor(rate * 10000.0 + 0.5));
}

double round_percent(double rate) {
  return static_cast<double>(percent_hundredths(rate)) / 100.0;
}

/// Pairs predictions with oracle records 1:1 by chain id.
std::vector<std::pair<const ClassifiedChain*, const PerlRecord*>> align(
    const std::vector<ClassifiedChain>& predicted, const std::vector<PerlRecord>& oracle) {
  std::map<std::string, const PerlRecord*> by_id;
  for (const PerlRecord& record : oracle) {
    if (!by_id.emplace(record.chain.chain_id, &record).second) {
      throw Error(ErrorCode::AlignmentError,
                  "duplicate oracle chain_id " + record.chain.chain_id);
    }
  }
  std::set<std::string> used;
  std::vector<std::pair<const ClassifiedChain*, const PerlRecord*>> pairs;
  pairs.reserve(predicted.size());
  for (const ClassifiedChain& chain : predicted) {
    auto it = by_id.find(chain.chain_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::AlignmentError,
                  "no oracle record for predicted chain " + chain.chain_id);
    }
    if (!used.insert(chain.chain_id).second) {
      throw Error(ErrorCode::AlignmentError, "duplicate prediction for " + chain.chain_id);
    }
    pairs.emplace_back(&chain, it->second);
  }
  if (used.size() != by_id.size()) {
    for (const auto& [id, record] : by_id) {
      (void)record;
      if (!used.count(id)) {
        throw Error(ErrorCode::AlignmentError, "no prediction for oracle chain " + id);
      }
    }
  }
  return pairs;
}

ErrorMetrics score_aligned(
    const std::vector<std::pair<const ClassifiedChain*, const PerlRecord*>>& pairs) {
  ErrorMetrics metrics;
  double accuracy_sum = 0.0;
  std::map<MergedLabel, long long> class_hits;
  for (const auto& [chain, record] : pairs) {
    long long hits = 0;
    for (const auto& [k, oracle_label] : record->oracle_labels) {
      auto it = chain->labels.find(k);
      if (it == chain->labels.end()) {
        throw Error(ErrorCode::AlignmentError,
                    "chain " + chain->chain_id + " lacks a prediction for step " +
                        std::to_string(k));
      }
      MergedLabel oracle_class = merge_label(oracle_label);
      bool hit = merge_label(it->second) == oracle_class;
      ++metrics.class_steps[oracle_class];
      ++metrics.steps;
      if (hit) {
        ++class_hits[oracle_class];
        ++hits;
      }
    }
    accuracy_sum +=
        static_cast<double>(hits) / static_cast<double>(record->oracle_labels.size());
    ++metrics.chains;
  }
  if (metrics.chains > 0) {
    metrics.avg_accuracy = accuracy_sum / static_cast<double>(metrics.chains);
  }
  for (const auto& [label, steps] : metrics.class_steps) {
    metrics.class_accuracy[label] =
        static_cast<double>(class_hits[label]) / static_cast<double>(steps);
  }
  return metrics;
}

SplitReport build_split_report(
    const std::vector<std::pair<const ClassifiedChain*, const PerlRecord*>>& pairs,
    EvalProtocol protocol) {
  SplitReport report;
  report.chains = static_cast<long long>(pairs.size());
  PrecisionRecall premise_sum;
  long long premise_chains = 0;
  for (const auto& [chain, record] : pairs) {
    report.steps += static_cast<long long>(record->oracle_labels.size());
    report.warnings += static_cast<long long>(chain->warnings.size());
    if (chain->premise_source) {
      PremiseComparison comparison =
          compare_to_oracle(*chain->premise_source, record->oracle_premises);
      premise_sum.precision += comparison.per_chain.precision;
      premise_sum.recall += comparison.per_chain.recall;
      premise_sum.f1 += comparison.per_chain.f1;
      ++premise_chains;
    }
  }
  if (premise_chains > 0) {
    PremiseMetrics premise;
    premise.chains = premise_chains;
    premise.macro.precision = premise_sum.precision / premise_chains;
    premise.macro.recall = premise_sum.recall / premise_chains;
    premise.macro.f1 = premise_sum.f1 / premise_chains;
    report.premise = premise;
  }
  if (protocol == EvalProtocol::Perl && !pairs.empty()) {
    report.error = score_aligned(pairs);
  }
  return report;
}

ordered_json split_report_to_json(const SplitReport& report) {
  ordered_json out;
  out["chains"] = report.chains;
  out["steps"] = report.steps;
  out["warnings"] = report.warnings;
  if (report.premise) {
    out["premise"] = {{"precision", round_percent(report.premise->macro.precision)},
                      {"recall", round_percent(report.premise->macro.recall)},
                      {"f1", round_percent(report.premise->macro.f1)},
                      {"chains", report.premise->chains}};
  }
  if (report.error) {
    ordered_json error;
    error["avg_accuracy"] = round_percent(report.error->avg_accuracy);
    ordered_json per_class = ordered_json::object();
    for (const auto& [label, accuracy] : report.error->class_accuracy) {
      per_class[merged_label_name(label)] = round_percent(accuracy);
    }
    error["class_accuracy"] = std::move(per_class);
    ordered_json class_steps = ordered_json::object();
    for (const auto& [label, steps] : report.error->class_steps) {
      class_steps[merged_label_name(label)] = steps;
    }
    error["class_steps"] = std::move(class_steps);
    out["error"] = std::move(error);
  }
  return out;
}

/// Rows of the flat CSV / stdout table, in presentation order.
struct MetricRow {
  std::string name;
  std::optional<double> value;  // rate in [0,1]
};

std::vector<MetricRow> split_rows(const SplitReport& report) {
  std::vector<MetricRow> rows;
  auto rate_of = [&](MergedLabel label) -> std::optional<double> {
    if (!report.error) return std::nullopt;
    auto it = report.error->class_accuracy.find(label);
    if (it == report.error->class_accuracy.end()) return std::nullopt;
    return it->second;
  };
  rows.push_back({"error_avg_accuracy",
                  report.error ? std::optional<double>(report.error->avg_accuracy)
                               : std::nullopt});
  rows.push_back({"accuracy_correct", rate_of(MergedLabel::Correct)});
  rows.push_back({"accuracy_error", rate_of(MergedLabel::Error)});
  rows.push_back({"accuracy_accumulation_error", rate_of(MergedLabel::AccumulationError)});
  rows.push_back({"premise_precision",
                  report.premise ? std::optional<double>(report.premise->macro.precision)
                                 : std::nullopt});
  rows.push_back({"premise_recall",
                  report.premise ? std::optional<double>(report.premise->macro.recall)
                                 : std::nullopt});
  rows.push_back({"premise_f1",
                  report.premise ? std::optional<double>(report.premise->macro.f1)
                                 : std::nullopt});
  return rows;
}

/// Presentation order for splits: Neg, Syn, Pos.
const std::vector<Split>& split_order() {
  static const std::vector<Split> kOrder{Split::Negative, Split::SyntheticNegative,
                                         Split::Positive};
  return kOrder;
}

const char* split_column_header(Split split) {
  switch (split) {
    case Split::Negative: return "Neg";
    case Split::SyntheticNegative: return "Syn";
    case Split::Positive: return "Pos";
  }
  return "?";
}

}  // namespace

const char* eval_protocol_name(EvalProtocol protocol) {
  switch (protocol) {
    case EvalProtocol::Perl: return "perl";
    case EvalProtocol::ProcessBench: return "processbench";
  }
  return "unknown";
}

std::optional<EvalProtocol> eval_protocol_from_name(const std::string& name) {
  if (name == "perl") return EvalProtocol::Perl;
  if (name == "processbench") return EvalProtocol::ProcessBench;
  return std::nullopt;
}

ErrorMetrics score_error_labels(const std::vector<ClassifiedChain>& predicted,
                                const std::vector<PerlRecord>& oracle) {
  return score_aligned(align(predicted, oracle));
}

ProcessBenchScore score_processbench(const std::vector<std::optional<int>>& predicted,
                                     const std::vector<std::optional<int>>& oracle) {
  if (predicted.size() != oracle.size()) {
    throw Error(ErrorCode::AlignmentError,
                std::to_string(predicted.size()) + " predictions for " +
                    std::to_string(oracle.size()) + " oracle chains");
  }
  ProcessBenchScore score;
  long long correct_hits = 0, wrong_hits = 0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    if (!oracle[i]) {
      ++score.correct_chains;
      if (!predicted[i]) ++correct_hits;
    } else {
      ++score.wrong_chains;
      if (predicted[i] && *predicted[i] == *oracle[i]) ++wrong_hits;
    }
  }
  score.correct_acc = score.correct_chains == 0
                          ? 1.0
                          : static_cast<double>(correct_hits) / score.correct_chains;
  score.wrong_acc =
      score.wrong_chains == 0 ? 1.0 : static_cast<double>(wrong_hits) / score.wrong_chains;
  double denom = score.correct_acc + score.wrong_acc;
  score.f1 = denom == 0.0 ? 0.0 : 2.0 * score.correct_acc * score.wrong_acc / denom;
  return score;
}

std::optional<int> first_error_from_labels(const std::map<int, StepLabel>& labels) {
  for (const auto& [k, label] : labels) {
    if (merge_label(label) != MergedLabel::Correct) return k;
  }
  return std::nullopt;
}

std::optional<int> first_error_from_labels(const ClassifiedChain& chain) {
  return first_error_from_labels(chain.labels);
}

EvalReport build_eval_report(const std::vector<PerlRecord>& corpus,
                             const std::vector<ClassifiedChain>& predicted,
                             EvalProtocol protocol) {
  auto pairs = align(predicted, corpus);
  EvalReport report;
  report.protocol = protocol;
  report.overall = build_split_report(pairs, protocol);
  std::map<Split, std::vector<std::pair<const ClassifiedChain*, const PerlRecord*>>>
      by_split;
  for (const auto& pair : pairs) {
    by_split[pair.second->split].push_back(pair);
  }
  for (const auto& [split, split_pairs] : by_split) {
    report.per_split[split] = build_split_report(split_pairs, protocol);
  }
  if (protocol == EvalProtocol::ProcessBench) {
    std::vector<std::optional<int>> predicted_first, oracle_first;
    predicted_first.reserve(pairs.size());
    oracle_first.reserve(pairs.size());
    for (const auto& [chain, record] : pairs) {
      predicted_first.push_back(first_error_from_labels(*chain));
      oracle_first.push_back(first_error_from_labels(record->oracle_labels));
    }
    report.processbench = score_processbench(predicted_first, oracle_first);
  }
  return report;
}

std::string format_percent(double rate) {
  long long hundredths = percent_hundredths(rate);
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%lld.%02lld", hundredths / 100,
                hundredths % 100);
  return buffer;
}

std::string report_to_json(const EvalReport& report) {
  ordered_json out;
  out["protocol"] = eval_protocol_name(report.protocol);
  ordered_json splits = ordered_json::object();
  for (Split split : split_order()) {
    auto it = report.per_split.find(split);
    if (it == report.per_split.end()) continue;
    splits[split_name(split)] = split_report_to_json(it->second);
  }
  out["splits"] = std::move(splits);
  out["overall"] = split_report_to_json(report.overall);
  if (report.processbench) {
    out["processbench"] = {{"correct_acc", round_percent(report.processbench->correct_acc)},
                           {"wrong_acc", round_percent(report.processbench->wrong_acc)},
                           {"f1", round_percent(report.processbench->f1)},
                           {"correct_chains", report.processbench->correct_chains},
                           {"wrong_chains", report.processbench->wrong_chains}};
  }
  return out.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::string csv = "split,metric,value\n";
  auto emit = [&](const std::string& split, const SplitReport& split_report) {
    csv += split + ",chains," + std::to_string(split_report.chains) + "\n";
    csv += split + ",steps," + std::to_string(split_report.steps) + "\n";
    csv += split + ",warnings," + std::to_string(split_report.warnings) + "\n";
    for (const MetricRow& row : split_rows(split_report)) {
      if (row.value) {
        csv += split + "," + row.name + "," + format_percent(*row.value) + "\n";
      }
    }
  };
  for (Split split : split_order()) {
    auto it = report.per_split.find(split);
    if (it == report.per_split.end()) continue;
    emit(split_name(split), it->second);
  }
  emit("overall", report.overall);
  if (report.processbench) {
    csv += "overall,processbench_correct_acc," +
           format_percent(report.processbench->correct_acc) + "\n";
    csv += "overall,processbench_wrong_acc," +
           format_percent(report.processbench->wrong_acc) + "\n";
    csv += "overall,processbench_f1," + format_percent(report.processbench->f1) + "\n";
  }
  return csv;
}

std::string report_to_table(const EvalReport& report) {
  if (report.protocol == EvalProtocol::ProcessBench && report.processbench) {
    std::string table = "metric        value\n";
    table += "correct_acc  " + format_percent(report.processbench->correct_acc) + "\n";
    table += "wrong_acc    " + format_percent(report.processbench->wrong_acc) + "\n";
    table += "f1           " + format_percent(report.processbench->f1) + "\n";
    return table;
  }
  std::vector<std::pair<std::string, const SplitReport*>> columns;
  for (Split split : split_order()) {
    auto it = report.per_split.find(split);
    if (it != report.per_split.end()) {
      columns.emplace_back(split_column_header(split), &it->second);
    }
  }
  columns.emplace_back("Avg", &report.overall);

  std::vector<MetricRow> name_rows = split_rows(report.overall);
  std::string table;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%-28s", "metric");
  table += buffer;
  for (const auto& [header, split_report] : columns) {
    (void)split_report;
    std::snprintf(buffer, sizeof(buffer), " %8s", header.c_str());
    table += buffer;
  }
  table += "\n";
  for (std::size_t row_index = 0; row_index < name_rows.size(); ++row_index) {
    bool any = false;
    for (const auto& [header, split_report] : columns) {
      (void)header;
      if (split_rows(*split_report)[row_index].value) any = true;
    }
    if (!any) continue;
    std::snprintf(buffer, sizeof(buffer), "%-28s", name_rows[row_index].name.c_str());
    table += buffer;
    for (const auto& [header, split_report] : columns) {
      (void)header;
      auto value = split_rows(*split_report)[row_index].value;
      std::snprintf(buffer, sizeof(buffer), " %8s",
                    value ? format_percent(*value).c_str() : "-");
      table += buffer;
    }
    table += "\n";
  }
  return table;
}

}  // namespace parc
