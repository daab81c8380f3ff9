#include "parc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "parc/error.hpp"
#include "parc/parsers.hpp"
#include "parc/prompts.hpp"

namespace parc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim_copy(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

const std::set<std::string>& chain_flag_vocabulary() {
  static const std::set<std::string> kFlags{"Missing_Steps", "Planning_Error"};
  return kFlags;
}

[[noreturn]] void reject(const std::string& reason) {
  throw Error(ErrorCode::SchemaViolation, reason);
}

int key_to_step(const std::string& key) {
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) {
    reject("non-numeric step key \"" + key + "\"");
  }
  try {
    return std::stoi(key);
  } catch (const std::exception&) {
    reject("step key out of range \"" + key + "\"");
  }
}

/// Exact rational: value = num / den, den > 0.
struct Rational {
  long long num = 0;
  long long den = 1;
};

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) return std::nullopt;
  std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    std::string left = trim_copy(s.substr(0, slash));
    std::string right = trim_copy(s.substr(slash + 1));
    auto num = parse_rational(left);
    auto den = parse_rational(right);
    if (!num || !den || den->num == 0 || num->den != 1 || den->den != 1) return std::nullopt;
    Rational r{num->num, den->num};
    if (r.den < 0) {
      r.num = -r.num;
      r.den = -r.den;
    }
    return r;
  }
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  long long integral = 0;
  long long scale = 1;
  int digits = 0;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    if (++digits > 18) return std::nullopt;  // keep within long long
    integral = integral * 10 + (c - '0');
    if (seen_dot) scale *= 10;
    seen_digit = true;
  }
  if (!seen_digit) return std::nullopt;
  return Rational{negative ? -integral : integral, scale};
}

std::string strip_commas(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != ',') out += c;
  }
  return out;
}

StepLabel label_from_json_name(const std::string& name) {
  auto label = step_label_from_name(name);
  if (!label) reject("unknown step label \"" + name + "\"");
  return *label;
}

/// Shared by record and classified parsing: {"1": "correct", ...} keyed maps.
std::map<int, StepLabel> labels_from_json(const ordered_json& object) {
  if (!object.is_object()) reject("labels is not an object");
  std::map<int, StepLabel> labels;
  for (const auto& [key, value] : object.items()) {
    int k = key_to_step(key);
    if (!value.is_string()) reject("label of step " + key + " is not a string");
    if (!labels.emplace(k, label_from_json_name(value.get<std::string>())).second) {
      reject("duplicate label for step " + key);
    }
  }
  return labels;
}

ordered_json labels_to_json(const std::map<int, StepLabel>& labels) {
  ordered_json object = ordered_json::object();
  for (const auto& [k, label] : labels) {
    object[std::to_string(k)] = step_label_name(label);
  }
  return object;
}

PremiseGraph premises_from_json(const ordered_json& object, const std::string& chain_id) {
  if (!object.is_object()) reject("premises is not an object");
  PremiseGraph graph;
  graph.chain_id = chain_id;
  for (const auto& [key, value] : object.items()) {
    int k = key_to_step(key);
    if (!value.is_array()) reject("premises of step " + key + " is not an array");
    std::set<int>& premise_set = graph.premises[k];
    for (const auto& entry : value) {
      if (!entry.is_number_integer()) reject("premise index of step " + key + " not an integer");
      premise_set.insert(entry.get<int>());
    }
  }
  return graph;
}

ordered_json premises_to_json(const PremiseGraph& graph) {
  ordered_json object = ordered_json::object();
  for (const auto& [k, premise_set] : graph.premises) {
    object[std::to_string(k)] = premise_set;
  }
  return object;
}

ordered_json parse_object_line(const std::string& line) {
  ordered_json record = ordered_json::parse(line, nullptr, false);
  if (record.is_discarded() || !record.is_object()) reject("line is not a JSON object");
  return record;
}

std::string require_string(const ordered_json& object, const char* field) {
  if (!object.contains(field) || !object[field].is_string()) {
    reject(std::string("missing or non-string \"") + field + "\"");
  }
  return object[field].get<std::string>();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Unreadable, "cannot open " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

const char* split_name(Split split) {
  switch (split) {
    case Split::Positive: return "positive";
    case Split::Negative: return "negative";
    case Split::SyntheticNegative: return "synthetic_negative";
  }
  return "unknown";
}

std::optional<Split> split_from_name(const std::string& name) {
  if (name == "positive") return Split::Positive;
  if (name == "negative") return Split::Negative;
  if (name == "synthetic_negative") return Split::SyntheticNegative;
  return std::nullopt;
}

const char* source_dataset_name(SourceDataset source) {
  switch (source) {
    case SourceDataset::GSM8K: return "GSM8K";
    case SourceDataset::MATH: return "MATH";
    case SourceDataset::OrcaMath: return "OrcaMath";
    case SourceDataset::MetaMathQA: return "MetaMathQA";
    case SourceDataset::ProcessBench: return "ProcessBench";
    case SourceDataset::Other: return "other";
  }
  return "other";
}

std::optional<SourceDataset> source_dataset_from_name(const std::string& name) {
  if (name == "GSM8K") return SourceDataset::GSM8K;
  if (name == "MATH") return SourceDataset::MATH;
  if (name == "OrcaMath") return SourceDataset::OrcaMath;
  if (name == "MetaMathQA") return SourceDataset::MetaMathQA;
  if (name == "ProcessBench") return SourceDataset::ProcessBench;
  if (name == "other") return SourceDataset::Other;
  return std::nullopt;
}

std::string record_to_json_line(const PerlRecord& record) {
  ordered_json out;
  out["perl_version"] = 1;
  out["chain_id"] = record.chain.chain_id;
  out["source"] = source_dataset_name(record.source);
  out["split"] = split_name(record.split);
  out["question"] = record.chain.question;
  out["steps"] = record.chain.steps;
  if (record.chain.final_answer) out["final_answer"] = *record.chain.final_answer;
  if (record.chain.ground_truth_answer) {
    out["ground_truth_answer"] = *record.chain.ground_truth_answer;
  }
  out["premises"] = premises_to_json(record.oracle_premises);
  out["labels"] = labels_to_json(record.oracle_labels);
  if (!record.chain_level_flags.empty()) out["chain_flags"] = record.chain_level_flags;
  return out.dump();
}

PerlRecord record_from_json_line(const std::string& line) {
  ordered_json in = parse_object_line(line);
  if (!in.contains("perl_version") || !in["perl_version"].is_number_integer() ||
      in["perl_version"].get<int>() != 1) {
    reject("missing or unsupported perl_version");
  }
  PerlRecord record;
  record.chain.chain_id = require_string(in, "chain_id");
  if (record.chain.chain_id.empty()) reject("empty chain_id");

  auto source = source_dataset_from_name(require_string(in, "source"));
  if (!source) reject("unknown source \"" + in["source"].get<std::string>() + "\"");
  record.source = *source;

  auto split = split_from_name(require_string(in, "split"));
  if (!split) reject("unknown split \"" + in["split"].get<std::string>() + "\"");
  record.split = *split;

  record.chain.question = require_string(in, "question");
  if (!in.contains("steps") || !in["steps"].is_array() || in["steps"].empty()) {
    reject("missing or empty steps array");
  }
  for (const auto& step : in["steps"]) {
    if (!step.is_string()) reject("step text is not a string");
    record.chain.steps.push_back(step.get<std::string>());
  }
  if (in.contains("final_answer")) {
    record.chain.final_answer = require_string(in, "final_answer");
  }
  if (in.contains("ground_truth_answer")) {
    record.chain.ground_truth_answer = require_string(in, "ground_truth_answer");
  }
  try {
    validate_chain(record.chain);
  } catch (const Error& error) {
    reject(error.what());
  }
  int t = record.chain.step_count();

  if (!in.contains("premises")) reject("missing premises");
  record.oracle_premises = premises_from_json(in["premises"], record.chain.chain_id);
  try {
    validate_premises(record.oracle_premises, t);
  } catch (const Error& error) {
    if (std::string(error.what()).find("cites later step") != std::string::npos) {
      reject("forward premise: " + std::string(error.what()));
    }
    reject(error.what());
  }

  if (!in.contains("labels")) reject("missing labels");
  record.oracle_labels = labels_from_json(in["labels"]);
  if (record.oracle_labels.empty()) reject("labels are empty");
  int prefix_end = 0;
  for (const auto& [k, label] : record.oracle_labels) {
    (void)label;
    if (k != prefix_end + 1) reject("labels do not form a contiguous prefix from step 1");
    prefix_end = k;
  }
  if (prefix_end > t) reject("label for step beyond the chain");
  if (prefix_end < t && record.source != SourceDataset::ProcessBench) {
    reject("labels stop at step " + std::to_string(prefix_end) + " of " + std::to_string(t) +
           " (prefix labeling is reserved for ProcessBench records)");
  }
  if (record.split == Split::Positive) {
    for (const auto& [k, label] : record.oracle_labels) {
      if (label != StepLabel::Correct) {
        reject("positive record labels step " + std::to_string(k) + " as " +
               step_label_name(label));
      }
    }
  }

  if (in.contains("chain_flags")) {
    if (!in["chain_flags"].is_array()) reject("chain_flags is not an array");
    for (const auto& flag : in["chain_flags"]) {
      if (!flag.is_string() || !chain_flag_vocabulary().count(flag.get<std::string>())) {
        reject("unknown chain flag");
      }
      record.chain_level_flags.insert(flag.get<std::string>());
    }
  }
  return record;
}

LoadReport load_corpus(const std::filesystem::path& path) {
  LoadReport report;
  std::set<std::string> seen_ids;
  int line_number = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_number;
    if (trim_copy(line).empty()) continue;
    try {
      PerlRecord record = record_from_json_line(line);
      if (!seen_ids.insert(record.chain.chain_id).second) {
        throw Error(ErrorCode::SchemaViolation,
                    "duplicate chain_id " + record.chain.chain_id);
      }
      report.records.push_back(std::move(record));
    } catch (const Error& error) {
      report.quarantined.push_back({line_number, error.what(), line});
    }
  }
  return report;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path temp =
      path.parent_path() /
      (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::Unreadable, "cannot write " + temp.string());
    }
    out << content;
    if (!out) {
      throw Error(ErrorCode::Unreadable, "short write to " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw Error(ErrorCode::Unreadable, "cannot move output into place at " + path.string());
  }
}

void emit_corpus(const std::vector<PerlRecord>& records, const std::filesystem::path& path) {
  std::string content;
  for (const PerlRecord& record : records) {
    content += record_to_json_line(record);
    content += '\n';
  }
  write_file_atomic(path, content);
}

CorpusStats corpus_stats(const std::vector<PerlRecord>& records) {
  CorpusStats stats;
  double steps = 0, premises = 0, edges = 0, depth = 0, width = 0, branching = 0;
  for (const PerlRecord& record : records) {
    ++stats.total_chains;
    ++stats.chains_per_split[record.split];
    for (const auto& [k, label] : record.oracle_labels) {
      (void)k;
      ++stats.total_steps;
      ++stats.steps_per_label[label];
    }
    GraphStats graph = graph_stats(record.oracle_premises, record.chain.step_count());
    steps += graph.step_count;
    premises += graph.premise_total;
    edges += graph.edge_count;
    depth += graph.depth;
    width += graph.max_width;
    branching += graph.branching_factor;
  }
  if (stats.total_chains > 0) {
    double n = static_cast<double>(stats.total_chains);
    stats.mean = MeanGraphStats{steps / n, premises / n, edges / n,
                                depth / n,  width / n,    branching / n};
  }
  return stats;
}

PerlRecord inject_synthetic_negative(const PerlRecord& record, JudgeBackend& backend) {
  if (record.split != Split::Positive) {
    throw Error(ErrorCode::ConfigError,
                "synthetic injection needs a positive record, got split " +
                    std::string(split_name(record.split)) + " for " + record.chain.chain_id);
  }
  JudgeRequest request = render_synthetic_perturb(record.chain);
  JudgeReply reply = query(request, backend);
  if (!reply.parsed) {
    throw Error(ErrorCode::ParseFailure,
                "perturbation reply for " + record.chain.chain_id + " is not valid JSON");
  }
  ordered_json payload;
  try {
    payload = parse_object_line(std::get<ParsedJson>(*reply.parsed).json_text);
  } catch (const Error&) {
    throw Error(ErrorCode::SchemaViolation,
                "perturbation payload for " + record.chain.chain_id + " is not a JSON object");
  }
  if (!payload.contains("error_step") || !payload["error_step"].is_number_integer()) {
    reject("perturbation payload lacks integer error_step");
  }
  std::string error_type = require_string(payload, "error_type");
  auto injected = step_label_from_name(error_type);
  if (!injected || (*injected != StepLabel::MathematicalError &&
                    *injected != StepLabel::LogicalInconsistency)) {
    reject("perturbation error_type \"" + error_type + "\" is not a native error class");
  }
  if (!payload.contains("steps") || !payload["steps"].is_array()) {
    reject("perturbation payload lacks steps array");
  }
  std::string final_answer = require_string(payload, "final_answer");

  int t = record.chain.step_count();
  if (static_cast<int>(payload["steps"].size()) != t) {
    throw Error(ErrorCode::PerturbationRejected,
                "step count changed from " + std::to_string(t) + " to " +
                    std::to_string(payload["steps"].size()) + " for " + record.chain.chain_id);
  }
  int error_step = payload["error_step"].get<int>();
  if (error_step < 1 || error_step > t) {
    reject("perturbation error_step " + std::to_string(error_step) + " outside 1.." +
           std::to_string(t));
  }
  if (answers_match(final_answer, *record.chain.ground_truth_answer)) {
    throw Error(ErrorCode::PerturbationRejected,
                "final answer still matches ground truth for " + record.chain.chain_id);
  }

  PerlRecord negative;
  negative.chain.chain_id = record.chain.chain_id + "::syn";
  negative.chain.question = record.chain.question;
  for (const auto& step : payload["steps"]) {
    if (!step.is_string()) reject("perturbed step text is not a string");
    negative.chain.steps.push_back(step.get<std::string>());
  }
  negative.chain.final_answer = final_answer;
  negative.chain.ground_truth_answer = record.chain.ground_truth_answer;
  try {
    validate_chain(negative.chain);
  } catch (const Error& error) {
    reject(error.what());
  }
  negative.split = Split::SyntheticNegative;
  negative.source = record.source;
  // Step-for-step rewrites keep the dependency structure, so the original
  // premise graph carries over and closure_oracle re-derives the labels.
  negative.oracle_premises = record.oracle_premises;
  negative.oracle_premises.chain_id = negative.chain.chain_id;
  std::map<int, StepLabel> native;
  for (int k = 1; k <= t; ++k) native[k] = StepLabel::Correct;
  native[error_step] = *injected;
  negative.oracle_labels = closure_oracle(native, negative.oracle_premises);
  return negative;
}

AnnotationParse parse_annotation_json(const std::string& raw, int expected_steps) {
  if (expected_steps < 1) {
    throw Error(ErrorCode::ConfigError, "expected_steps must be positive");
  }
  std::string text = extract_json_payload(raw);
  ordered_json root = ordered_json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_object()) reject("annotation reply is not JSON");
  if (!root.contains("error_annotations") || !root["error_annotations"].is_object()) {
    reject("missing error_annotations object");
  }
  const ordered_json& annotations = root["error_annotations"];

  AnnotationParse parse;
  if (!annotations.contains("chain_level") || !annotations["chain_level"].is_object()) {
    reject("missing chain_level object");
  }
  const ordered_json& chain_level = annotations["chain_level"];
  if (!chain_level.contains("has_errors") || !chain_level["has_errors"].is_boolean() ||
      !chain_level.contains("errors") || !chain_level["errors"].is_array()) {
    reject("chain_level lacks has_errors/errors");
  }
  if (chain_level["has_errors"].get<bool>() != !chain_level["errors"].empty()) {
    reject("chain_level has_errors contradicts its errors array");
  }
  for (const auto& entry : chain_level["errors"]) {
    if (!entry.is_object()) reject("chain_level error is not an object");
    std::string type = require_string(entry, "error_type");
    if (!chain_flag_vocabulary().count(type)) {
      reject("unknown chain-level error type \"" + type + "\"");
    }
    parse.chain_level_flags.insert(type);
  }

  if (!annotations.contains("step_level") || !annotations["step_level"].is_array()) {
    reject("missing step_level array");
  }
  const ordered_json& step_level = annotations["step_level"];
  if (static_cast<int>(step_level.size()) != expected_steps) {
    throw Error(ErrorCode::StepCountMismatch,
                std::to_string(step_level.size()) + " step_level entries for a " +
                    std::to_string(expected_steps) + "-step chain");
  }
  for (const auto& entry : step_level) {
    if (!entry.is_object()) reject("step_level entry is not an object");
    if (!entry.contains("step_number") || !entry["step_number"].is_number_integer()) {
      reject("step_level entry lacks an integer step_number");
    }
    int k = entry["step_number"].get<int>();
    if (k < 1 || k > expected_steps) {
      reject("step_number " + std::to_string(k) + " outside 1.." +
             std::to_string(expected_steps));
    }
    if (parse.labels.count(k)) reject("duplicate step_number " + std::to_string(k));
    if (!entry.contains("has_error") || !entry["has_error"].is_boolean() ||
        !entry.contains("errors") || !entry["errors"].is_array()) {
      reject("step_level entry lacks has_error/errors");
    }
    if (entry["has_error"].get<bool>() != !entry["errors"].empty()) {
      reject("step " + std::to_string(k) + " has_error contradicts its errors array");
    }
    bool math = false, logical = false, accumulation = false, other = false;
    for (const auto& error : entry["errors"]) {
      if (!error.is_object()) reject("step error is not an object");
      std::string type = require_string(error, "error_type");
      if (type == "Mathematical_Error") {
        math = true;
      } else if (type == "Logical_Inconsistency") {
        logical = true;
      } else if (type == "Accumulation_Error") {
        accumulation = true;
      } else if (type == "Other") {
        other = true;
      } else {
        reject("unknown step-level error type \"" + type + "\"");
      }
      if (!parse.rationales.count(k) && error.contains("error_description") &&
          error["error_description"].is_string()) {
        parse.rationales[k] = error["error_description"].get<std::string>();
      }
    }
    // Precedence: Mathematical > Logical > Accumulation > Other. A step whose
    // only finding is "Other" still has to score as the merged Error class,
    // so it is labeled LogicalInconsistency and flagged in other_steps.
    if (math) {
      parse.labels[k] = StepLabel::MathematicalError;
    } else if (logical) {
      parse.labels[k] = StepLabel::LogicalInconsistency;
    } else if (accumulation) {
      parse.labels[k] = StepLabel::AccumulationError;
    } else if (other) {
      parse.labels[k] = StepLabel::LogicalInconsistency;
      parse.other_steps.insert(k);
    } else {
      parse.labels[k] = StepLabel::Correct;
    }
  }
  return parse;
}

PerlRecord from_processbench(const std::string& chain_id, const std::string& question,
                             const std::vector<std::string>& steps, int label) {
  PerlRecord record;
  record.chain.chain_id = chain_id;
  record.chain.question = question;
  record.chain.steps = steps;
  try {
    validate_chain(record.chain);
  } catch (const Error& error) {
    reject(error.what());
  }
  int t = record.chain.step_count();
  if (label < -1 || label >= t) {
    reject("ProcessBench label " + std::to_string(label) + " outside -1.." +
           std::to_string(t - 1));
  }
  record.source = SourceDataset::ProcessBench;
  record.oracle_premises.chain_id = chain_id;
  for (int k = 1; k <= t; ++k) record.oracle_premises.premises[k] = {};
  if (label == -1) {
    record.split = Split::Positive;
    for (int k = 1; k <= t; ++k) record.oracle_labels[k] = StepLabel::Correct;
  } else {
    record.split = Split::Negative;
    for (int k = 1; k <= label; ++k) record.oracle_labels[k] = StepLabel::Correct;
    record.oracle_labels[label + 1] = StepLabel::MathematicalError;
  }
  return record;
}

LoadReport load_processbench(const std::filesystem::path& path) {
  LoadReport report;
  int line_number = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_number;
    if (trim_copy(line).empty()) continue;
    try {
      ordered_json in = parse_object_line(line);
      std::string id = in.contains("id") && in["id"].is_string()
                           ? in["id"].get<std::string>()
                           : "processbench-" + std::to_string(line_number);
      std::string problem = require_string(in, "problem");
      if (!in.contains("steps") || !in["steps"].is_array()) reject("missing steps array");
      std::vector<std::string> steps;
      for (const auto& step : in["steps"]) {
        if (!step.is_string()) reject("step text is not a string");
        steps.push_back(step.get<std::string>());
      }
      if (!in.contains("label") || !in["label"].is_number_integer()) {
        reject("missing integer label");
      }
      report.records.push_back(from_processbench(id, problem, steps, in["label"].get<int>()));
    } catch (const Error& error) {
      report.quarantined.push_back({line_number, error.what(), line});
    }
  }
  return report;
}

bool answers_match(const std::string& a, const std::string& b) {
  std::string left = trim_copy(strip_commas(a));
  std::string right = trim_copy(strip_commas(b));
  auto left_rational = parse_rational(left);
  auto right_rational = parse_rational(right);
  if (left_rational && right_rational) {
    // Cross-multiplication keeps the comparison exact; __int128 holds any
    // product of two <= 19-digit operands.
    __int128 lhs = static_cast<__int128>(left_rational->num) * right_rational->den;
    __int128 rhs = static_cast<__int128>(right_rational->num) * left_rational->den;
    return lhs == rhs;
  }
  return left == right;
}

std::string classified_to_json_line(const ClassifiedChain& chain, bool include_exchanges) {
  ordered_json out;
  out["chain_id"] = chain.chain_id;
  out["mode"] = classify_mode_name(chain.mode);
  out["labels"] = labels_to_json(chain.labels);
  if (chain.premise_source) {
    out["premises"] = premises_to_json(*chain.premise_source);
  }
  out["warnings"] = chain.warnings;
  if (include_exchanges) {
    ordered_json exchanges = ordered_json::array();
    for (const JudgeExchange& exchange : chain.exchanges) {
      ordered_json entry;
      entry["task"] = judge_task_name(exchange.request.task);
      entry["step"] = exchange.request.step_index;
      entry["aux"] = exchange.request.aux_index;
      entry["system"] = exchange.request.system;
      entry["instruction"] = exchange.request.instruction;
      entry["reply"] = exchange.reply.raw_text;
      entry["parse_warnings"] = exchange.reply.parse_warnings;
      exchanges.push_back(std::move(entry));
    }
    out["exchanges"] = std::move(exchanges);
  }
  return out.dump();
}

ClassifiedChain classified_from_json_line(const std::string& line) {
  ordered_json in = parse_object_line(line);
  ClassifiedChain chain;
  chain.chain_id = require_string(in, "chain_id");
  auto mode = classify_mode_from_name(require_string(in, "mode"));
  if (!mode) reject("unknown mode \"" + in["mode"].get<std::string>() + "\"");
  chain.mode = *mode;
  if (!in.contains("labels")) reject("missing labels");
  chain.labels = labels_from_json(in["labels"]);
  if (in.contains("premises")) {
    chain.premise_source = premises_from_json(in["premises"], chain.chain_id);
  }
  if (in.contains("warnings")) {
    if (!in["warnings"].is_array()) reject("warnings is not an array");
    for (const auto& warning : in["warnings"]) {
      if (!warning.is_string()) reject("warning is not a string");
      chain.warnings.push_back(warning.get<std::string>());
    }
  }
  if (in.contains("exchanges")) {
    if (!in["exchanges"].is_array()) reject("exchanges is not an array");
    for (const auto& entry : in["exchanges"]) {
      if (!entry.is_object()) reject("exchange is not an object");
      JudgeExchange exchange;
      auto task = judge_task_from_name(require_string(entry, "task"));
      if (!task) reject("unknown exchange task");
      exchange.request.task = *task;
      exchange.request.chain_id = chain.chain_id;
      if (entry.contains("step") && entry["step"].is_number_integer()) {
        exchange.request.step_index = entry["step"].get<int>();
      }
      if (entry.contains("aux") && entry["aux"].is_number_integer()) {
        exchange.request.aux_index = entry["aux"].get<int>();
      }
      exchange.request.system = require_string(entry, "system");
      exchange.request.instruction = require_string(entry, "instruction");
      exchange.reply.raw_text = require_string(entry, "reply");
      if (entry.contains("parse_warnings") && entry["parse_warnings"].is_array()) {
        for (const auto& warning : entry["parse_warnings"]) {
          if (warning.is_string()) {
            exchange.reply.parse_warnings.push_back(warning.get<std::string>());
          }
        }
      }
      chain.exchanges.push_back(std::move(exchange));
    }
  }
  return chain;
}

std::string premise_entry_to_json_line(const PremiseFileEntry& entry) {
  ordered_json out;
  out["chain_id"] = entry.graph.chain_id;
  out["premises"] = premises_to_json(entry.graph);
  out["warnings"] = entry.warnings;
  return out.dump();
}

PremiseFileEntry premise_entry_from_json_line(const std::string& line) {
  ordered_json in = parse_object_line(line);
  PremiseFileEntry entry;
  std::string chain_id = require_string(in, "chain_id");
  if (!in.contains("premises")) reject("missing premises");
  entry.graph = premises_from_json(in["premises"], chain_id);
  if (in.contains("warnings") && in["warnings"].is_array()) {
    for (const auto& warning : in["warnings"]) {
      if (warning.is_string()) entry.warnings.push_back(warning.get<std::string>());
    }
  }
  return entry;
}

void emit_premise_file(const std::vector<PremiseFileEntry>& entries,
                       const std::filesystem::path& path) {
  std::string content;
  for (const PremiseFileEntry& entry : entries) {
    content += premise_entry_to_json_line(entry);
    content += '\n';
  }
  write_file_atomic(path, content);
}

std::vector<PremiseFileEntry> load_premise_file(const std::filesystem::path& path) {
  std::vector<PremiseFileEntry> entries;
  int line_number = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_number;
    if (trim_copy(line).empty()) continue;
    try {
      entries.push_back(premise_entry_from_json_line(line));
    } catch (const Error& error) {
      throw Error(ErrorCode::SchemaViolation,
                  path.string() + ":" + std::to_string(line_number) + ": " + error.what());
    }
  }
  return entries;
}

void emit_classified(const std::vector<ClassifiedChain>& chains,
                     const std::filesystem::path& path, bool include_exchanges) {
  std::string content;
  for (const ClassifiedChain& chain : chains) {
    content += classified_to_json_line(chain, include_exchanges);
    content += '\n';
  }
  write_file_atomic(path, content);
}

std::vector<ClassifiedChain> load_classified(const std::filesystem::path& path) {
  std::vector<ClassifiedChain> chains;
  int line_number = 0;
  for (const std::string& line : read_lines(path)) {
    ++line_number;
    if (trim_copy(line).empty()) continue;
    try {
      chains.push_back(classified_from_json_line(line));
    } catch (const Error& error) {
      throw Error(ErrorCode::SchemaViolation,
                  path.string() + ":" + std::to_string(line_number) + ": " + error.what());
    }
  }
  return chains;
}

}  // namespace parc
