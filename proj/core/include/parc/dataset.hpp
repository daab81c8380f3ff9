#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parc/chain.hpp"
#include "parc/classifier.hpp"
#include "parc/judge.hpp"

namespace parc {

enum class Split { Positive, Negative, SyntheticNegative };

const char* split_name(Split split);
std::optional<Split> split_from_name(const std::string& name);

enum class SourceDataset { GSM8K, MATH, OrcaMath, MetaMathQA, ProcessBench, Other };

const char* source_dataset_name(SourceDataset source);
std::optional<SourceDataset> source_dataset_from_name(const std::string& name);

/// One annotated chain. oracle_labels normally covers every step; records
/// sourced from ProcessBench may stop at the first judged step (a contiguous
/// prefix), since that benchmark leaves later steps unlabeled.
struct PerlRecord {
  ReasoningChain chain;
  Split split = Split::Positive;
  SourceDataset source = SourceDataset::Other;
  PremiseGraph oracle_premises;
  std::map<int, StepLabel> oracle_labels;
  std::set<std::string> chain_level_flags;  // subset of {Missing_Steps, Planning_Error}
};

struct QuarantinedRecord {
  int line_number = 0;
  std::string reason;
  std::string raw;
};

struct LoadReport {
  std::vector<PerlRecord> records;
  std::vector<QuarantinedRecord> quarantined;
};

/// Line-delimited JSON, one record per line, strict validation. Malformed
/// records land in quarantine with a reason; they are never silently
/// dropped and never abort the load. Throws Error{Unreadable} only.
LoadReport load_corpus(const std::filesystem::path& path);

/// Canonical serialization (fixed key order). Write is atomic
/// (temp + rename). emit(load(x)) is content-identical for valid corpora.
void emit_corpus(const std::vector<PerlRecord>& records, const std::filesystem::path& path);

std::string record_to_json_line(const PerlRecord& record);
PerlRecord record_from_json_line(const std::string& line);  // throws SchemaViolation

struct MeanGraphStats {
  double steps = 0.0;
  double premises = 0.0;
  double edges = 0.0;
  double depth = 0.0;
  double max_width = 0.0;
  double branching = 0.0;
};

struct CorpusStats {
  long long total_chains = 0;
  long long total_steps = 0;  // labeled steps
  std::map<Split, long long> chains_per_split;
  std::map<StepLabel, long long> steps_per_label;
  std::optional<MeanGraphStats> mean;  // absent for an empty corpus
};

CorpusStats corpus_stats(const std::vector<PerlRecord>& records);

/// Perturbs one positive record through a SyntheticPerturb judge call: one
/// step gains an injected native error, later steps are rewritten by the
/// judge, and labels are re-derived with closure_oracle over the original
/// premise graph (step-for-step rewrites keep the dependency structure).
/// The output chain_id gains a "::syn" suffix. Throws
/// Error{PerturbationRejected} when the new final answer still matches the
/// ground truth or the step count changed.
PerlRecord inject_synthetic_negative(const PerlRecord& record, JudgeBackend& backend);

struct AnnotationParse {
  std::map<int, StepLabel> labels;
  std::set<std::string> chain_level_flags;
  std::map<int, std::string> rationales;  // first error description per step
  std::set<int> other_steps;  // steps whose only finding was type "Other"
};

/// Parses the strong-model annotation JSON. Steps with empty error arrays
/// are Correct; several errors on one step resolve by precedence
/// MathematicalError > LogicalInconsistency > AccumulationError > Other; a
/// step with only "Other" findings is labeled LogicalInconsistency (it must
/// score as the merged Error class) and listed in other_steps. Throws
/// Error{SchemaViolation} or Error{StepCountMismatch}.
AnnotationParse parse_annotation_json(const std::string& raw, int expected_steps);

/// Maps one upstream ProcessBench row: label is the 0-based first-error
/// index, -1 for a fully correct solution. Steps before the error are
/// Correct, the error step is labeled MathematicalError (the class is
/// irrelevant after merging), later steps stay unlabeled. Premise sets are
/// empty (the benchmark carries no premise annotations).
PerlRecord from_processbench(const std::string& chain_id, const std::string& question,
                             const std::vector<std::string>& steps, int label);

/// Line-delimited upstream rows {id?, problem, steps, label}.
LoadReport load_processbench(const std::filesystem::path& path);

/// Final-answer equality: trims both sides, strips commas, compares as
/// exact rationals (integers, decimals, fractions) when both parse, and
/// falls back to trimmed string equality otherwise.
bool answers_match(const std::string& a, const std::string& b);

/// ClassifiedChain serialization (labeled-chain files). include_exchanges
/// false elides the audit trail.
std::string classified_to_json_line(const ClassifiedChain& chain, bool include_exchanges);
ClassifiedChain classified_from_json_line(const std::string& line);
void emit_classified(const std::vector<ClassifiedChain>& chains,
                     const std::filesystem::path& path, bool include_exchanges);
std::vector<ClassifiedChain> load_classified(const std::filesystem::path& path);

/// Premise-graph files: one {"chain_id", "premises", "warnings"} per line.
struct PremiseFileEntry {
  PremiseGraph graph;
  std::vector<std::string> warnings;
};

std::string premise_entry_to_json_line(const PremiseFileEntry& entry);
PremiseFileEntry premise_entry_from_json_line(const std::string& line);
void emit_premise_file(const std::vector<PremiseFileEntry>& entries,
                       const std::filesystem::path& path);
std::vector<PremiseFileEntry> load_premise_file(const std::filesystem::path& path);

/// Atomic write helper shared by all emitters (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace parc
