#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parc/classifier.hpp"
#include "parc/dataset.hpp"
#include "parc/premise_mapper.hpp"

namespace parc {

/// Merged-label scoring. avg_accuracy is two-level: per-chain step accuracy
/// first, then the unweighted mean over chains, so long chains do not
/// dominate. class_accuracy is conditioned on the oracle's merged class and
/// computed over all steps of that class (micro). Steps the oracle leaves
/// unlabeled (ProcessBench tails) are excluded everywhere.
struct ErrorMetrics {
  double avg_accuracy = 0.0;
  std::map<MergedLabel, double> class_accuracy;
  std::map<MergedLabel, long long> class_steps;
  long long chains = 0;
  long long steps = 0;
};

/// Throws Error{AlignmentError} unless predicted and oracle pair 1:1 by
/// chain_id and every oracle-labeled step has a prediction.
ErrorMetrics score_error_labels(const std::vector<ClassifiedChain>& predicted,
                                const std::vector<PerlRecord>& oracle);

/// First-error protocol. correct_acc is scored over chains the oracle calls
/// fully correct, wrong_acc over the rest with exact index match; an empty
/// side scores 1.0 vacuously. f1 = 2ab/(a+b), 0 when both sides are 0.
struct ProcessBenchScore {
  double correct_acc = 0.0;
  double wrong_acc = 0.0;
  double f1 = 0.0;
  long long correct_chains = 0;
  long long wrong_chains = 0;
};

/// Entries align by position; absent = fully correct ("none", -1 on disk).
ProcessBenchScore score_processbench(const std::vector<std::optional<int>>& predicted,
                                     const std::vector<std::optional<int>>& oracle);

/// Smallest step whose merged label is not Correct; absent when all are.
std::optional<int> first_error_from_labels(const std::map<int, StepLabel>& labels);
std::optional<int> first_error_from_labels(const ClassifiedChain& chain);

struct PremiseMetrics {
  PrecisionRecall macro;  // unweighted mean over chains of per-chain P/R/F1
  long long chains = 0;
};

enum class EvalProtocol { Perl, ProcessBench };

const char* eval_protocol_name(EvalProtocol protocol);
std::optional<EvalProtocol> eval_protocol_from_name(const std::string& name);

struct SplitReport {
  long long chains = 0;
  long long steps = 0;
  long long warnings = 0;
  std::optional<PremiseMetrics> premise;  // present iff some chain carried premises
  std::optional<ErrorMetrics> error;      // perl protocol only
};

struct EvalReport {
  EvalProtocol protocol = EvalProtocol::Perl;
  std::map<Split, SplitReport> per_split;
  SplitReport overall;
  std::optional<ProcessBenchScore> processbench;  // processbench protocol only
};

/// perl protocol: error metrics per split and overall, plus premise metrics
/// over the chains whose ClassifiedChain carries a premise_source (compared
/// against the records' oracle premises). processbench protocol: first-error
/// scoring over all chains. Throws Error{AlignmentError} on id mismatches.
EvalReport build_eval_report(const std::vector<PerlRecord>& corpus,
                             const std::vector<ClassifiedChain>& predicted,
                             EvalProtocol protocol);

/// rate in [0,1] -> "NN.NN" percent, rounded half-up at 2 decimals.
std::string format_percent(double rate);

std::string report_to_json(const EvalReport& report);

/// One "split,metric,value" row per populated metric.
std::string report_to_csv(const EvalReport& report);

/// Columns in the order Neg, Syn, Pos, Avg; "-" for absent cells.
std::string report_to_table(const EvalReport& report);

}  // namespace parc
