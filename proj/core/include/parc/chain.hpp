#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace parc {

/// A linear reasoning chain: the question plus ordered solution steps.
/// Step indices are 1-based; index 0 is reserved for the question.
struct ReasoningChain {
  std::string chain_id;
  std::string question;
  std::vector<std::string> steps;  // steps[i] is step i+1
  std::optional<std::string> final_answer;
  std::optional<std::string> ground_truth_answer;

  int step_count() const { return static_cast<int>(steps.size()); }

  /// Text of step k (1-based).
  const std::string& step(int k) const { return steps.at(static_cast<std::size_t>(k - 1)); }
};

/// Premise sets per step. premises[k] ⊆ {0, .., k-1}; 0 is the question.
struct PremiseGraph {
  std::string chain_id;
  std::map<int, std::set<int>> premises;

  bool operator==(const PremiseGraph&) const = default;
};

enum class StepLabel {
  Correct,
  MathematicalError,
  LogicalInconsistency,
  AccumulationError,
};

/// Scoring-time classes: the two native error types collapse into Error.
enum class MergedLabel {
  Correct,
  Error,
  AccumulationError,
};

MergedLabel merge_label(StepLabel label);

const char* step_label_name(StepLabel label);
std::optional<StepLabel> step_label_from_name(const std::string& name);
const char* merged_label_name(MergedLabel label);

/// Structural measurements of one premise DAG (question node excluded from
/// step counts and edge counts; question references still count as premises).
struct GraphStats {
  int step_count = 0;
  int premise_total = 0;  // sum of premise-set sizes, question references included
  int edge_count = 0;     // inter-step premise edges only
  int depth = 0;          // steps on the longest dependency path
  int max_width = 0;      // largest topological layer
  double branching_factor = 0.0;  // edge_count / step_count
};

/// Throws Error{InvalidChain} unless steps are non-empty and every step text
/// is non-empty after trimming.
void validate_chain(const ReasoningChain& chain);

/// A validated (chain, premises) pair. Construction rejects self references,
/// forward references, out-of-range entries and chain-id mismatches, so the
/// graph is acyclic by construction.
class Parc {
 public:
  static Parc build(ReasoningChain chain, PremiseGraph premises);

  const ReasoningChain& chain() const { return chain_; }
  const PremiseGraph& premises() const { return premises_; }
  int step_count() const { return chain_.step_count(); }

 private:
  Parc(ReasoningChain chain, PremiseGraph premises)
      : chain_(std::move(chain)), premises_(std::move(premises)) {}

  ReasoningChain chain_;
  PremiseGraph premises_;
};

Parc build_parc(ReasoningChain chain, PremiseGraph premises);

/// Validates a premise graph against a step count without requiring the
/// chain texts. Same rejection rules as Parc::build.
void validate_premises(const PremiseGraph& premises, int step_count);

/// Topological strata over the steps. layer(k) = 1 + max(layer(p)) over k's
/// premises with layer(question) = 0, so steps whose premises are empty or
/// question-only sit in the first stratum. Returned vector is indexed from
/// layer 1; steps within a layer are ascending.
std::vector<std::vector<int>> layerize(const PremiseGraph& premises, int step_count);
std::vector<std::vector<int>> layerize(const Parc& parc);

GraphStats graph_stats(const PremiseGraph& premises, int step_count);
GraphStats graph_stats(const Parc& parc);

/// Transitive closure of premise edges upward from step k, question node
/// excluded. k itself is never in the result.
std::set<int> ancestor_closure(const PremiseGraph& premises, int step_count, int k);
std::set<int> ancestor_closure(const Parc& parc, int k);

}  // namespace parc
