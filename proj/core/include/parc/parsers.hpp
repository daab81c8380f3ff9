#pragma once

#include <set>
#include <string>
#include <vector>

#include "parc/chain.hpp"
#include "parc/judge.hpp"

namespace parc {

struct PremiseParse {
  std::set<int> premises;
  std::vector<std::string> warnings;
};

/// Extracts premise indices from lines shaped "Step <n>: ..." (case
/// insensitive, leading whitespace allowed). Indices >= k are dropped with a
/// warning; duplicates collapse silently. An empty reply or one declaring
/// "no premise(s)" yields the empty set. Throws Error{ParseFailure} only
/// when a non-empty reply contains no recognizable line and no such
/// declaration.
PremiseParse parse_premise_reply(const std::string& raw, int k);

/// Reads the last line beginning "Verdict:" (case insensitive), strips
/// brackets and punctuation, folds case and spaces/hyphens to underscores,
/// and maps the token to a StepLabel. Admissible tokens depend on the task:
/// MathVerdict {correct, mathematical_error}; LogicalVerdict {correct,
/// logical_inconsistency}; BaselineVerdict all four labels. Throws
/// Error{ParseFailure} on a missing verdict line or inadmissible token.
StepLabel parse_verdict_reply(const std::string& raw, JudgeTask task);

/// Same verdict-line scan for yes/no replies (dyadic premise queries).
/// Returns true for yes. Throws Error{ParseFailure} otherwise.
bool parse_binary_reply(const std::string& raw);

/// Trims a reply and unwraps one Markdown code fence if present. The JSON
/// prompts forbid fences, but replies are accepted either way.
std::string extract_json_payload(const std::string& raw);

}  // namespace parc
