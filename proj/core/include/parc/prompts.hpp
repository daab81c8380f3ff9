#pragma once

#include <map>
#include <set>
#include <string>

#include "parc/chain.hpp"
#include "parc/judge.hpp"

namespace parc {

/// Template text for one task, before slot substitution. system is empty for
/// tasks whose source template carries no system part.
struct PromptTemplate {
  std::string system;
  std::string instruction;
};

const PromptTemplate& prompt_template(JudgeTask task);

/// Replaces {name} occurrences whose name is a key of slots, in one pass.
/// Unknown {…} spans are copied through untouched, so literal JSON braces in
/// templates survive; substituted values are never re-scanned.
std::string fill_slots(const std::string& text,
                       const std::map<std::string, std::string>& slots);

/// Steps rendered one per line as "Step i: <text>", for the {solution} and
/// {premises} slots. Range is inclusive and clamped to the chain.
std::string render_step_lines(const ReasoningChain& chain, int first, int last);

/// One query per step k: question + steps 1..k-1 + step k.
JudgeRequest render_premise_aggregative(const ReasoningChain& chain, int k);

/// One binary query per (candidate, step) pair; candidate 0 is the question.
JudgeRequest render_premise_dyadic(const ReasoningChain& chain, int candidate, int k);

/// Step k in isolation.
JudgeRequest render_math_verdict(const ReasoningChain& chain, int k);

/// Step k under its premises only. premises must be a subset of {0..k-1};
/// the question has its own slot, so index 0 adds no premise line.
JudgeRequest render_logical_verdict(const ReasoningChain& chain, int k,
                                    const std::set<int>& premises);

/// Full-context single-step classification over all four labels.
JudgeRequest render_baseline_verdict(const ReasoningChain& chain, int k);

/// Whole-chain JSON error annotation. Requires ground_truth_answer.
JudgeRequest render_annotation_json(const ReasoningChain& chain);

/// Whole-chain error injection. Requires ground_truth_answer.
JudgeRequest render_synthetic_perturb(const ReasoningChain& chain);

}  // namespace parc
