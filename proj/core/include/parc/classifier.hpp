#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parc/chain.hpp"
#include "parc/judge.hpp"

namespace parc {

enum class ClassifyMode {
  FullContext,          // baseline: one all-classes verdict per step
  PremiseScopedOracle,  // premise-scoped, premises from ground-truth annotations
  PremiseScopedModel,   // premise-scoped, premises from a mapper run
};

const char* classify_mode_name(ClassifyMode mode);
std::optional<ClassifyMode> classify_mode_from_name(const std::string& name);

/// Audit record of one judge round trip.
struct JudgeExchange {
  JudgeRequest request;
  JudgeReply reply;
};

struct ClassifiedChain {
  std::string chain_id;
  ClassifyMode mode = ClassifyMode::FullContext;
  std::map<int, StepLabel> labels;  // every step 1..t exactly once
  std::optional<PremiseGraph> premise_source;  // absent in FullContext mode
  std::vector<JudgeExchange> exchanges;
  std::vector<std::string> warnings;
};

/// One BaselineVerdict query per step over (question, steps 1..k-1, step k).
/// Verdicts pass through verbatim; the judge itself may name any of the four
/// classes, including AccumulationError. No propagation runs in this mode.
ClassifiedChain classify_baseline(const ReasoningChain& chain, JudgeBackend& backend,
                                  int workers = 1);

/// Two queries per step: a math check on the step in isolation and a logical
/// check under the step's premises only. MathematicalError wins when both
/// fire. Accumulation labels are then assigned by propagate_accumulation.
/// mode tags where the premises came from and must be one of the
/// PremiseScoped modes.
ClassifiedChain classify_premise_scoped(const ReasoningChain& chain,
                                        const PremiseGraph& premises,
                                        JudgeBackend& backend, ClassifyMode mode,
                                        int workers = 1);

/// Forward pass in ascending step order: a natively Correct step becomes
/// AccumulationError iff some direct premise's current label is not Correct,
/// so accumulation spreads transitively through already-relabeled steps.
/// Native error labels are never overwritten. native must cover steps 1..t
/// with no AccumulationError entries.
std::map<int, StepLabel> propagate_accumulation(const std::map<int, StepLabel>& native,
                                                const PremiseGraph& premises);

/// Independent reference: a natively Correct step is AccumulationError iff
/// its ancestor closure contains a natively erroneous step. Deliberately a
/// different algorithm from propagate_accumulation; the two must agree on
/// every input (dual-route check).
std::map<int, StepLabel> closure_oracle(const std::map<int, StepLabel>& native,
                                        const PremiseGraph& premises);

}  // namespace parc
