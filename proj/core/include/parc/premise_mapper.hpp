#pragma once

#include <map>
#include <string>
#include <vector>

#include "parc/chain.hpp"
#include "parc/judge.hpp"

namespace parc {

struct MappedPremises {
  PremiseGraph graph;
  std::vector<std::string> warnings;
};

/// One judge query per step k carrying question + steps 1..k-1 + step k;
/// exactly t queries per chain. A step whose query fails (transport) or
/// parses to nothing falls back to the question-only set {0} with a warning.
MappedPremises map_aggregative(const ReasoningChain& chain, JudgeBackend& backend,
                               int workers = 1);

/// One binary query per ordered pair (candidate i, step k), 0 <= i < k <= t;
/// exactly t(t+1)/2 queries per chain. A failed pair defaults to
/// not-a-premise with a warning, so premise sets may come out empty.
MappedPremises map_dyadic(const ReasoningChain& chain, JudgeBackend& backend,
                          int workers = 1);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Scores over (step, premise) pairs. Empty-vs-empty scores 1.0 on all three
/// (vacuous truth); an empty side against a non-empty one scores 0.0.
struct PremiseComparison {
  std::map<int, PrecisionRecall> per_step;
  PrecisionRecall per_chain;
};

/// per_chain ratios are computed over the union of each side's pair sets,
/// not averaged over steps. Throws Error{ChainMismatch} when ids or step
/// key sets differ.
PremiseComparison compare_to_oracle(const PremiseGraph& predicted,
                                    const PremiseGraph& oracle);

}  // namespace parc
