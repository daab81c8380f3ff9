#include "parc/chain.hpp"

#include <algorithm>
#include <cctype>

#include "parc/error.hpp"

namespace parc {

namespace {

bool is_blank(const std::string& text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

MergedLabel merge_label(StepLabel label) {
  switch (label) {
    case StepLabel::Correct: return MergedLabel::Correct;
    case StepLabel::MathematicalError:
    case StepLabel::LogicalInconsistency: return MergedLabel::Error;
    case StepLabel::AccumulationError: return MergedLabel::AccumulationError;
  }
  throw Error(ErrorCode::SchemaViolation, "unrecognized step label value");
}

const char* step_label_name(StepLabel label) {
  switch (label) {
    case StepLabel::Correct: return "correct";
    case StepLabel::MathematicalError: return "mathematical_error";
    case StepLabel::LogicalInconsistency: return "logical_inconsistency";
    case StepLabel::AccumulationError: return "accumulation_error";
  }
  return "unknown";
}

std::optional<StepLabel> step_label_from_name(const std::string& name) {
  if (name == "correct") return StepLabel::Correct;
  if (name == "mathematical_error") return StepLabel::MathematicalError;
  if (name == "logical_inconsistency") return StepLabel::LogicalInconsistency;
  if (name == "accumulation_error") return StepLabel::AccumulationError;
  return std::nullopt;
}

const char* merged_label_name(MergedLabel label) {
  switch (label) {
    case MergedLabel::Correct: return "correct";
    case MergedLabel::Error: return "error";
    case MergedLabel::AccumulationError: return "accumulation_error";
  }
  return "unknown";
}

void validate_chain(const ReasoningChain& chain) {
  if (chain.chain_id.empty()) {
    throw Error(ErrorCode::InvalidChain, "chain_id is empty");
  }
  if (chain.steps.empty()) {
    throw Error(ErrorCode::InvalidChain, "chain " + chain.chain_id + " has no steps");
  }
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    if (is_blank(chain.steps[i])) {
      throw Error(ErrorCode::InvalidChain,
                  "chain " + chain.chain_id + " step " + std::to_string(i + 1) + " is blank");
    }
  }
}

void validate_premises(const PremiseGraph& premises, int step_count) {
  if (step_count <= 0) {
    throw Error(ErrorCode::InvalidChain, "step count must be positive");
  }
  for (const auto& [k, deps] : premises.premises) {
    if (k < 1 || k > step_count) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "premise entry for step " + std::to_string(k) + " outside 1.." +
                      std::to_string(step_count));
    }
    for (int p : deps) {
      if (p < 0 || p > step_count) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "step " + std::to_string(k) + " cites out-of-range index " +
                        std::to_string(p));
      }
      if (p == k) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "step " + std::to_string(k) + " cites itself");
      }
      if (p > k) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "step " + std::to_string(k) + " cites later step " + std::to_string(p));
      }
    }
  }
  for (int k = 1; k <= step_count; ++k) {
    if (!premises.premises.count(k)) {
      throw Error(ErrorCode::MissingStepEntry,
                  "no premise entry for step " + std::to_string(k));
    }
  }
}

Parc Parc::build(ReasoningChain chain, PremiseGraph premises) {
  validate_chain(chain);
  if (premises.chain_id != chain.chain_id) {
    throw Error(ErrorCode::ChainMismatch,
                "premises for " + premises.chain_id + " paired with chain " + chain.chain_id);
  }
  validate_premises(premises, chain.step_count());
  return Parc(std::move(chain), std::move(premises));
}

Parc build_parc(ReasoningChain chain, PremiseGraph premises) {
  return Parc::build(std::move(chain), std::move(premises));
}

std::vector<std::vector<int>> layerize(const PremiseGraph& premises, int step_count) {
  validate_premises(premises, step_count);
  std::vector<int> layer(static_cast<std::size_t>(step_count) + 1, 0);
  // Premises only point backwards, so ascending index order is topological.
  for (int k = 1; k <= step_count; ++k) {
    int best = 0;
    for (int p : premises.premises.at(k)) {
      best = std::max(best, layer[static_cast<std::size_t>(p)]);
    }
    layer[static_cast<std::size_t>(k)] = best + 1;
  }
  int depth = *std::max_element(layer.begin() + 1, layer.end());
  std::vector<std::vector<int>> strata(static_cast<std::size_t>(depth));
  for (int k = 1; k <= step_count; ++k) {
    strata[static_cast<std::size_t>(layer[static_cast<std::size_t>(k)] - 1)].push_back(k);
  }
  return strata;
}

std::vector<std::vector<int>> layerize(const Parc& parc) {
  return layerize(parc.premises(), parc.step_count());
}

GraphStats graph_stats(const PremiseGraph& premises, int step_count) {
  auto strata = layerize(premises, step_count);
  GraphStats stats;
  stats.step_count = step_count;
  for (int k = 1; k <= step_count; ++k) {
    for (int p : premises.premises.at(k)) {
      ++stats.premise_total;
      if (p >= 1) ++stats.edge_count;
    }
  }
  stats.depth = static_cast<int>(strata.size());
  for (const auto& layer : strata) {
    stats.max_width = std::max(stats.max_width, static_cast<int>(layer.size()));
  }
  stats.branching_factor = static_cast<double>(stats.edge_count) / step_count;
  return stats;
}

GraphStats graph_stats(const Parc& parc) {
  return graph_stats(parc.premises(), parc.step_count());
}

std::set<int> ancestor_closure(const PremiseGraph& premises, int step_count, int k) {
  validate_premises(premises, step_count);
  if (k < 1 || k > step_count) {
    throw Error(ErrorCode::IndexOutOfRange,
                "closure requested for step " + std::to_string(k) + " of " +
                    std::to_string(step_count));
  }
  std::set<int> closed;
  std::vector<int> frontier{k};
  while (!frontier.empty()) {
    int cur = frontier.back();
    frontier.pop_back();
    for (int p : premises.premises.at(cur)) {
      if (p == 0) continue;
      if (closed.insert(p).second) frontier.push_back(p);
    }
  }
  return closed;
}

std::set<int> ancestor_closure(const Parc& parc, int k) {
  return ancestor_closure(parc.premises(), parc.step_count(), k);
}

}  // namespace parc
