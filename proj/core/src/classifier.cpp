#include "parc/classifier.hpp"

#include "parc/error.hpp"
#include "parc/prompts.hpp"

namespace parc {

namespace {

/// Checks the propagation precondition and returns t.
int validate_native(const std::map<int, StepLabel>& native, const PremiseGraph& premises) {
  int t = static_cast<int>(native.size());
  for (int k = 1; k <= t; ++k) {
    auto it = native.find(k);
    if (it == native.end()) {
      throw Error(ErrorCode::MissingStepEntry,
                  "native labels lack step " + std::to_string(k));
    }
    if (it->second == StepLabel::AccumulationError) {
      throw Error(ErrorCode::SchemaViolation,
                  "native label of step " + std::to_string(k) + " is already accumulation");
    }
  }
  validate_premises(premises, t);
  return t;
}

StepLabel verdict_or_correct(const JudgeReply& reply, int k,
                             std::vector<std::string>& warnings) {
  if (reply.parsed) return std::get<ParsedVerdict>(*reply.parsed).label;
  warnings.push_back("step " + std::to_string(k) + " defaulted to correct");
  return StepLabel::Correct;
}

}  // namespace

const char* classify_mode_name(ClassifyMode mode) {
  switch (mode) {
    case ClassifyMode::FullContext: return "full-context";
    case ClassifyMode::PremiseScopedOracle: return "premise-oracle";
    case ClassifyMode::PremiseScopedModel: return "premise-model";
  }
  return "unknown";
}

std::optional<ClassifyMode> classify_mode_from_name(const std::string& name) {
  if (name == "full-context") return ClassifyMode::FullContext;
  if (name == "premise-oracle") return ClassifyMode::PremiseScopedOracle;
  if (name == "premise-model") return ClassifyMode::PremiseScopedModel;
  return std::nullopt;
}

ClassifiedChain classify_baseline(const ReasoningChain& chain, JudgeBackend& backend,
                                  int workers) {
  validate_chain(chain);
  int t = chain.step_count();
  std::vector<JudgeExchange> exchanges(static_cast<std::size_t>(t));
  std::vector<StepLabel> labels(static_cast<std::size_t>(t), StepLabel::Correct);
  std::vector<std::vector<std::string>> warnings(static_cast<std::size_t>(t));
  parallel_for_indexed(static_cast<std::size_t>(t), workers, [&](std::size_t i) {
    int k = static_cast<int>(i) + 1;
    JudgeRequest request = render_baseline_verdict(chain, k);
    try {
      JudgeReply reply = query(request, backend);
      labels[i] = verdict_or_correct(reply, k, warnings[i]);
      exchanges[i] = {std::move(request), std::move(reply)};
    } catch (const Error& error) {
      if (error.code() != ErrorCode::TransportError) throw;
      warnings[i].push_back("step " + std::to_string(k) +
                            " defaulted to correct after transport failure: " + error.what());
      exchanges[i] = {std::move(request), JudgeReply{}};
    }
  });
  ClassifiedChain result;
  result.chain_id = chain.chain_id;
  result.mode = ClassifyMode::FullContext;
  for (int k = 1; k <= t; ++k) {
    result.labels[k] = labels[static_cast<std::size_t>(k - 1)];
    result.exchanges.push_back(std::move(exchanges[static_cast<std::size_t>(k - 1)]));
    auto& step_warnings = warnings[static_cast<std::size_t>(k - 1)];
    result.warnings.insert(result.warnings.end(), step_warnings.begin(), step_warnings.end());
  }
  return result;
}

ClassifiedChain classify_premise_scoped(const ReasoningChain& chain,
                                        const PremiseGraph& premises,
                                        JudgeBackend& backend, ClassifyMode mode,
                                        int workers) {
  if (mode == ClassifyMode::FullContext) {
    throw Error(ErrorCode::ConfigError, "premise-scoped classification needs a premise mode");
  }
  validate_chain(chain);
  if (premises.chain_id != chain.chain_id) {
    throw Error(ErrorCode::ChainMismatch,
                "premises for " + premises.chain_id + " paired with chain " + chain.chain_id);
  }
  int t = chain.step_count();
  validate_premises(premises, t);
  struct StepOutcome {
    StepLabel native = StepLabel::Correct;
    JudgeExchange math;
    JudgeExchange logical;
    std::vector<std::string> warnings;
  };
  std::vector<StepOutcome> outcomes(static_cast<std::size_t>(t));
  parallel_for_indexed(static_cast<std::size_t>(t), workers, [&](std::size_t i) {
    int k = static_cast<int>(i) + 1;
    StepOutcome& out = outcomes[i];
    JudgeRequest math_request = render_math_verdict(chain, k);
    JudgeRequest logical_request = render_logical_verdict(chain, k, premises.premises.at(k));
    StepLabel math_label = StepLabel::Correct;
    StepLabel logical_label = StepLabel::Correct;
    try {
      JudgeReply reply = query(math_request, backend);
      math_label = verdict_or_correct(reply, k, out.warnings);
      out.math = {std::move(math_request), std::move(reply)};
    } catch (const Error& error) {
      if (error.code() != ErrorCode::TransportError) throw;
      out.warnings.push_back("step " + std::to_string(k) +
                             " math check defaulted to correct: " + error.what());
      out.math = {std::move(math_request), JudgeReply{}};
    }
    try {
      JudgeReply reply = query(logical_request, backend);
      logical_label = verdict_or_correct(reply, k, out.warnings);
      out.logical = {std::move(logical_request), std::move(reply)};
    } catch (const Error& error) {
      if (error.code() != ErrorCode::TransportError) throw;
      out.warnings.push_back("step " + std::to_string(k) +
                             " logical check defaulted to correct: " + error.what());
      out.logical = {std::move(logical_request), JudgeReply{}};
    }
    // Math precedence: when both checks fire, the calculation fault wins.
    if (math_label == StepLabel::MathematicalError) {
      out.native = StepLabel::MathematicalError;
    } else if (logical_label == StepLabel::LogicalInconsistency) {
      out.native = StepLabel::LogicalInconsistency;
    }
  });
  std::map<int, StepLabel> native;
  ClassifiedChain result;
  result.chain_id = chain.chain_id;
  result.mode = mode;
  result.premise_source = premises;
  for (int k = 1; k <= t; ++k) {
    StepOutcome& out = outcomes[static_cast<std::size_t>(k - 1)];
    native[k] = out.native;
    result.exchanges.push_back(std::move(out.math));
    result.exchanges.push_back(std::move(out.logical));
    result.warnings.insert(result.warnings.end(), out.warnings.begin(), out.warnings.end());
  }
  result.labels = propagate_accumulation(native, premises);
  return result;
}

std::map<int, StepLabel> propagate_accumulation(const std::map<int, StepLabel>& native,
                                                const PremiseGraph& premises) {
  int t = validate_native(native, premises);
  std::map<int, StepLabel> labels = native;
  for (int k = 1; k <= t; ++k) {
    if (labels[k] != StepLabel::Correct) continue;
    for (int p : premises.premises.at(k)) {
      if (p >= 1 && labels[p] != StepLabel::Correct) {
        labels[k] = StepLabel::AccumulationError;
        break;
      }
    }
  }
  return labels;
}

std::map<int, StepLabel> closure_oracle(const std::map<int, StepLabel>& native,
                                        const PremiseGraph& premises) {
  int t = validate_native(native, premises);
  std::map<int, StepLabel> labels = native;
  for (int k = 1; k <= t; ++k) {
    if (native.at(k) != StepLabel::Correct) continue;
    for (int ancestor : ancestor_closure(premises, t, k)) {
      if (native.at(ancestor) != StepLabel::Correct) {
        labels[k] = StepLabel::AccumulationError;
        break;
      }
    }
  }
  return labels;
}

}  // namespace parc
