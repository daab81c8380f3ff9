#include "parc/premise_mapper.hpp"

#include <algorithm>
#include <iterator>

#include "parc/error.hpp"
#include "parc/prompts.hpp"

namespace parc {

namespace {

PrecisionRecall score_pairs(long long hit, long long predicted, long long oracle) {
  PrecisionRecall score;
  if (predicted == 0 && oracle == 0) {
    score.precision = score.recall = score.f1 = 1.0;
    return score;
  }
  score.precision = predicted == 0 ? 0.0 : static_cast<double>(hit) / predicted;
  score.recall = oracle == 0 ? 0.0 : static_cast<double>(hit) / oracle;
  double denom = score.precision + score.recall;
  score.f1 = denom == 0.0 ? 0.0 : 2.0 * score.precision * score.recall / denom;
  return score;
}

}  // namespace

MappedPremises map_aggregative(const ReasoningChain& chain, JudgeBackend& backend,
                               int workers) {
  validate_chain(chain);
  int t = chain.step_count();
  std::vector<std::set<int>> sets(static_cast<std::size_t>(t));
  std::vector<std::vector<std::string>> warnings(static_cast<std::size_t>(t));
  parallel_for_indexed(static_cast<std::size_t>(t), workers, [&](std::size_t i) {
    int k = static_cast<int>(i) + 1;
    JudgeRequest request = render_premise_aggregative(chain, k);
    try {
      JudgeReply reply = query(request, backend);
      warnings[i] = reply.parse_warnings;
      if (reply.parsed) {
        sets[i] = std::get<ParsedPremises>(*reply.parsed).indices;
      } else {
        sets[i] = {0};
        warnings[i].push_back("step " + std::to_string(k) +
                              " fell back to question-only premises");
      }
    } catch (const Error& error) {
      if (error.code() != ErrorCode::TransportError) throw;
      sets[i] = {0};
      warnings[i].push_back("step " + std::to_string(k) + " fell back to question-only " +
                            "premises after transport failure: " + error.what());
    }
  });
  MappedPremises result;
  result.graph.chain_id = chain.chain_id;
  for (int k = 1; k <= t; ++k) {
    result.graph.premises[k] = std::move(sets[static_cast<std::size_t>(k - 1)]);
    auto& step_warnings = warnings[static_cast<std::size_t>(k - 1)];
    result.warnings.insert(result.warnings.end(), step_warnings.begin(), step_warnings.end());
  }
  return result;
}

MappedPremises map_dyadic(const ReasoningChain& chain, JudgeBackend& backend, int workers) {
  validate_chain(chain);
  int t = chain.step_count();
  std::vector<std::pair<int, int>> pairs;  // (candidate, step), step-major ascending
  pairs.reserve(static_cast<std::size_t>(t) * (t + 1) / 2);
  for (int k = 1; k <= t; ++k) {
    for (int i = 0; i < k; ++i) pairs.emplace_back(i, k);
  }
  std::vector<char> is_premise(pairs.size(), 0);
  std::vector<std::vector<std::string>> warnings(pairs.size());
  parallel_for_indexed(pairs.size(), workers, [&](std::size_t n) {
    auto [candidate, k] = pairs[n];
    JudgeRequest request = render_premise_dyadic(chain, candidate, k);
    try {
      JudgeReply reply = query(request, backend);
      warnings[n] = reply.parse_warnings;
      if (reply.parsed) {
        is_premise[n] = std::get<ParsedBinary>(*reply.parsed).yes ? 1 : 0;
      } else {
        warnings[n].push_back("pair (" + std::to_string(candidate) + ", " +
                              std::to_string(k) + ") defaulted to not-a-premise");
      }
    } catch (const Error& error) {
      if (error.code() != ErrorCode::TransportError) throw;
      warnings[n].push_back("pair (" + std::to_string(candidate) + ", " + std::to_string(k) +
                            ") defaulted to not-a-premise after transport failure: " +
                            error.what());
    }
  });
  MappedPremises result;
  result.graph.chain_id = chain.chain_id;
  for (int k = 1; k <= t; ++k) result.graph.premises[k] = {};
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    if (is_premise[n]) result.graph.premises[pairs[n].second].insert(pairs[n].first);
    result.warnings.insert(result.warnings.end(), warnings[n].begin(), warnings[n].end());
  }
  return result;
}

PremiseComparison compare_to_oracle(const PremiseGraph& predicted,
                                    const PremiseGraph& oracle) {
  if (predicted.chain_id != oracle.chain_id) {
    throw Error(ErrorCode::ChainMismatch,
                "premise graphs for " + predicted.chain_id + " vs " + oracle.chain_id);
  }
  if (predicted.premises.size() != oracle.premises.size() ||
      !std::equal(predicted.premises.begin(), predicted.premises.end(),
                  oracle.premises.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw Error(ErrorCode::ChainMismatch,
                "step key sets differ for chain " + predicted.chain_id);
  }
  PremiseComparison comparison;
  long long hit = 0, pred_total = 0, oracle_total = 0;
  for (const auto& [k, pred_set] : predicted.premises) {
    const std::set<int>& oracle_set = oracle.premises.at(k);
    std::vector<int> common;
    std::set_intersection(pred_set.begin(), pred_set.end(), oracle_set.begin(),
                          oracle_set.end(), std::back_inserter(common));
    comparison.per_step[k] =
        score_pairs(static_cast<long long>(common.size()),
                    static_cast<long long>(pred_set.size()),
                    static_cast<long long>(oracle_set.size()));
    hit += static_cast<long long>(common.size());
    pred_total += static_cast<long long>(pred_set.size());
    oracle_total += static_cast<long long>(oracle_set.size());
  }
  comparison.per_chain = score_pairs(hit, pred_total, oracle_total);
  return comparison;
}

}  // namespace parc
