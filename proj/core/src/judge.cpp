#include "parc/judge.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "backends.hpp"
#include "parc/error.hpp"
#include "parc/parsers.hpp"

namespace parc {

const char* judge_task_name(JudgeTask task) {
  switch (task) {
    case JudgeTask::PremiseAggregative: return "PremiseAggregative";
    case JudgeTask::PremiseDyadic: return "PremiseDyadic";
    case JudgeTask::MathVerdict: return "MathVerdict";
    case JudgeTask::LogicalVerdict: return "LogicalVerdict";
    case JudgeTask::BaselineVerdict: return "BaselineVerdict";
    case JudgeTask::AnnotationJSON: return "AnnotationJSON";
    case JudgeTask::SyntheticPerturb: return "SyntheticPerturb";
  }
  return "Unknown";
}

std::optional<JudgeTask> judge_task_from_name(const std::string& name) {
  if (name == "PremiseAggregative") return JudgeTask::PremiseAggregative;
  if (name == "PremiseDyadic") return JudgeTask::PremiseDyadic;
  if (name == "MathVerdict") return JudgeTask::MathVerdict;
  if (name == "LogicalVerdict") return JudgeTask::LogicalVerdict;
  if (name == "BaselineVerdict") return JudgeTask::BaselineVerdict;
  if (name == "AnnotationJSON") return JudgeTask::AnnotationJSON;
  if (name == "SyntheticPerturb") return JudgeTask::SyntheticPerturb;
  return std::nullopt;
}

std::unique_ptr<JudgeBackend> make_backend(const BackendConfig& config) {
  switch (config.kind) {
    case BackendKind::Scripted: return make_scripted_backend(config);
    case BackendKind::Endpoint: return make_endpoint_backend(config);
  }
  throw Error(ErrorCode::ConfigError, "unrecognized backend kind");
}

JudgeReply query(const JudgeRequest& request, JudgeBackend& backend) {
  JudgeReply reply;
  reply.raw_text = backend.fetch(request);
  try {
    switch (request.task) {
      case JudgeTask::PremiseAggregative: {
        PremiseParse parsed = parse_premise_reply(reply.raw_text, request.step_index);
        reply.parse_warnings = parsed.warnings;
        reply.parsed = ParsedPremises{std::move(parsed.premises)};
        break;
      }
      case JudgeTask::PremiseDyadic:
        reply.parsed = ParsedBinary{parse_binary_reply(reply.raw_text)};
        break;
      case JudgeTask::MathVerdict:
      case JudgeTask::LogicalVerdict:
      case JudgeTask::BaselineVerdict:
        reply.parsed = ParsedVerdict{parse_verdict_reply(reply.raw_text, request.task)};
        break;
      case JudgeTask::AnnotationJSON:
      case JudgeTask::SyntheticPerturb: {
        std::string text = extract_json_payload(reply.raw_text);
        if (!nlohmann::json::accept(text)) {
          throw Error(ErrorCode::ParseFailure, "reply is not valid JSON");
        }
        reply.parsed = ParsedJson{std::move(text)};
        break;
      }
    }
  } catch (const Error& error) {
    if (error.code() != ErrorCode::ParseFailure) throw;
    reply.parse_warnings.push_back(std::string(error.what()) + " [" +
                                   judge_task_name(request.task) + " " + request.chain_id +
                                   " step " + std::to_string(request.step_index) + "]");
  }
  return reply;
}

void parallel_for_indexed(std::size_t count, int width,
                          const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t workers = static_cast<std::size_t>(std::max(width, 1));
  workers = std::min(workers, count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);  // lowest index wins
  }
}

}  // namespace parc
