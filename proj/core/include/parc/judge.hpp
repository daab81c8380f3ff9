#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "parc/chain.hpp"

namespace parc {

enum class JudgeTask {
  PremiseAggregative,
  PremiseDyadic,
  MathVerdict,
  LogicalVerdict,
  BaselineVerdict,
  AnnotationJSON,
  SyntheticPerturb,
};

const char* judge_task_name(JudgeTask task);
std::optional<JudgeTask> judge_task_from_name(const std::string& name);

/// One fully rendered query. system may be empty (tasks whose template has no
/// system part); backends then send the instruction alone.
struct JudgeRequest {
  JudgeTask task;
  std::string system;
  std::string instruction;
  std::string chain_id;
  int step_index = 0;  // 0 for whole-chain tasks
  int aux_index = -1;  // dyadic candidate premise index, -1 elsewhere
};

struct ParsedPremises {
  std::set<int> indices;
};
struct ParsedVerdict {
  StepLabel label;
};
struct ParsedBinary {
  bool yes;
};
/// Whole-JSON payloads (annotation, perturbation) are syntax-checked here and
/// handed to the dataset layer for schema interpretation.
struct ParsedJson {
  std::string json_text;
};
using ParsedReply = std::variant<ParsedPremises, ParsedVerdict, ParsedBinary, ParsedJson>;

/// Raw text is always retained for audit; parsed is present iff the
/// task-specific parse succeeded. Parse problems become warnings, never loss.
struct JudgeReply {
  std::string raw_text;
  std::optional<ParsedReply> parsed;
  std::vector<std::string> parse_warnings;
};

enum class BackendKind { Scripted, Endpoint };

struct BackendConfig {
  BackendKind kind = BackendKind::Scripted;
  std::string script_path;  // Scripted: reply table, one JSON record per line

  std::string endpoint_url;  // Endpoint: OpenAI-compatible chat-completions URL
  std::string model_name;
  std::string api_key_env_var = "PARC_API_KEY";
  double temperature = 0.0;
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::chrono::seconds timeout{120};
  std::string cache_dir;  // empty disables the reply cache

  int workers = 4;
};

/// Verdict source. fetch is safe to call concurrently.
class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;

  /// Returns the raw reply text. Throws Error{ScriptMiss} (scripted lookup
  /// failure) or Error{TransportError} (endpoint failure after retries).
  virtual std::string fetch(const JudgeRequest& request) = 0;

  /// Queries answered so far, cache hits excluded for Endpoint backends.
  virtual long long queries_issued() const = 0;
};

std::unique_ptr<JudgeBackend> make_backend(const BackendConfig& config);

/// fetch + task-appropriate parse. Transport and script errors propagate;
/// parse failures are downgraded to a warning with parsed left empty.
JudgeReply query(const JudgeRequest& request, JudgeBackend& backend);

/// Runs fn(0..count-1) on up to width threads. Deterministic targets only:
/// callers write into index-keyed slots. If any call throws, the exception
/// for the lowest index is rethrown after all workers finish.
void parallel_for_indexed(std::size_t count, int width,
                          const std::function<void(std::size_t)>& fn);

}  // namespace parc
