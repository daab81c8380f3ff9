#include <atomic>
#include <fstream>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>

#include "backends.hpp"
#include "parc/error.hpp"

namespace parc {

namespace {

using ScriptKey = std::tuple<JudgeTask, std::string, int, int>;

std::string describe_key(const ScriptKey& key) {
  return std::string("(task=") + judge_task_name(std::get<0>(key)) +
         ", chain=" + std::get<1>(key) + ", step=" + std::to_string(std::get<2>(key)) +
         ", aux=" + std::to_string(std::get<3>(key)) + ")";
}

/// Deterministic reply table: every request must hit a key loaded from the
/// script file, so a run is a pure function of (inputs, script).
class ScriptedBackend : public JudgeBackend {
 public:
  explicit ScriptedBackend(const BackendConfig& config) {
    if (config.script_path.empty()) {
      throw Error(ErrorCode::ConfigError, "scripted backend needs script_path");
    }
    std::ifstream in(config.script_path);
    if (!in) {
      throw Error(ErrorCode::Unreadable, "cannot open script file " + config.script_path);
    }
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
      std::string where = config.script_path + ":" + std::to_string(line_number);
      if (record.is_discarded() || !record.is_object()) {
        throw Error(ErrorCode::SchemaViolation, "malformed script record at " + where);
      }
      if (!record.contains("task") || !record.contains("chain_id") ||
          !record.contains("reply")) {
        throw Error(ErrorCode::SchemaViolation,
                    "script record missing task/chain_id/reply at " + where);
      }
      auto task = judge_task_from_name(record["task"].get<std::string>());
      if (!task) {
        throw Error(ErrorCode::SchemaViolation,
                    "unknown task \"" + record["task"].get<std::string>() + "\" at " + where);
      }
      ScriptKey key{*task, record["chain_id"].get<std::string>(),
                    record.value("step", 0), record.value("aux", -1)};
      if (!replies_.emplace(key, record["reply"].get<std::string>()).second) {
        throw Error(ErrorCode::SchemaViolation,
                    "duplicate script key " + describe_key(key) + " at " + where);
      }
    }
  }

  std::string fetch(const JudgeRequest& request) override {
    ScriptKey key{request.task, request.chain_id, request.step_index, request.aux_index};
    auto it = replies_.find(key);
    if (it == replies_.end()) {
      throw Error(ErrorCode::ScriptMiss, "no scripted reply for " + describe_key(key));
    }
    issued_.fetch_add(1);
    return it->second;
  }

  long long queries_issued() const override { return issued_.load(); }

 private:
  std::map<ScriptKey, std::string> replies_;
  std::atomic<long long> issued_{0};
};

}  // namespace

std::unique_ptr<JudgeBackend> make_scripted_backend(const BackendConfig& config) {
  return std::make_unique<ScriptedBackend>(config);
}

}  // namespace parc
