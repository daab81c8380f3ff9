#include "parc/parsers.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "parc/error.hpp"

namespace parc {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  lines.push_back(current);
  return lines;
}

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

std::string to_lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

/// Folds a verdict token: case, bracket echoes, stray punctuation, and
/// space/hyphen separators all collapse onto the underscore spelling.
std::string normalize_token(const std::string& raw_token) {
  std::string token = trim(raw_token);
  while (!token.empty() && (token.front() == '[' || token.front() == '(')) {
    token.erase(token.begin());
  }
  while (!token.empty() &&
         (token.back() == ']' || token.back() == ')' || token.back() == '.' ||
          token.back() == '!' || token.back() == ',')) {
    token.pop_back();
  }
  token = to_lower(trim(token));
  std::string folded;
  for (char c : token) {
    char mapped = (c == ' ' || c == '\t' || c == '-') ? '_' : c;
    if (mapped == '_' && !folded.empty() && folded.back() == '_') continue;
    folded += mapped;
  }
  while (!folded.empty() && folded.front() == '_') folded.erase(folded.begin());
  while (!folded.empty() && folded.back() == '_') folded.pop_back();
  return folded;
}

/// Last line beginning "Verdict:" (leading whitespace allowed), or empty.
std::string last_verdict_token(const std::string& raw) {
  static const std::regex kVerdictLine(R"(^\s*verdict\s*:\s*(.*)$)", std::regex::icase);
  std::string token;
  for (const std::string& line : split_lines(raw)) {
    std::smatch match;
    if (std::regex_match(line, match, kVerdictLine)) {
      token = match[1].str();
    }
  }
  return normalize_token(token);
}

std::optional<StepLabel> label_from_token(const std::string& token) {
  if (token == "correct") return StepLabel::Correct;
  if (token == "mathematical_error") return StepLabel::MathematicalError;
  if (token == "logical_inconsistency") return StepLabel::LogicalInconsistency;
  if (token == "accumulation_error") return StepLabel::AccumulationError;
  return std::nullopt;
}

bool admissible(StepLabel label, JudgeTask task) {
  switch (task) {
    case JudgeTask::MathVerdict:
      return label == StepLabel::Correct || label == StepLabel::MathematicalError;
    case JudgeTask::LogicalVerdict:
      return label == StepLabel::Correct || label == StepLabel::LogicalInconsistency;
    case JudgeTask::BaselineVerdict:
      return true;
    default:
      return false;
  }
}

}  // namespace

PremiseParse parse_premise_reply(const std::string& raw, int k) {
  if (k < 1) {
    throw Error(ErrorCode::IndexOutOfRange,
                "premise reply parsed against step " + std::to_string(k));
  }
  static const std::regex kPremiseLine(R"(^\s*step\s+(\d+)\s*:.*$)", std::regex::icase);
  PremiseParse result;
  bool any_recognized = false;
  for (const std::string& line : split_lines(raw)) {
    std::smatch match;
    if (!std::regex_match(line, match, kPremiseLine)) continue;
    any_recognized = true;
    long long index = -1;
    try {
      index = std::stoll(match[1].str());
    } catch (const std::out_of_range&) {
      index = -1;  // absurdly large, handled as a forward reference below
    }
    if (index < 0 || index >= k) {
      result.warnings.push_back("dropped forward or out-of-range premise \"" +
                                trim(line) + "\" for step " + std::to_string(k));
      continue;
    }
    result.premises.insert(static_cast<int>(index));
  }
  if (!any_recognized) {
    std::string trimmed = trim(raw);
    if (trimmed.empty()) {
      result.warnings.push_back("empty premise reply for step " + std::to_string(k));
      return result;
    }
    if (to_lower(trimmed).find("no premise") != std::string::npos) {
      return result;  // explicit empty-set declaration
    }
    throw Error(ErrorCode::ParseFailure,
                "no premise lines recognized in reply for step " + std::to_string(k));
  }
  return result;
}

StepLabel parse_verdict_reply(const std::string& raw, JudgeTask task) {
  if (task != JudgeTask::MathVerdict && task != JudgeTask::LogicalVerdict &&
      task != JudgeTask::BaselineVerdict) {
    throw Error(ErrorCode::ConfigError,
                std::string("verdict parse requested for task ") + judge_task_name(task));
  }
  std::string token = last_verdict_token(raw);
  if (token.empty()) {
    throw Error(ErrorCode::ParseFailure, "no verdict line in reply");
  }
  std::optional<StepLabel> label = label_from_token(token);
  if (!label || !admissible(*label, task)) {
    throw Error(ErrorCode::ParseFailure, "verdict token \"" + token +
                                             "\" not admissible for task " +
                                             judge_task_name(task));
  }
  return *label;
}

std::string extract_json_payload(const std::string& raw) {
  std::size_t begin = raw.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = raw.find_last_not_of(" \t\r\n") + 1;
  std::string text = raw.substr(begin, end - begin);
  if (text.rfind("```", 0) == 0) {
    std::size_t first_break = text.find('\n');
    std::size_t last_fence = text.rfind("```");
    if (first_break != std::string::npos && last_fence > first_break) {
      text = text.substr(first_break + 1, last_fence - first_break - 1);
      std::size_t inner_end = text.find_last_not_of(" \t\r\n");
      text = inner_end == std::string::npos ? "" : text.substr(0, inner_end + 1);
    }
  }
  return text;
}

bool parse_binary_reply(const std::string& raw) {
  std::string token = last_verdict_token(raw);
  if (token.empty()) {
    token = normalize_token(trim(raw));  // tolerate a bare yes/no reply
  }
  if (token == "yes") return true;
  if (token == "no") return false;
  throw Error(ErrorCode::ParseFailure,
              "binary verdict token \"" + token + "\" is neither yes nor no");
}

}  // namespace parc
