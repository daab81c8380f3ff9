// Fifty judge replies with pinned parse outcomes, shared by the parser unit
// suite and the acceptance gate. Covers case variants, bracket echoes,
// reordered and duplicated lines, forward references, declarations of
// emptiness, and garbage.
#pragma once

#include <set>
#include <sstream>
#include <string>

#include "parc/error.hpp"
#include "parc/judge.hpp"
#include "parc/parsers.hpp"

namespace parc_test {

enum class ReplyKind { Premise, Math, Logical, Baseline, Binary };
enum class Outcome { Parsed, ParsedWithWarning, Throws };

struct ReplyCase {
  const char* name;
  ReplyKind kind;
  const char* raw;
  int k;  // premise cases: the step being parsed against
  Outcome outcome;
  const char* expect;  // "0,1" / label name / "yes"/"no"; "" when throwing
};

inline const ReplyCase kReplyCases[] = {
    // --- premise replies ---
    {"single line", ReplyKind::Premise, "Step 1: supplies the count", 3,
     Outcome::Parsed, "1"},
    {"lowercase step", ReplyKind::Premise, "step 2: carries the value", 3,
     Outcome::Parsed, "2"},
    {"uppercase question ref", ReplyKind::Premise, "STEP 0: the question gives totals",
     1, Outcome::Parsed, "0"},
    {"two lines", ReplyKind::Premise, "Step 0: quantities\nStep 2: uses the sum", 3,
     Outcome::Parsed, "0,2"},
    {"reordered lines", ReplyKind::Premise, "Step 2: second\nStep 1: first", 3,
     Outcome::Parsed, "1,2"},
    {"duplicates collapse silently", ReplyKind::Premise,
     "Step 1: needed\nStep 1: needed again", 2, Outcome::Parsed, "1"},
    {"forward reference dropped", ReplyKind::Premise, "Step 5: not yet written", 3,
     Outcome::ParsedWithWarning, ""},
    {"forward mixed with valid", ReplyKind::Premise,
     "Step 1: fine\nStep 7: from the future", 3, Outcome::ParsedWithWarning, "1"},
    {"self reference dropped", ReplyKind::Premise, "Step 3: itself", 3,
     Outcome::ParsedWithWarning, ""},
    {"overflowing index dropped", ReplyKind::Premise,
     "Step 99999999999999999999: big", 4, Outcome::ParsedWithWarning, ""},
    {"chatter around a premise", ReplyKind::Premise,
     "Looking at this:\nStep 1: yes it is used\nHope that helps.", 2, Outcome::Parsed,
     "1"},
    {"indented line", ReplyKind::Premise, "   Step 1: indented", 2, Outcome::Parsed,
     "1"},
    {"space before colon", ReplyKind::Premise, "Step 1 : spaced colon", 2,
     Outcome::Parsed, "1"},
    {"no premises declaration", ReplyKind::Premise, "No premises are required here.", 2,
     Outcome::Parsed, ""},
    {"no premise mid-sentence", ReplyKind::Premise,
     "There is no premise for this step.", 5, Outcome::Parsed, ""},
    {"no premise uppercase", ReplyKind::Premise, "NO PREMISE", 2, Outcome::Parsed, ""},
    {"empty reply", ReplyKind::Premise, "", 2, Outcome::ParsedWithWarning, ""},
    {"whitespace only reply", ReplyKind::Premise, "  \n ", 2,
     Outcome::ParsedWithWarning, ""},
    {"prose without steps", ReplyKind::Premise, "The step stands on its own.", 2,
     Outcome::Throws, ""},
    {"numberless step line", ReplyKind::Premise, "Step X: unidentifiable", 2,
     Outcome::Throws, ""},

    // --- math verdicts ---
    {"math correct", ReplyKind::Math, "Verdict: correct", 0, Outcome::Parsed,
     "correct"},
    {"math error after reasoning", ReplyKind::Math,
     "Reasoning: 2 * 15 is 30.\nVerdict: mathematical_error", 0, Outcome::Parsed,
     "mathematical_error"},
    {"math shouting", ReplyKind::Math, "VERDICT: CORRECT", 0, Outcome::Parsed,
     "correct"},
    {"math bracketed", ReplyKind::Math, "Verdict: [mathematical_error]", 0,
     Outcome::Parsed, "mathematical_error"},
    {"math spaced with period", ReplyKind::Math, "Verdict: Mathematical Error.", 0,
     Outcome::Parsed, "mathematical_error"},
    {"math hyphenated", ReplyKind::Math, "Verdict: mathematical-error", 0,
     Outcome::Parsed, "mathematical_error"},
    {"math last verdict wins", ReplyKind::Math,
     "Verdict: correct\nOn reflection:\nVerdict: mathematical_error", 0,
     Outcome::Parsed, "mathematical_error"},
    {"math rejects logical token", ReplyKind::Math, "Verdict: logical_inconsistency",
     0, Outcome::Throws, ""},
    {"math missing verdict", ReplyKind::Math, "Reasoning: looks fine to me", 0,
     Outcome::Throws, ""},

    // --- logical verdicts ---
    {"logical inconsistency", ReplyKind::Logical, "Verdict: logical_inconsistency", 0,
     Outcome::Parsed, "logical_inconsistency"},
    {"logical spaced", ReplyKind::Logical, "Verdict: Logical Inconsistency", 0,
     Outcome::Parsed, "logical_inconsistency"},
    {"logical padded correct", ReplyKind::Logical, "  verdict:  correct  ", 0,
     Outcome::Parsed, "correct"},
    {"logical rejects math token", ReplyKind::Logical, "Verdict: mathematical_error",
     0, Outcome::Throws, ""},
    {"logical unknown token", ReplyKind::Logical, "Verdict: incorrect", 0,
     Outcome::Throws, ""},

    // --- baseline verdicts ---
    {"baseline correct", ReplyKind::Baseline, "Verdict: CORRECT", 0, Outcome::Parsed,
     "correct"},
    {"baseline math", ReplyKind::Baseline, "Verdict: Mathematical_Error", 0,
     Outcome::Parsed, "mathematical_error"},
    {"baseline logical", ReplyKind::Baseline, "Verdict: Logical_Inconsistency", 0,
     Outcome::Parsed, "logical_inconsistency"},
    {"baseline accumulation", ReplyKind::Baseline, "Verdict: Accumulation_Error", 0,
     Outcome::Parsed, "accumulation_error"},
    {"baseline echoes whole menu", ReplyKind::Baseline,
     "Verdict: [CORRECT,  Mathematical_Error, Logical_Inconsistency, or "
     "Accumulation_Error]",
     0, Outcome::Throws, ""},
    {"baseline parenthesised", ReplyKind::Baseline, "Verdict: (correct)", 0,
     Outcome::Parsed, "correct"},
    {"baseline exclaimed", ReplyKind::Baseline, "Verdict: accumulation error!", 0,
     Outcome::Parsed, "accumulation_error"},

    // --- binary (dyadic) replies ---
    {"binary yes", ReplyKind::Binary, "Verdict: yes", 0, Outcome::Parsed, "yes"},
    {"binary no", ReplyKind::Binary, "Verdict: No", 0, Outcome::Parsed, "no"},
    {"binary bare yes", ReplyKind::Binary, "yes", 0, Outcome::Parsed, "yes"},
    {"binary bare no with period", ReplyKind::Binary, "NO.", 0, Outcome::Parsed, "no"},
    {"binary bracketed after reasoning", ReplyKind::Binary,
     "Reasoning: the step relies on it\nVerdict: [yes]", 0, Outcome::Parsed, "yes"},
    {"binary exclaimed", ReplyKind::Binary, "Verdict: YES!", 0, Outcome::Parsed,
     "yes"},
    {"binary slang", ReplyKind::Binary, "nope", 0, Outcome::Throws, ""},
    {"binary empty", ReplyKind::Binary, "", 0, Outcome::Throws, ""},
    {"binary hedge", ReplyKind::Binary, "Verdict: maybe", 0, Outcome::Throws, ""},
};

inline constexpr int kReplyCaseCount =
    static_cast<int>(sizeof(kReplyCases) / sizeof(kReplyCases[0]));

struct ReplyCaseResult {
  bool passed = false;
  std::string detail;  // mismatch description when failed
};

inline std::string premise_set_to_string(const std::set<int>& premises) {
  std::ostringstream out;
  bool first = true;
  for (int p : premises) {
    if (!first) out << ',';
    out << p;
    first = false;
  }
  return out.str();
}

/// Runs one case. A failure outcome must be parc::Error{ParseFailure};
/// anything else escaping the parser counts as a defect.
inline ReplyCaseResult run_reply_case(const ReplyCase& c) {
  ReplyCaseResult result;
  try {
    std::string got;
    bool warned = false;
    switch (c.kind) {
      case ReplyKind::Premise: {
        parc::PremiseParse parse = parc::parse_premise_reply(c.raw, c.k);
        got = premise_set_to_string(parse.premises);
        warned = !parse.warnings.empty();
        break;
      }
      case ReplyKind::Math:
        got = parc::step_label_name(
            parc::parse_verdict_reply(c.raw, parc::JudgeTask::MathVerdict));
        break;
      case ReplyKind::Logical:
        got = parc::step_label_name(
            parc::parse_verdict_reply(c.raw, parc::JudgeTask::LogicalVerdict));
        break;
      case ReplyKind::Baseline:
        got = parc::step_label_name(
            parc::parse_verdict_reply(c.raw, parc::JudgeTask::BaselineVerdict));
        break;
      case ReplyKind::Binary:
        got = parc::parse_binary_reply(c.raw) ? "yes" : "no";
        break;
    }
    if (c.outcome == Outcome::Throws) {
      result.detail = "expected ParseFailure, parsed \"" + got + "\"";
      return result;
    }
    if (got != c.expect) {
      result.detail = "expected \"" + std::string(c.expect) + "\", got \"" + got + "\"";
      return result;
    }
    if ((c.outcome == Outcome::ParsedWithWarning) != warned) {
      result.detail = warned ? "unexpected warning" : "missing warning";
      return result;
    }
    result.passed = true;
  } catch (const parc::Error& err) {
    if (c.outcome == Outcome::Throws && err.code() == parc::ErrorCode::ParseFailure) {
      result.passed = true;
    } else {
      result.detail = std::string("unexpected error: ") + err.what();
    }
  } catch (const std::exception& err) {
    result.detail = std::string("raw exception escaped: ") + err.what();
  }
  return result;
}

}  // namespace parc_test
