#include <doctest.h>

#include "parc/error.hpp"
#include "parc/parsers.hpp"
#include "reply_cases.hpp"

using namespace parc;

TEST_CASE("the fifty-case reply corpus parses to its pinned outcomes") {
  CHECK(parc_test::kReplyCaseCount == 50);
  for (const auto& c : parc_test::kReplyCases) {
    auto result = parc_test::run_reply_case(c);
    CHECK_MESSAGE(result.passed, c.name, ": ", result.detail);
  }
}

TEST_CASE("premise parse records one warning per dropped line") {
  auto parse = parse_premise_reply("Step 4: future\nStep 1: fine\nStep 9: far", 3);
  CHECK(parse.premises == std::set<int>{1});
  CHECK(parse.warnings.size() == 2);
}

TEST_CASE("premise parse rejects a nonsensical step argument") {
  CHECK_THROWS_AS(parse_premise_reply("Step 1: x", 0), Error);
}

TEST_CASE("verdict parse rejects non-verdict tasks") {
  try {
    parse_verdict_reply("Verdict: correct", JudgeTask::PremiseAggregative);
    FAIL("expected throw");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ConfigError);
  }
}

TEST_CASE("json payload extraction") {
  CHECK(extract_json_payload("{\"a\":1}") == "{\"a\":1}");
  CHECK(extract_json_payload("  {\"a\":1}\n") == "{\"a\":1}");
  CHECK(extract_json_payload("```json\n{\"a\":1}\n```") == "{\"a\":1}");
  CHECK(extract_json_payload("```\n{\"a\":1}\n```") == "{\"a\":1}");
  CHECK(extract_json_payload("") == "");
  // A fence with no terminator stays as-is rather than losing content.
  CHECK(extract_json_payload("```json\n{\"a\":1}") == "```json\n{\"a\":1}");
}
