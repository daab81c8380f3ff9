#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "parc/error.hpp"
#include "parc/judge.hpp"
#include "parc/prompts.hpp"

using namespace parc;

namespace {

const std::string kReplies = std::string(PARC_FIXTURE_DIR) + "/replies.jsonl";

std::string write_script(const std::string& name, const std::string& content) {
  std::string path = "/tmp/parc-judge-" + name + "-" + std::to_string(getpid()) + ".jsonl";
  std::ofstream(path) << content;
  return path;
}

BackendConfig scripted(const std::string& path) {
  BackendConfig config;
  config.kind = BackendKind::Scripted;
  config.script_path = path;
  return config;
}

}  // namespace

TEST_CASE("task names round-trip") {
  for (JudgeTask task :
       {JudgeTask::PremiseAggregative, JudgeTask::PremiseDyadic, JudgeTask::MathVerdict,
        JudgeTask::LogicalVerdict, JudgeTask::BaselineVerdict, JudgeTask::AnnotationJSON,
        JudgeTask::SyntheticPerturb}) {
    CHECK(judge_task_from_name(judge_task_name(task)) == task);
  }
  CHECK(!judge_task_from_name("NoSuchTask"));
}

TEST_CASE("scripted backend serves exact keys and counts queries") {
  auto backend = make_backend(scripted(kReplies));

  JudgeRequest request;
  request.task = JudgeTask::MathVerdict;
  request.chain_id = "fix-b";
  request.step_index = 2;
  CHECK(backend->fetch(request) == "Verdict: mathematical_error");
  CHECK(backend->queries_issued() == 1);

  request.step_index = 1;
  CHECK(backend->fetch(request) == "Verdict: correct");
  CHECK(backend->queries_issued() == 2);
}

TEST_CASE("scripted miss is a hard error naming the key") {
  auto backend = make_backend(scripted(kReplies));
  JudgeRequest request;
  request.task = JudgeTask::MathVerdict;
  request.chain_id = "fix-b";
  request.step_index = 99;
  try {
    backend->fetch(request);
    FAIL("expected throw");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ScriptMiss);
    CHECK(std::string(err.what()).find("MathVerdict") != std::string::npos);
    CHECK(std::string(err.what()).find("fix-b") != std::string::npos);
    CHECK(std::string(err.what()).find("99") != std::string::npos);
  }
}

TEST_CASE("script file validation") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(make_backend(scripted("/tmp/parc-does-not-exist.jsonl")), Error);
  }
  SUBCASE("malformed json names the line") {
    auto path = write_script("badjson", "{\"task\": \"MathVerdict\"\nnot json\n");
    try {
      make_backend(scripted(path));
      FAIL("expected throw");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::SchemaViolation);
      CHECK(std::string(err.what()).find(":1") != std::string::npos);
    }
  }
  SUBCASE("unknown task name") {
    auto path = write_script(
        "badtask", R"({"task": "Nope", "chain_id": "c", "reply": "x"})" "\n");
    CHECK_THROWS_AS(make_backend(scripted(path)), Error);
  }
  SUBCASE("duplicate key") {
    auto path = write_script(
        "dup",
        R"({"task": "MathVerdict", "chain_id": "c", "step": 1, "reply": "a"})" "\n"
        R"({"task": "MathVerdict", "chain_id": "c", "step": 1, "reply": "b"})" "\n");
    CHECK_THROWS_AS(make_backend(scripted(path)), Error);
  }
  SUBCASE("missing reply field") {
    auto path = write_script(
        "noreply", R"({"task": "MathVerdict", "chain_id": "c", "step": 1})" "\n");
    CHECK_THROWS_AS(make_backend(scripted(path)), Error);
  }
}

TEST_CASE("query dispatches the parse appropriate to the task") {
  auto backend = make_backend(scripted(kReplies));

  SUBCASE("premise reply") {
    JudgeRequest request;
    request.task = JudgeTask::PremiseAggregative;
    request.chain_id = "fix-b";
    request.step_index = 4;
    JudgeReply reply = query(request, *backend);
    REQUIRE(reply.parsed.has_value());
    auto premises = std::get<ParsedPremises>(*reply.parsed);
    CHECK(premises.indices == std::set<int>{2});
  }
  SUBCASE("verdict reply") {
    JudgeRequest request;
    request.task = JudgeTask::MathVerdict;
    request.chain_id = "fix-b";
    request.step_index = 2;
    JudgeReply reply = query(request, *backend);
    REQUIRE(reply.parsed.has_value());
    CHECK(std::get<ParsedVerdict>(*reply.parsed).label == StepLabel::MathematicalError);
  }
  SUBCASE("binary reply") {
    JudgeRequest request;
    request.task = JudgeTask::PremiseDyadic;
    request.chain_id = "fix-b";
    request.step_index = 4;
    request.aux_index = 2;
    JudgeReply reply = query(request, *backend);
    REQUIRE(reply.parsed.has_value());
    CHECK(std::get<ParsedBinary>(*reply.parsed).yes);
  }
  SUBCASE("json reply") {
    JudgeRequest request;
    request.task = JudgeTask::SyntheticPerturb;
    request.chain_id = "fix-a";
    request.step_index = 0;
    JudgeReply reply = query(request, *backend);
    REQUIRE(reply.parsed.has_value());
    CHECK(std::get<ParsedJson>(*reply.parsed).json_text.front() == '{');
  }
}

TEST_CASE("query downgrades parse failures to warnings") {
  auto path = write_script(
      "garbled",
      R"({"task": "MathVerdict", "chain_id": "c", "step": 1, "reply": "shrug"})" "\n"
      R"({"task": "AnnotationJSON", "chain_id": "c", "reply": "not json at all"})" "\n");
  auto backend = make_backend(scripted(path));

  JudgeRequest request;
  request.task = JudgeTask::MathVerdict;
  request.chain_id = "c";
  request.step_index = 1;
  JudgeReply reply = query(request, *backend);
  CHECK(!reply.parsed.has_value());
  CHECK(reply.raw_text == "shrug");
  REQUIRE(!reply.parse_warnings.empty());
  CHECK(reply.parse_warnings[0].find("MathVerdict") != std::string::npos);

  JudgeRequest annotation;
  annotation.task = JudgeTask::AnnotationJSON;
  annotation.chain_id = "c";
  JudgeReply bad_json = query(annotation, *backend);
  CHECK(!bad_json.parsed.has_value());
  CHECK(!bad_json.parse_warnings.empty());
}

TEST_CASE("parallel_for_indexed visits every index once") {
  for (int width : {1, 3, 16}) {
    std::vector<std::atomic<int>> hits(37);
    parallel_for_indexed(37, width, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for_indexed(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("parallel_for_indexed rethrows the lowest-index failure") {
  try {
    parallel_for_indexed(20, 4, [](std::size_t i) {
      if (i == 7 || i == 13) {
        throw Error(ErrorCode::TransportError, "boom at " + std::to_string(i));
      }
    });
    FAIL("expected throw");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("boom at 7") != std::string::npos);
  }
}
