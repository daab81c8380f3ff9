#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "parc/dataset.hpp"

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int rc = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("parc-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Runs the installed binary with stdout/stderr captured.
RunResult run(const std::string& args) {
  static int counter = 0;
  fs::path out = work_dir() / ("stdout-" + std::to_string(++counter));
  fs::path err = work_dir() / ("stderr-" + std::to_string(counter));
  std::string command = std::string(PARC_CLI_PATH) + " " + args + " > " + out.string() +
                        " 2> " + err.string();
  int status = std::system(command.c_str());
  RunResult result;
  result.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return result;
}

std::string fixture(const char* name) {
  return std::string(PARC_FIXTURE_DIR) + "/" + name;
}

std::string scripted_args() {
  return "--backend scripted --script " + fixture("replies.jsonl");
}

}  // namespace

TEST_CASE("argument errors exit with the config code") {
  CHECK(run("").rc == 2);
  CHECK(run("frobnicate").rc == 2);
  CHECK(run("stats --no-such-flag").rc == 2);
  CHECK(run("stats").rc == 2);  // --corpus is required
  CHECK(run("--help").rc == 0);
}

TEST_CASE("stats summarizes a corpus") {
  auto result = run("stats --corpus " + fixture("corpus.jsonl"));
  CHECK(result.rc == 0);
  CHECK(result.out.find("chains: 4") != std::string::npos);
  CHECK(result.out.find("steps: 14") != std::string::npos);
  CHECK(result.out.find("split negative: 2") != std::string::npos);
  CHECK(result.out.find("label accumulation_error: 2") != std::string::npos);
  CHECK(result.out.find("mean steps: 3.50") != std::string::npos);
  CHECK(result.out.find("mean branching: 0.68") != std::string::npos);
}

TEST_CASE("stats handles empty and missing corpora") {
  fs::path empty = work_dir() / "empty.jsonl";
  std::ofstream(empty).close();
  auto result = run("stats --corpus " + empty.string());
  CHECK(result.rc == 0);
  CHECK(result.out.find("chains: 0") != std::string::npos);

  CHECK(run("stats --corpus " + (work_dir() / "nope.jsonl").string()).rc == 3);
}

TEST_CASE("quarantined lines are reported on stderr") {
  fs::path path = work_dir() / "tainted.jsonl";
  std::ofstream out(path);
  out << slurp(fixture("corpus.jsonl"));
  out << "{broken\n";
  out.close();
  auto result = run("stats --corpus " + path.string());
  CHECK(result.rc == 0);
  CHECK(result.out.find("chains: 4") != std::string::npos);
  CHECK(result.err.find("quarantined") != std::string::npos);
  CHECK(result.err.find(":5:") != std::string::npos);
}

TEST_CASE("a missing api key fails fast before any file is read") {
  unsetenv("PARC_API_KEY");
  auto result = run("map-premises --backend endpoint --endpoint-url http://127.0.0.1:9 "
                    "--model m --corpus /does/not/exist.jsonl --out " +
                    (work_dir() / "never.jsonl").string());
  CHECK(result.rc == 2);
  CHECK(!fs::exists(work_dir() / "never.jsonl"));
}

TEST_CASE("scripted pipeline: map, verify, evaluate") {
  fs::path premises = work_dir() / "premises.jsonl";
  fs::path labels = work_dir() / "labels.jsonl";

  auto mapped = run("map-premises --corpus " + fixture("corpus.jsonl") + " --out " +
                    premises.string() + " --strategy aggregative " + scripted_args());
  REQUIRE(mapped.rc == 0);
  CHECK(mapped.out.find("chains: 4") != std::string::npos);
  CHECK(mapped.out.find("queries: 14") != std::string::npos);
  CHECK(parc::load_premise_file(premises).size() == 4);

  auto verified = run("verify --corpus " + fixture("corpus.jsonl") + " --mode premise-model "
                      "--premises " + premises.string() + " --out " + labels.string() + " " +
                      scripted_args());
  REQUIRE(verified.rc == 0);
  CHECK(verified.out.find("queries: 28") != std::string::npos);
  CHECK(parc::load_classified(labels).size() == 4);

  auto evaluated = run("evaluate --labels " + labels.string() + " --corpus " +
                       fixture("corpus.jsonl"));
  REQUIRE(evaluated.rc == 0);
  CHECK(evaluated.out.find("error_avg_accuracy") != std::string::npos);
  CHECK(evaluated.out.find("Avg") != std::string::npos);
}

TEST_CASE("oracle-premise verification over the script reproduces the annotations") {
  fs::path labels = work_dir() / "oracle-labels.jsonl";
  fs::path json_path = work_dir() / "report.json";
  fs::path csv_path = work_dir() / "report.csv";

  auto verified = run("verify --corpus " + fixture("corpus.jsonl") +
                      " --mode premise-oracle --out " + labels.string() + " " +
                      scripted_args());
  REQUIRE(verified.rc == 0);

  auto evaluated = run("evaluate --labels " + labels.string() + " --corpus " +
                       fixture("corpus.jsonl") + " --json " + json_path.string() + " --csv " +
                       csv_path.string());
  REQUIRE(evaluated.rc == 0);

  json report = json::parse(slurp(json_path));
  CHECK(report["protocol"] == "perl");
  CHECK(report["overall"]["error"]["avg_accuracy"] == doctest::Approx(100.0));
  CHECK(report["overall"]["premise"]["f1"] == doctest::Approx(100.0));

  std::string csv = slurp(csv_path);
  CHECK(csv.find("overall,error_avg_accuracy,100.00\n") != std::string::npos);
  CHECK(csv.find("overall,accuracy_accumulation_error,100.00\n") != std::string::npos);
}

TEST_CASE("first-error protocol flows through evaluate") {
  fs::path labels = work_dir() / "pb-labels.jsonl";
  auto verified = run("verify --corpus " + fixture("corpus.jsonl") +
                      " --mode premise-oracle --out " + labels.string() + " " +
                      scripted_args());
  REQUIRE(verified.rc == 0);
  auto evaluated = run("evaluate --labels " + labels.string() + " --corpus " +
                       fixture("corpus.jsonl") + " --protocol processbench");
  REQUIRE(evaluated.rc == 0);
  CHECK(evaluated.out.find("correct_acc  100.00") != std::string::npos);
  CHECK(evaluated.out.find("wrong_acc    100.00") != std::string::npos);
  CHECK(evaluated.out.find("f1           100.00") != std::string::npos);
}

TEST_CASE("full-context mode needs no premises") {
  fs::path labels = work_dir() / "baseline-labels.jsonl";
  auto verified = run("verify --corpus " + fixture("corpus.jsonl") +
                      " --mode full-context --out " + labels.string() + " " + scripted_args());
  REQUIRE(verified.rc == 0);
  CHECK(verified.out.find("queries: 14") != std::string::npos);
  auto loaded = parc::load_classified(labels);
  REQUIRE(loaded.size() == 4);
  for (const auto& chain : loaded) CHECK(!chain.premise_source.has_value());
}

TEST_CASE("premise-model mode requires a premises file") {
  auto result = run("verify --corpus " + fixture("corpus.jsonl") +
                    " --mode premise-model --out " + (work_dir() / "x.jsonl").string() + " " +
                    scripted_args());
  CHECK(result.rc == 2);
}

TEST_CASE("exchanges can be elided from labeled output") {
  fs::path with = work_dir() / "with-exchanges.jsonl";
  fs::path without = work_dir() / "without-exchanges.jsonl";
  std::string base = "verify --corpus " + fixture("corpus.jsonl") +
                     " --mode premise-oracle " + scripted_args();
  REQUIRE(run(base + " --out " + with.string()).rc == 0);
  REQUIRE(run(base + " --no-exchanges --out " + without.string()).rc == 0);
  CHECK(slurp(with).find("\"exchanges\"") != std::string::npos);
  CHECK(slurp(without).find("\"exchanges\"") == std::string::npos);
}

TEST_CASE("dyadic strategy issues pairwise queries") {
  fs::path premises = work_dir() / "dyadic.jsonl";
  auto result = run("map-premises --corpus " + fixture("corpus.jsonl") + " --out " +
                    premises.string() + " --strategy dyadic " + scripted_args());
  REQUIRE(result.rc == 0);
  CHECK(result.out.find("queries: 34") != std::string::npos);
}

TEST_CASE("sampling trims the corpus deterministically") {
  fs::path premises = work_dir() / "sampled.jsonl";
  std::string base = "map-premises --corpus " + fixture("corpus.jsonl") + " --out " +
                     premises.string() + " --sample 2 --seed 7 " + scripted_args();
  auto first = run(base);
  REQUIRE(first.rc == 0);
  CHECK(first.out.find("chains: 2") != std::string::npos);
  CHECK(first.out.find("seed: 7") != std::string::npos);
  std::string first_file = slurp(premises);
  auto second = run(base);
  REQUIRE(second.rc == 0);
  CHECK(slurp(premises) == first_file);
}

TEST_CASE("an unscripted chain is a transport-class failure") {
  fs::path corpus = work_dir() / "foreign.jsonl";
  auto records = parc::load_corpus(fixture("corpus.jsonl")).records;
  records.resize(1);
  records[0].chain.chain_id = "foreign-1";
  records[0].oracle_premises.chain_id = "foreign-1";
  parc::emit_corpus(records, corpus);

  auto result = run("map-premises --corpus " + corpus.string() + " --out " +
                    (work_dir() / "foreign-out.jsonl").string() + " " + scripted_args());
  CHECK(result.rc == 4);
}

TEST_CASE("misaligned labels are an alignment failure") {
  fs::path labels = work_dir() / "short-labels.jsonl";
  auto verified = run("verify --corpus " + fixture("corpus.jsonl") +
                      " --mode premise-oracle --out " + labels.string() + " " +
                      scripted_args());
  REQUIRE(verified.rc == 0);
  auto loaded = parc::load_classified(labels);
  loaded.pop_back();
  parc::emit_classified(loaded, labels, false);
  auto result = run("evaluate --labels " + labels.string() + " --corpus " +
                    fixture("corpus.jsonl"));
  CHECK(result.rc == 5);
}

TEST_CASE("config files supply backend settings") {
  fs::path config = work_dir() / "config.json";
  std::ofstream(config) << json{{"backend", "scripted"},
                               {"script", fixture("replies.jsonl")}}
                              .dump();
  fs::path premises = work_dir() / "config-premises.jsonl";
  auto result = run("map-premises --config " + config.string() + " --corpus " +
                    fixture("corpus.jsonl") + " --out " + premises.string());
  CHECK(result.rc == 0);

  SUBCASE("unknown keys are rejected") {
    std::ofstream(config) << json{{"backnd", "scripted"}}.dump();
    CHECK(run("map-premises --config " + config.string() + " --corpus " +
              fixture("corpus.jsonl") + " --out " + premises.string())
              .rc == 2);
  }
  SUBCASE("type mismatches are rejected") {
    std::ofstream(config) << json{{"workers", "four"}}.dump();
    CHECK(run("map-premises --config " + config.string() + " --corpus " +
              fixture("corpus.jsonl") + " --out " + premises.string())
              .rc == 2);
  }
  SUBCASE("flags override the file") {
    std::ofstream(config) << json{{"backend", "endpoint"}}.dump();
    auto overridden = run("map-premises --config " + config.string() + " " + scripted_args() +
                          " --corpus " + fixture("corpus.jsonl") + " --out " +
                          premises.string());
    CHECK(overridden.rc == 0);
  }
}

TEST_CASE("synthesize perturbs every positive chain") {
  fs::path out_path = work_dir() / "synthetic.jsonl";
  auto result = run("synthesize --corpus " + fixture("corpus.jsonl") + " --out " +
                    out_path.string() + " " + scripted_args());
  REQUIRE(result.rc == 0);
  CHECK(result.out.find("ok fix-a::syn") != std::string::npos);
  CHECK(result.out.find("ok fix-c::syn") != std::string::npos);
  CHECK(result.out.find("positives: 2") != std::string::npos);
  CHECK(result.out.find("accepted: 2") != std::string::npos);
  CHECK(result.out.find("rejected: 0") != std::string::npos);

  auto loaded = parc::load_corpus(out_path);
  CHECK(loaded.quarantined.empty());
  REQUIRE(loaded.records.size() == 2);
  for (const auto& record : loaded.records) {
    CHECK(record.split == parc::Split::SyntheticNegative);
    bool has_error = false;
    for (const auto& [k, label] : record.oracle_labels) {
      (void)k;
      has_error |= label != parc::StepLabel::Correct;
    }
    CHECK(has_error);
  }
}
