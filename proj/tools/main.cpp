// parc: batch driver for premise mapping, step verification, and scoring.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration,
// 3 input validation, 4 transport/backend, 5 cross-file alignment.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "parc/chain.hpp"
#include "parc/classifier.hpp"
#include "parc/dataset.hpp"
#include "parc/error.hpp"
#include "parc/judge.hpp"
#include "parc/metrics.hpp"
#include "parc/premise_mapper.hpp"

namespace {

using parc::Error;
using parc::ErrorCode;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
      return 2;
    case ErrorCode::InvalidChain:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::MissingStepEntry:
    case ErrorCode::MissingContext:
    case ErrorCode::ParseFailure:
    case ErrorCode::SchemaViolation:
    case ErrorCode::StepCountMismatch:
    case ErrorCode::PerturbationRejected:
    case ErrorCode::Unreadable:
      return 3;
    case ErrorCode::TransportError:
    case ErrorCode::ScriptMiss:
      return 4;
    case ErrorCode::AlignmentError:
    case ErrorCode::ChainMismatch:
      return 5;
  }
  return 1;
}

/// Everything a config file may set. Flags parsed on top of these win.
struct Options {
  std::string config_path;

  std::string backend = "scripted";
  std::string script;
  std::string endpoint_url;
  std::string model;
  std::string api_key_env = "PARC_API_KEY";
  std::string cache_dir;
  int workers = 4;
  int max_retries = 3;
  double temperature = 0.0;
  long long seed = 17;
  long long sample = 0;  // 0 processes the whole corpus
};

/// The config file must be applied before CLI11 sees the flags, so the
/// path is pulled straight out of argv.
std::optional<std::string> find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

void apply_config_file(const std::string& path, Options& opts) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
  nlohmann::json config = nlohmann::json::parse(in, nullptr, false);
  if (config.is_discarded() || !config.is_object()) {
    throw Error(ErrorCode::ConfigError, "config file " + path + " is not a JSON object");
  }
  auto want = [&](const nlohmann::json& value, bool ok, const char* key,
                  const char* type) {
    if (!ok) {
      throw Error(ErrorCode::ConfigError,
                  std::string("config key \"") + key + "\" must be a " + type);
    }
    return value;
  };
  for (const auto& [key, value] : config.items()) {
    if (key == "backend") {
      opts.backend = want(value, value.is_string(), "backend", "string");
    } else if (key == "script") {
      opts.script = want(value, value.is_string(), "script", "string");
    } else if (key == "endpoint_url") {
      opts.endpoint_url = want(value, value.is_string(), "endpoint_url", "string");
    } else if (key == "model") {
      opts.model = want(value, value.is_string(), "model", "string");
    } else if (key == "api_key_env") {
      opts.api_key_env = want(value, value.is_string(), "api_key_env", "string");
    } else if (key == "cache_dir") {
      opts.cache_dir = want(value, value.is_string(), "cache_dir", "string");
    } else if (key == "workers") {
      opts.workers = want(value, value.is_number_integer(), "workers", "integer");
    } else if (key == "max_retries") {
      opts.max_retries =
          want(value, value.is_number_integer(), "max_retries", "integer");
    } else if (key == "temperature") {
      opts.temperature = want(value, value.is_number(), "temperature", "number");
    } else if (key == "seed") {
      opts.seed = want(value, value.is_number_integer(), "seed", "integer");
    } else if (key == "sample") {
      opts.sample = want(value, value.is_number_integer(), "sample", "integer");
    } else {
      throw Error(ErrorCode::ConfigError, "unknown config key \"" + key + "\"");
    }
  }
}

void add_backend_flags(CLI::App* cmd, Options& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file (flags override it)");
  cmd->add_option("--backend", opts.backend, "Judge backend: scripted or endpoint");
  cmd->add_option("--script", opts.script, "Scripted backend reply file (JSONL)");
  cmd->add_option("--endpoint-url", opts.endpoint_url,
                  "OpenAI-compatible chat-completions URL");
  cmd->add_option("--model", opts.model, "Model name sent to the endpoint");
  cmd->add_option("--api-key-env", opts.api_key_env,
                  "Environment variable holding the API key");
  cmd->add_option("--cache-dir", opts.cache_dir, "Reply cache directory");
  cmd->add_option("--workers", opts.workers, "Concurrent judge queries per chain");
  cmd->add_option("--max-retries", opts.max_retries, "Endpoint retry budget");
  cmd->add_option("--temperature", opts.temperature, "Sampling temperature");
  cmd->add_option("--seed", opts.seed, "Seed for corpus subsampling");
  cmd->add_option("--sample", opts.sample, "Process only N randomly chosen chains");
}

parc::BackendConfig backend_config(const Options& opts) {
  parc::BackendConfig config;
  if (opts.backend == "scripted") {
    config.kind = parc::BackendKind::Scripted;
  } else if (opts.backend == "endpoint") {
    config.kind = parc::BackendKind::Endpoint;
  } else {
    throw Error(ErrorCode::ConfigError,
                "backend must be scripted or endpoint, got \"" + opts.backend + "\"");
  }
  config.script_path = opts.script;
  config.endpoint_url = opts.endpoint_url;
  config.model_name = opts.model;
  config.api_key_env_var = opts.api_key_env;
  config.cache_dir = opts.cache_dir;
  config.workers = opts.workers;
  config.max_retries = opts.max_retries;
  config.temperature = opts.temperature;
  return config;
}

std::vector<parc::PerlRecord> load_records(const std::string& path) {
  parc::LoadReport report = parc::load_corpus(path);
  for (const parc::QuarantinedRecord& bad : report.quarantined) {
    std::cerr << "quarantined " << path << ":" << bad.line_number << ": " << bad.reason
              << "\n";
  }
  return std::move(report.records);
}

/// Deterministic subsample: shuffle indices under the seed, keep the first
/// N, restore corpus order.
std::vector<parc::PerlRecord> subsample(std::vector<parc::PerlRecord> records,
                                        long long sample, long long seed) {
  if (sample <= 0 || sample >= static_cast<long long>(records.size())) return records;
  std::vector<std::size_t> index(records.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  std::shuffle(index.begin(), index.end(), rng);
  index.resize(static_cast<std::size_t>(sample));
  std::sort(index.begin(), index.end());
  std::vector<parc::PerlRecord> kept;
  kept.reserve(index.size());
  for (std::size_t i : index) kept.push_back(std::move(records[i]));
  return kept;
}

void print_chain_warnings(const std::string& chain_id,
                          const std::vector<std::string>& warnings) {
  for (const std::string& warning : warnings) {
    std::cerr << "warning [" << chain_id << "]: " << warning << "\n";
  }
}

int cmd_map_premises(const Options& opts, const std::string& corpus_path,
                     const std::string& strategy, const std::string& out_path) {
  if (strategy != "aggregative" && strategy != "dyadic") {
    throw Error(ErrorCode::ConfigError,
                "strategy must be aggregative or dyadic, got \"" + strategy + "\"");
  }
  auto backend = parc::make_backend(backend_config(opts));
  std::cout << "seed: " << opts.seed << "\n";
  std::vector<parc::PerlRecord> records =
      subsample(load_records(corpus_path), opts.sample, opts.seed);

  std::vector<parc::PremiseFileEntry> entries;
  entries.reserve(records.size());
  long long warnings = 0;
  for (const parc::PerlRecord& record : records) {
    parc::MappedPremises mapped =
        strategy == "aggregative"
            ? parc::map_aggregative(record.chain, *backend, opts.workers)
            : parc::map_dyadic(record.chain, *backend, opts.workers);
    print_chain_warnings(record.chain.chain_id, mapped.warnings);
    warnings += static_cast<long long>(mapped.warnings.size());
    entries.push_back({std::move(mapped.graph), std::move(mapped.warnings)});
  }
  parc::emit_premise_file(entries, out_path);
  std::cout << "chains: " << entries.size() << "\n"
            << "queries: " << backend->queries_issued() << "\n"
            << "warnings: " << warnings << "\n";
  return 0;
}

int cmd_verify(const Options& opts, const std::string& corpus_path,
               const std::string& mode_name, const std::string& premise_path,
               const std::string& out_path, bool no_exchanges) {
  std::optional<parc::ClassifyMode> mode = parc::classify_mode_from_name(mode_name);
  if (!mode) {
    throw Error(ErrorCode::ConfigError,
                "mode must be full-context, premise-oracle, or premise-model, got \"" +
                    mode_name + "\"");
  }
  if (*mode == parc::ClassifyMode::PremiseScopedModel && premise_path.empty()) {
    throw Error(ErrorCode::ConfigError, "premise-model mode requires --premises");
  }
  auto backend = parc::make_backend(backend_config(opts));
  std::cout << "seed: " << opts.seed << "\n";
  std::vector<parc::PerlRecord> records =
      subsample(load_records(corpus_path), opts.sample, opts.seed);

  std::map<std::string, parc::PremiseGraph> mapped;
  if (*mode == parc::ClassifyMode::PremiseScopedModel) {
    for (parc::PremiseFileEntry& entry : parc::load_premise_file(premise_path)) {
      std::string id = entry.graph.chain_id;
      if (!mapped.emplace(id, std::move(entry.graph)).second) {
        throw Error(ErrorCode::AlignmentError,
                    "premise file repeats chain " + id);
      }
    }
  }

  std::vector<parc::ClassifiedChain> chains;
  chains.reserve(records.size());
  long long warnings = 0;
  for (const parc::PerlRecord& record : records) {
    parc::ClassifiedChain classified;
    switch (*mode) {
      case parc::ClassifyMode::FullContext:
        classified = parc::classify_baseline(record.chain, *backend, opts.workers);
        break;
      case parc::ClassifyMode::PremiseScopedOracle:
        classified = parc::classify_premise_scoped(record.chain, record.oracle_premises,
                                                   *backend, *mode, opts.workers);
        break;
      case parc::ClassifyMode::PremiseScopedModel: {
        auto it = mapped.find(record.chain.chain_id);
        if (it == mapped.end()) {
          throw Error(ErrorCode::AlignmentError,
                      "no premise entry for chain " + record.chain.chain_id);
        }
        classified = parc::classify_premise_scoped(record.chain, it->second, *backend,
                                                   *mode, opts.workers);
        break;
      }
    }
    print_chain_warnings(classified.chain_id, classified.warnings);
    warnings += static_cast<long long>(classified.warnings.size());
    chains.push_back(std::move(classified));
  }
  parc::emit_classified(chains, out_path, !no_exchanges);
  std::cout << "chains: " << chains.size() << "\n"
            << "queries: " << backend->queries_issued() << "\n"
            << "warnings: " << warnings << "\n";
  return 0;
}

int cmd_evaluate(const std::string& labels_path, const std::string& corpus_path,
                 const std::string& protocol_name, const std::string& json_path,
                 const std::string& csv_path) {
  std::optional<parc::EvalProtocol> protocol =
      parc::eval_protocol_from_name(protocol_name);
  if (!protocol) {
    throw Error(ErrorCode::ConfigError,
                "protocol must be perl or processbench, got \"" + protocol_name + "\"");
  }
  std::vector<parc::ClassifiedChain> predicted = parc::load_classified(labels_path);
  std::vector<parc::PerlRecord> records = load_records(corpus_path);
  parc::EvalReport report = parc::build_eval_report(records, predicted, *protocol);
  std::cout << parc::report_to_table(report);
  if (!json_path.empty()) parc::write_file_atomic(json_path, parc::report_to_json(report));
  if (!csv_path.empty()) parc::write_file_atomic(csv_path, parc::report_to_csv(report));
  return 0;
}

int cmd_stats(const std::string& corpus_path) {
  std::vector<parc::PerlRecord> records = load_records(corpus_path);
  parc::CorpusStats stats = parc::corpus_stats(records);
  std::cout << "chains: " << stats.total_chains << "\n"
            << "steps: " << stats.total_steps << "\n";
  for (parc::Split split :
       {parc::Split::Positive, parc::Split::Negative, parc::Split::SyntheticNegative}) {
    auto it = stats.chains_per_split.find(split);
    long long count = it == stats.chains_per_split.end() ? 0 : it->second;
    std::cout << "split " << parc::split_name(split) << ": " << count << "\n";
  }
  for (parc::StepLabel label :
       {parc::StepLabel::Correct, parc::StepLabel::MathematicalError,
        parc::StepLabel::LogicalInconsistency, parc::StepLabel::AccumulationError}) {
    auto it = stats.steps_per_label.find(label);
    long long count = it == stats.steps_per_label.end() ? 0 : it->second;
    std::cout << "label " << parc::step_label_name(label) << ": " << count << "\n";
  }
  if (stats.mean) {
    char line[64];
    auto mean = [&](const char* name, double value) {
      std::snprintf(line, sizeof(line), "mean %s: %.2f\n", name, value);
      std::cout << line;
    };
    mean("steps", stats.mean->steps);
    mean("premises", stats.mean->premises);
    mean("edges", stats.mean->edges);
    mean("depth", stats.mean->depth);
    mean("max_width", stats.mean->max_width);
    mean("branching", stats.mean->branching);
  }
  return 0;
}

int cmd_synthesize(const Options& opts, const std::string& corpus_path,
                   const std::string& out_path) {
  auto backend = parc::make_backend(backend_config(opts));
  std::cout << "seed: " << opts.seed << "\n";
  std::vector<parc::PerlRecord> records =
      subsample(load_records(corpus_path), opts.sample, opts.seed);

  std::vector<parc::PerlRecord> accepted;
  long long positives = 0, rejected = 0;
  for (const parc::PerlRecord& record : records) {
    if (record.split != parc::Split::Positive) continue;
    ++positives;
    try {
      parc::PerlRecord synthetic = parc::inject_synthetic_negative(record, *backend);
      std::cout << "ok " << synthetic.chain.chain_id << "\n";
      accepted.push_back(std::move(synthetic));
    } catch (const Error& err) {
      switch (err.code()) {
        case ErrorCode::PerturbationRejected:
        case ErrorCode::ParseFailure:
        case ErrorCode::SchemaViolation:
          std::cout << "rejected " << record.chain.chain_id << ": " << err.what()
                    << "\n";
          ++rejected;
          break;
        default:
          throw;  // transport and script failures abort the batch
      }
    }
  }
  parc::emit_corpus(accepted, out_path);
  std::cout << "positives: " << positives << "\n"
            << "accepted: " << accepted.size() << "\n"
            << "rejected: " << rejected << "\n"
            << "queries: " << backend->queries_issued() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;
  try {
    if (auto config_path = find_config_arg(argc, argv)) {
      apply_config_file(*config_path, opts);
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err.code());
  }

  CLI::App app{"Premise-aware reasoning-chain verification driver"};
  app.require_subcommand(1);

  std::string corpus_path, strategy = "aggregative", out_path;
  std::string mode_name = "full-context", premise_path;
  std::string labels_path, protocol_name = "perl", json_path, csv_path;
  bool no_exchanges = false;

  CLI::App* map_cmd =
      app.add_subcommand("map-premises", "Recover per-step premise sets");
  map_cmd->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  map_cmd->add_option("--strategy", strategy, "aggregative or dyadic");
  map_cmd->add_option("--out", out_path, "Premise-graph output JSONL")->required();
  add_backend_flags(map_cmd, opts);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Label every step of every chain");
  verify_cmd->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  verify_cmd->add_option("--mode", mode_name,
                         "full-context, premise-oracle, or premise-model");
  verify_cmd->add_option("--premises", premise_path,
                         "Premise-graph JSONL (premise-model mode)");
  verify_cmd->add_option("--out", out_path, "Labeled-chain output JSONL")->required();
  verify_cmd->add_flag("--no-exchanges", no_exchanges,
                       "Omit judge transcripts from the output");
  add_backend_flags(verify_cmd, opts);

  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "Score labeled chains against the corpus");
  eval_cmd->add_option("--labels", labels_path, "Labeled-chain JSONL")->required();
  eval_cmd->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  eval_cmd->add_option("--protocol", protocol_name, "perl or processbench");
  eval_cmd->add_option("--json", json_path, "Write the report as JSON here");
  eval_cmd->add_option("--csv", csv_path, "Write the report as CSV here");
  eval_cmd->add_option("--config", opts.config_path, "JSON config file");

  CLI::App* stats_cmd = app.add_subcommand("stats", "Corpus and graph statistics");
  stats_cmd->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  stats_cmd->add_option("--config", opts.config_path, "JSON config file");

  CLI::App* synth_cmd = app.add_subcommand(
      "synthesize", "Perturb positive chains into synthetic negatives");
  synth_cmd->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  synth_cmd->add_option("--out", out_path, "Synthetic-record output JSONL")->required();
  add_backend_flags(synth_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (map_cmd->parsed()) {
      return cmd_map_premises(opts, corpus_path, strategy, out_path);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(opts, corpus_path, mode_name, premise_path, out_path,
                        no_exchanges);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(labels_path, corpus_path, protocol_name, json_path, csv_path);
    }
    if (stats_cmd->parsed()) {
      return cmd_stats(corpus_path);
    }
    if (synth_cmd->parsed()) {
      return cmd_synthesize(opts, corpus_path, out_path);
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
