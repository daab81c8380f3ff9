// Hot-path microbenchmarks: label propagation (both routes), layerization,
// graph statistics, and reply parsing. Graph sizes sweep past anything the
// corpus holds so scaling trends are visible.

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "parc/chain.hpp"
#include "parc/classifier.hpp"
#include "parc/parsers.hpp"

namespace {

struct SizedGraph {
  parc::PremiseGraph premises;
  std::map<int, parc::StepLabel> native;
  int steps = 0;
};

/// Deterministic graph with ~35% edge density and ~20% native errors.
SizedGraph make_graph(int steps) {
  std::mt19937_64 rng(0x5eedu + static_cast<unsigned>(steps));
  SizedGraph out;
  out.steps = steps;
  out.premises.chain_id = "bench";
  for (int k = 1; k <= steps; ++k) {
    std::set<int> premises;
    for (int i = 0; i < k; ++i) {
      if (std::bernoulli_distribution(0.35)(rng)) premises.insert(i);
    }
    out.premises.premises[k] = std::move(premises);
    if (std::bernoulli_distribution(0.2)(rng)) {
      out.native[k] = std::bernoulli_distribution(0.5)(rng)
                          ? parc::StepLabel::MathematicalError
                          : parc::StepLabel::LogicalInconsistency;
    } else {
      out.native[k] = parc::StepLabel::Correct;
    }
  }
  return out;
}

void bm_propagate_forward(benchmark::State& state) {
  SizedGraph graph = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parc::propagate_accumulation(graph.native, graph.premises));
  }
}
BENCHMARK(bm_propagate_forward)->Arg(8)->Arg(32)->Arg(128);

void bm_propagate_closure(benchmark::State& state) {
  SizedGraph graph = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parc::closure_oracle(graph.native, graph.premises));
  }
}
BENCHMARK(bm_propagate_closure)->Arg(8)->Arg(32)->Arg(128);

void bm_layerize(benchmark::State& state) {
  SizedGraph graph = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parc::layerize(graph.premises, graph.steps));
  }
}
BENCHMARK(bm_layerize)->Arg(8)->Arg(32)->Arg(128);

void bm_graph_stats(benchmark::State& state) {
  SizedGraph graph = make_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parc::graph_stats(graph.premises, graph.steps));
  }
}
BENCHMARK(bm_graph_stats)->Arg(8)->Arg(32)->Arg(128);

void bm_parse_premise_reply(benchmark::State& state) {
  std::string raw =
      "Step 0: the question fixes the quantities.\n"
      "Step 3: the running total carries over.\n"
      "Step 7: the substitution feeds this computation.\n"
      "Step 9: the simplification is reused verbatim.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(parc::parse_premise_reply(raw, 10));
  }
}
BENCHMARK(bm_parse_premise_reply);

void bm_parse_verdict_reply(benchmark::State& state) {
  std::string raw =
      "The arithmetic in this step checks out against its premises, so the "
      "step stands.\nVerdict: correct";
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        parc::parse_verdict_reply(raw, parc::JudgeTask::BaselineVerdict));
  }
}
BENCHMARK(bm_parse_verdict_reply);

}  // namespace

BENCHMARK_MAIN();
