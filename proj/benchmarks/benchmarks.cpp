#include <benchmark/benchmark.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "cmapsum/crowd.hpp"
#include "cmapsum/eval.hpp"
#include "cmapsum/extraction.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/mapbuild.hpp"
#include "cmapsum/porter.hpp"
#include "cmapsum/rng.hpp"

using namespace cmapsum;

namespace {

std::string sample_text(std::size_t sentences) {
  static const char* templates[] = {
      "Students with bad credit history should not lose hope and apply for federal loans. ",
      "Private lending institutions require a borrower to have sufficient credit history. ",
      "Many parents help students cover the cost of their college education every year. ",
      "The U.S. government offers several repayment plans with lower interest rates. ",
  };
  std::string text;
  for (std::size_t i = 0; i < sentences; ++i) {
    text += templates[i % 4];
  }
  return text;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = sample_text(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ling::tokenize(text));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(16)->Arg(256);

void BM_Annotate(benchmark::State& state) {
  const std::string text = sample_text(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Document doc;
    doc.id = "bench";
    doc.raw_text = text;
    ling::annotate(doc);
    benchmark::DoNotOptimize(doc);
  }
}
BENCHMARK(BM_Annotate)->Arg(16)->Arg(256);

void BM_PorterStem(benchmark::State& state) {
  const std::vector<std::string> words = {
      "generalizations", "oscillators", "students",   "loans",   "relational",
      "conditional",     "activating",  "happiness",  "falling", "education"};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(porter_stem(words[i++ % words.size()]));
  }
}
BENCHMARK(BM_PorterStem);

void BM_ExtractPropositions(benchmark::State& state) {
  Document doc;
  doc.id = "bench";
  doc.raw_text = sample_text(64);
  ling::annotate(doc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extraction::extract_propositions(doc));
  }
}
BENCHMARK(BM_ExtractPropositions);

void BM_MeteorScore(benchmark::State& state) {
  const std::vector<std::string> hyp = {"students", "with",    "bad",   "credit",
                                        "history",  "apply",   "for",   "federal",
                                        "loans",    "with",    "fafsa"};
  const std::vector<std::string> ref = {"students", "apply", "for",     "federal",
                                        "student",  "loans", "without", "credit",
                                        "history"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::meteor_score(hyp, ref));
  }
}
BENCHMARK(BM_MeteorScore);

void BM_SubgraphExtract(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  ConceptMap map;
  std::map<std::string, double> scores;
  for (std::size_t i = 0; i < n; ++i) {
    Concept c;
    c.id = "c" + std::to_string(i);
    c.label = "node " + std::to_string(i);
    c.surface_forms = {c.label};
    map.concepts.push_back(std::move(c));
    scores[c.id] = rng.uniform();
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < 2.5 / static_cast<double>(n)) {
        map.relations.push_back({"c" + std::to_string(i), "c" + std::to_string(j), "r", {}});
      }
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapbuild::extract_summary_subgraph(map, scores, 25));
  }
}
BENCHMARK(BM_SubgraphExtract)->Arg(50)->Arg(200);

void BM_TrueSkillReplay(benchmark::State& state) {
  Rng rng(11);
  std::vector<std::string> ids;
  for (int i = 0; i < 100; ++i) ids.push_back("p" + std::to_string(i));
  std::vector<crowd::ComparisonLabel> comparisons;
  for (int round = 0; round < 1000; ++round) {
    const auto a = ids[rng.index(ids.size())];
    auto b = ids[rng.index(ids.size())];
    while (b == a) b = ids[rng.index(ids.size())];
    comparisons.push_back(crowd::ComparisonLabel::make("w", a, b, rng.index(2) ? a : b));
  }
  for (auto _ : state) {
    std::map<std::string, crowd::Rating> ratings;
    for (const auto& id : ids) ratings[id] = crowd::Rating{};
    for (const auto& label : comparisons) {
      crowd::trueskill_update(ratings, label);
    }
    benchmark::DoNotOptimize(ratings);
  }
}
BENCHMARK(BM_TrueSkillReplay);

}  // namespace

BENCHMARK_MAIN();
