// Acceptance suite: runs every gate criterion and prints one
// PASS/FAIL/SKIP line each. The two corpus-bound criteria skip with an
// explanation unless a corpus directory is available (fetch-corpus, or
// CMAPSUM_CORPUS_DIR pointing at the unpacked topics).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "cmapsum/config.hpp"
#include "cmapsum/corpus.hpp"
#include "cmapsum/corpus_io.hpp"
#include "cmapsum/crowd.hpp"
#include "cmapsum/crowd_io.hpp"
#include "cmapsum/eval.hpp"
#include "cmapsum/extraction.hpp"
#include "cmapsum/importance.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/logreg.hpp"
#include "cmapsum/mapbuild.hpp"
#include "cmapsum/pipeline.hpp"
#include "cmapsum/rng.hpp"
#include "cmapsum/stats.hpp"
#include "cmapsum/suitability.hpp"
#include "support/helpers.hpp"

using namespace cmapsum;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  " << detail << std::endl;
  if (!ok) ++failures;
}

void report_skip(const std::string& name, const std::string& reason) {
  if (std::getenv("CMAPSUM_REQUIRE_CORPUS")) {
    report(name, false, "required but unavailable: " + reason);
    return;
  }
  std::cout << "SKIP  " << name << "  " << reason << std::endl;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

// ------------------------------------------------------------------
// Criterion 1: metric identities on 50 random valid maps.

ConceptMap random_valid_map(Rng& rng) {
  static const std::vector<std::string> nouns{
      "students", "loans",  "banks",   "parents", "credit",  "tuition", "college",
      "grants",   "income", "history", "schools", "fees",    "aid",     "debt",
      "teachers", "plans",  "budgets", "lenders", "interest", "rates"};
  static const std::vector<std::string> verbs{
      "need", "offer", "require", "cover", "reduce", "provide", "help", "affect",
      "support", "increase"};

  const std::size_t n = 2 + rng.index(10);
  ConceptMap map;
  for (std::size_t i = 0; i < n; ++i) {
    Concept c;
    c.id = "c" + std::to_string(i);
    // Unique two-token labels.
    c.label = nouns[i % nouns.size()] + " " + nouns[(i * 7 + 3) % nouns.size()] + " " +
              std::to_string(i);
    c.surface_forms = {c.label};
    map.concepts.push_back(std::move(c));
  }
  // Random spanning tree keeps it connected; a few extra edges.
  for (std::size_t i = 1; i < n; ++i) {
    Relation r;
    r.source = "c" + std::to_string(rng.index(i));
    r.target = "c" + std::to_string(i);
    r.label = verbs[rng.index(verbs.size())];
    map.relations.push_back(std::move(r));
  }
  for (std::size_t extra = 0; extra < n / 3; ++extra) {
    const std::size_t a = rng.index(n);
    const std::size_t b = rng.index(n);
    if (a == b) continue;
    Relation r;
    r.source = "c" + std::to_string(a);
    r.target = "c" + std::to_string(b);
    r.label = verbs[(a + b) % verbs.size()] + " with";
    bool dup = false;
    for (const auto& existing : map.relations) {
      if (existing.source == r.source && existing.target == r.target &&
          existing.label == r.label) {
        dup = true;
      }
    }
    if (!dup) map.relations.push_back(std::move(r));
  }
  return map;
}

void criterion_metric_identities() {
  Rng rng(1001);
  bool ok = true;
  std::string detail = "50 random maps";
  for (int round = 0; round < 50 && ok; ++round) {
    const auto map = random_valid_map(rng);
    if (!map.violations(true).empty()) {
      ok = false;
      detail = "generator produced an invalid map";
      break;
    }
    const auto strict = eval::strict_match(map, map);
    if (strict.precision != 1.0 || strict.recall != 1.0 || strict.f1 != 1.0) {
      ok = false;
      detail = "strict_match(m,m) != (1,1,1)";
      break;
    }
    const auto rouge = eval::rouge2(map, map);
    if (rouge.precision != 1.0 || rouge.recall != 1.0 || rouge.f1 != 1.0) {
      ok = false;
      detail = "rouge2(m,m) != (1,1,1)";
      break;
    }
    for (const auto& prop : eval::proposition_strings(map)) {
      std::vector<std::string> tokens;
      std::istringstream in(prop);
      std::string word;
      while (in >> word) tokens.push_back(word);
      const double m = static_cast<double>(tokens.size());
      const double want = 1.0 - 0.5 / (m * m * m);
      const double got = eval::meteor_score(tokens, tokens);
      if (std::abs(got - want) > 1e-9) {
        ok = false;
        detail = "meteor identity off by " + fmt(std::abs(got - want));
        break;
      }
    }
  }
  report("metric-identities", ok, detail);
}

// ------------------------------------------------------------------
// Criterion 2: subgraph heuristic on 1000 random graphs.

void criterion_subgraph_heuristic() {
  Rng rng(2002);
  bool ok = true;
  std::string detail;
  double worst_gap = 0.0, gap_sum = 0.0;
  std::size_t oracle_checked = 0;

  for (int round = 0; round < 1000 && ok; ++round) {
    const std::size_t n = 2 + rng.index(199);  // up to 200 nodes
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
    const double edge_prob = std::min(1.0, 2.5 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng.uniform() < edge_prob) {
          map.relations.push_back({"c" + std::to_string(i), "c" + std::to_string(j), "r", {}});
        }
      }
    }

    const auto a = mapbuild::extract_summary_subgraph(map, scores, 25);
    const auto b = mapbuild::extract_summary_subgraph(map, scores, 25);
    if (!a.connected() || a.concepts.size() > 25) {
      ok = false;
      detail = "output not connected/within limit at n=" + std::to_string(n);
      break;
    }
    std::string fa, fb;
    for (const auto& c : a.concepts) fa += c.id + ",";
    for (const auto& c : b.concepts) fb += c.id + ",";
    if (fa != fb) {
      ok = false;
      detail = "nondeterministic output at n=" + std::to_string(n);
      break;
    }

    if (n <= 12) {
      double kept = 0.0;
      for (const auto& c : a.concepts) kept += scores.at(c.id);
      const double best = testsupport::best_connected_subgraph_score(map, scores, 25);
      const double gap = best - kept;
      if (gap < -1e-9) {
        ok = false;
        detail = "heuristic beat the exhaustive oracle (bug)";
        break;
      }
      worst_gap = std::max(worst_gap, gap);
      gap_sum += gap;
      ++oracle_checked;
    }
  }
  if (ok) {
    detail = "1000 graphs; oracle on " + std::to_string(oracle_checked) +
             " graphs <=12 nodes: mean gap " +
             fmt(oracle_checked ? gap_sum / static_cast<double>(oracle_checked) : 0.0) +
             ", worst gap " + fmt(worst_gap) + " (logged, no minimum required)";
  }
  report("subgraph-heuristic", ok, detail);
}

// ------------------------------------------------------------------
// Criterion 3: TrueSkill fixture and simulated rank recovery.

double recovery_tau(std::size_t items, double noise_sigma, double pair_fraction,
                    std::uint64_t seed) {
  crowd::SimulatorConfig config;
  config.propositions = items;
  config.workers = 5;
  config.noise_sigma = noise_sigma;
  config.pair_fraction = pair_fraction;
  config.seed = seed;
  const auto data = crowd::simulate_crowd(config);

  std::map<std::string, double> means;
  for (const auto& [id, latent] : data.latent) means[id] = latent;
  const auto result = crowd::rank_propositions(means, data.comparisons);

  std::vector<double> recovered_rank, latent_value;
  for (std::size_t i = 0; i < result.ranking.size(); ++i) {
    recovered_rank.push_back(static_cast<double>(result.ranking.size() - i));
    latent_value.push_back(data.latent.at(result.ranking[i].id));
  }
  return stats::kendall_tau(recovered_rank, latent_value);
}

void criterion_trueskill() {
  bool ok = true;
  std::string detail;

  std::map<std::string, crowd::Rating> ratings{{"a", {}}, {"b", {}}};
  crowd::trueskill_update(ratings, crowd::ComparisonLabel::make("w", "a", "b", "a"));
  if (std::abs(ratings["a"].mu - 29.21) > 0.01 || std::abs(ratings["b"].mu - 20.79) > 0.01) {
    ok = false;
    detail = "first-update fixture off: winner " + fmt(ratings["a"].mu) + ", loser " +
             fmt(ratings["b"].mu);
  }

  // Latent scale [1,5] -> range 4; noise sigma = 0.1 * range = 0.4.
  std::size_t good_seeds = 0;
  double min_tau = 1.0;
  if (ok) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double tau = recovery_tau(100, 0.4, 0.1, seed);
      min_tau = std::min(min_tau, tau);
      if (tau >= 0.6) ++good_seeds;
    }
    if (good_seeds < 9) {
      ok = false;
      detail = "noisy recovery tau >= 0.6 on only " + std::to_string(good_seeds) +
               "/10 seeds (min " + fmt(min_tau) + ")";
    }
  }

  double noiseless = 0.0;
  if (ok) {
    noiseless = recovery_tau(100, 0.0, 1.0, 99);
    if (noiseless != 1.0) {
      ok = false;
      detail = "noiseless full-pair recovery tau = " + fmt(noiseless);
    }
  }

  if (ok) {
    detail = "fixture 29.21/20.79 ok; noisy tau >= 0.6 on " + std::to_string(good_seeds) +
             "/10 seeds (min " + fmt(min_tau) + "); noiseless tau = 1";
  }
  report("trueskill", ok, detail);
}

// ------------------------------------------------------------------
// Criterion 4: crowd statistics.

void criterion_crowd_statistics() {
  bool ok = true;
  std::string detail;

  std::ifstream in(testsupport::data_dir() / "likert_fixture.csv");
  const auto duplicated = crowd::read_likert_csv(in, "likert_fixture.csv");
  const auto agreement = crowd::likert_agreement(duplicated);
  if (agreement.value != 1.0) {
    ok = false;
    detail = "duplicate-worker agreement = " + fmt(agreement.value);
  }

  if (ok) {
    // 24 honest workers labeling slices plus one anti-correlated plant.
    Rng rng(4004);
    std::vector<crowd::LikertLabel> labels;
    const std::size_t props = 60;
    std::vector<int> latent(props);
    for (auto& v : latent) v = 1 + static_cast<int>(rng.index(5));
    for (std::size_t w = 0; w < 24; ++w) {
      const std::size_t start = (w * 11) % (props - 12);
      for (std::size_t k = 0; k < 12; ++k) {
        int value = latent[start + k];
        if (rng.uniform() < 0.2) value += rng.index(2) == 0 ? -1 : 1;
        labels.push_back({"w" + std::to_string(w + 10), "p" + std::to_string(start + k),
                          std::clamp(value, 1, 5)});
      }
    }
    for (std::size_t k = 0; k < 12; ++k) {
      labels.push_back({"adversary", "p" + std::to_string(k), 6 - latent[k]});
    }

    const auto [kept, report_data] = crowd::filter_workers(labels);
    const std::size_t budget = static_cast<std::size_t>(
        0.05 * static_cast<double>(report_data.total_labels));
    if (report_data.entries.empty() || report_data.entries.front().worker != "adversary" ||
        !report_data.entries.front().removed) {
      ok = false;
      detail = "planted anti-correlated worker was not removed first";
    } else if (report_data.removed_labels > budget) {
      ok = false;
      detail = "removed " + std::to_string(report_data.removed_labels) +
               " labels, budget " + std::to_string(budget);
    } else {
      detail = "duplicate-worker agreement = 1; adversary removed first (corr " +
               fmt(report_data.entries.front().correlation) + "), " +
               std::to_string(report_data.removed_labels) + "/" + std::to_string(budget) +
               " label budget";
    }
  }
  report("crowd-statistics", ok, detail);
}

// ------------------------------------------------------------------
// Criterion 5: suitability filter precision.

void criterion_suitability() {
  const auto tuples = extraction::load_labeled_tuples(testsupport::core_data_dir() /
                                                      "suitability_tuples.tsv");
  const std::vector<extraction::LabeledTuple> train(tuples.begin(), tuples.begin() + 250);
  const std::vector<extraction::LabeledTuple> held_out(tuples.begin() + 250, tuples.end());
  const auto model = extraction::SuitabilityModel::train(train);

  std::size_t predicted_negative = 0, correct_negative = 0;
  for (const auto& t : held_out) {
    if (model.score(t.prop) < 0.5) {
      ++predicted_negative;
      if (!t.suitable) ++correct_negative;
    }
  }
  const double precision =
      predicted_negative == 0
          ? 0.0
          : static_cast<double>(correct_negative) / static_cast<double>(predicted_negative);
  report("suitability-filter", precision >= 0.90,
         "negative-class precision " + fmt(precision) + " on " +
             std::to_string(predicted_negative) + " predicted negatives (need >= 0.9)");
}

// ------------------------------------------------------------------
// Criterion 8: numerical hygiene.

void criterion_numerical_hygiene() {
  bool ok = true;
  std::string detail;

  Rng rng(8008);
  ml::TrainOptions opts;
  opts.l2 = 0.01;
  opts.positive_weight = 1.5;
  const double h = 1e-6;
  double worst_rel = 0.0;
  for (int instance = 0; instance < 100 && ok; ++instance) {
    const std::size_t dim = 1 + rng.index(6);
    const std::size_t n = 4 + rng.index(16);
    std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : rows[i]) v = rng.uniform(-2.0, 2.0);
      labels[i] = static_cast<int>(rng.index(2));
    }
    labels[0] = 0;
    labels[n - 1] = 1;
    std::vector<double> weights(dim);
    for (auto& w : weights) w = rng.uniform(-1.0, 1.0);
    const double bias = rng.uniform(-1.0, 1.0);

    std::vector<double> grad;
    double grad_bias = 0.0;
    ml::logistic_gradient(rows, labels, weights, bias, opts, grad, grad_bias);
    for (std::size_t f = 0; f < dim; ++f) {
      auto plus = weights, minus = weights;
      plus[f] += h;
      minus[f] -= h;
      const double numeric = (ml::logistic_loss(rows, labels, plus, bias, opts) -
                              ml::logistic_loss(rows, labels, minus, bias, opts)) /
                             (2.0 * h);
      const double rel = std::abs(numeric - grad[f]) /
                         std::max({std::abs(numeric), std::abs(grad[f]), 1e-8});
      worst_rel = std::max(worst_rel, rel);
      if (rel >= 1e-4) {
        ok = false;
        detail = "gradient check failed, relative error " + fmt(rel);
        break;
      }
    }
  }

  if (ok) {
    Rng jrng(8009);
    for (int round = 0; round < 200 && ok; ++round) {
      const std::size_t n = 2 + jrng.index(12);
      std::vector<double> p(n), q(n);
      double sp = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = jrng.uniform();
        q[i] = jrng.uniform();
        sp += p[i];
        sq += q[i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        p[i] /= sp;
        q[i] /= sq;
      }
      const double pq = corpus::jensen_shannon_divergence(p, q);
      const double qp = corpus::jensen_shannon_divergence(q, p);
      const double self_div = corpus::jensen_shannon_divergence(p, p);
      if (pq < 0.0 || pq > 1.0 || std::abs(pq - qp) > 1e-12 || std::abs(self_div) > 1e-12) {
        ok = false;
        detail = "JSD bounds/symmetry/zero violated";
      }
    }
  }
  if (ok) {
    detail = "gradient max relative error " + fmt(worst_rel) +
             " (< 1e-4); JSD bounded, symmetric, zero on identical within 1e-12";
  }
  report("numerical-hygiene", ok, detail);
}

// ------------------------------------------------------------------
// Corpus-bound criteria 6 and 7.

fs::path find_corpus_dir() {
  std::vector<fs::path> candidates;
  if (const char* env = std::getenv("CMAPSUM_CORPUS_DIR"); env && *env) {
    candidates.emplace_back(env);
  }
  if (const char* env = std::getenv("CMAPSUM_CACHE_DIR"); env && *env) {
    candidates.emplace_back(fs::path(env) / "corpus");
  }
  candidates.emplace_back("corpus_cache/corpus");
  for (const auto& dir : candidates) {
    if (fs::is_directory(dir)) return dir;
  }
  return {};
}

std::vector<fs::path> corpus_topics(const fs::path& corpus_dir) {
  std::vector<fs::path> topics;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.is_directory()) topics.push_back(entry.path());
  }
  std::sort(topics.begin(), topics.end());
  return topics;
}

void criterion_corpus_checks(const fs::path& corpus_dir) {
  if (corpus_dir.empty()) {
    report_skip("corpus-checks",
                "no corpus available (run `cmapsum fetch-corpus` or set "
                "CMAPSUM_CORPUS_DIR); this sandbox has no network route to the release "
                "archive");
    return;
  }
  bool ok = true;
  std::string detail;

  const auto topics = corpus_topics(corpus_dir);
  std::size_t maps_parsed = 0;
  double relations_sum = 0.0, tokens_sum = 0.0, het_sum = 0.0;
  std::size_t stat_topics = 0;
  for (const auto& topic : topics) {
    const auto reference = corpus::load_reference_map(topic);
    if (!reference) continue;
    ++maps_parsed;
    if (reference->concepts.size() != 25) {
      ok = false;
      detail = topic.filename().string() + ": reference has " +
               std::to_string(reference->concepts.size()) + " concepts, want exactly 25";
      break;
    }
    relations_sum += static_cast<double>(reference->relations.size());

    auto cluster = corpus::load_topic(topic);
    ling::annotate(cluster);
    tokens_sum += static_cast<double>(corpus::cluster_statistics(cluster).token_count);
    het_sum += corpus::topic_heterogeneity(cluster);
    ++stat_topics;
  }

  if (ok && maps_parsed != 30) {
    ok = false;
    detail = "parsed " + std::to_string(maps_parsed) + " reference maps, want 30";
  }
  if (ok) {
    const double mean_relations = relations_sum / static_cast<double>(maps_parsed);
    const double mean_tokens = tokens_sum / static_cast<double>(stat_topics);
    const double mean_het = het_sum / static_cast<double>(stat_topics);
    if (std::abs(mean_relations - 25.2) > 0.2) {
      ok = false;
      detail = "mean relations per map " + fmt(mean_relations) + ", want 25.2 +/- 0.2";
    } else if (std::abs(mean_tokens - 97880.0) > 0.1 * 97880.0) {
      ok = false;
      detail = "mean cluster tokens " + fmt(mean_tokens) + ", want within 10% of 97880";
    } else if (std::abs(mean_het - 0.3490) > 0.03) {
      ok = false;
      detail = "mean heterogeneity " + fmt(mean_het) + ", want 0.3490 +/- 0.03";
    } else {
      detail = "30 maps, 25 concepts each; mean relations " + fmt(mean_relations) +
               "; mean tokens " + fmt(mean_tokens) + "; mean heterogeneity " + fmt(mean_het);
    }
  }
  report("corpus-checks", ok, detail);
}

void criterion_end_to_end(const fs::path& corpus_dir) {
  if (corpus_dir.empty()) {
    report_skip("end-to-end-baseline",
                "no corpus available (run `cmapsum fetch-corpus` or set "
                "CMAPSUM_CORPUS_DIR); this sandbox has no network route to the release "
                "archive");
    return;
  }
  bool ok = true;
  std::string detail;

  const auto topics = corpus_topics(corpus_dir);
  double strict_sum = 0.0, meteor_sum = 0.0, rouge_sum = 0.0;
  std::size_t evaluated = 0;
  double worst_seconds = 0.0;

  for (const auto& topic : topics) {
    const auto reference = corpus::load_reference_map(topic);
    if (!reference) continue;

    const auto start = std::chrono::steady_clock::now();

    // Leave-one-topic-out scorer.
    std::vector<std::pair<importance::ConceptFeatures, bool>> examples;
    for (const auto& other : topics) {
      if (other == topic) continue;
      const auto other_ref = corpus::load_reference_map(other);
      if (!other_ref) continue;
      auto other_cluster = corpus::load_topic(other);
      ling::annotate(other_cluster);
      auto props = extraction::dedupe(extraction::extract_propositions(other_cluster));
      props = extraction::filter_by_confidence(std::move(props), 0.5);
      std::vector<Phrase> phrases;
      for (const auto& p : props) {
        phrases.push_back(p.arg1);
        phrases.push_back(p.arg2);
      }
      auto batch = importance::build_training_examples(mapbuild::merge_concepts(phrases),
                                                       other_cluster, *other_ref);
      examples.insert(examples.end(), batch.begin(), batch.end());
    }
    std::unique_ptr<importance::LogisticScorer> scorer;
    if (!examples.empty()) {
      bool pos = false, neg = false;
      for (const auto& [f, y] : examples) (y ? pos : neg) = true;
      if (pos && neg) {
        scorer = std::make_unique<importance::LogisticScorer>(
            importance::train_scorer(examples));
      }
    }

    auto cluster = corpus::load_topic(topic);
    PipelineConfig config;
    const auto artifacts = run_pipeline(cluster, config, scorer.get());
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    worst_seconds = std::max(worst_seconds, elapsed);

    if (!artifacts.summary.connected() || artifacts.summary.concepts.size() > 25) {
      ok = false;
      detail = topic.filename().string() + ": invalid summary map";
      break;
    }
    if (elapsed > 600.0) {
      ok = false;
      detail = topic.filename().string() + " took " + fmt(elapsed) + "s (> 600s)";
      break;
    }

    const auto report_data = eval::evaluate_map(artifacts.summary, *reference);
    strict_sum += report_data.strict.f1;
    meteor_sum += report_data.meteor.f1;
    rouge_sum += report_data.rouge2.f1;
    ++evaluated;
  }

  if (ok && evaluated == 0) {
    ok = false;
    detail = "no topics with reference maps found";
  }
  if (ok) {
    const double n = static_cast<double>(evaluated);
    // Ballparks recorded, not gated: the original used a different
    // extractor, scorer and METEOR release.
    detail = std::to_string(evaluated) + " topics, all maps valid, worst topic " +
             fmt(worst_seconds) + "s; mean F1 strict " + fmt(strict_sum / n) + " meteor " +
             fmt(meteor_sum / n) + " rouge2 " + fmt(rouge_sum / n) +
             " (documented ballparks: [0,0.05] / [0.09,0.25] / [0.04,0.14]; recorded, not "
             "gated)";
  }
  report("end-to-end-baseline", ok, detail);
}

}  // namespace

int main() {
  criterion_metric_identities();
  criterion_subgraph_heuristic();
  criterion_trueskill();
  criterion_crowd_statistics();
  criterion_suitability();

  const fs::path corpus_dir = find_corpus_dir();
  criterion_corpus_checks(corpus_dir);
  criterion_end_to_end(corpus_dir);

  criterion_numerical_hygiene();

  if (failures > 0) {
    std::cout << failures << " criterion(s) FAILED" << std::endl;
    return 1;
  }
  std::cout << "all runnable criteria passed" << std::endl;
  return 0;
}
