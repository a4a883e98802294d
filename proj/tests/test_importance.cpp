#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmapsum/corpus.hpp"
#include "cmapsum/errors.hpp"
#include "cmapsum/importance.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/rng.hpp"
#include "support/helpers.hpp"

using namespace cmapsum;
using namespace cmapsum::importance;

namespace {

TopicCluster tiny_cluster() {
  TopicCluster cluster;
  cluster.id = "t";
  cluster.description = "loans";
  Document d1;
  d1.id = "d1";
  d1.raw_text = "Loan offers help. A loan has a rate. Banks give loans to students.";
  Document d2;
  d2.id = "d2";
  d2.raw_text = "Students repay loans. Students like banks.";
  cluster.documents = {d1, d2};
  ling::annotate(cluster);
  return cluster;
}

Concept make_concept(const std::string& label, std::set<std::string> forms = {}) {
  Concept c;
  c.id = label;
  c.label = label;
  c.surface_forms = forms.empty() ? std::set<std::string>{label} : std::move(forms);
  return c;
}

ConceptFeatures synth(double first_position, std::size_t freq, std::size_t docs) {
  ConceptFeatures f;
  f.first_position = first_position;
  f.frequency = freq;
  f.doc_frequency = docs;
  f.label_length_tokens = 2;
  f.label_length_chars = 10;
  f.capitalization_ratio = 0.0;
  return f;
}

}  // namespace

TEST_CASE("featurize counts stem-merged surface forms") {
  const auto cluster = tiny_cluster();
  const auto f = featurize(make_concept("loan", {"loan", "loans"}), cluster);
  // "Loan", "loan", "loans", "loans" -> 4 occurrences under one stem key
  CHECK(f.frequency == 4);
  CHECK(f.doc_frequency == 2);
  CHECK(f.label_length_tokens == 1);
  CHECK(f.label_length_chars == 4);
}

TEST_CASE("featurize first position and absence") {
  const auto cluster = tiny_cluster();
  const auto first = featurize(make_concept("loan offers"), cluster);
  CHECK(first.first_position == doctest::Approx(0.0));

  const auto missing = featurize(make_concept("quantum physics"), cluster);
  CHECK(missing.frequency == 0);
  CHECK(missing.doc_frequency == 0);
  CHECK(missing.first_position == doctest::Approx(1.0));
}

TEST_CASE("featurize capitalization ratio and label lengths") {
  const auto cluster = tiny_cluster();
  const auto f = featurize(make_concept("Federal Stafford loans"), cluster);
  CHECK(f.label_length_tokens == 3);
  CHECK(f.capitalization_ratio == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("train_scorer separates a separable toy set") {
  std::vector<std::pair<ConceptFeatures, bool>> examples;
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    const bool positive = i % 2 == 0;
    examples.emplace_back(synth(positive ? 0.05 : 0.9, positive ? 20 + rng.index(10) : 1,
                                positive ? 5 : 1),
                          positive);
  }
  const auto scorer = train_scorer(examples);
  std::size_t correct = 0;
  for (const auto& [features, label] : examples) {
    if ((scorer.score(features) >= 0.5) == label) ++correct;
  }
  CHECK(correct == examples.size());
}

TEST_CASE("label inversion flips the scores") {
  std::vector<std::pair<ConceptFeatures, bool>> examples, inverted;
  Rng rng(17);
  for (int i = 0; i < 80; ++i) {
    const bool positive = rng.uniform() < 0.5;
    const auto f = synth(rng.uniform(), 1 + rng.index(25), 1 + rng.index(6));
    examples.emplace_back(f, positive);
    inverted.emplace_back(f, !positive);
  }
  if (!std::any_of(examples.begin(), examples.end(), [](auto& e) { return e.second; })) {
    examples[0].second = true;
    inverted[0].second = false;
  }
  if (std::all_of(examples.begin(), examples.end(), [](auto& e) { return e.second; })) {
    examples[0].second = false;
    inverted[0].second = true;
  }
  const auto scorer = train_scorer(examples);
  const auto flipped = train_scorer(inverted);
  for (const auto& [features, label] : examples) {
    CHECK(scorer.score(features) ==
          doctest::Approx(1.0 - flipped.score(features)).epsilon(1e-6));
  }
}

TEST_CASE("training twice gives identical weights; single class fails") {
  std::vector<std::pair<ConceptFeatures, bool>> examples;
  for (int i = 0; i < 10; ++i) {
    examples.emplace_back(synth(0.1 * i, static_cast<std::size_t>(i), 1), i % 2 == 0);
  }
  CHECK(train_scorer(examples).to_json() == train_scorer(examples).to_json());

  std::vector<std::pair<ConceptFeatures, bool>> single;
  single.emplace_back(synth(0.5, 2, 1), true);
  single.emplace_back(synth(0.6, 3, 1), true);
  CHECK_THROWS_AS(train_scorer(single), ValidationError);
}

TEST_CASE("score_concepts sorts by score with deterministic ties") {
  const auto cluster = tiny_cluster();
  std::vector<Concept> concepts{make_concept("students"), make_concept("loan", {"loan", "loans"}),
                                make_concept("quantum physics"), make_concept("banks")};
  const auto scored = score_concepts(default_scorer(), concepts, cluster);
  REQUIRE(scored.size() == concepts.size());
  for (std::size_t i = 1; i < scored.size(); ++i) {
    CHECK(scored[i - 1].second >= scored[i].second);
  }
  for (const auto& [cand, score] : scored) {
    CHECK(score > 0.0);
    CHECK(score < 1.0);
    CHECK(cand.score == score);
  }
  // The frequent early "loan" family must outrank the absent concept.
  CHECK(scored.front().first.label != "quantum physics");
  CHECK(scored.back().first.label == "quantum physics");
}

TEST_CASE("equal features break ties lexicographically") {
  TopicCluster cluster;
  cluster.id = "t";
  cluster.description = "d";
  Document doc;
  doc.id = "d1";
  doc.raw_text = "alpha beta alpha beta";
  cluster.documents = {doc};
  ling::annotate(cluster);
  // Same frequency, same everything except the label ordering.
  std::vector<Concept> concepts{make_concept("beta"), make_concept("alpha")};
  const auto scored = score_concepts(default_scorer(), concepts, cluster);
  REQUIRE(scored.size() == 2);
  CHECK(scored[0].first.label == "alpha");
}

TEST_CASE("ranking is invariant under monotone score transforms") {
  const auto cluster = tiny_cluster();
  std::vector<Concept> concepts{make_concept("students"), make_concept("loan"),
                                make_concept("banks")};
  const auto scored = score_concepts(default_scorer(), concepts, cluster);
  std::vector<std::pair<double, std::string>> direct, transformed;
  for (const auto& [cand, score] : scored) {
    direct.emplace_back(-score, cand.label);
    transformed.emplace_back(-(3.0 * score + 1.0), cand.label);
  }
  std::sort(direct.begin(), direct.end());
  std::sort(transformed.begin(), transformed.end());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(direct[i].second == transformed[i].second);
  }
}

TEST_CASE("reference matching strips determiners and stems") {
  ConceptMap reference;
  Concept ref = make_concept("student loans");
  reference.concepts.push_back(ref);

  CHECK(matches_reference(make_concept("the student loan"), reference));
  CHECK(matches_reference(make_concept("student loans"), reference));
  CHECK(!matches_reference(make_concept("students"), reference));
}

TEST_CASE("scorer json round trip") {
  std::vector<std::pair<ConceptFeatures, bool>> examples;
  for (int i = 0; i < 12; ++i) {
    examples.emplace_back(synth(0.08 * i, static_cast<std::size_t>(12 - i), 1 + i % 4),
                          i < 6);
  }
  const auto scorer = train_scorer(examples);
  const auto restored = LogisticScorer::from_json(scorer.to_json());
  for (const auto& [features, label] : examples) {
    CHECK(scorer.score(features) == doctest::Approx(restored.score(features)).epsilon(1e-12));
  }
}
